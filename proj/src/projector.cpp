#include "tomo/projector.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

#include "tomo/errors.hpp"
#include "tomo/parallel.hpp"

namespace tomo {

namespace {

// Bicubic sample of img at floating-point coordinate (x, y) in centered
// units; out-of-grid taps contribute zero.
inline double sample_bicubic(const ImageGrid& img, double x, double y) {
    int h = img.half();
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0;
    double fy = y - y0;
    double wx[4] = {cubic_weight(1.0 + fx), cubic_weight(fx), cubic_weight(1.0 - fx), cubic_weight(2.0 - fx)};
    double wy[4] = {cubic_weight(1.0 + fy), cubic_weight(fy), cubic_weight(1.0 - fy), cubic_weight(2.0 - fy)};
    double acc = 0.0;
    for (int r = 0; r < 4; ++r) {
        int ky = y0 - 1 + r;
        if (ky < -h || ky >= h || wy[r] == 0.0)
            continue;
        double row = 0.0;
        for (int c = 0; c < 4; ++c) {
            int jx = x0 - 1 + c;
            if (jx < -h || jx >= h)
                continue;
            row += wx[c] * img.at(jx, ky);
        }
        acc += wy[r] * row;
    }
    return acc;
}

} // namespace

ImageGrid rotate_image(const ImageGrid& img, double angle) {
    int T = img.size();
    int h = T / 2;
    ImageGrid out(T);
    // output(p) = input( R(-angle) * (p - c) + c ), c = (-0.5, -0.5)
    double cs = std::cos(-angle);
    double sn = std::sin(-angle);
    for (int k = -h; k < h; ++k) {
        double yc = k + 0.5;
        for (int j = -h; j < h; ++j) {
            double xc = j + 0.5;
            double sx = cs * xc - sn * yc - 0.5;
            double sy = sn * xc + cs * yc - 0.5;
            out.at(j, k) = sample_bicubic(img, sx, sy);
        }
    }
    return out;
}

Sinogram forward_radon(const ImageGrid& img, int angles, int threads) {
    if (angles < 1)
        throw std::invalid_argument("forward_radon needs at least one angle");
    int T = img.size();
    int h = T / 2;
    Sinogram sino(T, angles);
    parallel_for(0, angles, threads, [&](std::int64_t a) {
        double* col = sino.column(static_cast<int>(a));
        if (a == 0) {
            // identity rotation: exact column sums
            for (int t = -h; t < h; ++t) {
                double s = 0.0;
                for (int z = -h; z < h; ++z)
                    s += img.at(t, z);
                col[t + h] = s;
            }
            return;
        }
        if (2 * a == angles) {
            // quarter turn maps the grid onto itself: rotated(t,z) = img(-z-1, t)
            for (int t = -h; t < h; ++t) {
                double s = 0.0;
                for (int z = -h; z < h; ++z)
                    s += img.at(-z - 1, t);
                col[t + h] = s;
            }
            return;
        }
        double phi = sino.angle_of(static_cast<int>(a));
        // sum along z of rotate_image(img, -phi): sample at R(phi)*(p-c)+c
        double cs = std::cos(phi);
        double sn = std::sin(phi);
        for (int t = -h; t < h; ++t)
            col[t + h] = 0.0;
        for (int z = -h; z < h; ++z) {
            double yc = z + 0.5;
            for (int t = -h; t < h; ++t) {
                double xc = t + 0.5;
                double sx = cs * xc - sn * yc - 0.5;
                double sy = sn * xc + cs * yc - 0.5;
                col[t + h] += sample_bicubic(img, sx, sy);
            }
        }
    });
    return sino;
}

ImageGrid double_rotation_test(const ImageGrid& img) {
    return rotate_image(rotate_image(img, M_PI / 4.0), -M_PI / 4.0);
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void put_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    std::fwrite(b, 1, 4, f);
}

std::uint32_t get_u32(std::FILE* f) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4)
        throw FormatError("truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::FILE* f, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>(u >> (8 * i));
    std::fwrite(b, 1, 8, f);
}

double get_f64(std::FILE* f) {
    unsigned char b[8];
    if (std::fread(b, 1, 8, f) != 8)
        throw FormatError("truncated payload");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i)
        u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

} // namespace

void write_sinogram(const Sinogram& sino, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw FormatError("cannot open '" + path + "'");
    std::fwrite("SINO1", 1, 5, f.get());
    put_u32(f.get(), static_cast<std::uint32_t>(sino.detectors()));
    put_u32(f.get(), static_cast<std::uint32_t>(sino.angles()));
    for (std::size_t i = 0; i < sino.value_count(); ++i)
        put_f64(f.get(), sino.data()[i]);
    if (std::ferror(f.get()))
        throw FormatError("short write to '" + path + "'");
}

Sinogram read_sinogram(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f)
        throw FormatError("cannot open '" + path + "'");
    char magic[5];
    if (std::fread(magic, 1, 5, f.get()) != 5 || std::memcmp(magic, "SINO1", 5) != 0)
        throw FormatError("'" + path + "' is not a SINO1 file");
    std::uint32_t T = get_u32(f.get());
    std::uint32_t A = get_u32(f.get());
    if (T < 2 || T % 2 != 0 || T > (1u << 16) || A < 1 || A > (1u << 20))
        throw FormatError("bad sinogram dimensions in '" + path + "'");
    Sinogram sino(static_cast<int>(T), static_cast<int>(A));
    for (std::size_t i = 0; i < sino.value_count(); ++i)
        sino.data()[i] = get_f64(f.get());
    return sino;
}

void write_sinogram_csv(const Sinogram& sino, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw FormatError("cannot open '" + path + "'");
    int h = sino.detectors() / 2;
    for (int t = -h; t < h; ++t) {
        for (int a = 0; a < sino.angles(); ++a)
            std::fprintf(f.get(), a + 1 == sino.angles() ? "%.17g\n" : "%.17g,", sino.at(t, a));
    }
}

} // namespace tomo
