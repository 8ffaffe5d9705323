#include "tomo/dit.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "fft_lock.hpp"
#include "tomo/errors.hpp"
#include "tomo/parallel.hpp"

namespace tomo {

ComplexGrid::ComplexGrid(int size) : size_(size) {
    if (size < 2 || size % 2 != 0)
        throw std::invalid_argument("ComplexGrid size must be even and >= 2");
    v_.assign(static_cast<std::size_t>(size) * size, {0.0, 0.0});
}

double ComplexGrid::max_abs() const {
    double m = 0.0;
    for (const auto& z : v_) {
        double a = std::abs(z);
        m = a > m ? a : m;
    }
    return m;
}

HalfPlaneSpectrum::HalfPlaneSpectrum(int size) : size_(size) {
    if (size < 2 || size % 2 != 0)
        throw std::invalid_argument("HalfPlaneSpectrum size must be even and >= 2");
    int h = size / 2;
    // rows m = 1 .. T/2-1 (full n range), then the m = 0, n > 0 stub
    half_.assign(static_cast<std::size_t>(h - 1) * size + (h - 1), {0.0, 0.0});
    nyq_row_.assign(static_cast<std::size_t>(size), {0.0, 0.0});
}

std::size_t HalfPlaneSpectrum::canonical_idx(int n, int m) const {
    int h = half();
    if (m > 0)
        return static_cast<std::size_t>(m - 1) * size_ + (n + h);
    if (m == 0 && n > 0)
        return static_cast<std::size_t>(h - 1) * size_ + (n - 1);
    throw std::invalid_argument("index is not in the canonical half-plane");
}

namespace {

// Floor division for the half-turn wrap count.
inline int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

struct Tap {
    const double* col; // detector column, ascending t storage
    bool flip;         // t -> -t-1 (odd number of half turns crossed)
    double weight;
};

// Resolves interpolation taps for angle theta once; valid for every t.
int resolve_taps(const Sinogram& sino, const InterpolationKernel& kernel, double theta,
                 Tap taps[4]) {
    int A = sino.angles();
    auto w = kernel.weights_at(theta * A / M_PI);
    for (int i = 0; i < w.count; ++i) {
        int a = w.first_tap + i;
        int q = floor_div(a, A);
        taps[i].col = sino.column(a - q * A);
        taps[i].flip = (q % 2) != 0;
        taps[i].weight = w.w[i];
    }
    return w.count;
}

// Case-1 evaluation of the discrete direct-integration formula at an
// arbitrary lattice point with atan2(mm, nn) in [0, pi):
//   sum_t R~(t, theta) * exp(-i * omega * (t - delta)),
//   omega = 2*pi*sqrt(nn^2+mm^2)/T
// delta(theta) = (cos+sin-1)/2 is the radial coordinate of detector sample
// t = 0: the grid rotates about the point between the four central pixels,
// so pixel (j,k) projects to index j*cos + k*sin + delta. The phase must be
// taken at the radial coordinate t - delta, which keeps the slice coherent
// with the image DFT at every angle (delta vanishes at 0 and pi/2).
std::complex<double> eval_case1(const Sinogram& sino, const InterpolationKernel& kernel,
                                double nn, double mm) {
    int T = sino.detectors();
    int h = T / 2;
    double theta = std::atan2(mm, nn);
    if (!(theta >= 0.0 && theta < M_PI))
        throw InternalError("spectral angle fell outside [0, pi)");
    Tap taps[4];
    int ntaps = resolve_taps(sino, kernel, theta, taps);
    double omega = 2.0 * M_PI * std::sqrt(nn * nn + mm * mm) / T;
    double delta = 0.5 * (std::cos(theta) + std::sin(theta) - 1.0);
    std::complex<double> phase = std::polar(1.0, -omega * (static_cast<double>(-h) - delta));
    std::complex<double> step = std::polar(1.0, -omega);
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < T; ++i) { // i = t + h
        double r = 0.0;
        for (int k = 0; k < ntaps; ++k)
            r += taps[k].weight * taps[k].col[taps[k].flip ? T - 1 - i : i];
        acc += r * phase;
        phase *= step;
    }
    return acc;
}

} // namespace

double angular_interpolate(const Sinogram& sino, int t, double theta,
                           const InterpolationKernel& kernel) {
    if (!(theta >= 0.0 && theta < M_PI))
        throw std::invalid_argument("theta must lie in [0, pi)");
    if (kernel.min_angles() > sino.angles())
        throw std::invalid_argument("kernel support exceeds the number of angles");
    int h = sino.detectors() / 2;
    if (t < -h || t >= h)
        throw std::invalid_argument("detector index out of range");
    Tap taps[4];
    int ntaps = resolve_taps(sino, kernel, theta, taps);
    int i = t + h;
    int T = sino.detectors();
    double acc = 0.0;
    for (int k = 0; k < ntaps; ++k)
        acc += taps[k].weight * taps[k].col[taps[k].flip ? T - 1 - i : i];
    return acc;
}

HalfPlaneSpectrum assemble_spectrum(const Sinogram& sino, const InterpolationKernel& kernel,
                                    DcEstimator dc, int threads) {
    int T = sino.detectors();
    int A = sino.angles();
    int h = T / 2;
    if (kernel.min_angles() > A)
        throw std::invalid_argument("kernel support exceeds the number of angles (A >= " +
                                    std::to_string(kernel.min_angles()) + " required)");
    HalfPlaneSpectrum hp(T);

    if (dc == DcEstimator::angle_average) {
        double total = 0.0;
        for (int a = 0; a < A; ++a) {
            const double* col = sino.column(a);
            double s = 0.0;
            for (int i = 0; i < T; ++i)
                s += col[i];
            total += s;
        }
        hp.set_dc({total / A, 0.0});
    } else {
        const double* col = sino.column(0);
        double s = 0.0;
        for (int i = 0; i < T; ++i)
            s += col[i];
        hp.set_dc({s, 0.0});
    }

    // Job list: canonical half rows m = 1..h-1 and the m = 0 stub, then the
    // Nyquist edge values via the conjugated out-of-range partner.
    std::int64_t canonical_rows = static_cast<std::int64_t>(h - 1) * T;
    std::int64_t stub = h - 1;
    std::int64_t edge = T + 1;
    std::int64_t total_jobs = canonical_rows + stub + edge;

    parallel_for(0, total_jobs, threads, [&](std::int64_t job) {
        if (job < canonical_rows) {
            int m = static_cast<int>(job / T) + 1;
            int n = static_cast<int>(job % T) - h;
            hp.canonical(n, m) = eval_case1(sino, kernel, n, m);
        } else if (job < canonical_rows + stub) {
            int n = static_cast<int>(job - canonical_rows) + 1;
            hp.canonical(n, 0) = eval_case1(sino, kernel, n, 0);
        } else if (job < canonical_rows + stub + T) {
            int n = static_cast<int>(job - canonical_rows - stub) - h;
            // (n, -T/2): partner (-n, T/2) lies above the stored band
            hp.nyquist_row(n) = std::conj(eval_case1(sino, kernel, -n, h));
        } else {
            hp.nyquist_axis() = std::conj(eval_case1(sino, kernel, h, 0));
        }
    });
    return hp;
}

ComplexGrid hermitian_fill(const HalfPlaneSpectrum& hp) {
    int T = hp.size();
    int h = T / 2;
    std::complex<double> dc = hp.dc();
    if (std::abs(dc.imag()) > 1e-9 * std::abs(dc) && dc != std::complex<double>{0.0, 0.0})
        throw InternalError("DC term has a non-negligible imaginary part");
    ComplexGrid M(T);

    // canonical half verbatim
    for (int m = 1; m < h; ++m)
        for (int n = -h; n < h; ++n)
            M.at(n, m) = hp.canonical(n, m);
    for (int n = 1; n < h; ++n)
        M.at(n, 0) = hp.canonical(n, 0);
    M.at(0, 0) = {dc.real(), 0.0};
    M.at(-h, 0) = {hp.nyquist_axis().real(), 0.0}; // self-conjugate mod T

    // conjugate half: partner of (n, m) is (-n mod T, -m mod T); for
    // n = -T/2 the partner wraps within the same column.
    for (int n = 1; n < h; ++n)
        M.at(-n, 0) = std::conj(M.at(n, 0));
    for (int m = 1; m < h; ++m)
        for (int n = -h; n < h; ++n) {
            int pn = n == -h ? -h : -n;
            M.at(pn, -m) = std::conj(M.at(n, m));
        }

    // Nyquist row: both routes of each pair are direct evaluations; project
    // onto the Hermitian-symmetric part so the inverse transform stays real.
    M.at(0, -h) = {hp.nyquist_row(0).real(), 0.0};
    M.at(-h, -h) = {hp.nyquist_row(-h).real(), 0.0};
    for (int n = 1; n < h; ++n) {
        std::complex<double> v = 0.5 * (hp.nyquist_row(n) + std::conj(hp.nyquist_row(-n)));
        M.at(n, -h) = v;
        M.at(-n, -h) = std::conj(v);
    }
    return M;
}

ComplexGrid center_to_origin_shift(const ComplexGrid& g) {
    int T = g.size();
    int h = T / 2;
    ComplexGrid out(T);
    for (int iy = 0; iy < T; ++iy) {
        int sy = (iy + h) % T;
        for (int ix = 0; ix < T; ++ix)
            out.raw(ix, iy) = g.raw((ix + h) % T, sy);
    }
    return out;
}

namespace {

// c2c transform of a raw-layout grid; sign is FFTW_FORWARD or FFTW_BACKWARD.
// Planning is serialized (FFTW plan creation is not thread safe); execution
// happens on the caller's thread.
void fft2_raw(const ComplexGrid& in, ComplexGrid& out, int sign) {
    int T = in.size();
    fftw_complex* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
    fftw_complex* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planning_mutex());
        plan = fftw_plan_dft_2d(T, T, src, dst, sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planning_mutex());
        fftw_destroy_plan(plan);
    }
}

} // namespace

ImageGrid idft2(const ComplexGrid& spectrum, double* residual_ratio) {
    int T = spectrum.size();
    ComplexGrid shifted = center_to_origin_shift(spectrum);
    ComplexGrid g(T);
    fft2_raw(shifted, g, FFTW_BACKWARD);

    double scale = 1.0 / (static_cast<double>(T) * T);
    double max_imag = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < g.count(); ++i) {
        g.data()[i] *= scale;
        double im = std::abs(g.data()[i].imag());
        if (!std::isfinite(g.data()[i].real()) || !std::isfinite(im))
            finite = false;
        max_imag = im > max_imag ? im : max_imag;
    }
    if (!finite)
        throw InternalError("non-finite values in the inverse transform");
    double ref = spectrum.max_abs() * scale;
    double ratio = ref > 0.0 ? max_imag / ref : (max_imag > 0.0 ? HUGE_VAL : 0.0);
    if (residual_ratio)
        *residual_ratio = ratio;
    if (!(ratio <= 1e-9))
        throw InternalError("imaginary residual " + std::to_string(ratio) +
                            " of the inverse transform exceeds 1e-9 of the spectrum scale");

    // inverse spatial shift back to centered pixel coordinates
    ImageGrid img(T);
    int h = T / 2;
    for (int k = -h; k < h; ++k) {
        int sy = (k + T) % T;
        for (int j = -h; j < h; ++j)
            img.at(j, k) = g.raw((j + T) % T, sy).real();
    }
    return img;
}

ComplexGrid dft2(const ImageGrid& img) {
    int T = img.size();
    int h = T / 2;
    ComplexGrid f(T);
    for (int k = -h; k < h; ++k) {
        int sy = (k + T) % T;
        for (int j = -h; j < h; ++j)
            f.raw((j + T) % T, sy) = {img.at(j, k), 0.0};
    }
    ComplexGrid spec_std(T);
    fft2_raw(f, spec_std, FFTW_FORWARD);
    return center_to_origin_shift(spec_std); // shift is self-inverse
}

ImageGrid reconstruct_dit(const Sinogram& sino, const InterpolationKernel& kernel,
                          DitStats* stats, int threads, DcEstimator dc) {
    if (sino.angles() < kernel.min_angles())
        throw std::invalid_argument("too few angles for the chosen kernel");
    HalfPlaneSpectrum hp = assemble_spectrum(sino, kernel, dc, threads);
    ComplexGrid M = hermitian_fill(hp);
    double ratio = 0.0;
    ImageGrid img = idft2(M, &ratio);
    if (stats) {
        stats->dc = hp.dc();
        stats->imag_residual_ratio = ratio;
    }
    return img;
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

void write_spectrum(const ComplexGrid& shifted, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw FormatError("cannot open '" + path + "'");
    std::fwrite("SPEC1", 1, 5, f.get());
    put_u32(f.get(), static_cast<std::uint32_t>(shifted.size()));
    for (std::size_t i = 0; i < shifted.count(); ++i) {
        put_f64(f.get(), shifted.data()[i].real());
        put_f64(f.get(), shifted.data()[i].imag());
    }
    if (std::ferror(f.get()))
        throw FormatError("short write to '" + path + "'");
}

ComplexGrid read_spectrum(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f)
        throw FormatError("cannot open '" + path + "'");
    char magic[5];
    if (std::fread(magic, 1, 5, f.get()) != 5 || std::memcmp(magic, "SPEC1", 5) != 0)
        throw FormatError("'" + path + "' is not a SPEC1 file");
    unsigned char b[4];
    if (std::fread(b, 1, 4, f.get()) != 4)
        throw FormatError("truncated header");
    std::uint32_t T = static_cast<std::uint32_t>(b[0]) | (b[1] << 8) | (b[2] << 16) |
                      (static_cast<std::uint32_t>(b[3]) << 24);
    if (T < 2 || T % 2 != 0 || T > (1u << 15))
        throw FormatError("bad spectrum size in '" + path + "'");
    ComplexGrid g(static_cast<int>(T));
    for (std::size_t i = 0; i < g.count(); ++i) {
        double re = get_f64(f.get());
        double im = get_f64(f.get());
        g.data()[i] = {re, im};
    }
    return g;
}

} // namespace tomo
