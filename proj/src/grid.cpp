#include "tomo/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace tomo {

ImageGrid::ImageGrid(int size) : size_(size) {
    if (size < 2 || size % 2 != 0)
        throw std::invalid_argument("ImageGrid size must be even and >= 2, got " + std::to_string(size));
    pix_.assign(static_cast<std::size_t>(size) * size, 0.0);
}

double ImageGrid::sum() const {
    double s = 0.0;
    for (double v : pix_)
        s += v;
    return s;
}

double ImageGrid::stddev() const {
    double m = mean();
    double acc = 0.0;
    for (double v : pix_) {
        double d = v - m;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(pix_.size()));
}

double ImageGrid::min_value() const {
    double m = pix_[0];
    for (double v : pix_)
        m = v < m ? v : m;
    return m;
}

double ImageGrid::max_value() const {
    double m = pix_[0];
    for (double v : pix_)
        m = v > m ? v : m;
    return m;
}

bool ImageGrid::all_finite() const {
    for (double v : pix_)
        if (!std::isfinite(v))
            return false;
    return true;
}

Sinogram::Sinogram(int detectors, int angles) : detectors_(detectors), angles_(angles) {
    if (detectors < 2 || detectors % 2 != 0)
        throw std::invalid_argument("Sinogram detector count must be even and >= 2");
    if (angles < 1)
        throw std::invalid_argument("Sinogram needs at least one angle");
    val_.assign(static_cast<std::size_t>(detectors) * angles, 0.0);
}

double Sinogram::sum() const {
    double s = 0.0;
    for (double v : val_)
        s += v;
    return s;
}

double Sinogram::max_value() const {
    double m = val_[0];
    for (double v : val_)
        m = v > m ? v : m;
    return m;
}

InterpolationKernel::Weights InterpolationKernel::weights_at(double x) const {
    double r = std::round(x);
    if (std::abs(x - r) < 1e-9)
        x = r;
    Weights out;
    switch (kind) {
    case KernelKind::nearest: {
        out.first_tap = static_cast<int>(std::floor(x + 0.5));
        out.count = 1;
        out.w[0] = 1.0;
        break;
    }
    case KernelKind::linear: {
        int a0 = static_cast<int>(std::floor(x));
        double f = x - a0;
        if (f == 0.0) {
            out.first_tap = a0;
            out.count = 1;
            out.w[0] = 1.0;
        } else {
            out.first_tap = a0;
            out.count = 2;
            out.w[0] = 1.0 - f;
            out.w[1] = f;
        }
        break;
    }
    case KernelKind::cubic: {
        int a0 = static_cast<int>(std::floor(x));
        double f = x - a0;
        if (f == 0.0) {
            out.first_tap = a0;
            out.count = 1;
            out.w[0] = 1.0;
        } else {
            out.first_tap = a0 - 1;
            out.count = 4;
            out.w[0] = cubic_weight(1.0 + f);
            out.w[1] = cubic_weight(f);
            out.w[2] = cubic_weight(1.0 - f);
            out.w[3] = cubic_weight(2.0 - f);
        }
        break;
    }
    }
    return out;
}

const char* InterpolationKernel::name() const {
    switch (kind) {
    case KernelKind::nearest: return "nearest";
    case KernelKind::linear: return "linear";
    case KernelKind::cubic: return "cubic";
    }
    return "?";
}

InterpolationKernel InterpolationKernel::parse(const std::string& s) {
    if (s == "nn" || s == "nearest")
        return {KernelKind::nearest};
    if (s == "linear")
        return {KernelKind::linear};
    if (s == "cubic")
        return {KernelKind::cubic};
    throw std::invalid_argument("unknown kernel '" + s + "' (expected nn|linear|cubic)");
}

PhantomKind parse_phantom_kind(const std::string& s) {
    if (s == "disk")
        return PhantomKind::disk;
    if (s == "shepp_logan")
        return PhantomKind::shepp_logan;
    if (s == "constant")
        return PhantomKind::constant;
    if (s == "delta")
        return PhantomKind::delta;
    throw std::invalid_argument("unknown phantom kind '" + s + "'");
}

const char* phantom_kind_name(PhantomKind k) {
    switch (k) {
    case PhantomKind::disk: return "disk";
    case PhantomKind::shepp_logan: return "shepp_logan";
    case PhantomKind::constant: return "constant";
    case PhantomKind::delta: return "delta";
    }
    return "?";
}

namespace {

struct Ellipse {
    double value, a, b, x0, y0, phi_deg;
};

// Ten-ellipse head phantom, high-contrast variant.
constexpr Ellipse kSheppLogan[] = {
    {1.0, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {-0.8, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.1, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.1, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
};

ImageGrid render_shepp_logan(int size) {
    ImageGrid img(size);
    int h = size / 2;
    double scale = 2.0 / size; // pixel centers land on +-(1 - 1/T)
    for (int k = -h; k < h; ++k) {
        double y = (k + 0.5) * scale;
        for (int j = -h; j < h; ++j) {
            double x = (j + 0.5) * scale;
            double v = 0.0;
            for (const Ellipse& e : kSheppLogan) {
                double phi = e.phi_deg * M_PI / 180.0;
                double c = std::cos(phi), s = std::sin(phi);
                double dx = x - e.x0, dy = y - e.y0;
                double u = (dx * c + dy * s) / e.a;
                double w = (-dx * s + dy * c) / e.b;
                if (u * u + w * w <= 1.0)
                    v += e.value;
            }
            // the additive values cancel to exact zero inside some regions;
            // keep the cancellation from leaving round-off residue behind
            img.at(j, k) = v > 0.0 ? v : 0.0;
        }
    }
    double peak = img.max_value();
    if (peak > 0) {
        double g = 255.0 / peak;
        for (std::size_t i = 0; i < img.pixel_count(); ++i)
            img.data()[i] *= g;
    }
    return img;
}

} // namespace

ImageGrid make_phantom(PhantomKind kind, int size) {
    if (size < 16 || size % 2 != 0)
        throw std::invalid_argument("phantom size must be even and >= 16, got " + std::to_string(size));
    switch (kind) {
    case PhantomKind::disk: {
        ImageGrid img(size);
        int h = size / 2;
        double r = 0.45 * size;
        double r2 = r * r;
        for (int k = -h; k < h; ++k)
            for (int j = -h; j < h; ++j)
                img.at(j, k) = (static_cast<double>(j) * j + static_cast<double>(k) * k < r2) ? 255.0 : 0.0;
        return img;
    }
    case PhantomKind::shepp_logan:
        return render_shepp_logan(size);
    case PhantomKind::constant: {
        ImageGrid img(size);
        for (std::size_t i = 0; i < img.pixel_count(); ++i)
            img.data()[i] = 128.0;
        return img;
    }
    case PhantomKind::delta: {
        ImageGrid img(size);
        img.at(0, 0) = 255.0;
        return img;
    }
    }
    throw std::invalid_argument("unknown phantom kind");
}

} // namespace tomo
