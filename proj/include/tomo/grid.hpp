#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace tomo {

/// Square raster of real intensities on centered coordinates
/// j,k in [-T/2, T/2-1]. T must be even so the index range is symmetric
/// about the grid center, which sits between the four central pixels at
/// coordinate (-0.5, -0.5). Array index = coordinate + T/2, rows indexed
/// by k.
class ImageGrid {
public:
    explicit ImageGrid(int size);

    int size() const { return size_; }
    int half() const { return size_ / 2; }

    double& at(int j, int k) { return pix_[idx(j, k)]; }
    double at(int j, int k) const { return pix_[idx(j, k)]; }

    double* data() { return pix_.data(); }
    const double* data() const { return pix_.data(); }
    std::size_t pixel_count() const { return pix_.size(); }

    double sum() const;
    double mean() const { return sum() / static_cast<double>(pix_.size()); }
    double stddev() const; // population
    double min_value() const;
    double max_value() const;
    bool all_finite() const;

private:
    std::size_t idx(int j, int k) const {
        return static_cast<std::size_t>(k + half()) * size_ + (j + half());
    }

    int size_;
    std::vector<double> pix_;
};

/// Parallel-beam projection stack R(t, phi_a) with phi_a = a*pi/A, so the
/// angles cover [0, pi) exactly. The detector axis t uses the same centered
/// index range as the image. Values are angle-major: one detector column
/// per angle, contiguous in t.
class Sinogram {
public:
    Sinogram(int detectors, int angles);

    int detectors() const { return detectors_; }
    int angles() const { return angles_; }
    double angle_of(int a) const { return a * M_PI / angles_; }

    double& at(int t, int a) { return val_[idx(t, a)]; }
    double at(int t, int a) const { return val_[idx(t, a)]; }

    const double* column(int a) const { return val_.data() + static_cast<std::size_t>(a) * detectors_; }
    double* column(int a) { return val_.data() + static_cast<std::size_t>(a) * detectors_; }

    double* data() { return val_.data(); }
    const double* data() const { return val_.data(); }
    std::size_t value_count() const { return val_.size(); }

    double sum() const;
    double max_value() const;

private:
    std::size_t idx(int t, int a) const {
        return static_cast<std::size_t>(a) * detectors_ + (t + detectors_ / 2);
    }

    int detectors_;
    int angles_;
    std::vector<double> val_;
};

/// Keys cubic convolution weight with sharpness a = -0.5; support |x| < 2.
/// Reproduces samples at the nodes and sums to one over any unit-offset
/// four-tap stencil.
inline double cubic_weight(double x) {
    x = std::abs(x);
    if (x < 1.0)
        return ((1.5 * x - 2.5) * x) * x + 1.0;
    if (x < 2.0)
        return (((-0.5 * x) + 2.5) * x - 4.0) * x + 2.0;
    return 0.0;
}

enum class KernelKind { nearest, linear, cubic };

/// Angular interpolation scheme used when sampling the sinogram at
/// off-lattice angles. Weights form a partition of unity for every kind.
struct InterpolationKernel {
    KernelKind kind = KernelKind::cubic;

    /// Half-width of the support in angular samples.
    double support() const {
        switch (kind) {
        case KernelKind::nearest: return 0.5;
        case KernelKind::linear: return 1.0;
        case KernelKind::cubic: return 2.0;
        }
        return 0.0;
    }

    /// Minimum number of angles the kernel can interpolate over.
    int min_angles() const {
        switch (kind) {
        case KernelKind::nearest: return 1;
        case KernelKind::linear: return 2;
        case KernelKind::cubic: return 4;
        }
        return 1;
    }

    struct Weights {
        int first_tap = 0; // angular index of w[0]; may fall outside [0, A)
        int count = 0;
        std::array<double, 4> w{};
    };

    /// Weights for fractional sample position x. Positions within 1e-9 of a
    /// lattice node collapse to a single unit tap so lattice angles reproduce
    /// the stored samples exactly despite atan2/pi round-off upstream.
    Weights weights_at(double x) const;

    const char* name() const;
    static InterpolationKernel parse(const std::string& s);
};

enum class PhantomKind { disk, shepp_logan, constant, delta };

PhantomKind parse_phantom_kind(const std::string& s);
const char* phantom_kind_name(PhantomKind k);

/// Deterministic test objects.
///   disk:        255 inside j^2 + k^2 < (0.45*T)^2, else 0
///   shepp_logan: ten-ellipse head phantom scaled so max = 255, background 0
///   constant:    every pixel 128
///   delta:       single 255 pixel at centered coordinate (0, 0)
/// T must be even and at least 16.
ImageGrid make_phantom(PhantomKind kind, int size);

} // namespace tomo
