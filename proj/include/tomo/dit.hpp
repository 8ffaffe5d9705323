#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tomo/grid.hpp"

namespace tomo {

/// Frequency-index classification for the direct-integration spectrum.
/// Canonical half: m > 0, or m = 0 with n > 0. The conjugate half is never
/// computed; its values follow from Hermitian symmetry of real images.
enum class SpectrumRegion { canonical, dc, conjugate };

inline SpectrumRegion classify(int n, int m) {
    if (m > 0 || (m == 0 && n > 0))
        return SpectrumRegion::canonical;
    if (n == 0 && m == 0)
        return SpectrumRegion::dc;
    return SpectrumRegion::conjugate;
}

/// T x T complex matrix with the same centered indexing as ImageGrid.
/// raw(ix, iy) addresses the storage directly; after center_to_origin_shift
/// the raw index is the standard DFT index with the origin at (0, 0).
class ComplexGrid {
public:
    explicit ComplexGrid(int size);

    int size() const { return size_; }
    int half() const { return size_ / 2; }

    std::complex<double>& at(int n, int m) { return v_[idx(n, m)]; }
    std::complex<double> at(int n, int m) const { return v_[idx(n, m)]; }

    std::complex<double>& raw(int ix, int iy) { return v_[static_cast<std::size_t>(iy) * size_ + ix]; }
    std::complex<double> raw(int ix, int iy) const { return v_[static_cast<std::size_t>(iy) * size_ + ix]; }

    std::complex<double>* data() { return v_.data(); }
    const std::complex<double>* data() const { return v_.data(); }
    std::size_t count() const { return v_.size(); }

    double max_abs() const;

private:
    std::size_t idx(int n, int m) const {
        return static_cast<std::size_t>(m + half()) * size_ + (n + half());
    }

    int size_;
    std::vector<std::complex<double>> v_;
};

/// Direct-integration spectrum stored without the redundant conjugate half:
/// the canonical entries, the DC term, and the Nyquist-edge values whose
/// Hermitian partners fall outside the centered index range (the m = -T/2
/// row and the single point (-T/2, 0)). Everything else is derived, never
/// duplicated.
class HalfPlaneSpectrum {
public:
    explicit HalfPlaneSpectrum(int size);

    int size() const { return size_; }
    int half() const { return size_ / 2; }

    std::complex<double> dc() const { return dc_; }
    void set_dc(std::complex<double> v) { dc_ = v; }

    /// Canonical entry accessors; (n, m) must classify as canonical.
    std::complex<double>& canonical(int n, int m) { return half_[canonical_idx(n, m)]; }
    std::complex<double> canonical(int n, int m) const { return half_[canonical_idx(n, m)]; }

    /// Raw values on the m = -T/2 row, indexed by n.
    std::complex<double>& nyquist_row(int n) { return nyq_row_[n + half()]; }
    std::complex<double> nyquist_row(int n) const { return nyq_row_[n + half()]; }

    /// Raw value at (-T/2, 0).
    std::complex<double>& nyquist_axis() { return nyq_axis_; }
    std::complex<double> nyquist_axis() const { return nyq_axis_; }

    std::size_t canonical_count() const { return half_.size(); }

private:
    std::size_t canonical_idx(int n, int m) const;

    int size_;
    std::complex<double> dc_{0.0, 0.0};
    std::vector<std::complex<double>> half_;
    std::vector<std::complex<double>> nyq_row_;
    std::complex<double> nyq_axis_{0.0, 0.0};
};

/// Samples the sinogram at detector index t and an arbitrary angle
/// theta in [0, pi). Support reaching outside the angle lattice wraps by the
/// Radon half-turn rule: a -> a mod A with the detector flipped t -> -t-1
/// for each half turn crossed.
double angular_interpolate(const Sinogram& sino, int t, double theta,
                           const InterpolationKernel& kernel);

/// How the zero-frequency term is estimated from the projections.
/// angle_average is the robust default; first_row keeps the single-angle
/// variant around for debugging.
enum class DcEstimator { angle_average, first_row };

/// Builds the half-plane spectrum directly from the sinogram: for each
/// canonical (n, m), theta = atan2(m, n) and
///   D[n,m] = sum_t R~(t, theta) * exp(-i * 2*pi*sqrt(n^2+m^2) * t / T)
/// with R~ the angular interpolation above. The interpolation weights are
/// computed once per frequency and reused across t. The Nyquist-edge
/// values are evaluated through the same formula at the mirrored
/// out-of-range partner and conjugated.
HalfPlaneSpectrum assemble_spectrum(const Sinogram& sino, const InterpolationKernel& kernel,
                                    DcEstimator dc = DcEstimator::angle_average, int threads = 0);

/// Expands the half-plane store to the full centered matrix using
/// M[n,m] = conj(M[-n,-m]) with Nyquist wrap-around. The m = -T/2 row is
/// projected onto its Hermitian-symmetric part and the self-conjugate
/// points (0,0), (-T/2,0), (0,-T/2), (-T/2,-T/2) are forced real, so the
/// inverse transform of the result is real to rounding for any input.
ComplexGrid hermitian_fill(const HalfPlaneSpectrum& hp);

/// Circularly shifts a centered matrix so the zero-frequency entry lands at
/// raw index (0, 0) (and back: the shift is self-inverse for even T).
ComplexGrid center_to_origin_shift(const ComplexGrid& g);

/// Inverse 2D DFT with 1/T^2 normalization between centered index
/// conventions: f(j,k) = (1/T^2) sum_{n,m} M(n,m) exp(+i*2*pi*(nj+mk)/T).
/// The imaginary residual must stay below 1e-9 * max|M| / T^2; a larger
/// residual signals a symmetry bug and raises InternalError. If
/// residual_ratio is non-null it receives max|imag| / (max|M| / T^2).
ImageGrid idft2(const ComplexGrid& spectrum, double* residual_ratio = nullptr);

/// Forward companion of idft2 (same centered conventions, no scaling).
ComplexGrid dft2(const ImageGrid& img);

struct DitStats {
    std::complex<double> dc{0.0, 0.0};
    double imag_residual_ratio = 0.0;
};

/// Full reconstruction: assemble_spectrum -> hermitian_fill ->
/// center_to_origin_shift -> inverse FFT -> inverse spatial shift. The
/// output mean equals dc / T^2 by construction.
ImageGrid reconstruct_dit(const Sinogram& sino, const InterpolationKernel& kernel,
                          DitStats* stats = nullptr, int threads = 0,
                          DcEstimator dc = DcEstimator::angle_average);

/// Debug dump of an origin-at-(0,0) spectrum: magic "SPEC1", size as
/// little-endian uint32, then T*T interleaved little-endian float64 re/im
/// pairs in raw row order.
void write_spectrum(const ComplexGrid& shifted, const std::string& path);
ComplexGrid read_spectrum(const std::string& path);

} // namespace tomo
