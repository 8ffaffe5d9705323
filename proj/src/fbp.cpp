#include "tomo/fbp.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "fft_lock.hpp"
#include "tomo/parallel.hpp"

namespace tomo {

std::vector<double> ramp_filter_weights(int size) {
    if (size < 2 || size % 2 != 0)
        throw std::invalid_argument("ramp filter length must be even and >= 2");
    std::vector<double> w(size);
    int h = size / 2;
    for (int k = -h; k < h; ++k)
        w[k + h] = std::abs(2.0 * M_PI * k / size);
    return w;
}

Sinogram filter_projections(const Sinogram& sino) {
    int T = sino.detectors();
    int A = sino.angles();
    int h = T / 2;
    std::vector<double> ramp = ramp_filter_weights(T);

    // standard-order multiplier: index k' maps to centered k' - T*[k' >= T/2];
    // the diagonal weight only depends on |k|, so the index convention of the
    // transform cancels.
    std::vector<double> w(T);
    for (int kp = 0; kp < T; ++kp) {
        int k = kp < h ? kp : kp - T;
        w[kp] = ramp[k + h];
    }

    std::vector<std::complex<double>> buf(T), freq(T);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planning_mutex());
        fwd = fftw_plan_dft_1d(T, reinterpret_cast<fftw_complex*>(buf.data()),
                               reinterpret_cast<fftw_complex*>(freq.data()), FFTW_FORWARD,
                               FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(T, reinterpret_cast<fftw_complex*>(freq.data()),
                               reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
                               FFTW_ESTIMATE);
    }

    Sinogram out(T, A);
    for (int a = 0; a < A; ++a) {
        const double* src = sino.column(a);
        for (int i = 0; i < T; ++i)
            buf[i] = {src[i], 0.0};
        fftw_execute(fwd);
        for (int i = 0; i < T; ++i)
            freq[i] *= w[i];
        fftw_execute(bwd);
        double* dst = out.column(a);
        for (int i = 0; i < T; ++i)
            dst[i] = buf[i].real() / T;
    }
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planning_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    return out;
}

ImageGrid back_project(const Sinogram& filtered, int threads) {
    int T = filtered.detectors();
    int A = filtered.angles();
    int h = T / 2;
    ImageGrid out(T);
    double norm = (M_PI / A) * (1.0 / (2.0 * M_PI));

    std::vector<double> cs(A), sn(A);
    for (int a = 0; a < A; ++a) {
        double phi = filtered.angle_of(a);
        cs[a] = std::cos(phi);
        sn[a] = std::sin(phi);
    }

    // pixels partitioned across threads by row; each accumulator is private
    parallel_for(-h, h, threads, [&](std::int64_t kk) {
        int k = static_cast<int>(kk);
        for (int j = -h; j < h; ++j) {
            double acc = 0.0;
            for (int a = 0; a < A; ++a) {
                double t = j * cs[a] + k * sn[a];
                int t0 = static_cast<int>(std::floor(t));
                double f = t - t0;
                const double* col = filtered.column(a);
                double q = 0.0;
                double wt[4] = {cubic_weight(1.0 + f), cubic_weight(f), cubic_weight(1.0 - f),
                                cubic_weight(2.0 - f)};
                for (int c = 0; c < 4; ++c) {
                    int ti = t0 - 1 + c;
                    if (ti >= -h && ti < h)
                        q += wt[c] * col[ti + h];
                }
                acc += q;
            }
            out.at(j, k) = acc * norm;
        }
    });
    return out;
}

ImageGrid reconstruct_fbp(const Sinogram& sino, int threads) {
    return back_project(filter_projections(sino), threads);
}

double projection_mean_estimate(const Sinogram& sino) {
    double T2 = static_cast<double>(sino.detectors()) * sino.detectors();
    return sino.sum() / sino.angles() / T2;
}

ImageGrid calibrate_mean(const ImageGrid& img, double target_mean) {
    ImageGrid out = img;
    double shift = target_mean - img.mean();
    for (std::size_t i = 0; i < out.pixel_count(); ++i)
        out.data()[i] += shift;
    return out;
}

ImageGrid calibrate_mean_sigma(const ImageGrid& img, double target_mean, double target_sigma) {
    double sigma = img.stddev();
    if (!(sigma > 0.0))
        throw std::invalid_argument("mean/sigma calibration needs a non-constant image");
    double gain = target_sigma / sigma;
    double mean = img.mean();
    ImageGrid out = img;
    for (std::size_t i = 0; i < out.pixel_count(); ++i)
        out.data()[i] = (out.data()[i] - mean) * gain + target_mean;
    return out;
}

} // namespace tomo
