#pragma once

#include <vector>

#include "tomo/grid.hpp"

namespace tomo {

/// |omega| sampled at omega_k = 2*pi*k/T for centered k in [-T/2, T/2-1],
/// returned in centered order (index k + T/2). The k = 0 weight is exactly
/// zero: the ramp annihilates the DC component.
std::vector<double> ramp_filter_weights(int size);

/// Filters every angle column independently in the frequency domain:
/// DFT over t, multiply by |omega_k|, inverse DFT, real part. No zero
/// padding and no apodization window; this is the bare ramp baseline.
Sinogram filter_projections(const Sinogram& sino);

/// Cubic-interpolated back-projection of a filtered sinogram:
///   f(j,k) = (pi/A) * (1/(2*pi)) * sum_a Q_a(t*)
/// where t* is the detector coordinate of pixel (j,k) under the shared
/// rotation-center convention and Q_a is evaluated by Keys cubic
/// interpolation over t. Samples beyond the detector range contribute zero.
ImageGrid back_project(const Sinogram& filtered, int threads = 0);

/// filter_projections followed by back_project.
ImageGrid reconstruct_fbp(const Sinogram& sino, int threads = 0);

/// Image mean implied by the projection data: average projection-row sum
/// divided by T^2.
double projection_mean_estimate(const Sinogram& sino);

/// Adds a constant so the output mean equals target_mean.
ImageGrid calibrate_mean(const ImageGrid& img, double target_mean);

/// Affine map so the output matches both target moments. The input must
/// not be constant (sigma > 0).
ImageGrid calibrate_mean_sigma(const ImageGrid& img, double target_mean, double target_sigma);

} // namespace tomo
