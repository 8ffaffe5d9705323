#pragma once

#include <string>

#include "tomo/grid.hpp"

namespace tomo {

/// Resamples the image rotated by `angle` about the grid center (the point
/// between the four central pixels, coordinate (-0.5, -0.5)). Each output
/// pixel is a bicubic (Keys, a = -0.5) sample of the input at the back-rotated
/// position; samples falling outside the grid contribute zero. Rotation by
/// 0 is the identity bit-exactly.
ImageGrid rotate_image(const ImageGrid& img, double angle);

/// Discrete forward Radon transform: column a is the per-detector sum along
/// the integration axis of rotate_image(img, -phi_a), phi_a = a*pi/A. The
/// detector range equals the image side, so mass rotated outside the frame
/// at oblique angles is clipped. Axis angles (phi = 0 and pi/2) resolve to
/// exact grid permutations, making their projection sums exact.
Sinogram forward_radon(const ImageGrid& img, int angles, int threads = 0);

/// Rotates by +45 degrees and back. Isolates the resampling error floor of
/// the discrete grid; used as the reconstructibility baseline.
ImageGrid double_rotation_test(const ImageGrid& img);

/// Binary sinogram format: magic "SINO1", then detectors and angles as
/// little-endian uint32, then detectors*angles little-endian float64 values
/// in angle-major order.
void write_sinogram(const Sinogram& sino, const std::string& path);
Sinogram read_sinogram(const std::string& path);

/// Debug export: one detector row per line, angles as comma-separated columns.
void write_sinogram_csv(const Sinogram& sino, const std::string& path);

} // namespace tomo
