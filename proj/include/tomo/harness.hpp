#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomo/grid.hpp"
#include "tomo/metrics.hpp"

namespace tomo {

/// Adds i.i.d. Gaussian noise with sigma = percent/100 * max(sino).
/// Seeded and reproducible; percent = 0 returns the input unchanged.
Sinogram add_wgn(const Sinogram& sino, double percent, std::uint64_t seed);

/// Separable Gaussian blur, kernel truncated at +-3*sigma and renormalized,
/// mirror boundary. sigma = 0 is the identity.
ImageGrid gaussian_smooth(const ImageGrid& img, double sigma);

/// Sinogram smoothing runs along the detector axis only (per projection).
Sinogram gaussian_smooth(const Sinogram& sino, double sigma);

/// Sparse-view scan with M uniform angles a*pi/M. Regenerated from the
/// phantom rather than decimated from a denser sinogram so the angle set
/// stays exactly uniform on [0, pi) for any M. Requires M >= 4.
Sinogram subsample_projections(const ImageGrid& phantom, int M, int threads = 0);

enum class DenoiseMode { none, pre, post };
const char* denoise_mode_name(DenoiseMode m);
DenoiseMode parse_denoise_mode(const std::string& s);

/// Benchmark suite entries. Besides the four generator kinds this accepts
/// the derived smooth variants "disk_soft" (disk blurred with sigma 2) and
/// "shepp_soft" (shepp_logan blurred with sigma 1), both fully inside the
/// reconstruction circle.
ImageGrid suite_phantom(const std::string& name, int size);

/// Default five-image suite used for suite-average statistics.
std::vector<std::string> default_phantom_suite();

struct ExperimentConfig {
    std::vector<std::string> phantoms = default_phantom_suite();
    int size = 256;
    std::vector<int> projection_counts = {800, 400, 200, 80, 40, 16};
    std::vector<KernelKind> kernels = {KernelKind::cubic};
    std::vector<double> noise_percents = {0.0};
    std::vector<DenoiseMode> denoise_modes = {DenoiseMode::none};
    std::vector<std::string> methods = {"dit", "fbp", "fbp-m", "fbp-ms", "drt"};
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir;         // empty: no files, CSV only returned
    bool write_error_maps = false;
};

/// Runs the full cross product of the configuration and returns the CSV
/// report (header + one row per run). Identical config and seed give a
/// byte-identical report. Per-row failures are recorded in the status
/// column and the run continues. When out_dir is set, writes report.csv,
/// a manifest.json with the resolved configuration, and (optionally)
/// signed error maps for the noise-free runs at the largest angle count.
std::string run_benchmark(const ExperimentConfig& config);

} // namespace tomo
