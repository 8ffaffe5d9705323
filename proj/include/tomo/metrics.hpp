#pragma once

#include <string>

#include "tomo/grid.hpp"

namespace tomo {

/// 10*log10(peak^2 / MSE). Identical inputs give +infinity (reported as
/// "exact" by the CLI). Throws on dimension mismatch.
double psnr(const ImageGrid& a, const ImageGrid& b, double peak = 255.0);
double psnr(const Sinogram& a, const Sinogram& b, double peak);

/// Re-projects the reconstruction with the same forward operator and angle
/// count as the reference sinogram, then scores PSNR against it with
/// peak = max of the reference data.
double reprojection_psnr(const ImageGrid& recon, const Sinogram& reference, int threads = 0);

/// Mean local SSIM over an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, dynamic range 255. Window statistics are taken over the valid
/// interior, as in the reference formulation.
double ssim(const ImageGrid& a, const ImageGrid& b);

/// Standard deviation ratio sigma_recon / sigma_truth (population).
/// Throws for constant truth.
double sdr(const ImageGrid& recon, const ImageGrid& truth);

struct ErrorMapResult {
    ImageGrid values;          // recon - truth
    double radial_correlation; // Pearson corr of error with center distance; 0 if undefined
};

/// Computes the signed error, renders it to a PNG (positive -> yellow,
/// negative -> cyan, zero -> black, symmetric scale +-max|error|) and writes
/// the radial-correlation statistic next to it as CSV. Pass an empty path to
/// skip the files.
ErrorMapResult error_map(const ImageGrid& recon, const ImageGrid& truth,
                         const std::string& png_path);

struct RunConfig {
    std::string image;
    std::string method;
    int angles = 0;
    std::string kernel;
    double noise_pct = 0.0;
    double noise_sigma = 0.0;
    std::string denoise = "none";
};

struct MetricsReport {
    double psnr = 0.0;
    double p_rp = 0.0;
    double ssim = 0.0;
    double sdr = 0.0;
    RunConfig config;
};

/// CSV row schema shared by `evaluate` and the benchmark harness.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& r, const std::string& status = "ok");

} // namespace tomo
