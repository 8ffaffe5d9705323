#include "tomo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "tomo/dit.hpp"
#include "tomo/errors.hpp"
#include "tomo/fbp.hpp"
#include "tomo/parallel.hpp"
#include "tomo/projector.hpp"

namespace tomo {

Sinogram add_wgn(const Sinogram& sino, double percent, std::uint64_t seed) {
    if (percent < 0.0)
        throw std::invalid_argument("noise percent must be non-negative");
    if (percent == 0.0)
        return sino;
    double sigma = percent / 100.0 * sino.max_value();
    Sinogram out = sino;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (std::size_t i = 0; i < out.value_count(); ++i)
        out.data()[i] += gauss(rng);
    return out;
}

namespace {

std::vector<double> gaussian_taps(double sigma) {
    int radius = static_cast<int>(3.0 * sigma);
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double g = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        w[i + radius] = g;
        sum += g;
    }
    for (double& g : w)
        g /= sum;
    return w;
}

inline int mirror(int i, int n) { // half-sample reflection
    while (i < 0 || i >= n) {
        if (i < 0)
            i = -i - 1;
        if (i >= n)
            i = 2 * n - i - 1;
    }
    return i;
}

void convolve_line(const double* src, double* dst, int n, int stride,
                   const std::vector<double>& w) {
    int radius = (static_cast<int>(w.size()) - 1) / 2;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int d = -radius; d <= radius; ++d)
            acc += w[d + radius] * src[mirror(i + d, n) * stride];
        dst[i * stride] = acc;
    }
}

} // namespace

ImageGrid gaussian_smooth(const ImageGrid& img, double sigma) {
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be non-negative");
    if (sigma == 0.0)
        return img;
    auto w = gaussian_taps(sigma);
    int T = img.size();
    ImageGrid tmp(T), out(T);
    for (int row = 0; row < T; ++row)
        convolve_line(img.data() + static_cast<std::size_t>(row) * T,
                      tmp.data() + static_cast<std::size_t>(row) * T, T, 1, w);
    for (int col = 0; col < T; ++col)
        convolve_line(tmp.data() + col, out.data() + col, T, T, w);
    return out;
}

Sinogram gaussian_smooth(const Sinogram& sino, double sigma) {
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be non-negative");
    if (sigma == 0.0)
        return sino;
    auto w = gaussian_taps(sigma);
    Sinogram out(sino.detectors(), sino.angles());
    for (int a = 0; a < sino.angles(); ++a)
        convolve_line(sino.column(a), out.column(a), sino.detectors(), 1, w);
    return out;
}

Sinogram subsample_projections(const ImageGrid& phantom, int M, int threads) {
    if (M < 4)
        throw std::invalid_argument("at least 4 projections required");
    return forward_radon(phantom, M, threads);
}

const char* denoise_mode_name(DenoiseMode m) {
    switch (m) {
    case DenoiseMode::none: return "none";
    case DenoiseMode::pre: return "pre";
    case DenoiseMode::post: return "post";
    }
    return "?";
}

DenoiseMode parse_denoise_mode(const std::string& s) {
    if (s == "none")
        return DenoiseMode::none;
    if (s == "pre")
        return DenoiseMode::pre;
    if (s == "post")
        return DenoiseMode::post;
    throw std::invalid_argument("unknown denoise mode '" + s + "'");
}

ImageGrid suite_phantom(const std::string& name, int size) {
    if (name == "disk_soft")
        return gaussian_smooth(make_phantom(PhantomKind::disk, size), 2.0);
    if (name == "shepp_soft")
        return gaussian_smooth(make_phantom(PhantomKind::shepp_logan, size), 1.0);
    return make_phantom(parse_phantom_kind(name), size);
}

std::vector<std::string> default_phantom_suite() {
    return {"shepp_logan", "disk", "disk_soft", "shepp_soft", "delta"};
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 step over seed ^ salt; stable across platforms
    std::uint64_t z = (seed ^ salt) + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Shared inputs for one (phantom, A, noise) block; rows reference them
// read-only.
struct ScanBlock {
    const ImageGrid* truth;
    double truth_mean, truth_sigma;
    Sinogram measured;  // noisy data as acquired
    Sinogram input;     // pre-denoised variant where requested
    double sigma_n;
};

struct RowJob {
    std::string image, method;
    int angles;
    KernelKind kernel;
    bool kernel_labeled;
    double noise;
    DenoiseMode mode;
    std::size_t block;      // index into the block table (mode-specific input)
    bool emit_error_map;
};

} // namespace

std::string run_benchmark(const ExperimentConfig& config) {
    for (int A : config.projection_counts)
        if (A < 4 || A > 800)
            throw std::invalid_argument("projection counts must lie in [4, 800]");
    for (double p : config.noise_percents)
        if (p < 0.0)
            throw std::invalid_argument("noise percents must be non-negative");

    namespace fs = std::filesystem;
    if (!config.out_dir.empty())
        fs::create_directories(config.out_dir);

    int max_A = 0;
    for (int A : config.projection_counts)
        max_A = std::max(max_A, A);

    // Stage 1 (sequential): phantoms and scan data, shared across rows.
    std::vector<ImageGrid> truths;
    truths.reserve(config.phantoms.size());
    for (const std::string& name : config.phantoms)
        truths.push_back(suite_phantom(name, config.size));

    std::vector<ScanBlock> blocks;
    std::vector<RowJob> jobs;
    for (std::size_t pi = 0; pi < config.phantoms.size(); ++pi) {
        const std::string& name = config.phantoms[pi];
        for (int A : config.projection_counts) {
            Sinogram clean = forward_radon(truths[pi], A, config.threads);
            for (std::size_t ni = 0; ni < config.noise_percents.size(); ++ni) {
                double noise = config.noise_percents[ni];
                std::uint64_t row_seed =
                    mix_seed(config.seed, (pi << 40) ^ (static_cast<std::uint64_t>(A) << 20) ^ ni);
                Sinogram measured = add_wgn(clean, noise, row_seed);
                std::vector<DenoiseMode> modes =
                    noise > 0.0 ? config.denoise_modes : std::vector<DenoiseMode>{DenoiseMode::none};
                for (DenoiseMode mode : modes) {
                    double sigma_g = noise / 2.0; // kernel width: half the noise percentage
                    ScanBlock blk{&truths[pi], truths[pi].mean(), truths[pi].stddev(), measured,
                                  mode == DenoiseMode::pre ? gaussian_smooth(measured, sigma_g)
                                                           : measured,
                                  noise / 100.0 * clean.max_value()};
                    blocks.push_back(std::move(blk));
                    std::size_t bi = blocks.size() - 1;

                    for (const std::string& method : config.methods) {
                        if (method == "drt" && (noise > 0.0 || mode != DenoiseMode::none))
                            continue;
                        bool kernel_dependent = method == "dit";
                        std::vector<KernelKind> kernels = kernel_dependent
                                                              ? config.kernels
                                                              : std::vector<KernelKind>{KernelKind::cubic};
                        for (KernelKind kk : kernels) {
                            bool maps = config.write_error_maps && !config.out_dir.empty() &&
                                        noise == 0.0 && A == max_A && kk == config.kernels.front();
                            jobs.push_back({name, method, A, kk, kernel_dependent, noise, mode, bi, maps});
                        }
                    }
                }
            }
        }
    }

    // Stage 2: rows are independent jobs pulled from a shared queue. With
    // several row workers the per-operation parallelism is turned off so the
    // workers own the cores; results land in per-row slots, so the output
    // order never depends on scheduling.
    int workers = resolve_threads(config.threads);
    workers = std::min<int>(workers, std::max<std::size_t>(jobs.size(), 1));
    int op_threads = workers > 1 ? 1 : config.threads;
    std::vector<std::string> rows(jobs.size());

    auto run_job = [&](std::size_t ji) {
        const RowJob& job = jobs[ji];
        const ScanBlock& blk = blocks[job.block];
        InterpolationKernel kernel{job.kernel};
        MetricsReport report;
        report.config = {job.image,
                         job.method,
                         job.angles,
                         job.kernel_labeled ? kernel.name() : "-",
                         job.noise,
                         blk.sigma_n,
                         denoise_mode_name(job.mode)};
        std::string status = "ok";
        try {
            ImageGrid recon(blk.truth->size());
            if (job.method == "dit") {
                recon = reconstruct_dit(blk.input, kernel, nullptr, op_threads);
            } else if (job.method == "fbp") {
                recon = reconstruct_fbp(blk.input, op_threads);
            } else if (job.method == "fbp-m") {
                recon = calibrate_mean(reconstruct_fbp(blk.input, op_threads),
                                       projection_mean_estimate(blk.input));
            } else if (job.method == "fbp-ms") {
                recon = calibrate_mean_sigma(reconstruct_fbp(blk.input, op_threads), blk.truth_mean,
                                             blk.truth_sigma);
            } else if (job.method == "drt") {
                recon = double_rotation_test(*blk.truth);
            } else {
                throw std::invalid_argument("unknown method '" + job.method + "'");
            }
            if (job.mode == DenoiseMode::post)
                recon = gaussian_smooth(recon, job.noise / 2.0);

            report.psnr = psnr(recon, *blk.truth);
            report.p_rp = reprojection_psnr(recon, blk.measured, op_threads);
            report.ssim = ssim(recon, *blk.truth);
            if (blk.truth_sigma > 0.0) {
                report.sdr = sdr(recon, *blk.truth);
            } else {
                report.sdr = std::numeric_limits<double>::quiet_NaN();
                status = "sdr-undefined";
            }
            if (job.emit_error_map)
                error_map(recon, *blk.truth,
                          config.out_dir + "/errmap_" + job.image + "_" + job.method + ".png");
        } catch (const std::exception& e) {
            status = std::string("error: ") + e.what();
            report.psnr = report.p_rp = report.ssim = report.sdr =
                std::numeric_limits<double>::quiet_NaN();
        }
        rows[ji] = metrics_csv_row(report, status);
    };
    if (workers <= 1 || jobs.size() <= 1) {
        for (std::size_t ji = 0; ji < jobs.size(); ++ji)
            run_job(ji);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t ji = next.fetch_add(1); ji < jobs.size(); ji = next.fetch_add(1))
                    run_job(ji);
            });
        for (auto& t : pool)
            t.join();
    }

    // Stage 3: single writer assembles the report in job order.
    std::string csv = metrics_csv_header() + "\n";
    for (const std::string& row : rows)
        csv += row + "\n";

    if (!config.out_dir.empty()) {
        {
            std::ofstream f(config.out_dir + "/report.csv", std::ios::binary);
            f << csv;
        }
        nlohmann::json manifest;
        manifest["tool"] = "ditrecon";
        manifest["version"] = "0.1.0";
        manifest["seed"] = config.seed;
        manifest["config"]["phantoms"] = config.phantoms;
        manifest["config"]["size"] = config.size;
        manifest["config"]["projection_counts"] = config.projection_counts;
        std::vector<std::string> kn;
        for (KernelKind k : config.kernels)
            kn.push_back(InterpolationKernel{k}.name());
        manifest["config"]["kernels"] = kn;
        manifest["config"]["noise_percents"] = config.noise_percents;
        std::vector<std::string> dm;
        for (DenoiseMode m : config.denoise_modes)
            dm.push_back(denoise_mode_name(m));
        manifest["config"]["denoise_modes"] = dm;
        manifest["config"]["methods"] = config.methods;
        std::ofstream f(config.out_dir + "/manifest.json", std::ios::binary);
        f << manifest.dump(2) << "\n";
    }
    return csv;
}

} // namespace tomo
