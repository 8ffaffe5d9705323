// ditrecon: phantom generation, parallel-beam projection, direct-integration
// and filtered-back-projection reconstruction, metric evaluation, benchmarks.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tomo/dit.hpp"
#include "tomo/errors.hpp"
#include "tomo/fbp.hpp"
#include "tomo/grid.hpp"
#include "tomo/harness.hpp"
#include "tomo/image_io.hpp"
#include "tomo/metrics.hpp"
#include "tomo/projector.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void echo_config(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::cerr << "config: command=" << cmd;
    for (const auto& [k, v] : kv)
        std::cerr << " " << k << "=" << v;
    std::cerr << "\n";
}

std::string fmt_psnr(double v) {
    if (std::isinf(v))
        return "exact";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos)
            next = s.size();
        out.push_back(std::stoi(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos)
            next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos)
            next = s.size();
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"direct-integration tomographic reconstruction toolkit"};
    app.require_subcommand(1);

    // phantom
    auto* phantom = app.add_subcommand("phantom", "generate a test object");
    std::string ph_kind = "shepp_logan";
    int ph_size = 512;
    std::string ph_out;
    phantom->add_option("--kind", ph_kind, "disk|shepp_logan|constant|delta")->capture_default_str();
    phantom->add_option("--size", ph_size, "grid side (even, >= 16)")->capture_default_str();
    phantom->add_option("--out", ph_out, "output image (.png or .pgm)")->required();

    // project
    auto* project = app.add_subcommand("project", "forward Radon transform of an image");
    std::string pr_in, pr_out, pr_csv;
    int pr_angles = 800;
    double pr_noise = 0.0;
    std::uint64_t pr_seed = 0;
    int pr_threads = 0;
    project->add_option("--in", pr_in, "input image")->required();
    project->add_option("--angles", pr_angles, "number of projection angles")->capture_default_str();
    project->add_option("--noise-pct", pr_noise, "additive white Gaussian noise, % of sinogram peak")->capture_default_str();
    project->add_option("--seed", pr_seed, "noise seed")->capture_default_str();
    project->add_option("--threads", pr_threads, "worker threads (0 = all cores)")->capture_default_str();
    project->add_option("--out", pr_out, "output sinogram (.sino)")->required();
    project->add_option("--csv", pr_csv, "optional CSV dump of the sinogram");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "reconstruct an image from a sinogram");
    std::string rc_method = "dit", rc_kernel = "cubic", rc_in, rc_out, rc_truth, rc_spectrum;
    std::string rc_denoise = "none", rc_dc = "average", rc_filter = "ramp";
    double rc_denoise_sigma = 0.0;
    int rc_threads = 0;
    rec->add_option("--method", rc_method, "dit|fbp|fbp-m|fbp-ms")->capture_default_str();
    rec->add_option("--kernel", rc_kernel, "angular interpolation: nn|linear|cubic")->capture_default_str();
    rec->add_option("--in", rc_in, "input sinogram")->required();
    rec->add_option("--out", rc_out, "output image (.png or .pgm)")->required();
    rec->add_option("--truth", rc_truth, "ground-truth image (required for fbp-ms)");
    rec->add_option("--denoise", rc_denoise, "none|pre|post")->capture_default_str();
    rec->add_option("--denoise-sigma", rc_denoise_sigma, "Gaussian sigma for --denoise")->capture_default_str();
    rec->add_option("--dump-spectrum", rc_spectrum, "write the assembled spectrum (dit only)");
    rec->add_option("--dc-mode", rc_dc, "average|row0 (dit DC estimator)")->capture_default_str();
    rec->add_option("--filter", rc_filter, "fbp filter (only 'ramp' is implemented)")->capture_default_str();
    rec->add_option("--threads", rc_threads, "worker threads (0 = all cores)")->capture_default_str();

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "quality metrics for a reconstruction");
    std::string ev_recon, ev_truth, ev_sino, ev_csv, ev_map;
    std::string ev_method = "-", ev_kernel = "-";
    int ev_threads = 0;
    ev->add_option("--recon", ev_recon, "reconstructed image")->required();
    ev->add_option("--truth", ev_truth, "ground-truth image")->required();
    ev->add_option("--sino", ev_sino, "reference sinogram (enables reprojection PSNR)");
    ev->add_option("--csv", ev_csv, "append the CSV row to this file");
    ev->add_option("--error-map", ev_map, "write a signed error map PNG");
    ev->add_option("--method", ev_method, "method label for the CSV row")->capture_default_str();
    ev->add_option("--kernel", ev_kernel, "kernel label for the CSV row")->capture_default_str();
    ev->add_option("--threads", ev_threads, "worker threads")->capture_default_str();

    // drt
    auto* drt = app.add_subcommand("drt", "double-rotation baseline (45 degrees and back)");
    std::string dr_in, dr_out;
    drt->add_option("--in", dr_in, "input image")->required();
    drt->add_option("--out", dr_out, "output image")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "full benchmark cross product");
    std::string be_phantoms = "shepp_logan,disk,disk_soft,shepp_soft,delta";
    std::string be_angles = "800,400,200,80,40,16";
    std::string be_kernels = "cubic";
    std::string be_noise = "0";
    std::string be_denoise = "none";
    std::string be_methods = "dit,fbp,fbp-m,fbp-ms,drt";
    std::string be_out = "bench_out";
    int be_size = 256;
    std::uint64_t be_seed = 0;
    int be_threads = 0;
    bool be_maps = false;
    bench->add_option("--phantoms", be_phantoms, "comma list")->capture_default_str();
    bench->add_option("--size", be_size, "grid side")->capture_default_str();
    bench->add_option("--angles", be_angles, "comma list of projection counts")->capture_default_str();
    bench->add_option("--kernels", be_kernels, "comma list of nn|linear|cubic")->capture_default_str();
    bench->add_option("--noise", be_noise, "comma list of noise percents")->capture_default_str();
    bench->add_option("--denoise", be_denoise, "comma list of none|pre|post")->capture_default_str();
    bench->add_option("--methods", be_methods, "comma list of dit|fbp|fbp-m|fbp-ms|drt")->capture_default_str();
    bench->add_option("--seed", be_seed, "noise seed")->capture_default_str();
    bench->add_option("--threads", be_threads, "worker threads (0 = all cores)")->capture_default_str();
    bench->add_option("--out", be_out, "output directory")->capture_default_str();
    bench->add_flag("--maps", be_maps, "write error maps for the noise-free runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e); // prints the usage message
        return rc == 0 ? 0 : kExitUsage;
    }

    if (phantom->parsed()) {
        echo_config("phantom", {{"kind", ph_kind}, {"size", std::to_string(ph_size)}, {"out", ph_out}});
        write_image(tomo::make_phantom(tomo::parse_phantom_kind(ph_kind), ph_size), ph_out);
        return 0;
    }

    if (project->parsed()) {
        echo_config("project", {{"in", pr_in},
                                {"angles", std::to_string(pr_angles)},
                                {"noise-pct", std::to_string(pr_noise)},
                                {"seed", std::to_string(pr_seed)},
                                {"threads", std::to_string(pr_threads)},
                                {"out", pr_out}});
        tomo::ImageGrid img = tomo::read_image(pr_in);
        tomo::Sinogram sino = tomo::forward_radon(img, pr_angles, pr_threads);
        if (pr_noise > 0.0)
            sino = tomo::add_wgn(sino, pr_noise, pr_seed);
        tomo::write_sinogram(sino, pr_out);
        if (!pr_csv.empty())
            tomo::write_sinogram_csv(sino, pr_csv);
        return 0;
    }

    if (rec->parsed()) {
        echo_config("reconstruct", {{"method", rc_method},
                                    {"kernel", rc_kernel},
                                    {"in", rc_in},
                                    {"out", rc_out},
                                    {"truth", rc_truth.empty() ? "-" : rc_truth},
                                    {"denoise", rc_denoise},
                                    {"denoise-sigma", std::to_string(rc_denoise_sigma)},
                                    {"dc-mode", rc_dc},
                                    {"filter", rc_filter},
                                    {"threads", std::to_string(rc_threads)}});
        if (rc_method == "fbp-ms" && rc_truth.empty()) {
            std::cerr << "error: fbp-ms calibrates against the ground-truth sigma; pass --truth\n";
            return kExitUsage;
        }
        if (rc_filter != "ramp") {
            std::cerr << "error: only the ramp filter is implemented\n";
            return kExitUsage;
        }
        tomo::Sinogram sino = tomo::read_sinogram(rc_in);
        tomo::DenoiseMode mode = tomo::parse_denoise_mode(rc_denoise);
        if (mode == tomo::DenoiseMode::pre)
            sino = tomo::gaussian_smooth(sino, rc_denoise_sigma);

        tomo::ImageGrid out(sino.detectors());
        if (rc_method == "dit") {
            tomo::InterpolationKernel kernel = tomo::InterpolationKernel::parse(rc_kernel);
            tomo::DcEstimator dc = rc_dc == "row0" ? tomo::DcEstimator::first_row
                                                   : tomo::DcEstimator::angle_average;
            if (!rc_spectrum.empty()) {
                tomo::HalfPlaneSpectrum hp = tomo::assemble_spectrum(sino, kernel, dc, rc_threads);
                tomo::ComplexGrid M = tomo::hermitian_fill(hp);
                tomo::write_spectrum(tomo::center_to_origin_shift(M), rc_spectrum);
                out = tomo::idft2(M);
            } else {
                out = tomo::reconstruct_dit(sino, kernel, nullptr, rc_threads, dc);
            }
        } else if (rc_method == "fbp") {
            out = tomo::reconstruct_fbp(sino, rc_threads);
        } else if (rc_method == "fbp-m") {
            out = tomo::calibrate_mean(tomo::reconstruct_fbp(sino, rc_threads),
                                       tomo::projection_mean_estimate(sino));
        } else if (rc_method == "fbp-ms") {
            tomo::ImageGrid truth = tomo::read_image(rc_truth);
            out = tomo::calibrate_mean_sigma(tomo::reconstruct_fbp(sino, rc_threads),
                                             truth.mean(), truth.stddev());
        } else {
            std::cerr << "error: unknown method '" << rc_method << "'\n";
            return kExitUsage;
        }
        if (mode == tomo::DenoiseMode::post)
            out = tomo::gaussian_smooth(out, rc_denoise_sigma);
        tomo::write_image(out, rc_out);
        return 0;
    }

    if (ev->parsed()) {
        echo_config("evaluate", {{"recon", ev_recon},
                                 {"truth", ev_truth},
                                 {"sino", ev_sino.empty() ? "-" : ev_sino},
                                 {"threads", std::to_string(ev_threads)}});
        tomo::ImageGrid recon = tomo::read_image(ev_recon);
        tomo::ImageGrid truth = tomo::read_image(ev_truth);
        tomo::MetricsReport r;
        r.config.image = ev_truth;
        r.config.method = ev_method;
        r.config.kernel = ev_kernel;
        r.psnr = tomo::psnr(recon, truth);
        r.ssim = tomo::ssim(recon, truth);
        std::string status = "ok";
        try {
            r.sdr = tomo::sdr(recon, truth);
        } catch (const std::invalid_argument&) {
            r.sdr = std::nan("");
            status = "sdr-undefined";
        }
        if (!ev_sino.empty()) {
            tomo::Sinogram sino = tomo::read_sinogram(ev_sino);
            r.config.angles = sino.angles();
            r.p_rp = tomo::reprojection_psnr(recon, sino, ev_threads);
        } else {
            r.p_rp = std::nan("");
        }
        if (!ev_map.empty()) {
            auto em = tomo::error_map(recon, truth, ev_map);
            std::cerr << "radial_correlation=" << em.radial_correlation << "\n";
        }
        std::cerr << "psnr=" << fmt_psnr(r.psnr) << " p_rp=" << fmt_psnr(r.p_rp)
                  << " ssim=" << r.ssim << " sdr=" << r.sdr << "\n";
        std::string row = tomo::metrics_csv_row(r, status);
        std::cout << tomo::metrics_csv_header() << "\n" << row << "\n";
        if (!ev_csv.empty()) {
            std::FILE* f = std::fopen(ev_csv.c_str(), "ab");
            if (!f)
                throw tomo::FormatError("cannot open '" + ev_csv + "'");
            long sz = std::ftell(f);
            if (sz == 0)
                std::fprintf(f, "%s\n", tomo::metrics_csv_header().c_str());
            std::fprintf(f, "%s\n", row.c_str());
            std::fclose(f);
        }
        return 0;
    }

    if (drt->parsed()) {
        echo_config("drt", {{"in", dr_in}, {"out", dr_out}});
        tomo::write_image(tomo::double_rotation_test(tomo::read_image(dr_in)), dr_out);
        return 0;
    }

    if (bench->parsed()) {
        echo_config("bench", {{"phantoms", be_phantoms},
                              {"size", std::to_string(be_size)},
                              {"angles", be_angles},
                              {"kernels", be_kernels},
                              {"noise", be_noise},
                              {"denoise", be_denoise},
                              {"methods", be_methods},
                              {"seed", std::to_string(be_seed)},
                              {"threads", std::to_string(be_threads)},
                              {"out", be_out}});
        tomo::ExperimentConfig cfg;
        cfg.phantoms = parse_string_list(be_phantoms);
        cfg.size = be_size;
        cfg.projection_counts = parse_int_list(be_angles);
        cfg.kernels.clear();
        for (const auto& k : parse_string_list(be_kernels))
            cfg.kernels.push_back(tomo::InterpolationKernel::parse(k).kind);
        cfg.noise_percents = parse_double_list(be_noise);
        cfg.denoise_modes.clear();
        for (const auto& m : parse_string_list(be_denoise))
            cfg.denoise_modes.push_back(tomo::parse_denoise_mode(m));
        cfg.methods = parse_string_list(be_methods);
        cfg.seed = be_seed;
        cfg.threads = be_threads;
        cfg.out_dir = be_out;
        cfg.write_error_maps = be_maps;
        std::string csv = tomo::run_benchmark(cfg);
        std::cout << csv;
        return 0;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const tomo::InternalError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kExitInternal;
    } catch (const tomo::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
