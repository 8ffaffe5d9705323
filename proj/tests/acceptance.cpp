// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion (details indented). Exit code is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tomo/dit.hpp"
#include "tomo/errors.hpp"
#include "tomo/fbp.hpp"
#include "tomo/grid.hpp"
#include "tomo/harness.hpp"
#include "tomo/metrics.hpp"
#include "tomo/projector.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

using namespace tomo;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void line(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// single-window SSIM over global image statistics; diagnostic only (matches
// the published table protocol, not the windowed metric this library reports)
double global_stats_ssim(const ImageGrid& a, const ImageGrid& b) {
    const double c1 = 6.5025, c2 = 58.5225;
    double mx = a.mean(), my = b.mean(), vx = 0, vy = 0, cxy = 0;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        double dx = a.data()[i] - mx, dy = b.data()[i] - my;
        vx += dx * dx;
        vy += dy * dy;
        cxy += dx * dy;
    }
    std::size_t n = a.pixel_count();
    vx /= n;
    vy /= n;
    cxy /= n;
    return (2 * mx * my + c1) * (2 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
}

struct Cache {
    std::map<std::string, ImageGrid> img;
    std::map<std::string, Sinogram> sino;

    ImageGrid& phantom(const std::string& name, int size) {
        std::string key = name + "/" + std::to_string(size);
        auto it = img.find(key);
        if (it == img.end())
            it = img.emplace(key, suite_phantom(name, size)).first;
        return it->second;
    }
    Sinogram& scan(const std::string& name, int size, int A) {
        std::string key = name + "/" + std::to_string(size) + "/" + std::to_string(A);
        auto it = sino.find(key);
        if (it == sino.end())
            it = sino.emplace(key, forward_radon(phantom(name, size), A)).first;
        return it->second;
    }
    ImageGrid& dit(const std::string& name, int size, int A, KernelKind kk = KernelKind::cubic) {
        std::string key = "dit/" + name + "/" + std::to_string(size) + "/" + std::to_string(A) + "/" +
                          InterpolationKernel{kk}.name();
        auto it = img.find(key);
        if (it == img.end())
            it = img.emplace(key, reconstruct_dit(scan(name, size, A), {kk})).first;
        return it->second;
    }
    ImageGrid& fbp(const std::string& name, int size, int A) {
        std::string key = "fbp/" + name + "/" + std::to_string(size) + "/" + std::to_string(A);
        auto it = img.find(key);
        if (it == img.end())
            it = img.emplace(key, reconstruct_fbp(scan(name, size, A))).first;
        return it->second;
    }
};

Cache cache;

void criterion1_axis_oracle() {
    auto t0 = Clock::now();
    const int T = 32, A = 64;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ImageGrid img = testutil::random_image(T, 9000 + trial);
        Sinogram sino = forward_radon(img, A);
        ComplexGrid M = hermitian_fill(assemble_spectrum(sino, {KernelKind::cubic}));
        ComplexGrid F = oracle::dft2_brute(img);
        double fmax = F.max_abs();
        for (int n = -T / 2; n < T / 2; ++n) {
            if (n == 0)
                continue; // the DC cell follows the projection-average rule (criterion 2)
            double r1 = std::abs(M.at(n, 0) - F.at(n, 0)) / std::max(std::abs(F.at(n, 0)), 1e-9 * fmax);
            double r2 = std::abs(M.at(0, n) - F.at(0, n)) / std::max(std::abs(F.at(0, n)), 1e-9 * fmax);
            worst = std::max(worst, std::max(r1, r2));
        }
    }
    double dt = seconds_since(t0);
    line(1, worst < 1e-6 && dt < 10.0, "axis slices match the brute-force 2D DFT oracle",
         fmt("worst rel err %.2e (tol 1e-6), %.1f s (budget 10 s), 20 images", worst, dt));
}

void criterion2_mean_preservation() {
    const int T = 32, A = 50;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Sinogram s = testutil::random_sinogram(T, A, 9100 + trial);
        ImageGrid rec = reconstruct_dit(s, {KernelKind::cubic});
        double rule = s.sum() / (static_cast<double>(A) * T * T);
        worst = std::max(worst, std::abs(rec.mean() - rule) / std::abs(rule));
    }
    line(2, worst < 1e-12, "reconstruction mean equals the projection-average DC rule",
         fmt("worst rel err %.2e (tol 1e-12), 20 sinograms", worst));
}

void criterion3_realness() {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Sinogram s = testutil::random_sinogram(32, 40, 9200 + trial);
        DitStats stats;
        reconstruct_dit(s, {KernelKind::cubic}, &stats);
        worst = std::max(worst, stats.imag_residual_ratio);
    }
    bool throws = false;
    try {
        ComplexGrid bad(16);
        for (int iy = 0; iy < 16; ++iy)
            for (int ix = 0; ix < 16; ++ix)
                bad.raw(ix, iy) = {static_cast<double>(ix), static_cast<double>(iy + 1)};
        idft2(bad);
    } catch (const InternalError&) {
        throws = true; // the CLI maps this to exit code 3 (covered by the cli tests)
    }
    line(3, worst < 1e-9 && throws, "Hermitian construction keeps the output real",
         fmt("worst imag residual ratio %.2e (tol 1e-9); violation raises the consistency error: %s",
             worst, throws ? "yes" : "no"));
}

void criterion4_shepp_reproduction() {
    const int T = 512, A = 800;
    auto t0 = Clock::now();
    ImageGrid& truth = cache.phantom("shepp_logan", T);
    Sinogram& sino = cache.scan("shepp_logan", T, A);
    ImageGrid& dit = cache.dit("shepp_logan", T, A);
    double p = psnr(dit, truth);
    double s = ssim(dit, truth);
    double rp = reprojection_psnr(dit, sino);
    ImageGrid fbpm = calibrate_mean(cache.fbp("shepp_logan", T, A), projection_mean_estimate(sino));
    double pf = psnr(fbpm, truth);
    double dt = seconds_since(t0);

    bool ok_p = std::abs(p - 34.21) <= 1.5;
    bool ok_s = std::abs(s - 0.998) <= 0.004;
    bool ok_rp = std::abs(rp - 64.79) <= 2.0;
    bool ok_f = std::abs(pf - 25.22) <= 1.5;
    bool ok_t = dt < 60.0;
    line(4, ok_p && ok_s && ok_rp && ok_f && ok_t, "Shepp-Logan reproduction at T=512, A=800, cubic",
         fmt("DIT psnr %.2f [34.21+-1.5 %s] ssim %.4f [0.998+-0.004 %s] p-rp %.2f [64.79+-2 %s]; "
             "FBP-M psnr %.2f [25.22+-1.5 %s]; %.0f s [<60 %s]",
             p, ok_p ? "ok" : "FAIL", s, ok_s ? "ok" : "FAIL", rp, ok_rp ? "ok" : "FAIL", pf,
             ok_f ? "ok" : "FAIL", dt, ok_t ? "ok" : "FAIL"));
    if (!ok_s)
        std::printf("      note: windowed (reference-standard) SSIM is reported above; the published "
                    "table value matches a single-window global-statistics SSIM, which here gives %.4f\n",
                    global_stats_ssim(dit, truth));
    if (!ok_rp)
        std::printf("      note: reprojection uses this library's spatial forward operator; the "
                    "published values are only reachable with a Fourier-slice reprojector\n");
}

void criterion5_disk_sdr() {
    const int T = 512, A = 800;
    ImageGrid& truth = cache.phantom("disk", T);
    double sdr_dit = sdr(cache.dit("disk", T, A), truth);
    double sdr_fbp = sdr(cache.fbp("disk", T, A), truth);
    bool ok_dit = std::abs(sdr_dit - 1.000) <= 0.005;
    bool ok_fbp = sdr_fbp < 0.75;
    line(5, ok_dit && ok_fbp, "disk variance preservation",
         fmt("DIT SDR %.4f [1.000+-0.005 %s]; bare FBP SDR %.4f [<0.75 %s]", sdr_dit,
             ok_dit ? "ok" : "FAIL", sdr_fbp, ok_fbp ? "ok" : "FAIL"));
    if (!ok_fbp)
        std::printf("      note: the frequency-domain ramp pinned by the filter oracle (criterion 11) "
                    "preserves the disk's variance; the published collapse (0.615) is not reachable "
                    "with that filter\n");
}

void criterion6_dominance() {
    const int T = 512;
    bool all = true;
    std::string detail;
    for (const char* name : {"disk", "shepp_logan"}) {
        ImageGrid& truth = cache.phantom(name, T);
        for (int A : {200, 400, 800}) {
            Sinogram& sino = cache.scan(name, T, A);
            ImageGrid& dit = cache.dit(name, T, A);
            ImageGrid fbpms =
                calibrate_mean_sigma(cache.fbp(name, T, A), truth.mean(), truth.stddev());
            double dp = psnr(dit, truth), fp = psnr(fbpms, truth);
            double ds = ssim(dit, truth), fs = ssim(fbpms, truth);
            bool cell = dp > fp && ds > fs;
            all = all && cell;
            detail += fmt("%s@%d:%+.1f/%+.3f ", name[0] == 'd' ? "disk" : "shepp", A, dp - fp, ds - fs);
            (void)sino;
        }
    }
    line(6, all, "DIT dominates FBP-MS in PSNR and SSIM on every cell", "margins " + detail);
}

void criterion7_drt_proximity() {
    const int T = 512, A = 800;
    ImageGrid& truth = cache.phantom("shepp_logan", T);
    Sinogram& sino = cache.scan("shepp_logan", T, A);
    ImageGrid drt = double_rotation_test(truth);
    double p_dit = psnr(cache.dit("shepp_logan", T, A), truth);
    double p_drt = psnr(drt, truth);
    double rp_dit = reprojection_psnr(cache.dit("shepp_logan", T, A), sino);
    double rp_drt = reprojection_psnr(drt, sino);
    bool ok_near = std::abs(p_dit - p_drt) <= 2.0;
    bool ok_gap = rp_dit - rp_drt >= 5.0;
    line(7, ok_near && ok_gap, "DIT sits at the double-rotation reconstructibility floor",
         fmt("psnr DIT %.2f vs DRT %.2f [|diff|<=2 %s]; p-rp gap %.2f dB [>=5 %s]", p_dit, p_drt,
             ok_near ? "ok" : "FAIL", rp_dit - rp_drt, ok_gap ? "ok" : "FAIL"));
    if (!ok_gap)
        std::printf("      note: both reprojections run through the same spatial forward operator, "
                    "which limits the reachable gap; the published 13 dB gap reflects a "
                    "Fourier-consistent reprojection of the spectrum-domain reconstruction\n");
}

void criterion8_kernel_ordering() {
    const int T = 256;
    bool ok = true;
    std::string detail;
    for (int A : {200, 800}) {
        double mean_psnr[3] = {0, 0, 0};
        const KernelKind kinds[3] = {KernelKind::cubic, KernelKind::linear, KernelKind::nearest};
        for (const std::string& name : default_phantom_suite()) {
            ImageGrid& truth = cache.phantom(name, T);
            for (int ki = 0; ki < 3; ++ki)
                mean_psnr[ki] += psnr(cache.dit(name, T, A, kinds[ki]), truth) /
                                 static_cast<double>(default_phantom_suite().size());
        }
        bool here = mean_psnr[0] >= mean_psnr[1] && mean_psnr[1] >= mean_psnr[2];
        ok = ok && here;
        detail += fmt("A=%d: cubic %.2f >= linear %.2f >= nearest %.2f [%s]  ", A, mean_psnr[0],
                      mean_psnr[1], mean_psnr[2], here ? "ok" : "FAIL");
    }
    line(8, ok, "suite-average kernel ordering, noise-free", detail);
}

void criterion9_sparsity_monotonicity() {
    const int T = 256;
    const int counts[] = {800, 400, 200, 80, 40, 16};
    bool ok = true;
    std::string worst_note = "all within slack";
    double worst = -1e9;
    for (const std::string& name : default_phantom_suite()) {
        ImageGrid& truth = cache.phantom(name, T);
        double prev = 1e99;
        for (int A : counts) {
            double p = psnr(cache.dit(name, T, A), truth);
            double rise = p - prev; // positive means quality improved as A fell
            if (rise > worst) {
                worst = rise;
                worst_note = fmt("worst rise %.2f dB at %s A=%d", rise, name.c_str(), A);
            }
            if (rise > 0.3)
                ok = false;
            prev = p;
        }
    }
    line(9, ok, "per-phantom PSNR non-increasing as projections drop (0.3 dB slack)", worst_note);
}

void criterion10_noise_consistency() {
    const int T = 256, A = 400;
    std::vector<std::string> suite = default_phantom_suite();
    double nphantoms = static_cast<double>(suite.size());
    bool ok_sym = true, ok_dom = true;
    std::string detail;
    for (double pct : {1.0, 2.0, 3.0}) {
        double dit_by_mode[3] = {0, 0, 0}; // none, pre, post
        double fbp_by_mode[3] = {0, 0, 0};
        for (const std::string& name : suite) {
            ImageGrid& truth = cache.phantom(name, T);
            Sinogram noisy = add_wgn(cache.scan(name, T, A), pct, 1234 + static_cast<int>(pct));
            double sg = pct / 2.0;
            Sinogram pre = gaussian_smooth(noisy, sg);

            ImageGrid d_none = reconstruct_dit(noisy, {KernelKind::cubic});
            ImageGrid d_pre = reconstruct_dit(pre, {KernelKind::cubic});
            ImageGrid d_post = gaussian_smooth(d_none, sg);
            ImageGrid f_none = calibrate_mean(reconstruct_fbp(noisy), projection_mean_estimate(noisy));
            ImageGrid f_pre = calibrate_mean(reconstruct_fbp(pre), projection_mean_estimate(pre));
            ImageGrid f_post = gaussian_smooth(f_none, sg);

            const ImageGrid* dits[3] = {&d_none, &d_pre, &d_post};
            const ImageGrid* fbps[3] = {&f_none, &f_pre, &f_post};
            for (int m = 0; m < 3; ++m) {
                dit_by_mode[m] += psnr(*dits[m], truth) / nphantoms;
                fbp_by_mode[m] += psnr(*fbps[m], truth) / nphantoms;
            }
        }
        double sym = std::abs(dit_by_mode[1] - dit_by_mode[2]);
        if (sym >= 1.5)
            ok_sym = false;
        for (int m = 0; m < 3; ++m)
            if (dit_by_mode[m] <= fbp_by_mode[m])
                ok_dom = false;
        detail += fmt("%.0f%%: |pre-post| %.2f dB, DIT-FBPM margins %+.1f/%+.1f/%+.1f  ", pct, sym,
                      dit_by_mode[0] - fbp_by_mode[0], dit_by_mode[1] - fbp_by_mode[1],
                      dit_by_mode[2] - fbp_by_mode[2]);
    }
    line(10, ok_sym && ok_dom, "noise: pre/post denoising symmetry and DIT dominance", detail);
}

void criterion11_filter_oracle() {
    const int T = 64;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist(-100.0, 155.0);
    double worst = 0.0, worst_dc = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Sinogram s(T, 1);
        for (int i = 0; i < T; ++i)
            s.data()[i] = dist(rng);
        Sinogram f = filter_projections(s);
        std::vector<double> col(s.data(), s.data() + T);
        auto want = oracle::ramp_filter_brute(col);
        double scale = 1.0, absum = 0.0;
        for (int i = 0; i < T; ++i) {
            scale = std::max(scale, std::abs(want[i]));
            absum += std::abs(col[i]);
        }
        double dc = 0.0;
        for (int i = 0; i < T; ++i) {
            worst = std::max(worst, std::abs(f.data()[i] - want[i]) / scale);
            dc += f.data()[i];
        }
        worst_dc = std::max(worst_dc, std::abs(dc) / absum);
    }
    line(11, worst < 1e-9 && worst_dc < 1e-9, "ramp filter matches the quadratic-time DFT oracle",
         fmt("worst rel err %.2e, worst DC %.2e (tol 1e-9), 50 columns", worst, worst_dc));
}

void criterion12_bench_determinism() {
    ExperimentConfig cfg;
    cfg.phantoms = {"disk", "shepp_logan"};
    cfg.size = 64;
    cfg.projection_counts = {40, 16};
    cfg.kernels = {KernelKind::cubic};
    cfg.noise_percents = {0.0, 1.0};
    cfg.denoise_modes = {DenoiseMode::none, DenoiseMode::post};
    cfg.methods = {"dit", "fbp-m"};
    cfg.seed = 99;
    std::string a = run_benchmark(cfg);
    cfg.threads = 4;
    std::string b = run_benchmark(cfg);
    line(12, !a.empty() && a == b, "benchmark reports are byte-identical across runs",
         fmt("%zu bytes, serial vs 4 threads", a.size()));
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    auto t0 = Clock::now();
    criterion1_axis_oracle();
    criterion2_mean_preservation();
    criterion3_realness();
    criterion4_shepp_reproduction();
    criterion5_disk_sdr();
    criterion6_dominance();
    criterion7_drt_proximity();
    criterion8_kernel_ordering();
    criterion9_sparsity_monotonicity();
    criterion10_noise_consistency();
    criterion11_filter_oracle();
    criterion12_bench_determinism();
    std::printf("%d/12 criteria passed in %.0f s\n", 12 - failures, seconds_since(t0));
    return failures;
}
