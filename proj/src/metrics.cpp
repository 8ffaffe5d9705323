#include "tomo/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tomo/errors.hpp"
#include "tomo/image_io.hpp"
#include "tomo/projector.hpp"

namespace tomo {

namespace {

double mse(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(n);
}

double psnr_from_mse(double m, double peak) {
    if (m == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / m);
}

} // namespace

double psnr(const ImageGrid& a, const ImageGrid& b, double peak) {
    if (a.size() != b.size())
        throw std::invalid_argument("psnr: image dimensions differ");
    return psnr_from_mse(mse(a.data(), b.data(), a.pixel_count()), peak);
}

double psnr(const Sinogram& a, const Sinogram& b, double peak) {
    if (a.detectors() != b.detectors() || a.angles() != b.angles())
        throw std::invalid_argument("psnr: sinogram dimensions differ");
    return psnr_from_mse(mse(a.data(), b.data(), a.value_count()), peak);
}

double reprojection_psnr(const ImageGrid& recon, const Sinogram& reference, int threads) {
    if (recon.size() != reference.detectors())
        throw std::invalid_argument("reprojection_psnr: image size does not match detector count");
    Sinogram proj = forward_radon(recon, reference.angles(), threads);
    return psnr(proj, reference, reference.max_value());
}

double ssim(const ImageGrid& a, const ImageGrid& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("ssim: image dimensions differ");
    constexpr int R = 5; // 11x11 window
    constexpr double kSigma = 1.5;
    constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

    double w[2 * R + 1][2 * R + 1];
    double wsum = 0.0;
    for (int dy = -R; dy <= R; ++dy)
        for (int dx = -R; dx <= R; ++dx) {
            double g = std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
            w[dy + R][dx + R] = g;
            wsum += g;
        }
    for (auto& row : w)
        for (double& g : row)
            g /= wsum;

    int T = a.size();
    int h = T / 2;
    if (T < 2 * R + 1)
        throw std::invalid_argument("ssim: image smaller than the 11x11 window");

    double total = 0.0;
    std::size_t count = 0;
    for (int k = -h + R; k < h - R; ++k) {
        for (int j = -h + R; j < h - R; ++j) {
            double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
            for (int dy = -R; dy <= R; ++dy)
                for (int dx = -R; dx <= R; ++dx) {
                    double g = w[dy + R][dx + R];
                    double x = a.at(j + dx, k + dy);
                    double y = b.at(j + dx, k + dy);
                    mx += g * x;
                    my += g * y;
                    mxx += g * x * x;
                    myy += g * y * y;
                    mxy += g * x * y;
                }
            double vx = mxx - mx * mx;
            double vy = myy - my * my;
            double cxy = mxy - mx * my;
            double num = (2.0 * mx * my + kC1) * (2.0 * cxy + kC2);
            double den = (mx * mx + my * my + kC1) * (vx + vy + kC2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double sdr(const ImageGrid& recon, const ImageGrid& truth) {
    if (recon.size() != truth.size())
        throw std::invalid_argument("sdr: image dimensions differ");
    double st = truth.stddev();
    if (!(st > 0.0))
        throw std::invalid_argument("sdr: truth image is constant");
    return recon.stddev() / st;
}

ErrorMapResult error_map(const ImageGrid& recon, const ImageGrid& truth,
                         const std::string& png_path) {
    if (recon.size() != truth.size())
        throw std::invalid_argument("error_map: image dimensions differ");
    int T = recon.size();
    int h = T / 2;
    ErrorMapResult res{ImageGrid(T), 0.0};
    for (int k = -h; k < h; ++k)
        for (int j = -h; j < h; ++j)
            res.values.at(j, k) = recon.at(j, k) - truth.at(j, k);

    // Pearson correlation of the signed error with distance from the grid
    // center; positive means the error grows outward.
    double n = static_cast<double>(res.values.pixel_count());
    double se = 0.0, sr = 0.0, see = 0.0, srr = 0.0, ser = 0.0;
    for (int k = -h; k < h; ++k)
        for (int j = -h; j < h; ++j) {
            double e = res.values.at(j, k);
            double r = std::hypot(j + 0.5, k + 0.5);
            se += e;
            sr += r;
            see += e * e;
            srr += r * r;
            ser += e * r;
        }
    double cov = ser / n - (se / n) * (sr / n);
    double ve = see / n - (se / n) * (se / n);
    double vr = srr / n - (sr / n) * (sr / n);
    res.radial_correlation = (ve > 0.0 && vr > 0.0) ? cov / std::sqrt(ve * vr) : 0.0;

    if (!png_path.empty()) {
        double peak = 0.0;
        for (std::size_t i = 0; i < res.values.pixel_count(); ++i)
            peak = std::max(peak, std::abs(res.values.data()[i]));
        std::vector<std::uint8_t> rgb(static_cast<std::size_t>(T) * T * 3, 0);
        if (peak > 0.0) {
            for (std::size_t i = 0; i < res.values.pixel_count(); ++i) {
                double v = res.values.data()[i];
                auto g = static_cast<std::uint8_t>(std::lround(255.0 * std::abs(v) / peak));
                if (v > 0.0) {
                    rgb[3 * i + 0] = g; // yellow
                    rgb[3 * i + 1] = g;
                } else if (v < 0.0) {
                    rgb[3 * i + 1] = g; // cyan
                    rgb[3 * i + 2] = g;
                }
            }
        }
        write_png_rgb8(png_path, T, T, rgb);

        std::string csv_path = png_path;
        auto dot = csv_path.find_last_of('.');
        csv_path = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".csv";
        std::FILE* f = std::fopen(csv_path.c_str(), "wb");
        if (!f)
            throw FormatError("cannot open '" + csv_path + "'");
        std::fprintf(f, "radial_correlation\n%.6f\n", res.radial_correlation);
        std::fclose(f);
    }
    return res;
}

namespace {

std::string fmt_metric(double v, const char* spec) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::string metrics_csv_header() {
    return "image,method,angles,kernel,noise_pct,noise_sigma,denoise,psnr,p_rp,ssim,sdr,status";
}

std::string metrics_csv_row(const MetricsReport& r, const std::string& status) {
    char head[256];
    std::snprintf(head, sizeof head, "%s,%s,%d,%s,%.6g,%.9g,%s,", r.config.image.c_str(),
                  r.config.method.c_str(), r.config.angles, r.config.kernel.c_str(),
                  r.config.noise_pct, r.config.noise_sigma, r.config.denoise.c_str());
    std::string row = head;
    row += fmt_metric(r.psnr, "%.4f") + ",";
    row += fmt_metric(r.p_rp, "%.4f") + ",";
    row += fmt_metric(r.ssim, "%.6f") + ",";
    row += fmt_metric(r.sdr, "%.6f") + ",";
    row += status;
    return row;
}

} // namespace tomo
