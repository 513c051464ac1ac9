#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sobel5/errors.hpp"
#include "sobel5/plane.hpp"

namespace sobel5 {

/// Whole-image SSIM terms. Statistics are population statistics over every
/// pixel (no sliding window), which is the right granularity for checking an
/// optimized filter against its reference output.
struct SsimStats {
    double mu_x = 0;
    double mu_y = 0;
    double var_x = 0;
    double var_y = 0;
    double cov_xy = 0;
    double c1 = 0;
    double c2 = 0;
    double ssim = 0;
};

/// Global SSIM between two planes. data_range, when given, must be positive;
/// otherwise the joint value range of both planes is used (1.0 for flat
/// identical planes, where any positive constant gives SSIM = 1).
inline SsimStats ssim_global(const RealPlane& x, const RealPlane& y,
                             std::optional<double> data_range = std::nullopt) {
    if (x.empty() || y.empty())
        throw EmptyPlane("ssim_global needs non-empty planes");
    if (x.width() != y.width() || x.height() != y.height())
        throw DimMismatch("ssim_global dims differ: " + std::to_string(x.width()) + "x" +
                          std::to_string(x.height()) + " vs " + std::to_string(y.width()) +
                          "x" + std::to_string(y.height()));
    if (data_range && *data_range <= 0)
        throw NonPositiveParam("data_range must be positive, got " +
                               std::to_string(*data_range));

    const std::size_t count = x.size();
    double sum_x = 0;
    double sum_y = 0;
    double lo = x.data()[0];
    double hi = x.data()[0];
    for (std::size_t i = 0; i < count; ++i) {
        const double xv = x.data()[i];
        const double yv = y.data()[i];
        sum_x += xv;
        sum_y += yv;
        lo = std::min(lo, std::min(xv, yv));
        hi = std::max(hi, std::max(xv, yv));
    }

    SsimStats s;
    s.mu_x = sum_x / static_cast<double>(count);
    s.mu_y = sum_y / static_cast<double>(count);

    double acc_vx = 0;
    double acc_vy = 0;
    double acc_cov = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double dx = x.data()[i] - s.mu_x;
        const double dy = y.data()[i] - s.mu_y;
        acc_vx += dx * dx;
        acc_vy += dy * dy;
        acc_cov += dx * dy;
    }
    s.var_x = acc_vx / static_cast<double>(count);
    s.var_y = acc_vy / static_cast<double>(count);
    s.cov_xy = acc_cov / static_cast<double>(count);

    double range = data_range ? *data_range : hi - lo;
    if (range <= 0) range = 1.0;
    s.c1 = (0.01 * range) * (0.01 * range);
    s.c2 = (0.03 * range) * (0.03 * range);

    const double num = (2 * (s.mu_x * s.mu_y) + s.c1) * (2 * s.cov_xy + s.c2);
    const double den =
        (s.mu_x * s.mu_x + s.mu_y * s.mu_y + s.c1) * (s.var_x + s.var_y + s.c2);
    s.ssim = num / den;
    return s;
}

struct DiffStats {
    double max_abs = 0;
    double mean_abs = 0;
    std::int64_t count_nonzero = 0;
};

template <typename T>
DiffStats diff_stats(const Plane<T>& a, const Plane<T>& b) {
    if (a.empty() || b.empty())
        throw EmptyPlane("diff_stats needs non-empty planes");
    if (a.width() != b.width() || a.height() != b.height())
        throw DimMismatch("diff_stats dims differ: " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                          "x" + std::to_string(b.height()));
    DiffStats s;
    double sum_abs = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(static_cast<double>(a.data()[i]) -
                                  static_cast<double>(b.data()[i]));
        sum_abs += d;
        s.max_abs = std::max(s.max_abs, d);
        s.count_nonzero += d != 0;
    }
    s.mean_abs = sum_abs / static_cast<double>(a.size());
    return s;
}

/// One benchmark measurement: mean and population stddev over `iterations`
/// timed runs after one discarded warm-up, plus derived throughput.
struct BenchReport {
    std::string label;
    int width = 0;
    int height = 0;
    int iterations = 0;
    double mean_s = 0;
    double stddev_s = 0;
    double mps = 0;          // megapixels per second
    double mps_per_core = 0; // mps / worker threads

    static std::string csv_header() {
        return "label,width,height,iters,mean_s,stddev_s,mps,mps_per_core";
    }

    std::string csv_row() const {
        std::ostringstream os;
        os << label << ',' << width << ',' << height << ',' << iterations << ','
           << std::setprecision(9) << mean_s << ',' << stddev_s << ',' << std::setprecision(6)
           << mps << ',' << mps_per_core;
        return os.str();
    }
};

template <typename Fn>
BenchReport measure(const std::string& label, int width, int height, int iterations, int workers,
                    Fn&& fn) {
    if (iterations < 1)
        throw NonPositiveParam("iterations must be >= 1, got " + std::to_string(iterations));
    if (workers < 1)
        throw NonPositiveParam("workers must be >= 1, got " + std::to_string(workers));

    using clock = std::chrono::steady_clock;
    fn(); // warm-up, not timed

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(iterations));
    for (int i = 0; i < iterations; ++i) {
        const auto t0 = clock::now();
        fn();
        const auto t1 = clock::now();
        samples.push_back(std::chrono::duration<double>(t1 - t0).count());
    }

    double mean = 0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size());

    BenchReport r;
    r.label = label;
    r.width = width;
    r.height = height;
    r.iterations = iterations;
    r.mean_s = mean;
    r.stddev_s = std::sqrt(var);
    r.mps = static_cast<double>(width) * height / (mean * 1e6);
    r.mps_per_core = r.mps / workers;
    return r;
}

} // namespace sobel5
