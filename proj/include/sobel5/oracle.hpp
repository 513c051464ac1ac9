#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "sobel5/errors.hpp"
#include "sobel5/filter_algebra.hpp"
#include "sobel5/plane.hpp"

namespace sobel5 {

/// Reference implementations: direct per-pixel window sums, written for
/// clarity rather than speed. The streaming pipeline is checked against these.

/// Valid-mode correlation of an 8-bit image with a 5x5 kernel. The window is
/// read in row-major order with no kernel flip, so the output at (y, x)
/// aggregates img(y..y+4, x..x+4).
inline SignedPlane conv2d_valid(const GrayPlane& img, const Kernel5& k) {
    if (img.width() < 5 || img.height() < 5)
        throw ImageTooSmall("conv2d_valid needs at least 5x5, got " +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()));
    SignedPlane out(img.width() - 4, img.height() - 4);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) {
            std::int64_t acc = 0;
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    acc += static_cast<std::int64_t>(k.w[i][j]) * img.at(y + i, x + j);
            out.at(y, x) = static_cast<std::int32_t>(acc);
        }
    return out;
}

inline SignedPlane conv2d_valid(const GrayPlane& img, const Kernel3& k) {
    if (img.width() < 3 || img.height() < 3)
        throw ImageTooSmall("conv2d_valid needs at least 3x3, got " +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()));
    SignedPlane out(img.width() - 2, img.height() - 2);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) {
            std::int64_t acc = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    acc += static_cast<std::int64_t>(k.w[i][j]) * img.at(y + i, x + j);
            out.at(y, x) = static_cast<std::int32_t>(acc);
        }
    return out;
}

struct Sobel3Result {
    SignedPlane gx;
    SignedPlane gy;
    RealPlane g;
};

/// Classic 3x3 two-direction operator, magnitude as root sum of squares.
inline Sobel3Result sobel3_2d(const GrayPlane& img) {
    Sobel3Result r;
    r.gx = conv2d_valid(img, kernel3_x());
    r.gy = conv2d_valid(img, kernel3_y());
    r.g = RealPlane(r.gx.width(), r.gx.height());
    for (int y = 0; y < r.g.height(); ++y)
        for (int x = 0; x < r.g.width(); ++x) {
            const double gx = r.gx.at(y, x);
            const double gy = r.gy.at(y, x);
            r.g.at(y, x) = std::sqrt(gx * gx + gy * gy);
        }
    return r;
}

struct Sobel5Result {
    SignedPlane gx;
    SignedPlane gy;
    SignedPlane gd;
    SignedPlane gdt;
    RealPlane g;
};

/// Four-direction 5x5 operator: horizontal, vertical and both diagonals,
/// aggregated as the root sum of the four squared responses.
inline Sobel5Result sobel5_4d(const GrayPlane& img, const FilterParams& p) {
    Sobel5Result r;
    r.gx = conv2d_valid(img, materialize(p, Direction::X));
    r.gy = conv2d_valid(img, materialize(p, Direction::Y));
    r.gd = conv2d_valid(img, materialize(p, Direction::D));
    r.gdt = conv2d_valid(img, materialize(p, Direction::DT));
    r.g = RealPlane(r.gx.width(), r.gx.height());
    for (int y = 0; y < r.g.height(); ++y)
        for (int x = 0; x < r.g.width(); ++x) {
            const double gx = r.gx.at(y, x);
            const double gy = r.gy.at(y, x);
            const double gd = r.gd.at(y, x);
            const double gdt = r.gdt.at(y, x);
            r.g.at(y, x) = std::sqrt(gx * gx + gy * gy + gd * gd + gdt * gdt);
        }
    return r;
}

struct DiagPair {
    SignedPlane gd;
    SignedPlane gdt;
};

/// Diagonal responses computed through the sum/difference kernels:
///   gd  = (conv(kd_plus) + conv(kd_minus)) / 2
///   gdt = (conv(kd_plus) - conv(kd_minus)) / 2
/// Both numerators are even at every pixel; a parity failure means the
/// transform was fed inconsistent kernels and is reported, not truncated.
inline DiagPair diag_via_sum_diff(const GrayPlane& img, const FilterParams& p) {
    const KdSumDiff sd = make_kd_sum_diff(p);
    const SignedPlane plus = conv2d_valid(img, sd.plus);
    const SignedPlane minus = conv2d_valid(img, sd.minus);

    DiagPair out{SignedPlane(plus.width(), plus.height()),
                 SignedPlane(plus.width(), plus.height())};
    for (int y = 0; y < plus.height(); ++y)
        for (int x = 0; x < plus.width(); ++x) {
            const std::int32_t sum = plus.at(y, x);
            const std::int32_t diff = minus.at(y, x);
            if (((sum + diff) & 1) != 0 || ((sum - diff) & 1) != 0)
                throw ParityViolation("odd sum/difference pair (" + std::to_string(sum) +
                                      ", " + std::to_string(diff) + ") at (" +
                                      std::to_string(y) + "," + std::to_string(x) + ")");
            out.gd.at(y, x) = (sum + diff) / 2;
            out.gdt.at(y, x) = (sum - diff) / 2;
        }
    return out;
}

} // namespace sobel5
