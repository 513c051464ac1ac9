#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>

#include "sobel5/errors.hpp"
#include "sobel5/rational.hpp"

namespace sobel5 {

/// 5x5 integer convolution kernel.
struct Kernel5 {
    std::array<std::array<std::int32_t, 5>, 5> w{};

    std::int32_t at(int i, int j) const { return w[i][j]; }

    friend bool operator==(const Kernel5& a, const Kernel5& b) { return a.w == b.w; }
    friend bool operator!=(const Kernel5& a, const Kernel5& b) { return !(a == b); }
};

/// 3x3 integer convolution kernel (classic two-direction operator).
struct Kernel3 {
    std::array<std::array<std::int32_t, 3>, 3> w{};

    std::int32_t at(int i, int j) const { return w[i][j]; }

    friend bool operator==(const Kernel3& a, const Kernel3& b) { return a.w == b.w; }
};

inline Kernel3 kernel3_x() {
    return Kernel3{{{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}}};
}

inline Kernel3 kernel3_y() {
    return Kernel3{{{{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}}}};
}

/// Rank-1 kernel factor: scale * (col x row).
struct SeparablePair {
    std::array<std::int32_t, 5> col{};
    std::array<std::int32_t, 5> row{};
    std::int32_t scale = 1;

    Kernel5 outer() const {
        Kernel5 k;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                k.w[i][j] = scale * col[i] * row[j];
        return k;
    }
};

/// Weight parameters of the generalized 5x5 operator family.
/// The default instance reproduces the classic 5x5 weights.
struct FilterParams {
    std::int64_t a = 1;
    Rational b{2};
    Rational m{6};
    Rational n{4};
};

enum class Direction { X, Y, D, DT };

inline const char* direction_name(Direction d) {
    switch (d) {
        case Direction::X: return "Kx";
        case Direction::Y: return "Ky";
        case Direction::D: return "Kd";
        case Direction::DT: return "Kdt";
    }
    return "?";
}

namespace detail {

using RationalKernel = std::array<std::array<Rational, 5>, 5>;

/// Exact-kernel construction for one direction.
inline RationalKernel materialize_exact(const FilterParams& p, Direction dir) {
    const Rational a{p.a};
    const Rational& b = p.b;
    const Rational& m = p.m;
    const Rational& n = p.n;
    const Rational one{1};
    const Rational two{2};

    RationalKernel k;
    switch (dir) {
        case Direction::X: {
            const std::array<Rational, 5> col{one, n, m, n, one};
            const std::array<Rational, 5> row{-one, -b, Rational{0}, b, one};
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    k[i][j] = a * col[i] * row[j];
            break;
        }
        case Direction::Y: {
            const std::array<Rational, 5> col{-one, -b, Rational{0}, b, one};
            const std::array<Rational, 5> row{one, n, m, n, one};
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    k[i][j] = a * col[i] * row[j];
            break;
        }
        case Direction::D: {
            const Rational nb = n * b;
            const Rational mb = m * b;
            k = {{{-m, -n, -one, -b, Rational{0}},
                  {-n, -mb, -nb, Rational{0}, b},
                  {-one, -nb, Rational{0}, nb, one},
                  {-b, Rational{0}, nb, mb, n},
                  {Rational{0}, b, one, n, m}}};
            for (auto& row : k)
                for (auto& e : row) e = a * e;
            break;
        }
        case Direction::DT: {
            const Rational nb = n * b;
            const Rational mb = m * b;
            k = {{{Rational{0}, -b, -one, -n, -m},
                  {b, Rational{0}, -nb, -mb, -n},
                  {one, nb, Rational{0}, -nb, -one},
                  {n, mb, nb, Rational{0}, -b},
                  {m, n, one, b, Rational{0}}}};
            for (auto& row : k)
                for (auto& e : row) e = a * e;
            break;
        }
    }
    return k;
}

inline std::int32_t narrow_weight(const Rational& r, const char* kernel, int i, int j) {
    if (!r.is_integer())
        throw NonIntegralWeight(std::string(kernel) + "(" + std::to_string(i) + "," +
                                std::to_string(j) + ") = " + r.str() +
                                " is not an integer");
    return static_cast<std::int32_t>(r.numerator());
}

} // namespace detail

/// Maximum admitted weight magnitude. Keeps every integer accumulation in the
/// streaming pipeline comfortably inside 32 bits for 8-bit input.
inline constexpr std::int64_t kMaxWeightMagnitude = 1LL << 15;

/// Checks a parameter set against the admission rules:
///  - a >= 1, b/m/n > 0,
///  - every entry of the four materialized kernels is an integer,
///  - b, m, n are themselves integers so the separable factors and streaming
///    taps stay integer vectors,
///  - no weight magnitude above 2^15.
/// Throws NonPositiveParam, NonIntegralWeight or ParamOverflow.
inline void validate_params(const FilterParams& p) {
    if (p.a < 1)
        throw NonPositiveParam("a = " + std::to_string(p.a) + " must be a positive integer");
    if (p.b <= Rational{0})
        throw NonPositiveParam("b = " + p.b.str() + " must be positive");
    if (p.m <= Rational{0})
        throw NonPositiveParam("m = " + p.m.str() + " must be positive");
    if (p.n <= Rational{0})
        throw NonPositiveParam("n = " + p.n.str() + " must be positive");

    std::int64_t max_mag = 0;
    for (Direction dir : {Direction::X, Direction::Y, Direction::D, Direction::DT}) {
        const auto k = detail::materialize_exact(p, dir);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                const std::int64_t v = detail::narrow_weight(k[i][j], direction_name(dir), i, j);
                max_mag = std::max<std::int64_t>(max_mag, std::abs(v));
            }
    }

    // Integral kernels do not force integral parameters once a > 1, but the
    // streaming row taps (-1,-b,0,b,1) and (1,n,m,n,1) carry b/m/n unscaled.
    for (auto [name, value] : {std::pair{"b", p.b}, {"m", p.m}, {"n", p.n}}) {
        if (!value.is_integer())
            throw NonIntegralWeight(std::string("parameter ") + name + " = " + value.str() +
                                    " must be an integer (streaming taps are integer vectors)");
    }

    if (max_mag > kMaxWeightMagnitude)
        throw ParamOverflow("largest weight magnitude " + std::to_string(max_mag) +
                            " exceeds " + std::to_string(kMaxWeightMagnitude));
}

/// Integer kernel for one direction. Parameters must already satisfy
/// validate_params.
inline Kernel5 materialize(const FilterParams& p, Direction dir) {
    const auto exact = detail::materialize_exact(p, dir);
    Kernel5 k;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            k.w[i][j] = detail::narrow_weight(exact[i][j], direction_name(dir), i, j);
    return k;
}

/// Sum and difference of the two diagonal kernels. The pair carries the same
/// information as (Kd, Kdt) but with a zero center row / center column, which
/// is what the streaming fast path exploits.
struct KdSumDiff {
    Kernel5 plus;  // Kd + Kdt
    Kernel5 minus; // Kd - Kdt
};

inline KdSumDiff make_kd_sum_diff(const FilterParams& p) {
    const Kernel5 kd = materialize(p, Direction::D);
    const Kernel5 kdt = materialize(p, Direction::DT);
    KdSumDiff out;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            out.plus.w[i][j] = kd.w[i][j] + kdt.w[i][j];
            out.minus.w[i][j] = kd.w[i][j] - kdt.w[i][j];
        }
    return out;
}

/// Kd - Kdt written as a difference of two rank-1 terms:
///   deriv_term reuses the same 1x5 derivative row as Kx, so its horizontal
///   pass is shared with the Kx stream for free;
///   diff_term needs only a two-point central difference per row.
struct KdMinusDecomposition {
    SeparablePair deriv_term;
    SeparablePair diff_term;
};

inline KdMinusDecomposition decompose_kd_minus(const FilterParams& p) {
    const Rational b = p.b;
    const Rational m = p.m;
    const Rational n = p.n;

    const Rational t = m * b + b - n;
    const Rational u = n * b + b * b - m * b;
    const Rational v = Rational{2} * b - Rational{2} * n * b;

    auto as_i32 = [](const Rational& r, const char* what) {
        if (!r.is_integer())
            throw NonIntegralWeight(std::string(what) + " = " + r.str() + " is not an integer");
        return static_cast<std::int32_t>(r.numerator());
    };

    KdMinusDecomposition d;
    d.deriv_term.scale = static_cast<std::int32_t>(p.a);
    d.deriv_term.col = {as_i32(m, "m"), as_i32(n + b, "n+b"), 2, as_i32(n + b, "n+b"),
                        as_i32(m, "m")};
    d.deriv_term.row = {-1, as_i32(-b, "-b"), 0, as_i32(b, "b"), 1};

    d.diff_term.scale = static_cast<std::int32_t>(p.a);
    d.diff_term.col = {as_i32(t, "m*b+b-n"), as_i32(u, "n*b+b*b-m*b"), as_i32(v, "2b-2nb"),
                       as_i32(u, "n*b+b*b-m*b"), as_i32(t, "m*b+b-n")};
    d.diff_term.row = {0, -1, 0, 1, 0};
    return d;
}

} // namespace sobel5
