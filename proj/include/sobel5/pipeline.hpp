#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "sobel5/errors.hpp"
#include "sobel5/filter_algebra.hpp"
#include "sobel5/plane.hpp"
#include "sobel5/ring.hpp"
#include "sobel5/strips.hpp"

namespace sobel5 {

enum class Prefetch { off, on };

/// Work tally for the integer row passes. row_conv5_* count full 5-tap row
/// convolutions by tap vector; row_diff counts the 2-point central
/// differences; mac counts nonzero multiply-accumulate terms.
struct OpCounters {
    std::uint64_t row_conv5_f = 0;
    std::uint64_t row_conv5_h = 0;
    std::uint64_t row_conv5_k0 = 0;
    std::uint64_t row_conv5_k1 = 0;
    std::uint64_t row_diff = 0;
    std::uint64_t row_conv3_f = 0;
    std::uint64_t row_conv3_h = 0;
    std::uint64_t mac = 0;

    std::uint64_t row_conv5_total() const {
        return row_conv5_f + row_conv5_h + row_conv5_k0 + row_conv5_k1;
    }

    OpCounters& operator+=(const OpCounters& o) {
        row_conv5_f += o.row_conv5_f;
        row_conv5_h += o.row_conv5_h;
        row_conv5_k0 += o.row_conv5_k0;
        row_conv5_k1 += o.row_conv5_k1;
        row_diff += o.row_diff;
        row_conv3_f += o.row_conv3_f;
        row_conv3_h += o.row_conv3_h;
        mac += o.mac;
        return *this;
    }
};

/// Integer tap vectors derived from a validated parameter set. The horizontal
/// F/H passes are shared by several directions, so the outer scale a lives in
/// the vertical coefficients for those; the k0/k1 rows are used only by the
/// diagonal-sum stream and carry a directly.
struct StreamTaps {
    std::int32_t a = 1;
    std::array<std::int32_t, 5> f{};     // -1, -b, 0, b, 1
    std::array<std::int32_t, 5> h{};     // 1, n, m, n, 1
    std::array<std::int32_t, 5> k0{};    // a * (-m, -(n+b), -2, -(n+b), -m)
    std::array<std::int32_t, 5> k1{};    // a * (b-n, -mb, -2nb, -mb, b-n)
    std::array<std::int32_t, 5> gx_v{};  // a * (1, n, m, n, 1) on F rows
    std::array<std::int32_t, 5> gy_v{};  // a * (-1, -b, 0, b, 1) on H rows
    std::array<std::int32_t, 5> gdm_f{}; // a * (m, n+b, 2, n+b, m) on F rows
    std::array<std::int32_t, 5> gdm_d{}; // subtracted coefficients on D rows

    // The diagonal-difference coefficients carry a b*b term that the per-entry
    // weight cap does not bound, so near the admission limit the vertical
    // aggregation needs 64-bit accumulation. Everyday parameter sets stay on
    // the 32-bit (vectorizable) path.
    bool wide_vagg = false;
};

inline StreamTaps make_stream_taps(const FilterParams& p) {
    validate_params(p);
    const std::int32_t a = static_cast<std::int32_t>(p.a);
    const std::int32_t b = static_cast<std::int32_t>(p.b.as_integer());
    const std::int32_t m = static_cast<std::int32_t>(p.m.as_integer());
    const std::int32_t n = static_cast<std::int32_t>(p.n.as_integer());

    StreamTaps t;
    t.a = a;
    t.f = {-1, -b, 0, b, 1};
    t.h = {1, n, m, n, 1};
    t.k0 = {-a * m, -a * (n + b), -2 * a, -a * (n + b), -a * m};
    t.k1 = {a * (b - n), -a * m * b, -2 * a * n * b, -a * m * b, a * (b - n)};
    t.gx_v = {a, a * n, a * m, a * n, a};
    t.gy_v = {-a, -a * b, 0, a * b, a};
    t.gdm_f = {a * m, a * (n + b), 2 * a, a * (n + b), a * m};
    t.gdm_d = {a * (m * b + b - n), a * (n * b + b * b - m * b), a * (2 * b - 2 * n * b),
               a * (n * b + b * b - m * b), a * (m * b + b - n)};

    auto abs_tap_sum = [](const std::array<std::int32_t, 5>& taps) {
        std::int64_t s = 0;
        for (auto v : taps) s += std::abs(static_cast<std::int64_t>(v));
        return s;
    };
    const std::int64_t max_f_row = 255 * abs_tap_sum(t.f);
    const std::int64_t max_h_row = 255 * abs_tap_sum(t.h);
    const std::int64_t bound_gx = abs_tap_sum(t.gx_v) * max_f_row;
    const std::int64_t bound_gy = abs_tap_sum(t.gy_v) * max_h_row;
    const std::int64_t bound_gdm =
        abs_tap_sum(t.gdm_f) * max_f_row + abs_tap_sum(t.gdm_d) * 510;
    t.wide_vagg = std::max({bound_gx, bound_gy, bound_gdm}) > INT32_MAX;
    return t;
}

namespace detail {

inline std::uint64_t nonzero_taps(const std::array<std::int32_t, 5>& taps) {
    std::uint64_t c = 0;
    for (auto t : taps) c += t != 0;
    return c;
}

inline void row_conv5(std::span<const std::uint8_t> in, const std::array<std::int32_t, 5>& taps,
                      std::span<std::int32_t> out) {
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = taps[0] * in[x] + taps[1] * in[x + 1] + taps[2] * in[x + 2] +
                 taps[3] * in[x + 3] + taps[4] * in[x + 4];
}

inline void row_diff(std::span<const std::uint8_t> in, std::span<std::int32_t> out) {
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = static_cast<std::int32_t>(in[x + 3]) - static_cast<std::int32_t>(in[x + 1]);
}

inline void row_conv3(std::span<const std::uint8_t> in, const std::array<std::int32_t, 3>& taps,
                      std::span<std::int32_t> out) {
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = taps[0] * in[x] + taps[1] * in[x + 1] + taps[2] * in[x + 2];
}

/// Plain 5-row vertical combination out = sum coef[i] * ring(v-2+i).
template <typename Acc>
inline void vagg5(const RowRing& ring, std::int64_t v, const std::array<std::int32_t, 5>& coef,
                  std::span<std::int32_t> out) {
    const auto r0 = ring.row(v - 2);
    const auto r1 = ring.row(v - 1);
    const auto r2 = ring.row(v);
    const auto r3 = ring.row(v + 1);
    const auto r4 = ring.row(v + 2);
    for (std::size_t x = 0; x < out.size(); ++x) {
        const Acc acc = static_cast<Acc>(coef[0]) * r0[x] + static_cast<Acc>(coef[1]) * r1[x] +
                        static_cast<Acc>(coef[2]) * r2[x] + static_cast<Acc>(coef[3]) * r3[x] +
                        static_cast<Acc>(coef[4]) * r4[x];
        out[x] = static_cast<std::int32_t>(acc);
    }
}

inline void vagg_gd_plus(KdPlusBank& bank, std::int64_t v, std::span<std::int32_t> out) {
    bank.stage_center(v);
    const auto r0 = bank.row(v - 2, KdVariant::k0);
    const auto r1 = bank.row(v - 1, KdVariant::k1);
    const auto r3 = bank.row(v + 1, KdVariant::k1);
    const auto r4 = bank.row(v + 2, KdVariant::k0);
    const std::int32_t s0 = bank.sign_of(v - 2);
    const std::int32_t s1 = bank.sign_of(v - 1);
    const std::int32_t s3 = bank.sign_of(v + 1);
    const std::int32_t s4 = bank.sign_of(v + 2);
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = s0 * r0[x] + s1 * r1[x] + s3 * r3[x] + s4 * r4[x];
}

template <typename Acc>
inline void vagg_gd_minus(const RowRing& f_ring, const RowRing& d_ring, std::int64_t v,
                          const StreamTaps& taps, std::span<std::int32_t> out) {
    const auto f0 = f_ring.row(v - 2);
    const auto f1 = f_ring.row(v - 1);
    const auto f2 = f_ring.row(v);
    const auto f3 = f_ring.row(v + 1);
    const auto f4 = f_ring.row(v + 2);
    const auto d0 = d_ring.row(v - 2);
    const auto d1 = d_ring.row(v - 1);
    const auto d2 = d_ring.row(v);
    const auto d3 = d_ring.row(v + 1);
    const auto d4 = d_ring.row(v + 2);
    const auto& cf = taps.gdm_f;
    const auto& cd = taps.gdm_d;
    for (std::size_t x = 0; x < out.size(); ++x) {
        const Acc acc = static_cast<Acc>(cf[0]) * f0[x] + static_cast<Acc>(cf[1]) * f1[x] +
                        static_cast<Acc>(cf[2]) * f2[x] + static_cast<Acc>(cf[3]) * f3[x] +
                        static_cast<Acc>(cf[4]) * f4[x] - static_cast<Acc>(cd[0]) * d0[x] -
                        static_cast<Acc>(cd[1]) * d1[x] - static_cast<Acc>(cd[2]) * d2[x] -
                        static_cast<Acc>(cd[3]) * d3[x] - static_cast<Acc>(cd[4]) * d4[x];
        out[x] = static_cast<std::int32_t>(acc);
    }
}

} // namespace detail

/// Horizontal pass of the shared derivative row: F = -p0 - b*p1 + b*p3 + p4.
inline std::vector<std::int32_t> hpass_f(std::span<const std::uint8_t> row,
                                         const FilterParams& p) {
    if (row.size() < 5)
        throw RowTooShort("row of " + std::to_string(row.size()) + " pixels, need >= 5");
    const StreamTaps taps = make_stream_taps(p);
    std::vector<std::int32_t> out(row.size() - 4);
    detail::row_conv5(row, taps.f, out);
    return out;
}

/// Horizontal pass of the smoothing row: H = p0 + n*p1 + m*p2 + n*p3 + p4.
inline std::vector<std::int32_t> hpass_h(std::span<const std::uint8_t> row,
                                         const FilterParams& p) {
    if (row.size() < 5)
        throw RowTooShort("row of " + std::to_string(row.size()) + " pixels, need >= 5");
    const StreamTaps taps = make_stream_taps(p);
    std::vector<std::int32_t> out(row.size() - 4);
    detail::row_conv5(row, taps.h, out);
    return out;
}

/// Two-point central difference: D = -p1 + p3.
inline std::vector<std::int32_t> hpass_d(std::span<const std::uint8_t> row) {
    if (row.size() < 5)
        throw RowTooShort("row of " + std::to_string(row.size()) + " pixels, need >= 5");
    std::vector<std::int32_t> out(row.size() - 4);
    detail::row_diff(row, out);
    return out;
}

/// Horizontal pass of one diagonal-sum tap row (k0 or k1, scale included).
inline std::vector<std::int32_t> hpass_kd(std::span<const std::uint8_t> row, KdVariant variant,
                                          const FilterParams& p) {
    if (row.size() < 5)
        throw RowTooShort("row of " + std::to_string(row.size()) + " pixels, need >= 5");
    const StreamTaps taps = make_stream_taps(p);
    std::vector<std::int32_t> out(row.size() - 4);
    detail::row_conv5(row, variant == KdVariant::k0 ? taps.k0 : taps.k1, out);
    return out;
}

inline std::vector<std::int32_t> vagg_gx(const RowRing& f_ring, std::int64_t v,
                                         const FilterParams& p) {
    const StreamTaps taps = make_stream_taps(p);
    std::vector<std::int32_t> out(f_ring.row_len());
    detail::vagg5<std::int64_t>(f_ring, v, taps.gx_v, out);
    return out;
}

inline std::vector<std::int32_t> vagg_gy(const RowRing& h_ring, std::int64_t v,
                                         const FilterParams& p) {
    const StreamTaps taps = make_stream_taps(p);
    std::vector<std::int32_t> out(h_ring.row_len());
    detail::vagg5<std::int64_t>(h_ring, v, taps.gy_v, out);
    return out;
}

inline std::vector<std::int32_t> vagg_gd_plus(KdPlusBank& bank, std::int64_t v) {
    std::vector<std::int32_t> out(
        static_cast<std::size_t>(bank.row(v - 2, KdVariant::k0).size()));
    detail::vagg_gd_plus(bank, v, out);
    return out;
}

inline std::vector<std::int32_t> vagg_gd_minus(const RowRing& f_ring, const RowRing& d_ring,
                                               std::int64_t v, const FilterParams& p) {
    const StreamTaps taps = make_stream_taps(p);
    std::vector<std::int32_t> out(f_ring.row_len());
    detail::vagg_gd_minus<std::int64_t>(f_ring, d_ring, v, taps, out);
    return out;
}

/// Recovers (gd, gdt) from the sum/difference pair. Both recovered values are
/// integers whenever the pair is consistent; odd parity is an error.
inline std::pair<std::int32_t, std::int32_t> recover_diag(std::int32_t sum, std::int32_t diff) {
    if (((sum + diff) & 1) != 0)
        throw ParityViolation("odd sum/difference pair (" + std::to_string(sum) + ", " +
                              std::to_string(diff) + ")");
    return {(sum + diff) / 2, (sum - diff) / 2};
}

inline void recover_diag(std::span<const std::int32_t> sum, std::span<const std::int32_t> diff,
                         std::span<std::int32_t> gd, std::span<std::int32_t> gdt) {
    for (std::size_t x = 0; x < sum.size(); ++x) {
        const auto [d, dt] = recover_diag(sum[x], diff[x]);
        gd[x] = d;
        gdt[x] = dt;
    }
}

struct StreamResult {
    SignedPlane gx;
    SignedPlane gy;
    SignedPlane gd;
    SignedPlane gdt;
    RealPlane g;
    OpCounters counters;
};

namespace detail {

/// Streams one column strip through the four-direction operator.
///
/// Per input row, three shared horizontal passes (F, H, D) feed the gx, gy
/// and both diagonal streams. The diagonal-sum stream keeps a single bank of
/// k0/k1 row responses: per new center it computes the freshly arrived row's
/// k0, recomputes k0 for the row leaving the window, and after aggregating
/// replaces the arrived row's slot with its k1, which then serves two later
/// centers under opposite signs. That is 3 tap-row convolutions per row in
/// steady state where a bankless scheme needs 4.
inline OpCounters run_strip(const GrayPlane& img, const StreamTaps& taps, const Strip& strip,
                            Prefetch prefetch, StreamResult& out) {
    OpCounters c;
    const int h = img.height();
    const int in_w = strip.out_w + 4;
    const int depth = prefetch == Prefetch::on ? 6 : 5;

    RowRing f_ring(depth, strip.out_w);
    RowRing h_ring(depth, strip.out_w);
    RowRing d_ring(depth, strip.out_w);
    KdPlusBank bank(depth, strip.out_w);

    const std::uint64_t nz_f = nonzero_taps(taps.f);
    const std::uint64_t nz_h = nonzero_taps(taps.h);
    const std::uint64_t nz_k0 = nonzero_taps(taps.k0);
    const std::uint64_t nz_k1 = nonzero_taps(taps.k1);
    const std::uint64_t w64 = static_cast<std::uint64_t>(strip.out_w);

    auto in_row = [&](std::int64_t u) {
        return img.row(static_cast<int>(u)).subspan(static_cast<std::size_t>(strip.in_off),
                                                    static_cast<std::size_t>(in_w));
    };
    auto hpass_row = [&](std::int64_t u) {
        row_conv5(in_row(u), taps.f, f_ring.acquire(u));
        row_conv5(in_row(u), taps.h, h_ring.acquire(u));
        row_diff(in_row(u), d_ring.acquire(u));
        c.row_conv5_f += 1;
        c.row_conv5_h += 1;
        c.row_diff += 1;
        c.mac += (nz_f + nz_h + 2) * w64;
    };
    auto bank_k0 = [&](std::int64_t u) {
        row_conv5(in_row(u), taps.k0, bank.acquire(u, KdVariant::k0));
        c.row_conv5_k0 += 1;
        c.mac += nz_k0 * w64;
    };
    auto bank_k1 = [&](std::int64_t u) {
        row_conv5(in_row(u), taps.k1, bank.acquire(u, KdVariant::k1));
        c.row_conv5_k1 += 1;
        c.mac += nz_k1 * w64;
    };

    // Prime the window for the first center row v = 2.
    for (std::int64_t u = 0; u < 5; ++u) hpass_row(u);
    bank_k0(0);
    bank_k1(1);
    bank_k1(2);
    bank_k1(3);
    bank_k0(4);

    std::vector<std::int32_t> plus(strip.out_w);
    std::vector<std::int32_t> minus(strip.out_w);

    const std::uint64_t center_macs = (nonzero_taps(taps.gx_v) + nonzero_taps(taps.gy_v) + 4 +
                                       nonzero_taps(taps.gdm_f) + nonzero_taps(taps.gdm_d)) *
                                      w64;
    const std::int64_t last_center = h - 3;
    for (std::int64_t v = 2; v <= last_center; ++v) {
        if (prefetch == Prefetch::on) {
            // Depth-6 mode: the row two ahead of the window is already being
            // processed while this center aggregates.
            if (v + 3 <= h - 1) {
                hpass_row(v + 3);
                bank_k0(v + 3);
            }
            if (v > 2) bank_k0(v - 2);
        } else if (v > 2) {
            hpass_row(v + 2);
            bank_k0(v + 2);
            bank_k0(v - 2);
        }

        const int oy = static_cast<int>(v) - 2;
        auto gx_row = out.gx.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                             static_cast<std::size_t>(strip.out_w));
        auto gy_row = out.gy.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                             static_cast<std::size_t>(strip.out_w));
        auto gd_row = out.gd.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                             static_cast<std::size_t>(strip.out_w));
        auto gdt_row = out.gdt.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                               static_cast<std::size_t>(strip.out_w));
        auto g_row = out.g.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                           static_cast<std::size_t>(strip.out_w));

        if (taps.wide_vagg) {
            vagg5<std::int64_t>(f_ring, v, taps.gx_v, gx_row);
            vagg5<std::int64_t>(h_ring, v, taps.gy_v, gy_row);
            vagg_gd_minus<std::int64_t>(f_ring, d_ring, v, taps, minus);
        } else {
            vagg5<std::int32_t>(f_ring, v, taps.gx_v, gx_row);
            vagg5<std::int32_t>(h_ring, v, taps.gy_v, gy_row);
            vagg_gd_minus<std::int32_t>(f_ring, d_ring, v, taps, minus);
        }
        vagg_gd_plus(bank, v, plus);
        recover_diag(plus, minus, gd_row, gdt_row);
        c.mac += center_macs;

        for (std::size_t x = 0; x < g_row.size(); ++x) {
            const double gx = gx_row[x];
            const double gy = gy_row[x];
            const double gd = gd_row[x];
            const double gdt = gdt_row[x];
            g_row[x] = std::sqrt(gx * gx + gy * gy + gd * gd + gdt * gdt);
        }

        // The arrived row's slot switches from k0 to k1 once the k0 use is
        // done; the k1 value will be read twice, under both signs.
        if (v < last_center) bank_k1(v + 2);
    }
    return c;
}

template <typename StripFn>
inline OpCounters run_strips_parallel(const StripPlan& plan, int workers, StripFn&& fn) {
    const std::size_t count = plan.strips.size();
    std::vector<OpCounters> per_strip(count);
    const int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) per_strip[i] = fn(plan.strips[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                        per_strip[i] = fn(plan.strips[i]);
                } catch (...) {
                    errors[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    OpCounters total;
    for (const auto& c : per_strip) total += c;
    return total;
}

} // namespace detail

/// Streaming four-direction filter over a strip plan. Output planes are
/// (W-4) x (H-4); strips may run on up to `workers` threads, each writing a
/// disjoint column range.
inline StreamResult run_stream(const GrayPlane& img, const StreamTaps& taps,
                               const StripPlan& plan, Prefetch prefetch, int workers = 1) {
    if (img.width() < 5 || img.height() < 5)
        throw ImageTooSmall("streaming filter needs at least 5x5, got " +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()));
    if (plan.in_width != img.width() || plan.radius != 2)
        throw DimMismatch("strip plan covers " + std::to_string(plan.in_width) +
                          " columns at radius " + std::to_string(plan.radius) +
                          ", image has " + std::to_string(img.width()));

    StreamResult out;
    out.gx = SignedPlane(img.width() - 4, img.height() - 4);
    out.gy = SignedPlane(img.width() - 4, img.height() - 4);
    out.gd = SignedPlane(img.width() - 4, img.height() - 4);
    out.gdt = SignedPlane(img.width() - 4, img.height() - 4);
    out.g = RealPlane(img.width() - 4, img.height() - 4);
    out.counters = detail::run_strips_parallel(plan, workers, [&](const Strip& s) {
        return detail::run_strip(img, taps, s, prefetch, out);
    });
    return out;
}

inline StreamResult run_stream(const GrayPlane& img, const FilterParams& p, const StripPlan& plan,
                               Prefetch prefetch, int workers = 1) {
    return run_stream(img, make_stream_taps(p), plan, prefetch, workers);
}

struct Stream3Result {
    SignedPlane gx;
    SignedPlane gy;
    RealPlane g;
    OpCounters counters;
};

namespace detail {

inline OpCounters run_strip_3x3(const GrayPlane& img, const Strip& strip, Prefetch prefetch,
                                Stream3Result& out) {
    OpCounters c;
    const int h = img.height();
    const int in_w = strip.out_w + 2;
    const int depth = prefetch == Prefetch::on ? 4 : 3;
    const std::array<std::int32_t, 3> f_taps{-1, 0, 1};
    const std::array<std::int32_t, 3> h_taps{1, 2, 1};

    RowRing f_ring(depth, strip.out_w);
    RowRing h_ring(depth, strip.out_w);

    auto in_row = [&](std::int64_t u) {
        return img.row(static_cast<int>(u)).subspan(static_cast<std::size_t>(strip.in_off),
                                                    static_cast<std::size_t>(in_w));
    };
    auto hpass_row = [&](std::int64_t u) {
        row_conv3(in_row(u), f_taps, f_ring.acquire(u));
        row_conv3(in_row(u), h_taps, h_ring.acquire(u));
        c.row_conv3_f += 1;
        c.row_conv3_h += 1;
        c.mac += 5 * static_cast<std::uint64_t>(strip.out_w);
    };

    for (std::int64_t u = 0; u < 3; ++u) hpass_row(u);

    const std::int64_t last_center = h - 2;
    for (std::int64_t v = 1; v <= last_center; ++v) {
        if (prefetch == Prefetch::on) {
            if (v + 2 <= h - 1) hpass_row(v + 2);
        } else if (v > 1) {
            hpass_row(v + 1);
        }

        const int oy = static_cast<int>(v) - 1;
        auto gx_row = out.gx.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                             static_cast<std::size_t>(strip.out_w));
        auto gy_row = out.gy.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                             static_cast<std::size_t>(strip.out_w));
        auto g_row = out.g.row(oy).subspan(static_cast<std::size_t>(strip.out_off),
                                           static_cast<std::size_t>(strip.out_w));

        const auto f0 = f_ring.row(v - 1);
        const auto f1 = f_ring.row(v);
        const auto f2 = f_ring.row(v + 1);
        const auto h0 = h_ring.row(v - 1);
        const auto h1 = h_ring.row(v);
        const auto h2 = h_ring.row(v + 1);
        for (std::size_t x = 0; x < g_row.size(); ++x) {
            gx_row[x] = f0[x] + 2 * f1[x] + f2[x];
            gy_row[x] = h2[x] - h0[x];
            const double gx = gx_row[x];
            const double gy = gy_row[x];
            g_row[x] = std::sqrt(gx * gx + gy * gy);
        }
        c.mac += 5 * static_cast<std::uint64_t>(strip.out_w);
    }
    return c;
}

} // namespace detail

/// Streaming classic 3x3 operator; output planes are (W-2) x (H-2).
inline Stream3Result run_stream_3x3(const GrayPlane& img, const StripPlan& plan,
                                    Prefetch prefetch, int workers = 1) {
    if (img.width() < 3 || img.height() < 3)
        throw ImageTooSmall("streaming filter needs at least 3x3, got " +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()));
    if (plan.in_width != img.width() || plan.radius != 1)
        throw DimMismatch("strip plan covers " + std::to_string(plan.in_width) +
                          " columns at radius " + std::to_string(plan.radius) +
                          ", image has " + std::to_string(img.width()));

    Stream3Result out;
    out.gx = SignedPlane(img.width() - 2, img.height() - 2);
    out.gy = SignedPlane(img.width() - 2, img.height() - 2);
    out.g = RealPlane(img.width() - 2, img.height() - 2);
    out.counters = detail::run_strips_parallel(plan, workers, [&](const Strip& s) {
        return detail::run_strip_3x3(img, s, prefetch, out);
    });
    return out;
}

inline Stream3Result run_stream_3x3(const GrayPlane& img, Prefetch prefetch = Prefetch::on) {
    return run_stream_3x3(img, plan_strips(img.width(), img.width(), 1), prefetch, 1);
}

} // namespace sobel5
