#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sobel5/errors.hpp"

namespace sobel5 {

/// Fixed-depth ring of row buffers addressed by source row index. Slot
/// selection is row % depth, so a window of `depth` consecutive rows always
/// occupies pairwise distinct slots. Acquiring row u+depth reuses (evicts)
/// the slot of row u.
class RowRing {
public:
    RowRing(int depth, int row_len) : depth_(depth), row_len_(row_len) {
        if (depth <= 0 || row_len <= 0)
            throw DimMismatch("ring depth and row length must be positive");
        data_.assign(static_cast<std::size_t>(depth) * row_len, 0);
        tags_.assign(static_cast<std::size_t>(depth), -1);
    }

    int depth() const { return depth_; }
    int row_len() const { return row_len_; }

    static int slot_of(std::int64_t row, int depth) {
        return static_cast<int>(row % depth);
    }

    /// Claims the slot for `row` and returns its buffer for writing.
    std::span<std::int32_t> acquire(std::int64_t row) {
        const int s = slot_of(row, depth_);
        tags_[s] = row;
        return {data_.data() + static_cast<std::size_t>(s) * row_len_,
                static_cast<std::size_t>(row_len_)};
    }

    /// Read access; the slot must still hold exactly this row.
    std::span<const std::int32_t> row(std::int64_t r) const {
        const int s = slot_of(r, depth_);
        if (tags_[s] != r)
            throw MissingRow("ring slot " + std::to_string(s) + " holds row " +
                             std::to_string(tags_[s]) + ", wanted row " + std::to_string(r));
        return {data_.data() + static_cast<std::size_t>(s) * row_len_,
                static_cast<std::size_t>(row_len_)};
    }

    bool holds(std::int64_t r) const { return tags_[slot_of(r, depth_)] == r; }

private:
    int depth_;
    int row_len_;
    std::vector<std::int32_t> data_;
    std::vector<std::int64_t> tags_;
};

enum class KdVariant : std::uint8_t { k0, k1 };

inline const char* kd_variant_name(KdVariant v) {
    return v == KdVariant::k0 ? "k0" : "k1";
}

/// Register bank for the diagonal-sum stream. Each slot stores one row's
/// partial response, tagged with which of the two distinct tap rows (k0, k1)
/// produced it, plus the sign under which the current aggregation consumes
/// it. A stored row is reused under both signs as the window slides past;
/// only the flag changes, the data is never rewritten for a sign flip.
class KdPlusBank {
public:
    KdPlusBank(int depth, int row_len) : ring_(depth, row_len) {
        variants_.assign(static_cast<std::size_t>(depth), KdVariant::k0);
        signs_.assign(static_cast<std::size_t>(depth), +1);
    }

    int depth() const { return ring_.depth(); }

    std::span<std::int32_t> acquire(std::int64_t row, KdVariant v) {
        const int s = RowRing::slot_of(row, depth());
        variants_[s] = v;
        signs_[s] = +1;
        return ring_.acquire(row);
    }

    /// Read access; checks both residency and the expected variant tag.
    std::span<const std::int32_t> row(std::int64_t r, KdVariant expect) const {
        auto span = ring_.row(r);
        const int s = RowRing::slot_of(r, depth());
        if (variants_[s] != expect)
            throw VariantMismatch("bank row " + std::to_string(r) + " holds variant " +
                                  std::string(kd_variant_name(variants_[s])) + ", wanted " +
                                  kd_variant_name(expect));
        return span;
    }

    /// Sets the aggregation signs for center v: leading rows (v-2, v-1) count
    /// positive, trailing rows (v+1, v+2) negative.
    void stage_center(std::int64_t v) {
        set_sign(v - 2, +1);
        set_sign(v - 1, +1);
        set_sign(v + 1, -1);
        set_sign(v + 2, -1);
    }

    int sign_of(std::int64_t r) const {
        if (!ring_.holds(r))
            throw MissingRow("bank does not hold row " + std::to_string(r));
        return signs_[RowRing::slot_of(r, depth())];
    }

    bool holds(std::int64_t r) const { return ring_.holds(r); }

private:
    void set_sign(std::int64_t r, int sign) {
        if (!ring_.holds(r))
            throw MissingRow("bank does not hold row " + std::to_string(r));
        signs_[RowRing::slot_of(r, depth())] = static_cast<std::int8_t>(sign);
    }

    RowRing ring_;
    std::vector<KdVariant> variants_;
    std::vector<std::int8_t> signs_;
};

} // namespace sobel5
