#pragma once

#include <string>
#include <vector>

#include "sobel5/errors.hpp"

namespace sobel5 {

/// One vertical column strip of the image. Strips tile the output exactly;
/// their input windows overlap by 2 * radius columns so each strip can be
/// filtered independently.
struct Strip {
    int in_off = 0;  // first input column read by this strip
    int out_off = 0; // first output column written by this strip
    int out_w = 0;   // output columns produced (input window is out_w + 2r)

    friend bool operator==(const Strip& a, const Strip& b) {
        return a.in_off == b.in_off && a.out_off == b.out_off && a.out_w == b.out_w;
    }
};

struct StripPlan {
    int in_width = 0;
    int out_width = 0;
    int lane_width = 0;
    int radius = 0;
    std::vector<Strip> strips;
};

/// Splits an image of `width` columns into strips of at most `lane_width`
/// input columns. Every strip but possibly the last produces lane_width - 2r
/// output columns; the last one may be narrower (ragged). A width down to
/// 2r + 1 yields a single one-column-output strip.
inline StripPlan plan_strips(int width, int lane_width, int radius) {
    if (radius <= 0)
        throw DimMismatch("strip radius must be positive, got " + std::to_string(radius));
    if (lane_width <= 2 * radius)
        throw LaneTooNarrow("lane width " + std::to_string(lane_width) +
                            " leaves no output columns at radius " + std::to_string(radius));
    if (width < 2 * radius + 1)
        throw ImageTooSmall("width " + std::to_string(width) + " is below the minimum " +
                            std::to_string(2 * radius + 1) + " for radius " +
                            std::to_string(radius));

    StripPlan plan;
    plan.in_width = width;
    plan.out_width = width - 2 * radius;
    plan.lane_width = lane_width;
    plan.radius = radius;

    const int step = lane_width - 2 * radius;
    for (int off = 0; off < plan.out_width; off += step) {
        Strip s;
        s.in_off = off;
        s.out_off = off;
        s.out_w = std::min(step, plan.out_width - off);
        plan.strips.push_back(s);
    }
    return plan;
}

} // namespace sobel5
