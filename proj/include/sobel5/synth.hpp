#pragma once

#include <cstdint>

#include "sobel5/plane.hpp"

namespace sobel5 {

/// splitmix64 step. Small, fast and identical on every platform, which keeps
/// synthesized test images reproducible across machines.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic pseudo-random grayscale image for a given seed.
inline GrayPlane synth_random(int width, int height, std::uint64_t seed) {
    GrayPlane img(width, height);
    std::uint64_t state = seed;
    std::uint64_t word = 0;
    int have = 0;
    for (auto& px : img.data()) {
        if (have == 0) {
            word = splitmix64(state);
            have = 8;
        }
        px = static_cast<std::uint8_t>(word & 0xFF);
        word >>= 8;
        --have;
    }
    return img;
}

/// Horizontal ramp: pixel value is the column index modulo 256.
inline GrayPlane synth_ramp_x(int width, int height) {
    GrayPlane img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.at(y, x) = static_cast<std::uint8_t>(x & 0xFF);
    return img;
}

inline GrayPlane synth_constant(int width, int height, std::uint8_t value) {
    GrayPlane img(width, height);
    for (auto& px : img.data()) px = value;
    return img;
}

/// All-zero image with a single bright pixel.
inline GrayPlane synth_impulse(int width, int height, int y, int x, std::uint8_t value = 1) {
    GrayPlane img(width, height);
    img.at(y, x) = value;
    return img;
}

} // namespace sobel5
