#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sobel5/errors.hpp"

namespace sobel5 {

/// Row-major 2-D pixel buffer.
template <typename T>
class Plane {
public:
    Plane() : width_(0), height_(0) {}

    Plane(int width, int height) : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height, T{});
    }

    Plane(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height)
            throw DimMismatch("plane data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    T& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<T> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Plane& a, const Plane& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    static void check_dims(int width, int height, bool allow_empty = false) {
        if (width <= 0 || height <= 0) {
            if (allow_empty && width == 0 && height == 0) return;
            throw DimMismatch("plane dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
        }
    }

    int width_;
    int height_;
    std::vector<T> data_;
};

/// 8-bit grayscale input image.
using GrayPlane = Plane<std::uint8_t>;

/// Signed integer plane, holds directional gradient responses.
using SignedPlane = Plane<std::int32_t>;

/// Double-precision plane, holds gradient magnitudes and metrics inputs.
using RealPlane = Plane<double>;

} // namespace sobel5
