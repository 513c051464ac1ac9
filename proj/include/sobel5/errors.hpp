#pragma once

#include <stdexcept>
#include <string>

namespace sobel5 {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveParam : Error { using Error::Error; };
struct NonIntegralWeight : Error { using Error::Error; };
struct ParamOverflow : Error { using Error::Error; };

struct ImageTooSmall : Error { using Error::Error; };
struct RowTooShort : Error { using Error::Error; };

struct MissingRow : Error { using Error::Error; };
struct VariantMismatch : Error { using Error::Error; };
struct ParityViolation : Error { using Error::Error; };

struct LaneTooNarrow : Error { using Error::Error; };

struct DimMismatch : Error { using Error::Error; };
struct EmptyPlane : Error { using Error::Error; };

struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptFile : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct UnsupportedExtension : Error { using Error::Error; };

} // namespace sobel5
