#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "sobel5/errors.hpp"

namespace sobel5 {

/// Exact rational arithmetic on int64 numerator/denominator.
/// Kept normalized: denominator > 0, gcd(|num|, den) == 1.
/// Used for filter parameter validation, where float rounding would
/// misclassify values such as 0.1 * 3 == 0.3.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}

    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0)
            throw NonPositiveParam("rational denominator is zero");
        normalize();
    }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    bool is_integer() const { return den_ == 1; }

    /// Value as an integer; caller must ensure is_integer() first.
    std::int64_t as_integer() const {
        if (!is_integer())
            throw NonIntegralWeight("rational " + str() + " is not an integer");
        return num_;
    }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(mul128(a.num_, b.den_) + mul128(b.num_, a.den_),
                    mul128(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(mul128(a.num_, b.den_) - mul128(b.num_, a.den_),
                    mul128(a.den_, b.den_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(mul128(a.num_, b.num_), mul128(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a) { return make(-static_cast<__int128>(a.num_), a.den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return mul128(a.num_, b.den_) < mul128(b.num_, a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Parses "3", "-2", "3/2" or decimal forms like "0.5". Returns nullopt on
    /// malformed input.
    static std::optional<Rational> parse(std::string_view s) {
        if (s.empty()) return std::nullopt;
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
        }
        std::int64_t num = 0;
        std::int64_t den = 1;
        bool any_digit = false;
        bool in_frac = false;
        for (; i < s.size(); ++i) {
            char c = s[i];
            if (c >= '0' && c <= '9') {
                if (num > (INT64_MAX - 9) / 10) return std::nullopt;
                num = num * 10 + (c - '0');
                any_digit = true;
                if (in_frac) {
                    if (den > INT64_MAX / 10) return std::nullopt;
                    den *= 10;
                }
            } else if (c == '.' && !in_frac && den == 1) {
                in_frac = true;
            } else if (c == '/' && !in_frac && any_digit && i + 1 < s.size()) {
                auto rhs = parse(s.substr(i + 1));
                if (!rhs || rhs->num_ <= 0) return std::nullopt;
                Rational lhs = make(neg ? -static_cast<__int128>(num) : num, 1);
                return lhs * Rational(rhs->den_, rhs->num_);
            } else {
                return std::nullopt;
            }
        }
        if (!any_digit) return std::nullopt;
        return make(neg ? -static_cast<__int128>(num) : num, den);
    }

private:
    static __int128 mul128(std::int64_t a, std::int64_t b) {
        return static_cast<__int128>(a) * b;
    }

    static Rational make(__int128 num, __int128 den) {
        Rational r;
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
            throw ParamOverflow("rational arithmetic overflow");
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        Rational r = make(num_, den_);
        num_ = r.num_;
        den_ = r.den_;
    }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace sobel5
