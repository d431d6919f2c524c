#pragma once
// Exact rational numbers for citation-count means and overlap ratios.
//
// Always stored in lowest terms with a positive denominator; zero is 0/1.
// Intermediate products go through 128-bit integers so that comparing a
// mean of realistic citation counts against a count never rounds.

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hcstab {

class Rational {
public:
    using int_type = std::int64_t;

    constexpr Rational() = default;
    constexpr Rational(int_type n) : num_(n), den_(1) {}  // NOLINT: implicit from integers is intended
    constexpr Rational(int_type n, int_type d) : num_(n), den_(d) { normalize(); }

    constexpr int_type numerator() const { return num_; }
    constexpr int_type denominator() const { return den_; }
    constexpr bool is_integer() const { return den_ == 1; }

    explicit operator double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend constexpr bool operator==(const Rational&, const Rational&) = default;

    friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }

    /// "n/d", or just "n" when the value is an integer.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Always "n/d", used for the *_exact report columns.
    std::string fraction_str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    /// Fixed-point rendering rounded half away from zero.
    std::string decimal_str(int places = 6) const {
        __int128 scale = 1;
        for (int i = 0; i < places; ++i) scale *= 10;
        const bool negative = num_ < 0;
        const __int128 mag = negative ? -static_cast<__int128>(num_) : static_cast<__int128>(num_);
        const __int128 scaled = (mag * scale * 2 + den_) / (static_cast<__int128>(den_) * 2);
        const auto whole = static_cast<std::int64_t>(scaled / scale);
        auto frac = static_cast<std::int64_t>(scaled % scale);
        std::string out = negative && scaled != 0 ? "-" : "";
        out += std::to_string(whole);
        if (places > 0) {
            std::string digits = std::to_string(frac);
            out += '.';
            out.append(static_cast<std::size_t>(places) - digits.size(), '0');
            out += digits;
        }
        return out;
    }

    /// Parses "n", "n/d" or a plain decimal such as "0.75".
    static Rational parse(std::string_view text) {
        auto to_int = [&](std::string_view s) -> int_type {
            if (s.empty()) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
            std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
            if (i == s.size()) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
            int_type v = 0;
            for (; i < s.size(); ++i) {
                if (s[i] < '0' || s[i] > '9')
                    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
                v = v * 10 + (s[i] - '0');
            }
            return s[0] == '-' ? -v : v;
        };
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            const int_type d = to_int(text.substr(slash + 1));
            if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
            return {to_int(text.substr(0, slash)), d};
        }
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            const auto frac = text.substr(dot + 1);
            int_type scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            const auto whole_part = text.substr(0, dot);
            const bool negative = !whole_part.empty() && whole_part[0] == '-';
            const int_type whole = (whole_part.empty() || whole_part == "-" || whole_part == "+") ? 0 : to_int(whole_part);
            const int_type f = frac.empty() ? 0 : to_int(frac);
            if (!frac.empty() && (frac[0] == '-' || frac[0] == '+'))
                throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
            const int_type mag = (whole < 0 ? -whole : whole) * scale + f;
            return {negative ? -mag : mag, scale};
        }
        return {to_int(text)};
    }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 limit = static_cast<__int128>(INT64_MAX);
        if (n > limit || n < -limit || d > limit) throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<int_type>(n);
        r.den_ = static_cast<int_type>(d);
        return r;
    }

    constexpr void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const int_type g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    int_type num_ = 0;
    int_type den_ = 1;
};

/// Mean of a sum over a positive count.
inline Rational mean_of(std::int64_t sum, std::int64_t count) {
    if (count <= 0) throw std::domain_error("mean of an empty collection");
    return {sum, count};
}

}  // namespace hcstab
