#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "cfprod/error.hpp"

namespace cfprod {

/// An element of Q/Z stored as a reduced fraction num/den with 0 <= num < den.
class Phase {
 public:
  constexpr Phase() = default;

  Phase(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ValidationError("phase with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static Phase zero() { return Phase{}; }

  /// Parses "a/b", "a" or "-a/b"; the result is reduced mod 1.
  static Phase parse(std::string_view text) {
    auto to_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty()) throw ValidationError("malformed phase '" + std::string(text) + "'");
      std::size_t pos = 0;
      bool neg = false;
      if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        pos = 1;
      }
      if (pos == s.size()) throw ValidationError("malformed phase '" + std::string(text) + "'");
      std::int64_t v = 0;
      for (; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (c < '0' || c > '9') throw ValidationError("malformed phase '" + std::string(text) + "'");
        if (v > (INT64_MAX - 9) / 10) throw ValidationError("phase component out of range '" + std::string(text) + "'");
        v = v * 10 + (c - '0');
      }
      return neg ? -v : v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Phase(to_int(text), 1);
    return Phase(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
  }

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_ == 0; }

  [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "0" for zero, otherwise "a/b" (den 1 never occurs for non-zero values).
  [[nodiscard]] std::string to_string() const {
    if (num_ == 0) return "0";
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Phase operator+(const Phase& a, const Phase& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 l = static_cast<__int128>(a.den_ / g) * b.den_;
    if (l > INT64_MAX) throw CapacityError("phase denominator overflow");
    const __int128 n = static_cast<__int128>(a.num_) * (l / a.den_) + static_cast<__int128>(b.num_) * (l / b.den_);
    return Phase(static_cast<std::int64_t>(n % l), static_cast<std::int64_t>(l));
  }
  friend Phase operator-(const Phase& a) { return Phase(-a.num_, a.den_); }
  friend Phase operator-(const Phase& a, const Phase& b) { return a + (-b); }
  friend Phase operator*(std::int64_t k, const Phase& a) {
    const __int128 n = static_cast<__int128>(k % a.den_) * a.num_;
    return Phase(static_cast<std::int64_t>(n % a.den_), a.den_);
  }
  Phase& operator+=(const Phase& o) { return *this = *this + o; }
  Phase& operator-=(const Phase& o) { return *this = *this - o; }

  friend bool operator==(const Phase&, const Phase&) = default;
  friend std::strong_ordering operator<=>(const Phase& a, const Phase& b) {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Phase& p) { return os << p.to_string(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace cfprod
