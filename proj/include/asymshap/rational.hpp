#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace asymshap {

using Int128 = __int128;
using UInt128 = unsigned __int128;

/// Exact fraction kept in lowest terms with a positive denominator.
/// Backed by 128-bit integers; arithmetic throws CapExceeded on overflow.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(implicit)
  Rational(Int128 num, Int128 den);

  Int128 numerator() const { return num_; }
  Int128 denominator() const { return den_; }

  double to_double() const;
  std::string to_string() const;
  static Rational parse(const std::string& text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  Int128 num_ = 0;
  Int128 den_ = 1;
};

std::string to_string(Int128 value);
std::string to_string(UInt128 value);

}  // namespace asymshap
