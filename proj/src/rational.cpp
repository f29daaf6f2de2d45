#include "asymshap/rational.hpp"

#include <algorithm>

#include "asymshap/errors.hpp"

namespace asymshap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::CyclicConstraints: return "CyclicConstraints";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::UnsupportedStructure: return "UnsupportedStructure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DisallowedCoalition: return "DisallowedCoalition";
    case ErrorCode::SingularConditioning: return "SingularConditioning";
    case ErrorCode::MCBudgetZero: return "MCBudgetZero";
    case ErrorCode::MetricUndefined: return "MetricUndefined";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::DegenerateBlocks: return "DegenerateBlocks";
    case ErrorCode::AllTied: return "AllTied";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int128 checked_mul(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::CapExceeded, "rational arithmetic overflow");
  }
  return out;
}

Int128 checked_add(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::CapExceeded, "rational arithmetic overflow");
  }
  return out;
}

}  // namespace

Rational::Rational(Int128 num, Int128 den) {
  if (den == 0) throw Error(ErrorCode::DomainError, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

double Rational::to_double() const {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string to_string(UInt128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(Int128 value) {
  if (value < 0) return "-" + to_string(static_cast<UInt128>(-value));
  return to_string(static_cast<UInt128>(value));
}

std::string Rational::to_string() const {
  if (den_ == 1) return asymshap::to_string(num_);
  return asymshap::to_string(num_) + "/" + asymshap::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty rational component in '" + text + "'");
    std::size_t i = 0;
    bool negative = false;
    if (s[0] == '-' || s[0] == '+') {
      negative = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw Error(ErrorCode::InvalidInput, "bad rational '" + text + "'");
    Int128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw Error(ErrorCode::InvalidInput, "bad rational '" + text + "'");
      v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return negative ? -v : v;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text), 1);
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational operator+(const Rational& a, const Rational& b) {
  Int128 g = gcd128(a.den_, b.den_);
  Int128 lhs = checked_mul(a.num_, b.den_ / g);
  Int128 rhs = checked_mul(b.num_, a.den_ / g);
  return Rational(checked_add(lhs, rhs), checked_mul(a.den_ / g, b.den_));
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }

Rational operator*(const Rational& a, const Rational& b) {
  Int128 g1 = gcd128(a.num_, b.den_);
  Int128 g2 = gcd128(b.num_, a.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorCode::DomainError, "division by zero rational");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Rational d = a - b;
  if (d.num_ < 0) return std::strong_ordering::less;
  if (d.num_ > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace asymshap
