#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace asymshap {

inline constexpr int kMaxFeatures = 64;

/// Subset of feature indices stored as a 64-bit pattern (bit h <=> feature h).
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

  static constexpr Coalition full(int q) {
    return Coalition(q >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << q) - 1);
  }
  static Coalition of(std::initializer_list<int> members) {
    Coalition c;
    for (int h : members) c = c.with(h);
    return c;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int h) const { return (bits_ >> h) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr Coalition with(int h) const { return Coalition(bits_ | (std::uint64_t{1} << h)); }
  constexpr Coalition without(int h) const { return Coalition(bits_ & ~(std::uint64_t{1} << h)); }
  constexpr bool subset_of(Coalition o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  /// Character h is '1' iff feature h is present; the string has length q.
  std::string pattern(int q) const {
    std::string s(static_cast<std::size_t>(q), '0');
    for (int h = 0; h < q; ++h)
      if (contains(h)) s[static_cast<std::size_t>(h)] = '1';
    return s;
  }

  friend constexpr Coalition operator|(Coalition a, Coalition b) { return Coalition(a.bits_ | b.bits_); }
  friend constexpr Coalition operator&(Coalition a, Coalition b) { return Coalition(a.bits_ & b.bits_); }
  friend constexpr bool operator==(Coalition, Coalition) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Cardinality first, then numeric bit value. This is the column order of the weight matrices.
struct CoalitionOrder {
  constexpr bool operator()(Coalition a, Coalition b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits() < b.bits();
  }
};

}  // namespace asymshap
