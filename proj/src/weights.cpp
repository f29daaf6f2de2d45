#include "asymshap/weights.hpp"

#include <cmath>
#include <unordered_map>

#include "asymshap/errors.hpp"

namespace asymshap {

namespace {

void check_weight_args(const PartialOrder& po, int h, Coalition s) {
  if (h < 0 || h >= po.size()) throw Error(ErrorCode::DomainError, "feature index out of range");
  if (!s.subset_of(po.all())) throw Error(ErrorCode::DomainError, "coalition references unknown features");
  if (s.contains(h)) throw Error(ErrorCode::DisallowedCoalition, "feature is already part of the coalition");
  if (!is_allowed(po, s) || !is_allowed(po, s.with(h))) {
    throw Error(ErrorCode::DisallowedCoalition, "coalition violates the precedence constraints");
  }
}

Rational count_ratio(UInt128 num_a, UInt128 num_b, UInt128 den) {
  // num_a * num_b can overflow before reduction; reduce each factor against den first.
  auto gcd = [](UInt128 a, UInt128 b) {
    while (b != 0) {
      UInt128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  };
  UInt128 g = gcd(num_a, den);
  num_a /= g;
  den /= g;
  g = gcd(num_b, den);
  num_b /= g;
  den /= g;
  constexpr UInt128 kMax = UInt128{1} << 126;
  UInt128 num;
  if (__builtin_mul_overflow(num_a, num_b, &num) || num >= kMax || den >= kMax) {
    throw Error(ErrorCode::CapExceeded, "weight exceeds exact rational range");
  }
  return Rational(static_cast<Int128>(num), static_cast<Int128>(den));
}

}  // namespace

Rational symmetric_weight(int q, int s_size) {
  if (q < 1 || s_size < 0 || s_size > q - 1) {
    throw Error(ErrorCode::DomainError, "coalition size must lie in 0..q-1");
  }
  // 1 / (q * binom(q-1, s))
  Int128 binom = 1;
  const int k = std::min(s_size, q - 1 - s_size);
  for (int i = 1; i <= k; ++i) binom = binom * (q - 1 - k + i) / i;
  return Rational(1, static_cast<Int128>(q) * binom);
}

Rational asymmetric_weight(const PartialOrder& po, int h, Coalition s) {
  check_weight_args(po, h, s);
  const Coalition rest(po.all().bits() & ~s.with(h).bits());
  return count_ratio(count_extensions(po, s), count_extensions(po, rest), count_extensions(po, po.all()));
}

double asymmetric_weight_approx(const PartialOrder& po, int h, Coalition s) {
  check_weight_args(po, h, s);
  const Coalition rest(po.all().bits() & ~s.with(h).bits());
  return std::exp(log_count_extensions(po, s) + log_count_extensions(po, rest) - log_count_extensions(po, po.all()));
}

WeightMatrices build_weight_matrices(const PartialOrder& po, int max_features) {
  WeightMatrices out;
  out.coalitions = enumerate_allowed_coalitions(po, max_features);
  out.num_features = po.size();
  const std::size_t m = out.coalitions.size();
  const std::size_t q = static_cast<std::size_t>(po.size());
  out.w_plus.assign(q * m, Rational());
  out.w_minus.assign(q * m, Rational());

  // Weights depend on S only through #S and #(H \ (S+h)); both are counts of allowed
  // coalitions or their complements, memoized by bit pattern.
  std::unordered_map<std::uint64_t, UInt128> counts;
  auto count = [&](Coalition c) {
    auto [it, fresh] = counts.try_emplace(c.bits(), 0);
    if (fresh) it->second = count_extensions(po, c);
    return it->second;
  };
  const UInt128 total = count(po.all());
  const std::uint64_t all = po.all().bits();

  for (std::size_t col = 0; col < m; ++col) {
    const Coalition s = out.coalitions[col];
    for (int h = 0; h < po.size(); ++h) {
      const std::size_t idx = static_cast<std::size_t>(h) * m + col;
      if (!s.contains(h)) {
        if (is_allowed(po, s.with(h))) {
          out.w_minus[idx] = count_ratio(count(s), count(Coalition(all & ~s.with(h).bits())), total);
        }
      } else {
        const Coalition before = s.without(h);
        if (is_allowed(po, before)) {
          out.w_plus[idx] = count_ratio(count(before), count(Coalition(all & ~s.bits())), total);
        }
      }
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd to_matrix(const std::vector<Rational>& values, int rows, std::size_t cols) {
  Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(cols));
  for (int r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      out(r, static_cast<Eigen::Index>(c)) = values[static_cast<std::size_t>(r) * cols + c].to_double();
  return out;
}

}  // namespace

Eigen::MatrixXd WeightMatrices::plus_matrix() const { return to_matrix(w_plus, num_features, cols()); }

Eigen::MatrixXd WeightMatrices::minus_matrix() const { return to_matrix(w_minus, num_features, cols()); }

Eigen::MatrixXd WeightMatrices::difference_matrix() const {
  std::vector<Rational> diff(w_plus.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = w_plus[i] - w_minus[i];
  return to_matrix(diff, num_features, cols());
}

}  // namespace asymshap
