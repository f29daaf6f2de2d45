#pragma once

#include <vector>

#include <Eigen/Dense>

#include "asymshap/coalition.hpp"
#include "asymshap/partial_order.hpp"
#include "asymshap/rational.hpp"

namespace asymshap {

/// Classical Shapley weight |S|!(q-1-|S|)!/q!. Throws DomainError unless 0 <= s_size <= q-1.
Rational symmetric_weight(int q, int s_size);

/// Share of allowed orderings in which exactly the features of s precede h:
///   #s * #(H \ (s + h)) / #H.
/// Throws DisallowedCoalition if h is in s or s or s + h breaks a constraint.
Rational asymmetric_weight(const PartialOrder& po, int h, Coalition s);

/// Same quantity in floating point via log-counts; usable for any q.
double asymmetric_weight_approx(const PartialOrder& po, int h, Coalition s);

/// Exact positive and negative weight matrices over the allowed coalitions.
///
/// minus(h, S) = w_h(S) for h not in S, plus(h, S) = w_h(S \ h) for h in S, zero elsewhere.
/// Each row of either matrix is a probability distribution over the columns.
struct WeightMatrices {
  std::vector<Coalition> coalitions;
  int num_features = 0;
  std::vector<Rational> w_plus;   // row-major, num_features x coalitions.size()
  std::vector<Rational> w_minus;

  std::size_t cols() const { return coalitions.size(); }
  const Rational& plus(int h, std::size_t col) const { return w_plus[static_cast<std::size_t>(h) * cols() + col]; }
  const Rational& minus(int h, std::size_t col) const { return w_minus[static_cast<std::size_t>(h) * cols() + col]; }

  Eigen::MatrixXd plus_matrix() const;
  Eigen::MatrixXd minus_matrix() const;
  /// plus_matrix() - minus_matrix(), computed exactly before conversion.
  Eigen::MatrixXd difference_matrix() const;
};

WeightMatrices build_weight_matrices(const PartialOrder& po, int max_features = kDefaultEnumerationCap);

}  // namespace asymshap
