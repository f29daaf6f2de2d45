#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asymshap {

/// Local Shapley values of independent test individuals (rows) per feature (columns).
struct LocalShapleyTable {
  std::vector<std::string> features;
  Eigen::MatrixXd phi;
  Eigen::VectorXd y;
  std::optional<std::vector<std::string>> groups;  // labels for the Kruskal-Wallis check

  /// Throws InvalidInput on mismatched sizes or non-finite entries.
  void validate() const;
  /// phi_{i,-h}: the row sum without feature h.
  Eigen::VectorXd others(int h) const;
};

struct LrtResult {
  double llr = 0.0;   // log likelihood ratio, full vs reduced
  int df = 0;
  double p = 1.0;     // chi-square tail of 2 * llr
};

/// Gaussian linear likelihood-ratio test of Y on (phi_h, phi_{k != h}) against (phi_{k != h}),
/// both with intercept. Ranks come from a column-pivoted QR, so duplicated columns do not
/// change the result. Throws DegenerateDesign if phi_h adds no rank or n <= q + 2.
LrtResult lrt_conditional(const LocalShapleyTable& table, int h);

inline constexpr int kDefaultBlockSize = 2;
inline constexpr std::size_t kMinPermutations = 100;

struct PermutationResult {
  double stat = 0.0;  // Pearson correlation of phi_h with Y
  double p = 1.0;
  std::size_t permutations = 0;
};

/// Rows are sorted by phi_{i,-h} and cut into consecutive blocks of block_size (a short
/// remainder joins the last block); phi_h is permuted within blocks. Two-sided p-value
/// (1 + #{|r_b| >= |r_obs|}) / (B + 1). Deterministic for a given seed and any thread count.
PermutationResult matched_permutation_test(const LocalShapleyTable& table, int h, int block_size = kDefaultBlockSize,
                                           std::size_t permutations = 999, std::uint64_t seed = 1, int threads = 1);

struct KruskalWallisResult {
  double h = 0.0;
  int df = 0;
  double p = 1.0;
};

/// Rank test with average ranks and tie correction; chi-square with groups - 1 df.
/// Throws AllTied if every value is equal, InvalidInput with fewer than two groups.
KruskalWallisResult kruskal_wallis(const Eigen::Ref<const Eigen::VectorXd>& values,
                                   const std::vector<std::string>& groups);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

}  // namespace asymshap
