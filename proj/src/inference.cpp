#include "asymshap/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "asymshap/errors.hpp"
#include "asymshap/parallel.hpp"

namespace asymshap {

void LocalShapleyTable::validate() const {
  if (static_cast<Eigen::Index>(features.size()) != phi.cols())
    throw Error(ErrorCode::InvalidInput, "one feature name per column is required");
  if (y.size() != phi.rows()) throw Error(ErrorCode::InvalidInput, "one outcome per row is required");
  if (!phi.allFinite() || !y.allFinite()) throw Error(ErrorCode::InvalidInput, "table entries must be finite");
  if (groups && static_cast<Eigen::Index>(groups->size()) != phi.rows())
    throw Error(ErrorCode::InvalidInput, "one group label per row is required");
}

Eigen::VectorXd LocalShapleyTable::others(int h) const { return phi.rowwise().sum() - phi.col(h); }

double chi_square_sf(double x, double df) {
  if (!(x > 0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

namespace {

void check_feature(const LocalShapleyTable& table, int h) {
  table.validate();
  if (h < 0 || h >= table.phi.cols()) throw Error(ErrorCode::DomainError, "feature index out of range");
}

struct OlsFit {
  double rss = 0.0;
  Eigen::Index rank = 0;
};

OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  OlsFit f;
  f.rank = qr.rank();
  f.rss = (y - design * qr.solve(y)).squaredNorm();
  return f;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd ca = a.array() - a.mean();
  const Eigen::ArrayXd cb = b.array() - b.mean();
  return (ca * cb).sum() / std::sqrt(ca.square().sum() * cb.square().sum());
}

}  // namespace

LrtResult lrt_conditional(const LocalShapleyTable& table, int h) {
  check_feature(table, h);
  const Eigen::Index n = table.phi.rows();
  const Eigen::Index q = table.phi.cols();
  if (n <= q + 2) throw Error(ErrorCode::DegenerateDesign, "too few rows for the likelihood-ratio test");

  Eigen::MatrixXd reduced(n, q);
  reduced.col(0).setOnes();
  for (Eigen::Index k = 0, c = 1; k < q; ++k)
    if (k != h) reduced.col(c++) = table.phi.col(k);
  Eigen::MatrixXd full(n, q + 1);
  full << reduced, table.phi.col(h);

  const OlsFit r0 = ols(reduced, table.y);
  const OlsFit r1 = ols(full, table.y);
  LrtResult out;
  out.df = static_cast<int>(r1.rank - r0.rank);
  if (out.df < 1) throw Error(ErrorCode::DegenerateDesign, "tested feature adds no rank to the design");
  if (!(r0.rss > 0)) throw Error(ErrorCode::DegenerateDesign, "reduced model fits the outcome exactly");
  out.llr = r1.rss > 0 ? 0.5 * static_cast<double>(n) * std::log(r0.rss / r1.rss)
                       : std::numeric_limits<double>::infinity();
  out.p = chi_square_sf(2.0 * out.llr, out.df);
  return out;
}

PermutationResult matched_permutation_test(const LocalShapleyTable& table, int h, int block_size,
                                           std::size_t permutations, std::uint64_t seed, int threads) {
  check_feature(table, h);
  const Eigen::Index n = table.phi.rows();
  if (block_size < 2) throw Error(ErrorCode::InvalidInput, "block size must be at least 2");
  if (n < 2 * block_size) throw Error(ErrorCode::InvalidInput, "need at least two blocks of rows");
  if (permutations < kMinPermutations) throw Error(ErrorCode::InvalidInput, "at least 100 permutations are required");

  const Eigen::VectorXd rest = table.others(h);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return rest(a) < rest(b); });

  // Work in sorted order; blocks are contiguous ranges [starts[k], starts[k + 1]).
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = table.phi(order[static_cast<std::size_t>(i)], h);
    y(i) = table.y(order[static_cast<std::size_t>(i)]);
  }
  std::vector<Eigen::Index> starts;
  for (Eigen::Index s = 0; s + block_size <= n; s += block_size) starts.push_back(s);
  starts.push_back(n);

  bool any_varying = false;
  for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
    const auto block = x.segment(starts[k], starts[k + 1] - starts[k]);
    if (block.maxCoeff() > block.minCoeff()) any_varying = true;
  }
  const double r_obs = pearson(x, y);
  if (!std::isfinite(r_obs)) throw Error(ErrorCode::DegenerateBlocks, "correlation is undefined for constant values");
  if (!any_varying) throw Error(ErrorCode::DegenerateBlocks, "phi_h is constant within every block");

  std::vector<double> stats(permutations);
  parallel_for(permutations, threads, [&](std::size_t b) {
    std::mt19937_64 rng(mix_seed(seed, b));
    Eigen::VectorXd xp = x;
    for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
      std::shuffle(xp.data() + starts[k], xp.data() + starts[k + 1], rng);
    }
    stats[b] = pearson(xp, y);
  });

  const double threshold = std::abs(r_obs) * (1.0 - 1e-12);
  std::size_t extreme = 0;
  for (double s : stats)
    if (std::abs(s) >= threshold) ++extreme;
  PermutationResult out;
  out.stat = r_obs;
  out.permutations = permutations;
  out.p = static_cast<double>(1 + extreme) / static_cast<double>(permutations + 1);
  return out;
}

KruskalWallisResult kruskal_wallis(const Eigen::Ref<const Eigen::VectorXd>& values,
                                   const std::vector<std::string>& groups) {
  const Eigen::Index n = values.size();
  if (static_cast<Eigen::Index>(groups.size()) != n) throw Error(ErrorCode::InvalidInput, "one label per value is required");
  if (!values.allFinite()) throw Error(ErrorCode::InvalidInput, "values must be finite");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  Eigen::VectorXd ranks(n);
  double tie_sum = 0.0;
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) == values(order[static_cast<std::size_t>(i)])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[static_cast<std::size_t>(k)]) = avg;
    const double t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }

  std::map<std::string, std::pair<double, double>> sums;  // label -> (rank sum, count)
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& s = sums[groups[static_cast<std::size_t>(i)]];
    s.first += ranks(i);
    s.second += 1.0;
  }
  if (sums.size() < 2) throw Error(ErrorCode::InvalidInput, "at least two groups are required");

  const double nn = static_cast<double>(n);
  const double correction = 1.0 - tie_sum / (nn * nn * nn - nn);
  if (!(correction > 0)) throw Error(ErrorCode::AllTied, "all values are tied");
  double acc = 0.0;
  for (const auto& [label, s] : sums) acc += s.first * s.first / s.second;
  KruskalWallisResult out;
  out.h = (12.0 / (nn * (nn + 1.0)) * acc - 3.0 * (nn + 1.0)) / correction;
  out.df = static_cast<int>(sums.size()) - 1;
  out.p = chi_square_sf(out.h, out.df);
  return out;
}

}  // namespace asymshap
