#include "doctest.h"

#include <algorithm>
#include <random>

#include "asymshap/engine.hpp"
#include "asymshap/errors.hpp"
#include "asymshap/inference.hpp"
#include "oracles.hpp"

using namespace asymshap;

namespace {

// Kolmogorov-Smirnov distance of a sample to U(0, 1).
double ks_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    d = std::max({d, (static_cast<double>(i) + 1) / n - p[i], p[i] - static_cast<double>(i) / n});
  return d;
}

double ks_critical_5pct(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }

// Three features; phi_0 is the tested one. Others drive Y, phi_0 is correlated with the others
// and contributes `signal` to Y.
LocalShapleyTable confounded(int n, double signal, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  LocalShapleyTable t;
  t.features = {"h", "a", "b"};
  t.phi.resize(n, 3);
  t.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double a = z(rng), b = z(rng);
    const double h = 0.7 * (a + b) + z(rng);
    t.phi.row(i) << h, a, b;
    t.y(i) = a + b + signal * h + z(rng);
  }
  return t;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("chi-square tail") {
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_sf(0.0, 3) == 1.0);
  CHECK(chi_square_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("likelihood-ratio test detects signal") {
  std::mt19937_64 rng(1);
  LocalShapleyTable t = confounded(200, 0.0, rng);
  std::normal_distribution<double> z;
  for (Eigen::Index i = 0; i < t.y.size(); ++i) t.y(i) = t.phi(i, 0) + 0.01 * z(rng);
  const LrtResult r = lrt_conditional(t, 0);
  CHECK(r.df == 1);
  CHECK(r.p < 1e-6);
  CHECK(r.llr > 0);
}

TEST_CASE("likelihood-ratio test is calibrated under the null") {
  std::mt19937_64 rng(2);
  std::vector<double> p;
  for (int rep = 0; rep < 500; ++rep) p.push_back(lrt_conditional(confounded(200, 0.0, rng), 0).p);
  CHECK(ks_uniform(p) < ks_critical_5pct(p.size()));
}

TEST_CASE("duplicating another column changes nothing") {
  std::mt19937_64 rng(3);
  const LocalShapleyTable t = confounded(150, 0.2, rng);
  LocalShapleyTable dup = t;
  dup.features.push_back("a_copy");
  dup.phi.conservativeResize(Eigen::NoChange, 4);
  dup.phi.col(3) = t.phi.col(1);
  const LrtResult a = lrt_conditional(t, 0);
  const LrtResult b = lrt_conditional(dup, 0);
  CHECK(b.llr == doctest::Approx(a.llr).epsilon(1e-8));
  CHECK(b.p == doctest::Approx(a.p).epsilon(1e-8));
  CHECK(a.df == b.df);

  LocalShapleyTable tested_dup = t;
  tested_dup.phi.col(0) = t.phi.col(1);
  CHECK(code_of([&] { lrt_conditional(tested_dup, 0); }) == ErrorCode::DegenerateDesign);
  LocalShapleyTable tiny = t;
  tiny.phi = t.phi.topRows(5);
  tiny.y = t.y.head(5);
  CHECK(code_of([&] { lrt_conditional(tiny, 0); }) == ErrorCode::DegenerateDesign);
}

TEST_CASE("median LRT p-value does not increase with signal") {
  double previous = 1.0;
  for (double signal : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    std::mt19937_64 rng(4);
    std::vector<double> p;
    for (int rep = 0; rep < 100; ++rep) p.push_back(lrt_conditional(confounded(200, signal, rng), 0).p);
    std::nth_element(p.begin(), p.begin() + 50, p.end());
    CHECK(p[50] <= previous);
    previous = p[50];
  }
}

TEST_CASE("matched permutation test") {
  std::mt19937_64 rng(5);
  const LocalShapleyTable t = confounded(200, 0.0, rng);
  const PermutationResult a = matched_permutation_test(t, 0, 2, 100, 17);
  const PermutationResult b = matched_permutation_test(t, 0, 2, 100, 17, 8);
  CHECK(a.p == b.p);
  CHECK(a.stat == b.stat);
  CHECK(a.permutations == 100);
  CHECK(a.p >= 1.0 / 101);

  LocalShapleyTable strong = t;
  strong.y = strong.phi.rowwise().sum();
  strong.y += 2.0 * strong.phi.col(0);
  CHECK(matched_permutation_test(strong, 0, 2, 999, 1).p <= 0.001);

  CHECK(code_of([&] { matched_permutation_test(t, 0, 1, 999); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { matched_permutation_test(t, 0, 2, 99); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { matched_permutation_test(t, 0, 101, 999); }) == ErrorCode::InvalidInput);
}

TEST_CASE("matched permutation test rejects designs without within-block variation") {
  LocalShapleyTable t;
  t.features = {"h", "a"};
  const int n = 40;
  t.phi.resize(n, 2);
  t.y.resize(n);
  for (int i = 0; i < n; ++i) {
    t.phi(i, 1) = i;
    t.phi(i, 0) = i / 2;
    t.y(i) = std::sin(i);
  }
  CHECK(code_of([&] { matched_permutation_test(t, 0); }) == ErrorCode::DegenerateBlocks);
}

TEST_CASE("matched permutation test holds its level under confounding") {
  std::mt19937_64 rng(6);
  int rejections = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep)
    rejections += matched_permutation_test(confounded(200, 0.0, rng), 0, 2, 199, static_cast<std::uint64_t>(rep)).p <= 0.05;
  CHECK(rejections / static_cast<double>(reps) <= 0.09);
}

TEST_CASE("Kruskal-Wallis") {
  const Eigen::VectorXd v = (Eigen::VectorXd(11) << 1, 2, 2, 3, 2, 4, 5, 5, 0.5, 3, 3).finished();
  const std::vector<std::string> g{"a", "a", "a", "a", "b", "b", "b", "b", "c", "c", "c"};
  const KruskalWallisResult r = kruskal_wallis(v, g);
  // Reference values from an independent implementation with tie correction.
  CHECK(r.h == doctest::Approx(3.815165876777256).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(0.1484387389186579).epsilon(1e-10));
  CHECK(r.df == 2);

  CHECK(code_of([] { kruskal_wallis(Eigen::Vector3d::Ones(), {"a", "b", "b"}); }) == ErrorCode::AllTied);
  CHECK(code_of([] { kruskal_wallis(Eigen::Vector3d(1, 2, 3), {"a", "a", "a"}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("two-group Kruskal-Wallis equals the squared rank-sum statistic") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n1 = 5 + static_cast<int>(rng() % 20), n2 = 5 + static_cast<int>(rng() % 20);
    const int n = n1 + n2;
    Eigen::VectorXd v(n);
    std::vector<std::string> g;
    for (int i = 0; i < n; ++i) {
      v(i) = testing::uniform(rng, 0, 1) + (i < n1 ? 0.3 : 0.0);
      g.push_back(i < n1 ? "x" : "y");
    }
    double r1 = 0;
    for (int i = 0; i < n1; ++i) r1 += 1 + static_cast<double>((v.array() < v(i)).count());
    const double z = (r1 - n1 * (n + 1) / 2.0) / std::sqrt(n1 * n2 * (n + 1) / 12.0);
    CHECK(kruskal_wallis(v, g).h == doctest::Approx(z * z).epsilon(1e-10));
  }
}

TEST_CASE("Kruskal-Wallis null calibration and power") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  std::vector<std::string> g;
  for (int i = 0; i < 400; ++i) g.push_back(std::string(1, static_cast<char>('a' + i % 4)));
  std::vector<double> p;
  Eigen::VectorXd v(400);
  for (int rep = 0; rep < 500; ++rep) {
    for (int i = 0; i < 400; ++i) v(i) = z(rng);
    p.push_back(kruskal_wallis(v, g).p);
  }
  CHECK(ks_uniform(p) < ks_critical_5pct(p.size()));
  for (int i = 0; i < 400; ++i) v(i) = z(rng) + (i % 4 == 0 ? 2.0 : 0.0);
  CHECK(kruskal_wallis(v, g).p < 1e-4);
}

TEST_CASE("row sums without h match the engine decomposition") {
  std::mt19937_64 rng(9);
  const PartialOrder po(FeatureSet::singletons({"G", "D", "C"}), std::vector<PartialOrder::Constraint>{{0, 1}});
  const LinearModel lm{0.4, {Eigen::VectorXd::Constant(1, 1.0), Eigen::Vector2d(0.5, 0.8), Eigen::VectorXd::Constant(1, -1.0)}};
  const ValueFunction vf(po.features(), lm, GaussianDependency::analytic(Eigen::Vector3d::Zero(), testing::random_covariance(3, rng)));
  Eigen::MatrixXd rows(30, 3);
  for (Eigen::Index i = 0; i < rows.size(); ++i) rows(i) = testing::uniform(rng, -2, 2);
  const auto results = explain_local_exact_rows(po, vf, rows);
  LocalShapleyTable t;
  t.features = {"G", "D", "C"};
  t.phi.resize(30, 3);
  t.y = Eigen::VectorXd::Zero(30);
  for (int i = 0; i < 30; ++i) t.phi.row(i) = results[static_cast<std::size_t>(i)].values.transpose();
  const Eigen::VectorXd f = lm.predict(rows);
  for (int h = 0; h < 3; ++h) {
    const Eigen::VectorXd expected = f - t.phi.col(h) - Eigen::VectorXd::Constant(30, results[0].base);
    CHECK((t.others(h) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}
