#include "doctest.h"

#include <memory>
#include <random>
#include <unordered_map>

#include "asymshap/engine.hpp"
#include "asymshap/errors.hpp"
#include "oracles.hpp"

using namespace asymshap;

namespace {

std::vector<std::string> names(int q) {
  std::vector<std::string> out;
  for (int i = 0; i < q; ++i) out.push_back("f" + std::to_string(i));
  return out;
}

PartialOrder gd_c1_c2() {
  return PartialOrder(FeatureSet::singletons({"G", "D", "C1", "C2"}), std::vector<PartialOrder::Constraint>{{0, 1}});
}

// Arbitrary but fixed game: nu(S) drawn once per coalition.
NuFunction random_game(int q, std::mt19937_64& rng) {
  auto table = std::make_shared<std::vector<double>>(std::size_t{1} << q);
  for (double& v : *table) v = testing::uniform(rng, -2, 2);
  return [table](Coalition s) { return (*table)[s.bits()]; };
}

Eigen::Matrix2d toy2(double gamma) {
  Eigen::Matrix2d c;
  c << 1, gamma, gamma, 1;
  return c;
}

}  // namespace

TEST_CASE("two-variable toy example") {
  const PartialOrder po(FeatureSet::singletons({"G", "D"}), std::vector<PartialOrder::Constraint>{{0, 1}});
  const ValueFunction vf(po.features(), LinearModel::linear(0.0, Eigen::Vector2d(1.0, 1.0)),
                         GaussianDependency::analytic(Eigen::Vector2d::Zero(), toy2(0.8)));
  const ShapleyResult r = explain_local_exact(po, vf, Eigen::Vector2d(1.0, 0.5));
  CHECK(r.values(0) == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(r.values(1) == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(r.base == doctest::Approx(0.0));
  CHECK(r.total() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.mode == Mode::Exact);
}

TEST_CASE("local additivity for random models and dependencies") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int q = 2 + static_cast<int>(rng() % 5);
    const PartialOrder po(FeatureSet::singletons(names(q)), testing::random_dag(q, 0.4, rng));
    LinearModel lm;
    lm.intercept = testing::uniform(rng, -1, 1);
    for (int j = 0; j < q; ++j) {
      Eigen::VectorXd c(1 + static_cast<int>(rng() % 3));
      for (Eigen::Index d = 0; d < c.size(); ++d) c(d) = testing::uniform(rng, -1, 1);
      lm.coefficients.push_back(c);
    }
    Eigen::VectorXd mu(q), x(q);
    for (int j = 0; j < q; ++j) {
      mu(j) = testing::uniform(rng, -1, 1);
      x(j) = testing::uniform(rng, -2, 2);
    }
    const ValueFunction vf(po.features(), lm, GaussianDependency::analytic(mu, testing::random_covariance(q, rng)));
    const ShapleyResult r = explain_local_exact(po, vf, x);
    CHECK(std::abs(r.total() - lm.predict_row(x)) < 1e-10);
  }
}

TEST_CASE("engine equals the ordering average for arbitrary games") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const int q = 1 + static_cast<int>(rng() % 6);
    const PartialOrder po(FeatureSet::singletons(names(q)), testing::random_dag(q, testing::uniform(rng, 0, 0.6), rng));
    const NuFunction nu = random_game(q, rng);
    const ShapleyResult r = explain_exact(build_weight_matrices(po), nu);
    const Eigen::VectorXd expected = testing::shapley_by_orderings(po, nu);
    CHECK((r.values - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(r.total() - nu(po.all())) < 1e-12);
  }
}

TEST_CASE("no constraints reproduce the classical Shapley formula") {
  std::mt19937_64 rng(56);
  for (int q = 1; q <= 8; ++q) {
    const PartialOrder po = PartialOrder::unconstrained(FeatureSet::singletons(names(q)));
    const NuFunction nu = random_game(q, rng);
    const ShapleyResult r = explain_exact(build_weight_matrices(po), nu);
    CHECK((r.values - testing::classical_shapley(q, nu)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("null feature receives zero") {
  const PartialOrder po(FeatureSet::singletons({"G", "D", "N"}), std::vector<PartialOrder::Constraint>{{0, 1}});
  Eigen::Matrix3d cov;
  cov << 1, 0.6, 0, 0.6, 1, 0, 0, 0, 2;
  const ValueFunction vf(po.features(), LinearModel::linear(0.3, Eigen::Vector3d(1.0, -2.0, 0.0)),
                         GaussianDependency::analytic(Eigen::Vector3d::Zero(), cov));
  const ShapleyResult r = explain_local_exact(po, vf, Eigen::Vector3d(0.4, 1.3, -5.0));
  CHECK(std::abs(r.values(2)) < 1e-10);
}

TEST_CASE("evaluation is independent of thread count") {
  std::mt19937_64 rng(57);
  const PartialOrder po(FeatureSet::singletons(names(6)), testing::random_dag(6, 0.3, rng));
  const NuFunction nu = random_game(6, rng);
  const WeightMatrices w = build_weight_matrices(po);
  const ShapleyResult a = explain_exact(w, nu, 1);
  const ShapleyResult b = explain_exact(w, nu, 8);
  CHECK(a.values == b.values);
  SamplingOptions opt{3000, 4, 0, 1};
  const ShapleyResult s1 = explain_sampled(po, nu, opt);
  opt.threads = 8;
  const ShapleyResult s8 = explain_sampled(po, nu, opt);
  CHECK(s1.values == s8.values);
  CHECK(s1.std_errors == s8.std_errors);
}

TEST_CASE("global SAGE additivity") {
  std::mt19937_64 rng(58);
  Dataset data;
  data.x.resize(300, 3);
  std::normal_distribution<double> z;
  for (Eigen::Index i = 0; i < 300; ++i) {
    const double g = z(rng);
    data.x.row(i) << g, 0.6 * g + 0.8 * z(rng), z(rng);
  }
  data.y = data.x.col(0) + 0.5 * data.x.col(1).array().square().matrix() + 0.3 * data.x.col(2);
  for (Eigen::Index i = 0; i < 300; ++i) (*data.y)(i) += 0.5 * z(rng);
  const PartialOrder po(FeatureSet::singletons({"G", "D", "C"}), std::vector<PartialOrder::Constraint>{{0, 1}});
  const LinearModel lm = fit_ols(data.x, *data.y, {1, 2, 1});
  const ValueFunction vf(po.features(), lm, GaussianDependency::fit(data.x));
  const ShapleyResult r = explain_global_sage(po, vf, data, MetricKind::RSquared);
  CHECK(r.base == 0.0);
  CHECK(std::abs(r.total() - metric_r_squared(*data.y, lm.predict(data.x))) < 1e-10);

  data.event = Eigen::VectorXd::Ones(300);
  const ShapleyResult c = explain_global_sage(po, vf, data, MetricKind::CIndex);
  CHECK(c.base == 0.5);
  CHECK(std::abs(c.total() - metric_c_index(*data.y, *data.event, lm.predict(data.x))) < 1e-10);

  Dataset null = data;
  null.y = Eigen::VectorXd::LinSpaced(300, 0, 1);
  const ValueFunction zero(po.features(), LinearModel::linear(null.y->mean(), Eigen::Vector3d::Zero()),
                         GaussianDependency::fit(data.x));
  const ShapleyResult n = explain_global_sage(po, zero, null, MetricKind::RSquared);
  CHECK(n.values.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("importance weights") {
  const PartialOrder po = gd_c1_c2();
  CHECK(importance_weight_exact(po, Coalition::of({0, 1})) == Rational::parse("1/30"));
  CHECK(importance_weight_exact(po, Coalition()) == Rational::parse("1/5"));
  CHECK(importance_weight(po, Coalition::of({0, 1})) == doctest::Approx(1.0 / 30));
  Rational sum;
  for (Coalition s : enumerate_allowed_coalitions(po)) sum += importance_weight_exact(po, s);
  CHECK(sum == Rational(1));
  CHECK_THROWS_AS(importance_weight(po, Coalition::of({1})), Error);
}

TEST_CASE("importance weights are the sampler's coalition frequencies") {
  const PartialOrder po = gd_c1_c2();
  const SampledBatch batch = sample_coalitions(po, {60000, 8, 0, 1});
  std::unordered_map<std::uint64_t, int> freq;
  for (Coalition s : batch.coalitions) ++freq[s.bits()];
  CHECK(freq.size() == 12);
  for (std::size_t b = 0; b < 200; ++b) {
    const Coalition s = batch.coalitions[b];
    CHECK(freq[s.bits()] / 60000.0 == doctest::Approx(batch.proposal[b]).epsilon(0.08));
  }
  const WeightMatrices w = build_weight_matrices(po);
  for (std::size_t b = 0; b < 50; ++b) {
    const auto col = static_cast<std::size_t>(
        std::find(w.coalitions.begin(), w.coalitions.end(), batch.coalitions[b]) - w.coalitions.begin());
    for (int h = 0; h < 4; ++h) {
      CHECK(batch.q_plus(h, static_cast<Eigen::Index>(b)) == doctest::Approx(w.plus(h, col).to_double()));
      CHECK(batch.q_minus(h, static_cast<Eigen::Index>(b)) == doctest::Approx(w.minus(h, col).to_double()));
    }
  }
}

TEST_CASE("constant game") {
  const PartialOrder po = gd_c1_c2();
  const ShapleyResult r = explain_sampled(po, [](Coalition) { return 1.0; }, {10000, 3, 0, 1});
  for (int h = 0; h < 4; ++h) {
    CHECK(r.plus(h) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.minus(h) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(r.values(h)) < 0.1);
  }
  CHECK(r.samples == 10000);
  CHECK(r.seed == 3);
  CHECK(r.mode == Mode::Sampled);
}

TEST_CASE("sampler is unbiased over independent seeds") {
  std::mt19937_64 rng(59);
  const PartialOrder po = gd_c1_c2();
  const NuFunction nu = random_game(4, rng);
  const Eigen::VectorXd exact = explain_exact(build_weight_matrices(po), nu).values;
  for (int depth : {0, 1}) {
    const int seeds = 200;
    Eigen::MatrixXd est(4, seeds);
    for (int s = 0; s < seeds; ++s)
      est.col(s) = explain_sampled(po, nu, {2000, static_cast<std::uint64_t>(1000 + s), depth, 1}).values;
    const Eigen::VectorXd mean = est.rowwise().mean();
    const Eigen::VectorXd sd = ((est.colwise() - mean).array().square().rowwise().sum() / (seeds - 1)).sqrt();
    for (int h = 0; h < 4; ++h) CHECK(std::abs(mean(h) - exact(h)) <= 3 * sd(h) / std::sqrt(seeds));
  }
}

TEST_CASE("blending covers the extreme sizes exactly") {
  std::mt19937_64 rng(60);
  const PartialOrder po = PartialOrder::unconstrained(FeatureSet::singletons(names(3)));
  const NuFunction nu = random_game(3, rng);
  // q = 3, depth 1: sizes 0 and 3 exact, sizes 1 and 2 sampled.
  const ShapleyResult r = explain_sampled(po, nu, {20000, 5, 1, 1});
  const ShapleyResult e = explain_exact(build_weight_matrices(po), nu);
  for (int h = 0; h < 3; ++h) CHECK(std::abs(r.values(h) - e.values(h)) < 4 * r.std_errors(h) + 1e-12);
  CHECK_THROWS_AS(explain_sampled(po, nu, {10, 1, 2, 1}), Error);
  CHECK_THROWS_AS(explain_sampled(po, nu, {0, 1, 0, 1}), Error);
}
