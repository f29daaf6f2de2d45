#include "doctest.h"

#include <random>

#include "asymshap/engine.hpp"
#include "asymshap/errors.hpp"
#include "asymshap/oracle.hpp"
#include "oracles.hpp"

using namespace asymshap;

namespace {

ToyParams3D random_params(std::mt19937_64& rng) {
  ToyParams3D p;
  p.beta1 = testing::uniform(rng, -2, 2);
  p.beta2 = testing::uniform(rng, -2, 2);
  p.beta3 = testing::uniform(rng, -2, 2);
  p.gamma = testing::uniform(rng, -0.9, 1.0);
  const double rho_max = std::sqrt((1 + p.gamma) / 2);
  p.rho = testing::uniform(rng, -0.98, 0.98) * std::min(rho_max, 0.98);
  return p;
}

Eigen::VectorXd engine_values(const PartialOrder& po, const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov,
                              const Eigen::VectorXd& x) {
  const ValueFunction vf(po.features(), LinearModel::linear(0.0, beta),
                         GaussianDependency::analytic(Eigen::VectorXd::Zero(beta.size()), cov));
  return explain_local_exact(po, vf, x).values;
}

}  // namespace

TEST_CASE("two-variable formulas") {
  const Oracle2D o = oracle_2d({1.0, 1.0, 0.8}, 1.0, 0.5);
  CHECK(o.asym[0] == doctest::Approx(1.8));
  CHECK(o.asym[1] == doctest::Approx(-0.3));
  CHECK(o.sym[0] == doctest::Approx(1.0 + 0.4 * (1.0 - 0.5)));
  CHECK(o.marginal[1] == doctest::Approx(0.5));
  const Oracle2D z = oracle_2d({1.5, -0.5, 0.0}, 0.7, 0.2);
  for (int h = 0; h < 2; ++h) {
    CHECK(z.asym[h] == doctest::Approx(z.marginal[h]));
    CHECK(z.sym[h] == doctest::Approx(z.marginal[h]));
  }
  CHECK_THROWS_AS(oracle_2d({1, 1, 1.2}, 0, 0), Error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ToyParams3D({1, 1, 1, 0.0, 0.8}).validate(), Error);
  CHECK_THROWS_AS(ToyParams3D({1, 1, 1, 0.0, 1.0}).validate(), Error);
  CHECK_NOTHROW(ToyParams3D({1, 1, 1, 1.0, 0.9}).validate());
}

TEST_CASE("oracle additivity") {
  std::mt19937_64 rng(70);
  for (int trial = 0; trial < 1000; ++trial) {
    const ToyParams3D p = random_params(rng);
    const double g = testing::uniform(rng, -3, 3), d = testing::uniform(rng, -3, 3), c = testing::uniform(rng, -3, 3);
    const double f = p.beta1 * g + p.beta2 * d + p.beta3 * c;
    const Oracle3D o = oracle_3d(p, g, d, c);
    CHECK(std::abs(o.asym[0] + o.asym[1] + o.asym[2] - f) < 1e-12 * (1 + std::abs(f)) * 10);
    CHECK(std::abs(o.sym[0] + o.sym[1] + o.sym[2] - f) < 1e-12 * (1 + std::abs(f)) * 10);
    CHECK(o.marginal[0] == p.beta1 * g);
    CHECK(o.marginal[1] == p.beta2 * d);
    CHECK(o.marginal[2] == p.beta3 * c);
    const Oracle2D o2 = oracle_2d({p.beta1, p.beta2, p.gamma}, g, d);
    CHECK(std::abs(o2.asym[0] + o2.asym[1] - (p.beta1 * g + p.beta2 * d)) < 1e-12 * (1 + std::abs(f)) * 10);
  }
}

TEST_CASE("rho zero reduces to the two-variable case") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    ToyParams3D p = random_params(rng);
    p.rho = 0.0;
    const double g = testing::uniform(rng, -3, 3), d = testing::uniform(rng, -3, 3), c = testing::uniform(rng, -3, 3);
    const Oracle3D o = oracle_3d(p, g, d, c);
    const Oracle2D o2 = oracle_2d({p.beta1, p.beta2, p.gamma}, g, d);
    CHECK(o.asym[0] == doctest::Approx(o2.asym[0]).epsilon(1e-12));
    CHECK(o.asym[1] == doctest::Approx(o2.asym[1]).epsilon(1e-12));
    CHECK(o.asym[2] == doctest::Approx(p.beta3 * c).epsilon(1e-12));
  }
}

TEST_CASE("gamma one limit gives D nothing") {
  for (double rho : {0.0, 0.3, 0.6}) {
    const Oracle3D o = oracle_3d({1.2, -0.7, 0.4, 1.0, rho}, 0.9, 0.9, -0.4);
    CHECK(std::abs(o.asym[1]) < 1e-12);
  }
}

TEST_CASE("engine agrees with the closed forms") {
  std::mt19937_64 rng(72);
  const auto fs3 = FeatureSet::singletons({"G", "D", "C"});
  const PartialOrder asym3(fs3, std::vector<PartialOrder::Constraint>{{0, 1}});
  const PartialOrder sym3 = PartialOrder::unconstrained(fs3);
  const auto fs2 = FeatureSet::singletons({"G", "D"});
  const PartialOrder asym2(fs2, std::vector<PartialOrder::Constraint>{{0, 1}});
  const PartialOrder sym2 = PartialOrder::unconstrained(fs2);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    ToyParams3D p = random_params(rng);
    if (trial % 10 == 0) p.gamma = 1.0;
    const double g = testing::uniform(rng, -3, 3), c = testing::uniform(rng, -3, 3);
    // On the gamma = 1 boundary D equals G almost surely.
    const double d = p.gamma == 1.0 ? g : testing::uniform(rng, -3, 3);
    const Eigen::Vector3d beta(p.beta1, p.beta2, p.beta3), x(g, d, c);
    const Oracle3D o = oracle_3d(p, g, d, c);
    const Eigen::VectorXd ea = engine_values(asym3, beta, p.covariance(), x);
    const Eigen::VectorXd es = engine_values(sym3, beta, p.covariance(), x);
    const Eigen::VectorXd em = engine_values(sym3, beta, Eigen::Matrix3d::Identity(), x);
    for (int h = 0; h < 3; ++h) {
      worst = std::max({worst, std::abs(ea(h) - o.asym[h]), std::abs(es(h) - o.sym[h]), std::abs(em(h) - o.marginal[h])});
    }

    const ToyParams2D p2{p.beta1, p.beta2, p.gamma};
    const Oracle2D o2 = oracle_2d(p2, g, d);
    const Eigen::Vector2d beta2(p.beta1, p.beta2), x2(g, d);
    const Eigen::VectorXd a2 = engine_values(asym2, beta2, p2.covariance(), x2);
    const Eigen::VectorXd s2 = engine_values(sym2, beta2, p2.covariance(), x2);
    for (int h = 0; h < 2; ++h) worst = std::max({worst, std::abs(a2(h) - o2.asym[h]), std::abs(s2(h) - o2.sym[h])});
  }
  CHECK(worst <= 1e-10);
}
