#include "asymshap/simulation.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "asymshap/errors.hpp"
#include "asymshap/weights.hpp"

namespace asymshap {

void LowDimConfig::validate() const {
  if (n_train < 10 || n_test < 10) throw Error(ErrorCode::InvalidInput, "n_train and n_test must be at least 10");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Marginal: return "marginal";
    case Variant::SymmetricConditional: return "symmetric";
    case Variant::Asymmetric: return "asymmetric";
  }
  return "?";
}

FeatureSet lowdim_features() { return FeatureSet::singletons({"G", "D", "C1", "C2"}); }

Dataset generate_lowdim(const LowDimConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = cfg.n_train + cfg.n_test;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  Dataset data;
  data.names = {"G", "D", "C1", "C2"};
  data.x.resize(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double eps = normal(rng), d0 = normal(rng), c0 = normal(rng), u = normal(rng), c2 = normal(rng),
                 g = normal(rng);
    const double d = (d0 + cfg.beta1 * g + u) / std::sqrt(6.0);
    const double c1 = (c0 + 2.0 * u) / std::sqrt(5.0);
    data.x.row(i) << g, d, c1, c2;
    y(i) = cfg.alpha0 + cfg.alpha1 * g + cfg.alpha2 * c1 + cfg.alpha3 * c2 + cfg.alpha4 * d * d + eps;
  }
  data.y = y;
  return data;
}

LowDimResult run_lowdim_experiment(const LowDimConfig& cfg, int k_poly, int threads) {
  if (k_poly < 2) throw Error(ErrorCode::InvalidInput, "k_poly must be at least 2");
  const Dataset all = generate_lowdim(cfg);
  std::vector<Eigen::Index> train_idx(static_cast<std::size_t>(cfg.n_train));
  std::vector<Eigen::Index> test_idx(static_cast<std::size_t>(cfg.n_test));
  std::iota(train_idx.begin(), train_idx.end(), Eigen::Index{0});
  std::iota(test_idx.begin(), test_idx.end(), Eigen::Index{cfg.n_train});

  LowDimResult out;
  out.train = all.select_rows(train_idx);
  out.test = all.select_rows(test_idx);
  out.model = fit_ols(out.train.x, *out.train.y, {1, k_poly, 1, 1});
  out.test_r2 = metric_r_squared(*out.test.y, out.model.predict(out.test.x));

  const FeatureSet features = lowdim_features();
  for (std::size_t v = 0; v < kVariants.size(); ++v) {
    const Variant variant = kVariants[v];
    const GaussianDependency dep = variant == Variant::Marginal ? GaussianDependency::independent(out.train.x)
                                                                : GaussianDependency::fit(out.train.x);
    const PartialOrder po = variant == Variant::Asymmetric
                                ? PartialOrder(features, std::vector<PartialOrder::Constraint>{{0, 1}})
                                : PartialOrder::unconstrained(features);
    const ValueFunction vf(features, out.model, dep, cfg.seed);
    const WeightMatrices w = build_weight_matrices(po);
    const Eigen::MatrixXd table = local_value_table(w.coalitions, vf, out.test.x, threads);
    out.sage[v] = sage_from_table(w, table, out.test, MetricKind::RSquared);
    out.local[v].reserve(static_cast<std::size_t>(cfg.n_test));
    for (Eigen::Index i = 0; i < table.rows(); ++i) out.local[v].push_back(combine_exact(w, table.row(i).transpose()));
  }
  return out;
}

}  // namespace asymshap
