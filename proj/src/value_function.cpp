#include "asymshap/value_function.hpp"

#include <algorithm>
#include <random>

#include "asymshap/errors.hpp"
#include "asymshap/gaussian.hpp"
#include "asymshap/parallel.hpp"

namespace asymshap {

GaussianDependency GaussianDependency::analytic(Eigen::VectorXd mean, Eigen::MatrixXd cov, int draws) {
  if (mean.size() != cov.rows()) throw Error(ErrorCode::InvalidInput, "mean and covariance sizes differ");
  validate_covariance(cov);
  return {std::move(mean), std::move(cov), draws};
}

GaussianDependency GaussianDependency::fit(const Eigen::MatrixXd& x, int draws) {
  if (x.rows() < 2) throw Error(ErrorCode::InvalidInput, "at least two rows are needed to fit a Gaussian");
  GaussianDependency out;
  out.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - out.mean.transpose();
  out.cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  out.draws = draws;
  return out;
}

GaussianDependency GaussianDependency::independent(const Eigen::MatrixXd& x, int draws) {
  GaussianDependency out = fit(x, draws);
  out.cov = Eigen::MatrixXd(out.cov.diagonal().asDiagonal());
  return out;
}

EmpiricalMC EmpiricalMC::fit(const Eigen::MatrixXd& x, int draws) {
  EmpiricalMC out;
  out.space = GaussianDependency::fit(x, draws);
  for (int j = 0; j < x.cols(); ++j) out.direct_vars.push_back(j);
  out.training = x;
  out.draws = draws;
  return out;
}

EmpiricalMC EmpiricalMC::fit(const Eigen::MatrixXd& x, const std::vector<int>& summary_vars, int components, int draws) {
  EmpiricalMC out;
  out.summary = summary_fit(x, summary_vars, components);
  for (int j = 0; j < x.cols(); ++j)
    if (std::find(summary_vars.begin(), summary_vars.end(), j) == summary_vars.end()) out.direct_vars.push_back(j);
  Eigen::MatrixXd space(x.rows(), components + static_cast<Eigen::Index>(out.direct_vars.size()));
  space.leftCols(components) = out.summary->projections;
  space.rightCols(static_cast<Eigen::Index>(out.direct_vars.size())) = x(Eigen::all, out.direct_vars);
  out.space = GaussianDependency::fit(space, draws);
  out.training = x;
  out.draws = draws;
  return out;
}

ValueFunction::ValueFunction(FeatureSet features, PredictionModel model, DependencyModel dependency, std::uint64_t seed)
    : features_(std::move(features)), model_(std::move(model)), dependency_(std::move(dependency)), seed_(seed) {
  const int p = features_.num_vars();
  if (num_vars(model_) != p) throw Error(ErrorCode::InvalidInput, "model variable count does not match the feature set");
  if (const auto* lm = std::get_if<LinearModel>(&model_)) lm->validate();
  if (const auto* g = std::get_if<GaussianDependency>(&dependency_)) {
    if (g->mean.size() != p) throw Error(ErrorCode::InvalidInput, "dependency dimension does not match the feature set");
    validate_covariance(g->cov);
  } else {
    const auto& e = std::get<EmpiricalMC>(dependency_);
    if (e.training.cols() != p) throw Error(ErrorCode::InvalidInput, "dependency dimension does not match the feature set");
    if (e.summary) {
      const int owner = features_.owner(e.summary->vars.front());
      for (int v : e.summary->vars)
        if (features_.owner(v) != owner) throw Error(ErrorCode::InvalidInput, "a summary must lie within one feature");
    }
  }
}

double ValueFunction::local(Coalition s, const Eigen::Ref<const Eigen::VectorXd>& x_star, std::uint64_t stream) const {
  Eigen::MatrixXd row = x_star.transpose();
  return local_rows(s, row, stream)(0);
}

Eigen::VectorXd ValueFunction::local_rows(Coalition s, const Eigen::MatrixXd& rows, std::uint64_t first_stream) const {
  if (rows.cols() != features_.num_vars()) throw Error(ErrorCode::InvalidInput, "row length does not match the feature set");
  if (!s.subset_of(Coalition::full(features_.size()))) throw Error(ErrorCode::DomainError, "coalition references unknown features");
  if (s == Coalition::full(features_.size())) return predict(model_, rows);
  if (const auto* g = std::get_if<GaussianDependency>(&dependency_)) return gaussian_rows(*g, s, rows, first_stream);
  return empirical_rows(std::get<EmpiricalMC>(dependency_), s, rows, first_stream);
}

Eigen::VectorXd ValueFunction::gaussian_rows(const GaussianDependency& dep, Coalition s, const Eigen::MatrixXd& rows,
                                             std::uint64_t first_stream) const {
  const std::vector<int> given = features_.variables_of(s);
  GaussianConditioner cond(dep.mean, dep.cov, given);
  const auto& free = cond.free();
  const Eigen::MatrixXd means = cond.mean_rows(rows(Eigen::all, given));
  const auto n = rows.rows();

  if (const auto* lm = std::get_if<LinearModel>(&model_)) {
    Eigen::VectorXd out = Eigen::VectorXd::Constant(n, lm->intercept);
    for (int j : given) {
      const auto& c = lm->coefficients[static_cast<std::size_t>(j)];
      Eigen::ArrayXd power = Eigen::ArrayXd::Ones(n);
      for (Eigen::Index d = 0; d < c.size(); ++d) {
        power *= rows.col(j).array();
        out.array() += c(d) * power;
      }
    }
    for (std::size_t k = 0; k < free.size(); ++k) {
      const auto& c = lm->coefficients[static_cast<std::size_t>(free[k])];
      const double var = cond.cov()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      for (Eigen::Index i = 0; i < n; ++i) {
        out(i) += c.dot(normal_raw_moments(means(i, static_cast<Eigen::Index>(k)), var, static_cast<int>(c.size())));
      }
    }
    return out;
  }

  if (dep.draws <= 0) throw Error(ErrorCode::MCBudgetZero, "Monte Carlo draw count is zero");
  Eigen::VectorXd out(n);
  const auto nf = static_cast<Eigen::Index>(free.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    std::mt19937_64 rng(mix_seed(seed_, mix_seed(s.bits(), first_stream + static_cast<std::uint64_t>(i))));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(nf, dep.draws);
    for (Eigen::Index c = 0; c < z.cols(); ++c)
      for (Eigen::Index r = 0; r < nf; ++r) z(r, c) = normal(rng);
    Eigen::MatrixXd sample = (cond.factor() * z).colwise() + means.row(i).transpose();
    Eigen::MatrixXd batch = rows.row(i).replicate(dep.draws, 1);
    for (Eigen::Index k = 0; k < nf; ++k) batch.col(free[static_cast<std::size_t>(k)]) = sample.row(k).transpose();
    out(i) = predict(model_, batch).mean();
  }
  return out;
}

Eigen::VectorXd ValueFunction::empirical_rows(const EmpiricalMC& dep, Coalition s, const Eigen::MatrixXd& rows,
                                              std::uint64_t first_stream) const {
  if (dep.draws <= 0) throw Error(ErrorCode::MCBudgetZero, "Monte Carlo draw count is zero");
  const int k = dep.summary ? dep.summary->components() : 0;
  const std::vector<int> given_vars = features_.variables_of(s);
  auto is_given = [&](int v) { return std::binary_search(given_vars.begin(), given_vars.end(), v); };
  const bool block_given = dep.summary && is_given(dep.summary->vars.front());

  std::vector<int> space_given;
  if (block_given)
    for (int c = 0; c < k; ++c) space_given.push_back(c);
  for (std::size_t d = 0; d < dep.direct_vars.size(); ++d)
    if (is_given(dep.direct_vars[d])) space_given.push_back(k + static_cast<int>(d));
  GaussianConditioner cond(dep.space.mean, dep.space.cov, space_given);
  const auto& free = cond.free();
  const auto nf = static_cast<Eigen::Index>(free.size());

  const auto n = rows.rows();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = rows.row(i).transpose();
    Eigen::VectorXd given_values(static_cast<Eigen::Index>(space_given.size()));
    Eigen::VectorXd scores;
    if (dep.summary) scores = dep.summary->project(x(dep.summary->vars));
    for (std::size_t g = 0; g < space_given.size(); ++g) {
      const int idx = space_given[g];
      given_values(static_cast<Eigen::Index>(g)) =
          idx < k ? scores(idx) : x(dep.direct_vars[static_cast<std::size_t>(idx - k)]);
    }
    const Eigen::VectorXd mu = cond.mean(given_values);

    std::mt19937_64 rng(mix_seed(seed_, mix_seed(s.bits(), first_stream + static_cast<std::uint64_t>(i))));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(nf, dep.draws);
    for (Eigen::Index c = 0; c < z.cols(); ++c)
      for (Eigen::Index r = 0; r < nf; ++r) z(r, c) = normal(rng);
    const Eigen::MatrixXd sample = (cond.factor() * z).colwise() + mu;

    Eigen::MatrixXd batch = rows.row(i).replicate(dep.draws, 1);
    for (Eigen::Index f = 0; f < nf; ++f) {
      const int idx = free[static_cast<std::size_t>(f)];
      if (idx >= k) batch.col(dep.direct_vars[static_cast<std::size_t>(idx - k)]) = sample.row(f).transpose();
    }
    if (dep.summary && !block_given) {
      // Components are the first k free coordinates when the block is absent.
      for (Eigen::Index r = 0; r < dep.draws; ++r) {
        const Eigen::Index nn = nearest_neighbor_index(*dep.summary, sample.col(r).head(k));
        batch(r, dep.summary->vars) = dep.training(nn, dep.summary->vars);
      }
    }
    out(i) = predict(model_, batch).mean();
  }
  return out;
}

double metric_baseline(MetricKind metric) { return metric == MetricKind::RSquared ? 0.0 : 0.5; }

void check_metric_data(const Dataset& data, MetricKind metric) {
  if (!data.y) throw Error(ErrorCode::InvalidInput, "global contributions need an outcome column");
  if (metric == MetricKind::RSquared) {
    const double ss = (data.y->array() - data.y->mean()).square().sum();
    if (!(ss > 0)) throw Error(ErrorCode::MetricUndefined, "R^2 is undefined for a constant outcome");
  } else {
    if (!data.event) throw Error(ErrorCode::InvalidInput, "the C-index needs an event indicator column");
    // Probe with a constant risk: throws when there is no comparable pair.
    metric_c_index(*data.y, *data.event, Eigen::VectorXd::Zero(data.rows()));
  }
}

double evaluate_metric(const Dataset& data, MetricKind metric, const Eigen::Ref<const Eigen::VectorXd>& predictions) {
  if (metric == MetricKind::RSquared) return metric_r_squared(*data.y, predictions);
  return metric_c_index(*data.y, *data.event, predictions);
}

double ValueFunction::global(Coalition s, const Dataset& data, MetricKind metric) const {
  check_metric_data(data, metric);
  if (s.empty()) return metric_baseline(metric);
  return evaluate_metric(data, metric, local_rows(s, data.x));
}

double nu_local(Coalition s, const Eigen::Ref<const Eigen::VectorXd>& x_star, const ValueFunction& vf) {
  return vf.local(s, x_star);
}

double nu_global(Coalition s, const Dataset& data, const ValueFunction& vf, MetricKind metric) {
  return vf.global(s, data, metric);
}

}  // namespace asymshap
