#include "asymshap/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "asymshap/errors.hpp"
#include "asymshap/parallel.hpp"

namespace asymshap {

std::string_view to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "sampled"; }

Eigen::VectorXd evaluate_nu(const std::vector<Coalition>& coalitions, const NuFunction& nu, int threads) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(coalitions.size()));
  parallel_for(coalitions.size(), threads,
               [&](std::size_t j) { out(static_cast<Eigen::Index>(j)) = nu(coalitions[j]); });
  return out;
}

ShapleyResult combine_exact(const WeightMatrices& w, const Eigen::Ref<const Eigen::VectorXd>& nu_values) {
  if (nu_values.size() != static_cast<Eigen::Index>(w.cols())) {
    throw Error(ErrorCode::InvalidInput, "one contribution per allowed coalition is required");
  }
  ShapleyResult r;
  r.mode = Mode::Exact;
  r.plus = w.plus_matrix() * nu_values;
  r.minus = w.minus_matrix() * nu_values;
  r.values = w.difference_matrix() * nu_values;
  r.base = nu_values(0);
  return r;
}

ShapleyResult explain_exact(const WeightMatrices& w, const NuFunction& nu, int threads) {
  return combine_exact(w, evaluate_nu(w.coalitions, nu, threads));
}

ShapleyResult explain_local_exact(const PartialOrder& po, const ValueFunction& vf,
                                  const Eigen::Ref<const Eigen::VectorXd>& x_star, int threads) {
  const WeightMatrices w = build_weight_matrices(po);
  const Eigen::VectorXd x = x_star;
  return explain_exact(w, [&](Coalition s) { return vf.local(s, x); }, threads);
}

Eigen::MatrixXd local_value_table(const std::vector<Coalition>& coalitions, const ValueFunction& vf,
                                  const Eigen::MatrixXd& rows, int threads) {
  Eigen::MatrixXd out(rows.rows(), static_cast<Eigen::Index>(coalitions.size()));
  parallel_for(coalitions.size(), threads, [&](std::size_t j) {
    out.col(static_cast<Eigen::Index>(j)) = vf.local_rows(coalitions[j], rows);
  });
  return out;
}

std::vector<ShapleyResult> explain_local_exact_rows(const PartialOrder& po, const ValueFunction& vf,
                                                    const Eigen::MatrixXd& rows, int threads) {
  const WeightMatrices w = build_weight_matrices(po);
  const Eigen::MatrixXd table = local_value_table(w.coalitions, vf, rows, threads);
  std::vector<ShapleyResult> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out.push_back(combine_exact(w, table.row(i).transpose()));
  return out;
}

ShapleyResult sage_from_table(const WeightMatrices& w, const Eigen::MatrixXd& table, const Dataset& data,
                              MetricKind metric) {
  check_metric_data(data, metric);
  Eigen::VectorXd v(static_cast<Eigen::Index>(w.cols()));
  for (std::size_t j = 0; j < w.cols(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    v(col) = w.coalitions[j].empty() ? metric_baseline(metric) : evaluate_metric(data, metric, table.col(col));
  }
  return combine_exact(w, v);
}

ShapleyResult explain_global_sage(const PartialOrder& po, const ValueFunction& vf, const Dataset& data,
                                  MetricKind metric, int threads) {
  check_metric_data(data, metric);
  const WeightMatrices w = build_weight_matrices(po);
  return sage_from_table(w, local_value_table(w.coalitions, vf, data.x, threads), data, metric);
}

namespace {

Coalition complement(const PartialOrder& po, Coalition s) { return Coalition(po.all().bits() & ~s.bits()); }

void check_sampled_coalition(const PartialOrder& po, Coalition s) {
  if (!s.subset_of(po.all())) throw Error(ErrorCode::DomainError, "coalition references unknown features");
  if (!is_allowed(po, s)) throw Error(ErrorCode::DisallowedCoalition, "coalition violates the precedence constraints");
}

// Memoized log-counts and the per-coalition weights derived from them.
class LogWeights {
 public:
  explicit LogWeights(const PartialOrder& po) : po_(po), log_total_(log_count(po.all())) {}

  double log_count(Coalition s) {
    auto [it, fresh] = cache_.try_emplace(s.bits(), 0.0);
    if (fresh) it->second = log_count_extensions(po_, s);
    return it->second;
  }

  double proposal(Coalition s) {
    return std::exp(log_count(s) + log_count(complement(po_, s)) - log_total_) / (po_.size() + 1);
  }

  // Column of W+ and W- for coalition s.
  void columns(Coalition s, Eigen::Ref<Eigen::VectorXd> plus, Eigen::Ref<Eigen::VectorXd> minus) {
    plus.setZero();
    minus.setZero();
    for (int h = 0; h < po_.size(); ++h) {
      if (s.contains(h)) {
        const Coalition before = s.without(h);
        if (is_allowed(po_, before))
          plus(h) = std::exp(log_count(before) + log_count(complement(po_, s)) - log_total_);
      } else if (is_allowed(po_, s.with(h))) {
        minus(h) = std::exp(log_count(s) + log_count(complement(po_, s.with(h))) - log_total_);
      }
    }
  }

 private:
  const PartialOrder& po_;
  std::unordered_map<std::uint64_t, double> cache_;
  double log_total_;
};

// Allowed coalitions whose size is below depth or above q - depth.
std::vector<Coalition> blended_coalitions(const PartialOrder& po, int depth) {
  const int q = po.size();
  std::vector<Coalition> out;
  auto visit_size = [&](int k, bool complemented) {
    if (k == 0) {
      const Coalition s = complemented ? po.all() : Coalition();
      if (is_allowed(po, s)) out.push_back(s);
      return;
    }
    // Gosper's hack over k-subsets of q bits.
    std::uint64_t c = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = po.all().bits();
    while (c <= limit && (c & ~limit) == 0) {
      const Coalition s = complemented ? complement(po, Coalition(c)) : Coalition(c);
      if (is_allowed(po, s)) out.push_back(s);
      const std::uint64_t lowest = c & (~c + 1);
      const std::uint64_t ripple = c + lowest;
      if (ripple == 0) break;
      c = (((ripple ^ c) >> 2) / lowest) | ripple;
    }
  };
  for (int k = 0; k < depth; ++k) {
    visit_size(k, false);
    if (q - k != k) visit_size(k, true);
  }
  std::sort(out.begin(), out.end(), CoalitionOrder{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_options(const PartialOrder& po, const SamplingOptions& options) {
  if (options.samples < 1) throw Error(ErrorCode::InvalidInput, "at least one sample is required");
  if (options.blend_depth < 0 || 2 * options.blend_depth >= po.size() + 1) {
    throw Error(ErrorCode::InvalidInput, "blend depth leaves no coalition size to sample");
  }
}

}  // namespace

double importance_weight(const PartialOrder& po, Coalition s) {
  check_sampled_coalition(po, s);
  LogWeights lw(po);
  return lw.proposal(s);
}

Rational importance_weight_exact(const PartialOrder& po, Coalition s) {
  check_sampled_coalition(po, s);
  const Rational ratio = Rational(static_cast<Int128>(count_extensions(po, s)), 1) *
                         Rational(static_cast<Int128>(count_extensions(po, complement(po, s))), 1) /
                         Rational(static_cast<Int128>(count_extensions(po, po.all())), 1);
  return ratio / Rational(po.size() + 1);
}

SampledBatch sample_coalitions(const PartialOrder& po, const SamplingOptions& options) {
  check_options(po, options);
  const int q = po.size();
  const int depth = options.blend_depth;
  const OrderingSampler sampler(po);
  std::vector<std::uint64_t> bits(options.samples);
  parallel_for(options.samples, options.threads, [&](std::size_t b) {
    std::mt19937_64 rng(mix_seed(options.seed, b));
    const std::vector<int> order = sampler(rng);
    std::uniform_int_distribution<int> divisor(depth, q - depth);
    const int cut = divisor(rng);
    std::uint64_t s = 0;
    for (int k = 0; k < cut; ++k) s |= std::uint64_t{1} << order[static_cast<std::size_t>(k)];
    bits[b] = s;
  });

  std::vector<std::uint64_t> unique = bits;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  LogWeights lw(po);
  const double size_share = static_cast<double>(q + 1) / static_cast<double>(q + 1 - 2 * depth);
  std::unordered_map<std::uint64_t, std::size_t> index;
  Eigen::VectorXd proposal(static_cast<Eigen::Index>(unique.size()));
  Eigen::MatrixXd plus(q, static_cast<Eigen::Index>(unique.size()));
  Eigen::MatrixXd minus(q, static_cast<Eigen::Index>(unique.size()));
  for (std::size_t u = 0; u < unique.size(); ++u) {
    const auto col = static_cast<Eigen::Index>(u);
    index[unique[u]] = u;
    proposal(col) = lw.proposal(Coalition(unique[u])) * size_share;
    lw.columns(Coalition(unique[u]), plus.col(col), minus.col(col));
  }

  SampledBatch batch;
  batch.coalitions.reserve(options.samples);
  batch.proposal.reserve(options.samples);
  batch.q_plus.resize(q, static_cast<Eigen::Index>(options.samples));
  batch.q_minus.resize(q, static_cast<Eigen::Index>(options.samples));
  for (std::size_t b = 0; b < options.samples; ++b) {
    const auto u = static_cast<Eigen::Index>(index.at(bits[b]));
    batch.coalitions.emplace_back(bits[b]);
    batch.proposal.push_back(proposal(u));
    batch.q_plus.col(static_cast<Eigen::Index>(b)) = plus.col(u);
    batch.q_minus.col(static_cast<Eigen::Index>(b)) = minus.col(u);
  }
  return batch;
}

ShapleyResult explain_sampled(const PartialOrder& po, const NuFunction& nu, const SamplingOptions& options) {
  const SampledBatch batch = sample_coalitions(po, options);
  const int q = po.size();
  const auto n = static_cast<Eigen::Index>(options.samples);

  std::vector<Coalition> unique = batch.coalitions;
  std::sort(unique.begin(), unique.end(), CoalitionOrder{});
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  const Eigen::VectorXd unique_nu = evaluate_nu(unique, nu, options.threads);
  std::unordered_map<std::uint64_t, double> nu_of;
  for (std::size_t u = 0; u < unique.size(); ++u) nu_of[unique[u].bits()] = unique_nu(static_cast<Eigen::Index>(u));

  Eigen::MatrixXd plus_terms(q, n);
  Eigen::MatrixXd minus_terms(q, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const double scale = nu_of.at(batch.coalitions[static_cast<std::size_t>(b)].bits()) /
                         batch.proposal[static_cast<std::size_t>(b)];
    plus_terms.col(b) = batch.q_plus.col(b) * scale;
    minus_terms.col(b) = batch.q_minus.col(b) * scale;
  }

  ShapleyResult r;
  r.mode = Mode::Sampled;
  r.samples = options.samples;
  r.seed = options.seed;
  r.plus = plus_terms.rowwise().mean();
  r.minus = minus_terms.rowwise().mean();
  const Eigen::MatrixXd diff = plus_terms - minus_terms;
  r.values = r.plus - r.minus;
  r.std_errors = Eigen::VectorXd::Zero(q);
  if (n > 1) {
    const Eigen::MatrixXd centered = diff.colwise() - r.values;
    r.std_errors = (centered.array().square().rowwise().sum() / static_cast<double>(n - 1)).sqrt() /
                   std::sqrt(static_cast<double>(n));
  }

  if (options.blend_depth > 0) {
    // Exact contribution of the blended sizes; the sampled part above covers the rest.
    LogWeights lw(po);
    Eigen::VectorXd wp(q), wm(q);
    for (Coalition s : blended_coalitions(po, options.blend_depth)) {
      const double v = nu(s);
      lw.columns(s, wp, wm);
      r.plus += wp * v;
      r.minus += wm * v;
    }
    r.values = r.plus - r.minus;
  }
  r.base = nu(Coalition());
  return r;
}

ShapleyResult explain_local_sampled(const PartialOrder& po, const ValueFunction& vf,
                                    const Eigen::Ref<const Eigen::VectorXd>& x_star, const SamplingOptions& options) {
  const Eigen::VectorXd x = x_star;
  return explain_sampled(po, [&](Coalition s) { return vf.local(s, x); }, options);
}

}  // namespace asymshap
