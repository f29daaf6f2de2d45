#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asymshap/coalition.hpp"
#include "asymshap/dataset.hpp"
#include "asymshap/metrics.hpp"
#include "asymshap/partial_order.hpp"
#include "asymshap/rational.hpp"
#include "asymshap/value_function.hpp"
#include "asymshap/weights.hpp"

namespace asymshap {

enum class Mode { Exact, Sampled };

std::string_view to_string(Mode mode);

struct ShapleyResult {
  Eigen::VectorXd values;      // phi_h
  double base = 0.0;           // phi_0 = nu(empty)
  Mode mode = Mode::Exact;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd std_errors;  // sampled mode only
  Eigen::VectorXd plus;        // sum_S w+ nu(S) per feature
  Eigen::VectorXd minus;       // sum_S w- nu(S) per feature

  double total() const { return base + values.sum(); }
};

using NuFunction = std::function<double(Coalition)>;

/// nu(S) for every coalition; evaluations run on `threads` workers into fixed slots.
Eigen::VectorXd evaluate_nu(const std::vector<Coalition>& coalitions, const NuFunction& nu, int threads = 1);

/// phi = (W+ - W-) v, base = v at the empty coalition (always column 0).
ShapleyResult combine_exact(const WeightMatrices& w, const Eigen::Ref<const Eigen::VectorXd>& nu_values);

ShapleyResult explain_exact(const WeightMatrices& w, const NuFunction& nu, int threads = 1);

ShapleyResult explain_local_exact(const PartialOrder& po, const ValueFunction& vf,
                                  const Eigen::Ref<const Eigen::VectorXd>& x_star, int threads = 1);

/// Local values for every row of `rows` (row i uses Monte Carlo stream i). Returns one
/// n x coalitions matrix of nu values, from which both local and global results are built.
Eigen::MatrixXd local_value_table(const std::vector<Coalition>& coalitions, const ValueFunction& vf,
                                  const Eigen::MatrixXd& rows, int threads = 1);

std::vector<ShapleyResult> explain_local_exact_rows(const PartialOrder& po, const ValueFunction& vf,
                                                    const Eigen::MatrixXd& rows, int threads = 1);

/// SAGE decomposition of a metric: nu(S) is the metric of the rows' local values for S.
ShapleyResult explain_global_sage(const PartialOrder& po, const ValueFunction& vf, const Dataset& data,
                                  MetricKind metric, int threads = 1);

/// Global values from a local value table; the empty column is replaced by the metric baseline.
ShapleyResult sage_from_table(const WeightMatrices& w, const Eigen::MatrixXd& table, const Dataset& data,
                              MetricKind metric);

/// Proposal probability of s under the ordering-plus-divisor sampler:
///   #s * #(H \ s) / (#H * (q + 1)).
double importance_weight(const PartialOrder& po, Coalition s);
Rational importance_weight_exact(const PartialOrder& po, Coalition s);

struct SamplingOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  /// Coalition sizes below `blend_depth` or above q - blend_depth are summed exactly and the
  /// divisor is drawn among the remaining positions. 0 disables blending.
  int blend_depth = 0;
  int threads = 1;
};

/// Sampled coalitions with their proposal weights and exact weight columns.
struct SampledBatch {
  std::vector<Coalition> coalitions;
  std::vector<double> proposal;
  Eigen::MatrixXd q_plus;   // q x B
  Eigen::MatrixXd q_minus;  // q x B
};

SampledBatch sample_coalitions(const PartialOrder& po, const SamplingOptions& options);

/// Importance-sampling estimate phi_h = (1/B) sum_b (q+_hb - q-_hb) / w_b * nu(S_b),
/// with per-feature standard errors. Each distinct coalition is evaluated once.
ShapleyResult explain_sampled(const PartialOrder& po, const NuFunction& nu, const SamplingOptions& options);

ShapleyResult explain_local_sampled(const PartialOrder& po, const ValueFunction& vf,
                                    const Eigen::Ref<const Eigen::VectorXd>& x_star, const SamplingOptions& options);

}  // namespace asymshap
