#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace asymshap {

enum class MetricKind { RSquared, CIndex };

MetricKind parse_metric(std::string_view name);
std::string_view to_string(MetricKind metric);

/// 1 - SS_res / SS_tot. Throws MetricUndefined when y has zero variance.
double metric_r_squared(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat);

/// Harrell's concordance: among pairs with time_i < time_j and event_i = 1, the fraction with
/// risk_i > risk_j, risk ties counting 1/2. Throws MetricUndefined without comparable pairs.
double metric_c_index(const Eigen::Ref<const Eigen::VectorXd>& time, const Eigen::Ref<const Eigen::VectorXd>& event,
                      const Eigen::Ref<const Eigen::VectorXd>& risk);

}  // namespace asymshap
