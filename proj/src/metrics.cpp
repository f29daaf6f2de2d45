#include "asymshap/metrics.hpp"

#include <string>

#include "asymshap/errors.hpp"

namespace asymshap {

MetricKind parse_metric(std::string_view name) {
  if (name == "r2" || name == "R2" || name == "r-squared") return MetricKind::RSquared;
  if (name == "c-index" || name == "cindex" || name == "c_index") return MetricKind::CIndex;
  throw Error(ErrorCode::ConfigError, "unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(MetricKind metric) { return metric == MetricKind::RSquared ? "r2" : "c-index"; }

double metric_r_squared(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat) {
  if (y.size() != yhat.size()) throw Error(ErrorCode::InvalidInput, "outcome and prediction lengths differ");
  const double ss_tot = (y.array() - y.mean()).square().sum();
  if (!(ss_tot > 0)) throw Error(ErrorCode::MetricUndefined, "R^2 is undefined for a constant outcome");
  return 1.0 - (y - yhat).squaredNorm() / ss_tot;
}

double metric_c_index(const Eigen::Ref<const Eigen::VectorXd>& time, const Eigen::Ref<const Eigen::VectorXd>& event,
                      const Eigen::Ref<const Eigen::VectorXd>& risk) {
  if (time.size() != event.size() || time.size() != risk.size()) {
    throw Error(ErrorCode::InvalidInput, "C-index inputs differ in length");
  }
  double concordant = 0;
  double comparable = 0;
  for (Eigen::Index i = 0; i < time.size(); ++i) {
    if (event(i) == 0) continue;
    for (Eigen::Index j = 0; j < time.size(); ++j) {
      if (!(time(i) < time(j))) continue;
      comparable += 1;
      if (risk(i) > risk(j)) {
        concordant += 1;
      } else if (risk(i) == risk(j)) {
        concordant += 0.5;
      }
    }
  }
  if (comparable == 0) throw Error(ErrorCode::MetricUndefined, "no comparable pairs for the C-index");
  return concordant / comparable;
}

}  // namespace asymshap
