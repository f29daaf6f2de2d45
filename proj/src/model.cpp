#include "asymshap/model.hpp"

#include "asymshap/errors.hpp"

namespace asymshap {

LinearModel LinearModel::linear(double intercept, const Eigen::VectorXd& slopes) {
  LinearModel m;
  m.intercept = intercept;
  for (double b : slopes) m.coefficients.push_back(Eigen::VectorXd::Constant(1, b));
  return m;
}

void LinearModel::validate() const {
  for (const auto& c : coefficients) {
    if (c.size() < 1) throw Error(ErrorCode::InvalidInput, "polynomial degree must be at least 1");
    if (!c.allFinite()) throw Error(ErrorCode::InvalidInput, "model coefficients must be finite");
  }
}

double LinearModel::predict_row(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != num_vars()) throw Error(ErrorCode::InvalidInput, "row length does not match the model");
  double out = intercept;
  for (int j = 0; j < num_vars(); ++j) {
    const auto& c = coefficients[static_cast<std::size_t>(j)];
    double power = 1.0;
    for (Eigen::Index d = 0; d < c.size(); ++d) {
      power *= x(j);
      out += c(d) * power;
    }
  }
  return out;
}

Eigen::VectorXd LinearModel::predict(const Eigen::MatrixXd& rows) const {
  Eigen::VectorXd out(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out(i) = predict_row(rows.row(i).transpose());
  return out;
}

int num_vars(const PredictionModel& model) {
  return std::visit([](const auto& m) {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel>) {
      return m.num_vars();
    } else {
      return m.num_vars;
    }
  }, model);
}

double predict_row(const PredictionModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (const auto* lm = std::get_if<LinearModel>(&model)) return lm->predict_row(x);
  const auto& tm = std::get<TabulatedModel>(model);
  Eigen::MatrixXd row = x.transpose();
  return tm.predict_batch(row)(0);
}

Eigen::VectorXd predict(const PredictionModel& model, const Eigen::MatrixXd& rows) {
  if (const auto* lm = std::get_if<LinearModel>(&model)) return lm->predict(rows);
  const auto& tm = std::get<TabulatedModel>(model);
  Eigen::VectorXd out = tm.predict_batch(rows);
  if (out.size() != rows.rows()) throw Error(ErrorCode::InvalidInput, "batch predictor returned the wrong length");
  return out;
}

LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<int>& degrees) {
  if (static_cast<Eigen::Index>(degrees.size()) != x.cols()) {
    throw Error(ErrorCode::InvalidInput, "one polynomial degree per column is required");
  }
  Eigen::Index width = 1;
  for (int d : degrees) {
    if (d < 1) throw Error(ErrorCode::InvalidInput, "polynomial degree must be at least 1");
    width += d;
  }
  if (x.rows() <= width) throw Error(ErrorCode::DegenerateDesign, "too few rows for the polynomial design");

  Eigen::MatrixXd design(x.rows(), width);
  design.col(0).setOnes();
  Eigen::Index col = 1;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::ArrayXd power = Eigen::ArrayXd::Ones(x.rows());
    for (int d = 0; d < degrees[static_cast<std::size_t>(j)]; ++d) {
      power *= x.col(j).array();
      design.col(col++) = power.matrix();
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < width) throw Error(ErrorCode::DegenerateDesign, "polynomial design is rank deficient");
  Eigen::VectorXd beta = qr.solve(y);

  LinearModel m;
  m.intercept = beta(0);
  col = 1;
  for (int d : degrees) {
    m.coefficients.push_back(beta.segment(col, d));
    col += d;
  }
  return m;
}

}  // namespace asymshap
