#pragma once

#include <array>

#include <Eigen/Dense>

namespace asymshap {

/// D = gamma G + delta with Var(D) = 1; model beta1 G + beta2 D.
struct ToyParams2D {
  double beta1 = 1.0;
  double beta2 = 1.0;
  double gamma = 0.0;

  /// Throws DomainError unless |gamma| <= 1.
  void validate() const;
  Eigen::MatrixXd covariance() const;
};

/// Adds C correlated with G and D at strength rho; model beta1 G + beta2 D + beta3 C.
struct ToyParams3D {
  double beta1 = 1.0;
  double beta2 = 1.0;
  double beta3 = 1.0;
  double gamma = 0.0;
  double rho = 0.0;

  /// Throws DomainError unless |gamma| <= 1, |rho| < 1 and 1 - 2 rho^2 / (1 + gamma) >= 0.
  void validate() const;
  Eigen::MatrixXd covariance() const;
};

struct Oracle2D {
  std::array<double, 2> asym;
  std::array<double, 2> sym;
  std::array<double, 2> marginal;
};

struct Oracle3D {
  std::array<double, 3> asym;
  std::array<double, 3> sym;
  std::array<double, 3> marginal;
};

/// Closed-form Shapley values, asymmetric ones for G -> D. Order (G, D[, C]).
Oracle2D oracle_2d(const ToyParams2D& p, double g, double d);
Oracle3D oracle_3d(const ToyParams3D& p, double g, double d, double c);

}  // namespace asymshap
