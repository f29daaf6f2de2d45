#include "asymshap/oracle.hpp"

#include <cmath>

#include "asymshap/errors.hpp"

namespace asymshap {

void ToyParams2D::validate() const {
  if (!(std::abs(gamma) <= 1.0)) throw Error(ErrorCode::DomainError, "|gamma| must not exceed 1");
}

Eigen::MatrixXd ToyParams2D::covariance() const {
  Eigen::MatrixXd s(2, 2);
  s << 1.0, gamma, gamma, 1.0;
  return s;
}

void ToyParams3D::validate() const {
  if (!(std::abs(gamma) <= 1.0)) throw Error(ErrorCode::DomainError, "|gamma| must not exceed 1");
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::DomainError, "|rho| must be below 1");
  if (gamma <= -1.0 || 1.0 - 2.0 * rho * rho / (1.0 + gamma) < 0.0) {
    throw Error(ErrorCode::DomainError, "noise variance of C would be negative");
  }
}

Eigen::MatrixXd ToyParams3D::covariance() const {
  Eigen::MatrixXd s(3, 3);
  s << 1.0, gamma, rho, gamma, 1.0, rho, rho, rho, 1.0;
  return s;
}

Oracle2D oracle_2d(const ToyParams2D& p, double g, double d) {
  p.validate();
  const double b1 = p.beta1, b2 = p.beta2, gm = p.gamma;
  Oracle2D o;
  o.asym = {g * (b1 + b2 * gm), b2 * (d - gm * g)};
  o.sym = {b1 * g + gm / 2.0 * (b2 * g - b1 * d), b2 * d + gm / 2.0 * (b1 * d - b2 * g)};
  o.marginal = {b1 * g, b2 * d};
  return o;
}

Oracle3D oracle_3d(const ToyParams3D& p, double g, double d, double c) {
  p.validate();
  const double b1 = p.beta1, b2 = p.beta2, b3 = p.beta3, gm = p.gamma, r = p.rho;
  const double k1 = (gm - r * r) / (1.0 - r * r);        // (gamma - rho^2) / (1 - rho^2)
  const double k2 = r * (1.0 - gm) / (1.0 - r * r);      // rho (1 - gamma) / (1 - rho^2)
  const double k3 = r / (1.0 + gm);                      // rho / (1 + gamma)
  Oracle3D o;

  o.asym[0] = g * (b1 + (2.0 * b2 * gm + 2.0 * b3 * r + b2 * k1) / 3.0) +
              c * (r * (b2 * (1.0 - gm) / (1.0 - r * r) - b1 - b2) / 3.0);
  o.asym[1] = d * (b2 + b3 * k3 / 3.0) + g / 3.0 * (-b2 * gm - 2.0 * b2 * k1 - b3 * gm * k3) -
              2.0 * c / 3.0 * (b2 * k2);
  o.asym[2] = c * (b3 + r * (b1 + b2) / 3.0 + b2 * k2 / 3.0) - d / 3.0 * (b3 * k3) +
              g / 3.0 * (b2 * r * r * (gm - 1.0) / (1.0 - r * r) - b3 * r - b3 * k3);

  o.sym[0] = g * (b1 + (b2 * gm + b3 * r) / 3.0 + b2 / 6.0 * k1 + b3 / 6.0 * k3) +
             d / 6.0 * (b3 * k3 - b1 * gm - b3 * r - 2.0 * b1 * k1) +
             c / 6.0 * (b2 * k2 - b1 * r - b2 * r - 2.0 * b1 * k2);
  o.sym[1] = d * (b2 + (b1 * gm + b3 * r) / 3.0 + b1 / 6.0 * k1 + b3 / 6.0 * k3) +
             g / 6.0 * (b3 * k3 - b2 * gm - b3 * r - 2.0 * b2 * k1) +
             c / 6.0 * (b1 * k2 - b2 * r - b1 * r - 2.0 * b2 * k2);
  o.sym[2] = c * (b3 + r * (b1 + b2) / 3.0 + (b1 + b2) / 6.0 * k2) +
             g / 6.0 * (b2 * k1 - b2 * gm - b3 * r - 2.0 * b3 * k3) +
             d / 6.0 * (b1 * k1 - b1 * gm - b3 * r - 2.0 * b3 * k3);

  o.marginal = {b1 * g, b2 * d, b3 * c};
  return o;
}

}  // namespace asymshap
