#include "ultraflow/operators.hpp"

#include "ultraflow/errors.hpp"

namespace ultraflow {

OperatorCoeffs OperatorCoeffs::from(const UltraParams& params) {
  return OperatorCoeffs{params.n(), params.d(), params.eps()};
}

double OperatorCoeffs::ell(double z) const {
  if (eps == 0.0) return n * z;
  return z * (n - eps * (n - d) / (1.0 + eps - z * z));
}

double OperatorCoeffs::ell_prime(double z) const {
  if (eps == 0.0) return n;
  const double g = 1.0 + eps - z * z;
  return n - eps * (n - d) * (1.0 + eps + z * z) / (g * g);
}

double drift(double z, const UltraParams& params) {
  return OperatorCoeffs::from(params).ell(z);
}

double drift_prime(double z, const UltraParams& params) {
  return OperatorCoeffs::from(params).ell_prime(z);
}

namespace {

void require_regular(const UltraParams& params) {
  if (!params.regularized_valid()) {
    throw DomainError(
        "L_{eps,n} is singular for eps = 0 with non-integer n; use eps > 0");
  }
}

}  // namespace

GridFn apply_L(const GridFn& f, const SpectralPlan& plan,
               const UltraParams& params) {
  const Eigen::VectorXd& z = plan.nodes();
  const GridFn d1 = plan.derivative(f);
  const GridFn d2 = plan.second_derivative(f);
  return (1.0 - z.array().square()) * d2.array() -
         params.n() * z.array() * d1.array();
}

GridFn apply_L_eps(const GridFn& f, const SpectralPlan& plan,
                   const UltraParams& params) {
  require_regular(params);
  const auto coeffs = OperatorCoeffs::from(params);
  const Eigen::VectorXd& z = plan.nodes();
  const GridFn d1 = plan.derivative(f);
  const GridFn d2 = plan.second_derivative(f);
  GridFn out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    out(i) = (1.0 - z(i) * z(i)) * d2(i) - coeffs.ell(z(i)) * d1(i);
  }
  return out;
}

Eigen::MatrixXd L_matrix(const SpectralPlan& plan, const UltraParams& params) {
  const Eigen::VectorXd& z = plan.nodes();
  const Eigen::VectorXd rho2 = 1.0 - z.array().square();
  return rho2.asDiagonal() * plan.diff2() -
         (params.n() * z).asDiagonal() * plan.diff();
}

Eigen::MatrixXd L_eps_matrix(const SpectralPlan& plan,
                             const UltraParams& params) {
  require_regular(params);
  const auto coeffs = OperatorCoeffs::from(params);
  const Eigen::VectorXd& z = plan.nodes();
  const Eigen::VectorXd rho2 = 1.0 - z.array().square();
  Eigen::VectorXd ell(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) ell(i) = coeffs.ell(z(i));
  return rho2.asDiagonal() * plan.diff2() - ell.asDiagonal() * plan.diff();
}

}  // namespace ultraflow
