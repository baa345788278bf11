#pragma once

#include <Eigen/Core>

#include "ultraflow/params.hpp"
#include "ultraflow/spectral.hpp"

namespace ultraflow {

/// Drift coefficient of the regularized operator and its derivative:
///
///   ell(z)  = z (n - eps (n - d) / (1 + eps - z^2))
///   ell'(z) = n - eps (n - d) (1 + eps + z^2) / (1 + eps - z^2)^2
///
/// With eps = 0 this is exactly n z (resp. n).
struct OperatorCoeffs {
  double n = 0.0;
  int d = 0;
  double eps = 0.0;

  static OperatorCoeffs from(const UltraParams& params);

  double ell(double z) const;
  double ell_prime(double z) const;
};

double drift(double z, const UltraParams& params);
double drift_prime(double z, const UltraParams& params);

/// L f = (1 - z^2) f'' - n z f' at the plan's nodes.
GridFn apply_L(const GridFn& f, const SpectralPlan& plan,
               const UltraParams& params);

/// L_{eps,n} f = (1 - z^2) f'' - ell(z) f'. Throws DomainError when eps = 0
/// and n is not an integer.
GridFn apply_L_eps(const GridFn& f, const SpectralPlan& plan,
                   const UltraParams& params);

/// Dense collocation matrices of L and L_{eps,n} on the plan's nodes.
Eigen::MatrixXd L_matrix(const SpectralPlan& plan, const UltraParams& params);
Eigen::MatrixXd L_eps_matrix(const SpectralPlan& plan,
                             const UltraParams& params);

}  // namespace ultraflow
