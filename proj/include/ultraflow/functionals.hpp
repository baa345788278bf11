#pragma once

#include "ultraflow/params.hpp"
#include "ultraflow/spectral.hpp"

namespace ultraflow {

struct DeficitReport {
  double fisher = 0.0;
  double entropy_term = 0.0;
  double deficit = 0.0;
  double lambda_used = 0.0;
  double p = 0.0;
  /// p = 2^* with n > 2: quadrature converges slower near the extremals.
  bool critical = false;
};

struct LyapunovValue {
  double value = 0.0;
  double lambda = 0.0;
  double beta = 0.0;
  double mass = 0.0;  ///< int u^{beta p}
};

/// (int |f|^p)^{1/p} on the refined rule. Integrals are taken against the
/// plan's measure (dnu_n or dnu_{eps,n}).
double lp_norm(const GridFn& f, const SpectralPlan& plan, double p);

/// int rho^2 |f'|^2.
double fisher(const GridFn& f, const SpectralPlan& plan);

/// fisher - lambda (||f||_p^2 - ||f||_2^2)/(p - 2).
///
/// Valid for p in [1,2) u (2, 2^*]. At p = 1 the entropy term is the
/// Poincare form ||f||_2^2 - (int f)^2, which coincides with the formula for
/// f >= 0. Throws DomainError for p = 2, p > 2^*, or f == 0.
DeficitReport deficit(const GridFn& f, const SpectralPlan& plan,
                      const UltraParams& params, double lambda);

/// fisher - (n/2) int f^2 log(f^2 / ||f||_2^2), with 0 log 0 = 0.
DeficitReport logsob_deficit(const GridFn& f, const SpectralPlan& plan,
                             const UltraParams& params);

/// F[u] = int rho^2 |(u^beta)'|^2
///        + lambda/(p-2) (||u^beta||_2^2 - ||u^beta||_p^2).
/// Requires u > 0 at the nodes (DomainError otherwise).
LyapunovValue lyapunov_F(const GridFn& u, const SpectralPlan& plan,
                         const UltraParams& params, double lambda);

/// Conformal extremals a |1 - b z|^{-(n-2)/2}, |b| < 1.
GridFn extremal_profile(const Eigen::VectorXd& z, double n, double a, double b);

}  // namespace ultraflow
