#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ultraflow/params.hpp"
#include "ultraflow/spectral.hpp"

namespace ultraflow {

/// u = exp(P) for a random polynomial P, sampled at the plan's nodes.
struct TestFunction {
  std::vector<double> poly;  ///< monomial coefficients of P, low to high
  GridFn u;
  double h0 = 0.0;           ///< min(min u, 1/max u) on [-1,1]
  std::uint64_t seed = 0;
  bool neumann = false;

  /// P and its first two derivatives at z.
  double P(double z, int derivative_order = 0) const;
};

/// Deterministic in (seed, degree). Coefficients are uniform in [-1,1] and P
/// is rescaled so that max |P| <= amplitude on [-1,1]. With neumann = true,
/// P = c0 + int_0^z (1-s^2) Q(s) ds with deg Q = degree - 3, so
/// u'(+-1) = 0. Throws DomainError for degree < 3 with neumann.
TestFunction make_test_function(std::uint64_t seed, const SpectralPlan& plan,
                                bool neumann, int degree = 6,
                                double amplitude = 1.0);

enum class IdentityTag { gamma2, lgamma, gamma2_eps, lgamma_eps };

std::string to_string(IdentityTag tag);

struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  ///< |lhs - rhs| / (1 + |lhs| + |rhs|)
  IdentityTag tag = IdentityTag::gamma2;
  std::uint64_t seed = 0;
};

/// int (Lu)^2 = int u''^2 rho^4 + n int rho^2 u'^2 on dnu_n.
///
/// Needs a plain plan for n and u > 0. With require_neumann the boundary
/// slopes u'(+-1) must vanish (ValidationError otherwise).
IdentityReport check_gamma2(const GridFn& u, const SpectralPlan& plan,
                            const UltraParams& params,
                            bool require_neumann = true);

/// int (u'^2 rho^2/u) Lu = n/(n+2) int u'^4 rho^4/u^2
///                        - 2(n-1)/(n+2) int u'^2 u'' rho^4/u.
IdentityReport check_lgamma(const GridFn& u, const SpectralPlan& plan,
                            const UltraParams& params,
                            bool require_neumann = true);

/// int (L_eps u)^2 = int [u''^2 rho^4 + n rho^2 u'^2
///   - eps (n-d)(1+eps+z^2)/(1+eps-z^2)^2 rho^2 u'^2] on dnu_{eps,n}.
/// Needs params.regularized_valid() and a plan for that measure.
IdentityReport check_gamma2_eps(const GridFn& u, const SpectralPlan& plan,
                                const UltraParams& params);

/// int (L_eps u) u'^2 rho^2/u = n/(n+2) int u'^4 rho^4/u^2
///   - 2(n-1)/(n+2) int u'' u'^2 rho^4/u
///   + 2 eps (n-d)/(n+2) int u'^3 rho^2 z/((1+eps-z^2) u).
IdentityReport check_lgamma_eps(const GridFn& u, const SpectralPlan& plan,
                                const UltraParams& params);

/// Worst residual of each identity over a batch of random test functions.
struct IdentitySweep {
  double n = 0.0;
  double eps = 0.0;
  int nodes = 0;
  int trials = 0;
  std::vector<IdentityReport> worst;  ///< one per identity that applies
};

/// Runs trials test functions with seeds seed, seed+1, ... The plain
/// identities use Neumann test functions (generic ones, with the boundary
/// check off, when neumann is false); the regularized ones use generic
/// test functions and run only when (n, eps) defines the regularized measure.
/// nodes = 0 selects the default node count of each measure.
IdentitySweep identity_sweep(double n, double eps, int trials,
                             std::uint64_t seed, int nodes = 0,
                             bool neumann = true);

}  // namespace ultraflow
