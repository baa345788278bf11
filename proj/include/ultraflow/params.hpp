#pragma once

#include <Eigen/Core>

namespace ultraflow {

/// Values of a function at the nodes of a quadrature rule.
using GridFn = Eigen::VectorXd;

/// Smallest regularization parameter accepted; below it the drift
/// coefficient (1 + eps - z^2)^-1 is too badly conditioned at z = +-1.
inline constexpr double kMinEps = 1e-8;

/// Parameter bundle shared by every module.
///
/// The dimension n is real; d is the smallest integer >= n. The flow
/// exponent beta determines kappa = beta (p - 2) + 1 and
/// m = 1 + (2/p)(1/beta - 1); both are always derived, never stored.
class UltraParams {
 public:
  /// Throws DomainError unless n > 0, p >= 1, beta != 0 and
  /// eps == 0 or eps >= kMinEps.
  static UltraParams make(double n, double p, double beta = 1.0,
                          double eps = 0.0);

  double n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  double eps() const noexcept { return eps_; }
  double p() const noexcept { return p_; }
  double beta() const noexcept { return beta_; }

  double kappa() const noexcept { return beta_ * (p_ - 2.0) + 1.0; }
  double m() const noexcept { return 1.0 + (2.0 / p_) * (1.0 / beta_ - 1.0); }

  bool integer_dimension() const noexcept {
    return static_cast<double>(d_) == n_;
  }

  /// The regularized weight zeta_eps is usable: eps > 0, or n = d.
  bool regularized_valid() const noexcept {
    return eps_ > 0.0 || integer_dimension();
  }

  UltraParams with_p(double p) const { return make(n_, p, beta_, eps_); }
  UltraParams with_beta(double beta) const { return make(n_, p_, beta, eps_); }
  UltraParams with_eps(double eps) const { return make(n_, p_, beta_, eps); }

 private:
  UltraParams(double n, int d, double eps, double p, double beta)
      : n_(n), d_(d), eps_(eps), p_(p), beta_(beta) {}

  double n_;
  int d_;
  double eps_;
  double p_;
  double beta_;
};

/// Smallest integer >= n.
int ceil_dimension(double n);

}  // namespace ultraflow
