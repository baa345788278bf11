#pragma once

#include <Eigen/Core>

#include "ultraflow/params.hpp"

namespace ultraflow {

/// Default node count for the plain measure.
inline constexpr int kDefaultNodes = 64;

enum class MeasureKind { plain, regularized };

/// Three-term recurrence of the polynomials orthonormal with respect to the
/// probability measure proportional to (1 - z^2)^{(nb - 2)/2} dz:
///
///   sqrt(b_{k+1}) p_{k+1}(z) = z p_k(z) - sqrt(b_k) p_{k-1}(z),  p_0 = 1,
///
/// with b_k = k (k + nb - 2) / ((2k + nb - 1)(2k + nb - 3)) and b_1 = 1/(nb+1).
class JacobiRecurrence {
 public:
  explicit JacobiRecurrence(double basis_n);

  double basis_n() const noexcept { return basis_n_; }

  /// b_k for k >= 1.
  double b(int k) const;

  /// p_k(z) for k = 0..K, written into out (size K+1).
  void values(double z, int K, double* out) const;

  /// p_K(z) and p_K'(z).
  void value_and_derivative(double z, int K, double& value,
                            double& derivative) const;

 private:
  double basis_n_;
};

/// Integration rule on (-1,1) normalized to a probability measure.
///
/// For the plain kind the rule is Gauss-Jacobi for dnu_n. For the
/// regularized kind it is Gauss-Jacobi for dnu_d with the smooth factor
/// zeta_eps = (1 + eps - z^2)^{(n-d)/2} folded into the weights.
/// gauss_weights keeps the unfolded weights of the underlying rule, which
/// is what the spectral transforms use.
struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd gauss_weights;
  MeasureKind kind = MeasureKind::plain;
  double n = 0.0;
  double basis_n = 0.0;
  double eps = 0.0;

  int order() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Z_n = sqrt(pi) Gamma(n/2) / Gamma((n+1)/2). Throws DomainError for n <= 0.
double normalization_constant(double n);

/// Gauss rule for the probability measure (1-z^2)^{(nb-2)/2} dz / Z_nb.
/// Exact for polynomials of degree <= 2N - 1.
Quadrature gauss_gegenbauer(double basis_n, int N);

/// zeta_eps(z) = (1 + eps - z^2)^{(n-d)/2}.
double regularized_weight(double z, const UltraParams& params);

/// Builds the rule for dnu_n (plain) or dnu_{eps,n} (regularized).
/// Throws DomainError if N < 2, or if the regularized kind is requested
/// with eps = 0 and n < d.
Quadrature build_quadrature(const UltraParams& params, int N,
                            MeasureKind kind);

/// Node count giving ~1e-13 quadrature accuracy for smooth integrands.
///
/// 64 for the plain measure. For the regularized measure with n < d the
/// folded weight has branch points at +-sqrt(1+eps), so the count grows
/// like 16/sqrt(eps), rounded up to a multiple of 8 and capped at 1024.
int default_node_count(const UltraParams& params, MeasureKind kind);

/// Sum of weights_i f_i. Throws ShapeError on size mismatch.
double integrate(const Quadrature& q, const GridFn& f);

}  // namespace ultraflow
