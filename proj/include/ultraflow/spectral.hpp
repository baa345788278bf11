#pragma once

#include <Eigen/Core>

#include "ultraflow/measure.hpp"
#include "ultraflow/params.hpp"

namespace ultraflow {

/// Coefficients in the Gegenbauer basis orthonormal with respect to dnu_n.
struct SpectralFn {
  Eigen::VectorXd coeffs;
  double n = 0.0;
};

/// lambda_k = k (k + n - 1), the k-th eigenvalue of -L.
double eigenvalue(double n, int k);

/// Basis values P_k(z_i) (or their derivatives of the given order, 0..2)
/// for k = 0..K at the given points; result is points.size() x (K+1).
Eigen::MatrixXd basis_matrix(double n, int K, const Eigen::VectorXd& points,
                             int derivative_order = 0);

/// Precomputed, read-only transform plan for one quadrature rule.
///
/// Holds the Vandermonde matrix of the orthonormal basis of the underlying
/// Gauss rule, the first and second differentiation matrices (exact on
/// polynomials of degree < N), and a rule with 2N nodes of the same kind
/// plus the interpolation matrix onto it. The refined rule is what
/// |f|^p-type functionals integrate on.
class SpectralPlan {
 public:
  explicit SpectralPlan(Quadrature q);

  int size() const noexcept { return quad_.order(); }
  const Quadrature& quadrature() const noexcept { return quad_; }
  const Quadrature& refined() const noexcept { return refined_; }
  const Eigen::VectorXd& nodes() const noexcept { return quad_.nodes; }
  double basis_n() const noexcept { return quad_.basis_n; }

  const Eigen::MatrixXd& vandermonde() const noexcept { return vander_; }
  const Eigen::MatrixXd& diff() const noexcept { return diff_; }
  const Eigen::MatrixXd& diff2() const noexcept { return diff2_; }
  const Eigen::MatrixXd& refine_matrix() const noexcept { return refine_; }

  /// All N coefficients of the interpolant in the plan's basis.
  Eigen::VectorXd coefficients(const GridFn& f) const;
  GridFn derivative(const GridFn& f) const;
  GridFn second_derivative(const GridFn& f) const;
  /// Interpolant sampled on the refined rule's nodes.
  GridFn refine(const GridFn& f) const;
  /// Interpolant (order 0) or its derivatives evaluated at arbitrary points.
  Eigen::VectorXd evaluate(const GridFn& f, const Eigen::VectorXd& points,
                           int derivative_order = 0) const;

  /// Fraction of the coefficient energy carried by the top N/8 modes
  /// (at least two). Large values mean the function is under-resolved.
  double tail_ratio(const GridFn& f) const;

  void check_shape(const GridFn& f) const;

 private:
  void exact_on_linears();

  Quadrature quad_;
  Quadrature refined_;
  Eigen::MatrixXd vander_;
  Eigen::MatrixXd analysis_;  // V^T W: values -> coefficients
  Eigen::MatrixXd diff_;
  Eigen::MatrixXd diff2_;
  Eigen::MatrixXd refine_;
};

/// Tail ratio above which a derivative is flagged as inaccurate.
inline constexpr double kTailWarning = 1e-20;

struct CheckedDerivative {
  GridFn values;
  double tail_ratio = 0.0;
  bool accurate = true;
};

/// Convenience: build the quadrature and the plan in one go.
SpectralPlan make_plan(const UltraParams& params, int N, MeasureKind kind);

/// c_k = int f P_k dnu_n, k = 0..K. Requires K < N (ShapeError otherwise).
SpectralFn to_spectral(const GridFn& f, const Quadrature& q, int K);
/// to_spectral with the default truncation K = N - 2.
SpectralFn to_spectral(const GridFn& f, const Quadrature& q);

/// Pointwise evaluation of sum_k c_k P_k via the recurrence.
GridFn from_spectral(const SpectralFn& s, const Eigen::VectorXd& points);

/// f' at the nodes, from differentiating the basis expansion.
GridFn spectral_derivative(const GridFn& f, const Quadrature& q);
CheckedDerivative spectral_derivative_checked(const GridFn& f,
                                              const SpectralPlan& plan);

}  // namespace ultraflow
