#include "ultraflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ultraflow/errors.hpp"

namespace ultraflow {

double eigenvalue(double n, int k) {
  const double kk = k;
  return kk * (kk + n - 1.0);
}

Eigen::MatrixXd basis_matrix(double n, int K, const Eigen::VectorXd& points,
                             int derivative_order) {
  if (K < 0) throw DomainError("basis degree must be >= 0");
  if (derivative_order < 0 || derivative_order > 2) {
    throw DomainError("basis derivatives are available up to order 2");
  }
  const JacobiRecurrence rec(n);
  std::vector<double> s(K + 2, 0.0);
  for (int k = 1; k <= K + 1; ++k) s[k] = std::sqrt(rec.b(k));

  const Eigen::Index M = points.size();
  Eigen::MatrixXd out(M, K + 1);
  std::vector<double> p(K + 1), dp(K + 1), ddp(K + 1);
  for (Eigen::Index i = 0; i < M; ++i) {
    const double z = points(i);
    p[0] = 1.0;
    dp[0] = 0.0;
    ddp[0] = 0.0;
    for (int k = 0; k < K; ++k) {
      const double pm = k > 0 ? p[k - 1] : 0.0;
      const double dpm = k > 0 ? dp[k - 1] : 0.0;
      const double ddpm = k > 0 ? ddp[k - 1] : 0.0;
      p[k + 1] = (z * p[k] - s[k] * pm) / s[k + 1];
      dp[k + 1] = (p[k] + z * dp[k] - s[k] * dpm) / s[k + 1];
      ddp[k + 1] = (2.0 * dp[k] + z * ddp[k] - s[k] * ddpm) / s[k + 1];
    }
    const std::vector<double>& src =
        derivative_order == 0 ? p : (derivative_order == 1 ? dp : ddp);
    for (int k = 0; k <= K; ++k) out(i, k) = src[k];
  }
  return out;
}

namespace {

Quadrature refined_rule(const Quadrature& q) {
  const int N2 = 2 * q.order();
  if (q.kind == MeasureKind::plain) return gauss_gegenbauer(q.basis_n, N2);
  const UltraParams params = UltraParams::make(q.n, 2.0, 1.0, q.eps);
  return build_quadrature(params, N2, MeasureKind::regularized);
}

}  // namespace

SpectralPlan::SpectralPlan(Quadrature q)
    : quad_(std::move(q)), refined_(refined_rule(quad_)) {
  const int N = quad_.order();
  const int K = N - 1;
  vander_ = basis_matrix(quad_.basis_n, K, quad_.nodes, 0);
  analysis_ = vander_.transpose() * quad_.gauss_weights.asDiagonal();
  diff_ = basis_matrix(quad_.basis_n, K, quad_.nodes, 1) * analysis_;
  diff2_ = basis_matrix(quad_.basis_n, K, quad_.nodes, 2) * analysis_;
  refine_ = basis_matrix(quad_.basis_n, K, refined_.nodes, 0) * analysis_;
  if (N >= 2) exact_on_linears();
}

// Removes the roundoff that the differentiation matrices leave on 1 and z
// (it grows like N^4 for D2). With P the quadrature projector onto
// span{1, z}, D <- D + (D_exact - D) P, which changes nothing in exact
// arithmetic.
void SpectralPlan::exact_on_linears() {
  const Eigen::VectorXd& w = quad_.gauss_weights;
  const Eigen::VectorXd& z = quad_.nodes;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(z.size());
  const double m0 = w.sum();
  const double m1 = w.dot(z);
  const double m2 = w.dot(z.cwiseAbs2());
  // Dual functionals of {1, z} under the weights.
  const double det = m0 * m2 - m1 * m1;
  const Eigen::RowVectorXd psi0 = ((m2 * one - m1 * z).cwiseProduct(w) / det).transpose();
  const Eigen::RowVectorXd psi1 = ((m0 * z - m1 * one).cwiseProduct(w) / det).transpose();
  const Eigen::VectorXd d1_one = diff_ * one;
  const Eigen::VectorXd d1_z = diff_ * z - one;
  diff_ -= d1_one * psi0 + d1_z * psi1;
  const Eigen::VectorXd d2_one = diff2_ * one;
  const Eigen::VectorXd d2_z = diff2_ * z;
  diff2_ -= d2_one * psi0 + d2_z * psi1;
}

void SpectralPlan::check_shape(const GridFn& f) const {
  if (f.size() != quad_.nodes.size()) {
    throw ShapeError("grid function has " + std::to_string(f.size()) +
                     " values but the plan has " +
                     std::to_string(quad_.nodes.size()) + " nodes");
  }
}

Eigen::VectorXd SpectralPlan::coefficients(const GridFn& f) const {
  check_shape(f);
  return analysis_ * f;
}

GridFn SpectralPlan::derivative(const GridFn& f) const {
  check_shape(f);
  return diff_ * f;
}

GridFn SpectralPlan::second_derivative(const GridFn& f) const {
  check_shape(f);
  return diff2_ * f;
}

GridFn SpectralPlan::refine(const GridFn& f) const {
  check_shape(f);
  return refine_ * f;
}

Eigen::VectorXd SpectralPlan::evaluate(const GridFn& f,
                                       const Eigen::VectorXd& points,
                                       int derivative_order) const {
  const Eigen::VectorXd c = coefficients(f);
  return basis_matrix(quad_.basis_n, size() - 1, points, derivative_order) * c;
}

double SpectralPlan::tail_ratio(const GridFn& f) const {
  const Eigen::VectorXd c = coefficients(f);
  const int N = size();
  const int tail = std::max(2, N / 8);
  const double total = c.squaredNorm();
  if (total == 0.0) return 0.0;
  return c.tail(tail).squaredNorm() / total;
}

SpectralPlan make_plan(const UltraParams& params, int N, MeasureKind kind) {
  return SpectralPlan(build_quadrature(params, N, kind));
}

SpectralFn to_spectral(const GridFn& f, const Quadrature& q, int K) {
  const int N = q.order();
  if (K >= N) {
    throw ShapeError("aliasing: max degree " + std::to_string(K) +
                     " needs more than " + std::to_string(N) + " nodes");
  }
  if (K < 0) throw DomainError("max degree must be >= 0");
  if (f.size() != N) {
    throw ShapeError("grid function does not match the rule's nodes");
  }
  const Eigen::MatrixXd V = basis_matrix(q.basis_n, K, q.nodes, 0);
  SpectralFn s;
  s.coeffs = V.transpose() * q.gauss_weights.cwiseProduct(f);
  s.n = q.basis_n;
  return s;
}

SpectralFn to_spectral(const GridFn& f, const Quadrature& q) {
  return to_spectral(f, q, q.order() - 2);
}

GridFn from_spectral(const SpectralFn& s, const Eigen::VectorXd& points) {
  const int K = static_cast<int>(s.coeffs.size()) - 1;
  if (K < 0) return GridFn::Zero(points.size());
  return basis_matrix(s.n, K, points, 0) * s.coeffs;
}

GridFn spectral_derivative(const GridFn& f, const Quadrature& q) {
  if (f.size() != q.order()) {
    throw ShapeError("grid function does not match the rule's nodes");
  }
  const int K = q.order() - 1;
  const Eigen::VectorXd c =
      basis_matrix(q.basis_n, K, q.nodes, 0).transpose() *
      q.gauss_weights.cwiseProduct(f);
  return basis_matrix(q.basis_n, K, q.nodes, 1) * c;
}

CheckedDerivative spectral_derivative_checked(const GridFn& f,
                                              const SpectralPlan& plan) {
  CheckedDerivative out;
  out.values = plan.derivative(f);
  out.tail_ratio = plan.tail_ratio(f);
  out.accurate = out.tail_ratio <= kTailWarning;
  return out;
}

}  // namespace ultraflow
