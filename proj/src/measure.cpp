#include "ultraflow/measure.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ultraflow/errors.hpp"

namespace ultraflow {

JacobiRecurrence::JacobiRecurrence(double basis_n) : basis_n_(basis_n) {
  if (!(basis_n > 0.0)) {
    throw DomainError("Gegenbauer parameter must be positive");
  }
}

double JacobiRecurrence::b(int k) const {
  const double nb = basis_n_;
  if (k == 1) return 1.0 / (nb + 1.0);
  const double kk = k;
  return kk * (kk + nb - 2.0) / ((2.0 * kk + nb - 1.0) * (2.0 * kk + nb - 3.0));
}

void JacobiRecurrence::values(double z, int K, double* out) const {
  out[0] = 1.0;
  if (K == 0) return;
  double sb_prev = 0.0;
  double sb = std::sqrt(b(1));
  out[1] = z / sb;
  for (int k = 1; k < K; ++k) {
    sb_prev = sb;
    sb = std::sqrt(b(k + 1));
    out[k + 1] = (z * out[k] - sb_prev * out[k - 1]) / sb;
  }
}

void JacobiRecurrence::value_and_derivative(double z, int K, double& value,
                                            double& derivative) const {
  double p_prev = 0.0, p = 1.0;
  double d_prev = 0.0, dp = 0.0;
  double sb_prev = 0.0;
  for (int k = 0; k < K; ++k) {
    const double sb = std::sqrt(b(k + 1));
    const double p_next = (z * p - sb_prev * p_prev) / sb;
    const double d_next = (p + z * dp - sb_prev * d_prev) / sb;
    p_prev = p;
    p = p_next;
    d_prev = dp;
    dp = d_next;
    sb_prev = sb;
  }
  value = p;
  derivative = dp;
}

double normalization_constant(double n) {
  if (!(n > 0.0)) {
    throw DomainError("normalization constant requires n > 0");
  }
  return std::sqrt(std::numbers::pi) *
         std::exp(std::lgamma(0.5 * n) - std::lgamma(0.5 * (n + 1.0)));
}

Quadrature gauss_gegenbauer(double basis_n, int N) {
  if (N < 2) throw DomainError("quadrature needs at least 2 nodes");
  const JacobiRecurrence rec(basis_n);

  // Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd sub(N - 1);
  for (int k = 1; k < N; ++k) sub(k - 1) = std::sqrt(rec.b(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Jacobi matrix eigenvalue solve did not converge (N=" +
                         std::to_string(N) + ")");
  }
  Eigen::VectorXd nodes = solver.eigenvalues();

  // Newton polish on p_N, then enforce exact symmetry.
  for (int i = 0; i < N; ++i) {
    double z = nodes(i);
    for (int it = 0; it < 3; ++it) {
      double v, dv;
      rec.value_and_derivative(z, N, v, dv);
      if (dv == 0.0) break;
      const double step = v / dv;
      z -= step;
      if (std::abs(step) < 1e-17) break;
    }
    nodes(i) = z;
  }
  std::sort(nodes.data(), nodes.data() + N);
  for (int i = 0; i < N / 2; ++i) {
    const double s = 0.5 * (nodes(N - 1 - i) - nodes(i));
    nodes(i) = -s;
    nodes(N - 1 - i) = s;
  }
  if (N % 2 == 1) nodes(N / 2) = 0.0;

  for (int i = 0; i + 1 < N; ++i) {
    if (!(nodes(i) < nodes(i + 1)) || !(nodes(i) > -1.0) ||
        !(nodes(N - 1) < 1.0)) {
      throw NumericalError("Gauss-Jacobi nodes are not strictly inside (-1,1)"
                           " and increasing (N=" + std::to_string(N) +
                           ", nb=" + std::to_string(basis_n) + ")");
    }
  }

  // Christoffel weights: 1 / sum_k p_k(z_i)^2 for the probability measure.
  Eigen::VectorXd weights(N);
  std::vector<double> p(N);
  for (int i = 0; i < N; ++i) {
    rec.values(nodes(i), N - 1, p.data());
    double s = 0.0;
    for (int k = 0; k < N; ++k) s += p[k] * p[k];
    weights(i) = 1.0 / s;
  }
  for (int i = 0; i < N / 2; ++i) {
    const double w = 0.5 * (weights(i) + weights(N - 1 - i));
    weights(i) = w;
    weights(N - 1 - i) = w;
  }
  weights /= weights.sum();

  Quadrature q;
  q.nodes = std::move(nodes);
  q.weights = weights;
  q.gauss_weights = weights;
  q.kind = MeasureKind::plain;
  q.n = basis_n;
  q.basis_n = basis_n;
  q.eps = 0.0;
  return q;
}

double regularized_weight(double z, const UltraParams& params) {
  const double expo = 0.5 * (params.n() - params.d());
  if (expo == 0.0) return 1.0;
  return std::pow(1.0 + params.eps() - z * z, expo);
}

Quadrature build_quadrature(const UltraParams& params, int N,
                            MeasureKind kind) {
  if (N < 2) throw DomainError("quadrature needs at least 2 nodes");
  if (kind == MeasureKind::plain) {
    return gauss_gegenbauer(params.n(), N);
  }
  if (!params.regularized_valid()) {
    throw DomainError(
        "regularized measure needs eps > 0 when n is not an integer");
  }
  Quadrature q = gauss_gegenbauer(static_cast<double>(params.d()), N);
  for (int i = 0; i < N; ++i) {
    q.weights(i) *= regularized_weight(q.nodes(i), params);
  }
  q.weights /= q.weights.sum();
  q.kind = MeasureKind::regularized;
  q.n = params.n();
  q.eps = params.eps();
  return q;
}

int default_node_count(const UltraParams& params, MeasureKind kind) {
  if (kind == MeasureKind::plain || params.integer_dimension()) {
    return kDefaultNodes;
  }
  const double want = 16.0 / std::sqrt(params.eps());
  int N = static_cast<int>(std::ceil(want / 8.0)) * 8;
  return std::clamp(N, kDefaultNodes, 1024);
}

double integrate(const Quadrature& q, const GridFn& f) {
  if (f.size() != q.nodes.size()) {
    throw ShapeError("grid function has " + std::to_string(f.size()) +
                     " values but the rule has " +
                     std::to_string(q.nodes.size()) + " nodes");
  }
  return q.weights.dot(f);
}

}  // namespace ultraflow
