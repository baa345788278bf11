#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "oracle.hpp"
#include "ultraflow/errors.hpp"
#include "ultraflow/spectral.hpp"

using namespace ultraflow;

namespace {

GridFn sample(const std::vector<double>& c, const Eigen::VectorXd& z) {
  return z.unaryExpr([&](double x) { return gen::horner(c, x); });
}

}  // namespace

TEST_CASE("basis agrees with the classical Gegenbauer recurrence") {
  for (double n : {0.5, 1.7, 3.0, 4.2}) {
    Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(7, -0.9, 0.9);
    const Eigen::MatrixXd B = basis_matrix(n, 10, pts);
    for (int k = 0; k <= 10; ++k) {
      const double norm = std::sqrt(oracle::nu(n, [&](double z) {
        const double v = oracle::gegenbauer_raw(k, n, z);
        return v * v;
      }));
      // For n < 1 the classical normalization flips sign on some modes.
      const double lead = std::pow(2.0, k) * std::tgamma(0.5 * (n - 1) + k) /
                          (std::tgamma(0.5 * (n - 1)) * std::tgamma(k + 1.0));
      const double sign = lead < 0.0 ? -1.0 : 1.0;
      for (int i = 0; i < pts.size(); ++i) {
        CAPTURE(n);
        CAPTURE(k);
        CHECK(B(i, k) == doctest::Approx(sign * oracle::gegenbauer_raw(k, n, pts(i)) / norm)
                             .epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("orthonormality on the rule") {
  const Quadrature q = gauss_gegenbauer(1.3, 30);
  const Eigen::MatrixXd V = basis_matrix(1.3, 29, q.nodes);
  const Eigen::MatrixXd G = V.transpose() * q.weights.asDiagonal() * V;
  CHECK((G - Eigen::MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenvalues") {
  CHECK(eigenvalue(3.0, 0) == 0.0);
  CHECK(eigenvalue(3.0, 2) == doctest::Approx(8.0));
  CHECK(eigenvalue(0.5, 4) == doctest::Approx(4.0 * 3.5));
}

TEST_CASE("property: differentiation is exact on polynomials of degree < N") {
  gen::Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const double n = rng.uniform(0.2, 6.0);
    const int N = rng.integer(8, 40);
    const auto c = rng.poly(N - 1);
    const SpectralPlan plan(gauss_gegenbauer(n, N));
    const GridFn f = sample(c, plan.nodes());
    const GridFn d1 = sample(gen::deriv(c), plan.nodes());
    const GridFn d2 = sample(gen::deriv(gen::deriv(c)), plan.nodes());
    const double scale = 1.0 + d2.cwiseAbs().maxCoeff();
    CAPTURE(n);
    CAPTURE(N);
    CHECK((plan.derivative(f) - d1).cwiseAbs().maxCoeff() < 1e-10 * scale);
    CHECK((plan.second_derivative(f) - d2).cwiseAbs().maxCoeff() < 1e-9 * scale);
    Eigen::VectorXd ends(2);
    ends << -1.0, 1.0;
    const Eigen::VectorXd e = plan.evaluate(f, ends, 1);
    CHECK(e(0) == doctest::Approx(gen::horner(gen::deriv(c), -1.0)).epsilon(1e-9).scale(scale));
    CHECK(e(1) == doctest::Approx(gen::horner(gen::deriv(c), 1.0)).epsilon(1e-9).scale(scale));
  }
}

TEST_CASE("refinement interpolates exactly") {
  const SpectralPlan plan(gauss_gegenbauer(2.5, 20));
  CHECK(plan.refined().order() == 40);
  const std::vector<double> c{0.3, -1.0, 0.5, 0.0, 2.0};
  const GridFn fine = plan.refine(sample(c, plan.nodes()));
  CHECK((fine - sample(c, plan.refined().nodes)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transforms") {
  const Quadrature q = gauss_gegenbauer(3.0, 16);
  const GridFn f = q.nodes.unaryExpr([](double z) { return std::exp(z); });
  const SpectralFn s = to_spectral(f, q);
  CHECK(s.coeffs.size() == 15);
  CHECK(s.coeffs(0) == doctest::Approx(oracle::nu(3.0, [](double z) { return std::exp(z); })));
  Eigen::VectorXd pts(3);
  pts << -0.7, 0.1, 0.95;
  const GridFn back = from_spectral(s, pts);
  for (int i = 0; i < 3; ++i) CHECK(back(i) == doctest::Approx(std::exp(pts(i))).epsilon(1e-12));
  CHECK_THROWS_AS(to_spectral(f, q, 16), ShapeError);
  CHECK_THROWS_AS(to_spectral(GridFn::Ones(5), q, 3), ShapeError);
  const GridFn d = spectral_derivative(f, q);
  CHECK((d - f).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("tail ratio flags under-resolution") {
  const SpectralPlan plan(gauss_gegenbauer(2.0, 32));
  const GridFn smooth = plan.nodes().unaryExpr([](double z) { return std::exp(z); });
  const GridFn rough = plan.nodes().unaryExpr([](double z) { return std::abs(z); });
  CHECK(plan.tail_ratio(smooth) < kTailWarning);
  const CheckedDerivative r = spectral_derivative_checked(rough, plan);
  CHECK_FALSE(r.accurate);
  CHECK(r.tail_ratio > kTailWarning);
  CHECK_THROWS_AS(plan.derivative(GridFn::Ones(3)), ShapeError);
}
