#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "oracle.hpp"
#include "ultraflow/errors.hpp"
#include "ultraflow/operators.hpp"

using namespace ultraflow;

TEST_CASE("Gegenbauer polynomials are eigenfunctions") {
  for (double n : {0.5, 1.7, 3.0, 4.2}) {
    const UltraParams p = UltraParams::make(n, 3.0);
    const SpectralPlan plan = make_plan(p, 40, MeasureKind::plain);
    for (int k = 0; k <= 20; ++k) {
      const GridFn P = plan.nodes().unaryExpr(
          [&](double z) { return oracle::gegenbauer_raw(k, n, z); });
      const double scale = P.cwiseAbs().maxCoeff();
      const GridFn r = apply_L(P, plan, p) + k * (k + n - 1.0) * P;
      CAPTURE(n);
      CAPTURE(k);
      CHECK(r.cwiseAbs().maxCoeff() < 1e-10 * scale * (1.0 + k * (k + n)));
    }
  }
}

TEST_CASE("L on a polynomial matches the closed form") {
  const UltraParams p = UltraParams::make(1.7, 3.0);
  const SpectralPlan plan = make_plan(p, 16, MeasureKind::plain);
  // f = z^3 - z: f' = 3z^2 - 1, f'' = 6z.
  const GridFn f = plan.nodes().unaryExpr([](double z) { return z * z * z - z; });
  const GridFn want = plan.nodes().unaryExpr([](double z) {
    return (1 - z * z) * 6 * z - 1.7 * z * (3 * z * z - 1);
  });
  CHECK((apply_L(f, plan, p) - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((L_matrix(plan, p) * f - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("drift reduces to n z at eps = 0 and integer n") {
  const UltraParams p = UltraParams::make(3.0, 3.0);
  CHECK(drift(0.4, p) == doctest::Approx(1.2));
  CHECK(drift_prime(0.4, p) == doctest::Approx(3.0));
  const SpectralPlan plan = make_plan(p, 16, MeasureKind::plain);
  const GridFn f = plan.nodes().unaryExpr([](double z) { return std::exp(z); });
  CHECK((apply_L_eps(f, plan, p) - apply_L(f, plan, p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("drift derivative by finite differences") {
  const UltraParams p = UltraParams::make(2.5, 3.0, 1.0, 0.01);
  for (double z : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
    const double h = 1e-6;
    const double fd = (drift(z + h, p) - drift(z - h, p)) / (2 * h);
    CHECK(drift_prime(z, p) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("property: integration by parts, plain and regularized") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double n = rng.uniform(0.3, 5.0);
    const double eps = trial % 2 == 0 ? 0.1 : 0.01;
    const UltraParams p = UltraParams::make(n, 3.0, 1.0, eps);
    const auto cf = rng.poly(6);
    const auto cg = rng.poly(6);
    for (MeasureKind kind : {MeasureKind::plain, MeasureKind::regularized}) {
      const SpectralPlan plan =
          make_plan(p, default_node_count(p, kind), kind);
      const GridFn f = plan.nodes().unaryExpr([&](double z) { return gen::horner(cf, z); });
      const GridFn g = plan.nodes().unaryExpr([&](double z) { return gen::horner(cg, z); });
      const GridFn Lf = kind == MeasureKind::plain ? apply_L(f, plan, p)
                                                   : apply_L_eps(f, plan, p);
      const Eigen::VectorXd& w = plan.quadrature().weights;
      const double lhs = w.dot(g.cwiseProduct(Lf));
      const Eigen::ArrayXd rho2 = 1.0 - plan.nodes().array().square();
      const double rhs = -w.dot((rho2 * plan.derivative(f).array() *
                                 plan.derivative(g).array()).matrix());
      CAPTURE(n);
      CAPTURE(eps);
      CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("oracle: -int rho^2 f'g' against tanh-sinh") {
  const double n = 1.3;
  const UltraParams p = UltraParams::make(n, 3.0);
  const SpectralPlan plan = make_plan(p, 32, MeasureKind::plain);
  const GridFn f = plan.nodes().unaryExpr([](double z) { return std::sin(2 * z); });
  const GridFn Lf = apply_L(f, plan, p);
  const double got = plan.quadrature().weights.dot(plan.nodes().cwiseProduct(Lf));
  const double want = -oracle::nu(n, [](double z) { return (1 - z * z) * 2 * std::cos(2 * z); });
  CHECK(got == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("regularized operator domain") {
  const UltraParams p = UltraParams::make(2.5, 3.0);
  const SpectralPlan plan = make_plan(p, 16, MeasureKind::plain);
  CHECK_THROWS_AS(apply_L_eps(GridFn::Ones(16), plan, p), DomainError);
  CHECK_THROWS_AS(apply_L(GridFn::Ones(10), plan, p), ShapeError);
}
