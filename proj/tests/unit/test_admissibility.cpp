#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "ultraflow/admissibility.hpp"
#include "ultraflow/errors.hpp"

using namespace ultraflow;

namespace {

// delta(beta) expanded directly from b and c of the quadratic form.
double delta_direct(double beta, double n, double p) {
  const double kappa = beta * (p - 2) + 1;
  const double b = (n - 1) / (n + 2) * (kappa + beta - 1);
  const double c = kappa * (beta - 1) + n / (n + 2) * (kappa + beta - 1);
  return b * b - c;
}

}  // namespace

TEST_CASE("thresholds") {
  CHECK(std::isinf(bakry_emery_exponent(1.0)));
  CHECK(bakry_emery_exponent(3.0) == doctest::Approx(19.0 / 4.0));
  CHECK(critical_exponent(3.0) == doctest::Approx(6.0));
  CHECK(std::isinf(critical_exponent(2.0)));
  CHECK(std::isinf(critical_exponent(1.5)));
  CHECK_THROWS_AS(thresholds(0.0), DomainError);
}

TEST_CASE("property: delta matches the direct expansion") {
  gen::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double n = rng.uniform(0.1, 10.0);
    const double p = rng.uniform(1.0, 12.0);
    const double beta = rng.uniform(-4.0, 6.0);
    const DeltaBreakdown d = delta_of_beta(beta, n, p);
    CHECK(d.delta == doctest::Approx(delta_direct(beta, n, p)).epsilon(1e-10).scale(1.0));
    CHECK(d.delta == doctest::Approx(d.b * d.b - d.c).epsilon(1e-10).scale(1.0));
    CHECK(delta_of_beta(0.0, n, p).delta == doctest::Approx(1.0));
  }
}

TEST_CASE("anchors") {
  const DeltaBreakdown d = delta_of_beta(1.0, 3.0, 6.0);
  CHECK(d.A == 0.0);
  CHECK(d.B == 0.0);
  CHECK(std::abs(delta_of_beta(2.0, 4.0, 4.0).delta) < 1e-12);
  const AdmissibleRange r = m_range(3.0, 6.0);
  CHECK(r.status == RangeStatus::special_point);
}

TEST_CASE("m_pm solve the quadratic in x = 1/beta") {
  gen::Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const double n = rng.uniform(0.2, 8.0);
    const double p = rng.uniform(1.05, n > 2 ? 2 * n / (n - 2) : 12.0);
    const double g = (n - 1) * (p - 1) / (n + 2);
    const double A = g * g + 2 - p;
    const double B = (n + 3 - p) / (n + 2);
    const double disc = B * B - A;
    const AdmissibleRange r = m_range(n, p);
    CAPTURE(n);
    CAPTURE(p);
    REQUIRE(r.status == RangeStatus::nonempty);
    REQUIRE(disc >= 0.0);
    const double x_lo = B - std::sqrt(disc);
    const double x_hi = B + std::sqrt(disc);
    CHECK(*r.m_minus == doctest::Approx(1 + 2 / p * (x_lo - 1)).epsilon(1e-10).scale(1.0));
    CHECK(*r.m_plus == doctest::Approx(1 + 2 / p * (x_hi - 1)).epsilon(1e-10).scale(1.0));
    CHECK(r.full_disc == doctest::Approx(4 * r.reduced_disc));
  }
}

TEST_CASE("range collapses at the critical exponent") {
  for (double n : {2.5, 3.0, 4.0, 6.0}) {
    const AdmissibleRange r = m_range(n, 2 * n / (n - 2));
    CHECK(*r.m_minus == doctest::Approx((n - 1) / n).epsilon(1e-10));
    CHECK(*r.m_plus == doctest::Approx((n - 1) / n).epsilon(1e-10));
  }
  CHECK(m_range(3.0, 6.5).status == RangeStatus::empty);
  CHECK_FALSE(m_range(3.0, 6.5).m_minus.has_value());
  CHECK_THROWS_AS(m_range(3.0, 1.0), DomainError);
}

TEST_CASE("property: membership agrees with the sign of delta") {
  gen::Rng rng(17);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const double n = rng.uniform(0.1, 8.0);
    const double p = rng.uniform(1.01, 10.0);
    const double beta = rng.uniform(-5.0, 5.0);
    if (beta == 0.0) continue;
    const double dl = delta_of_beta(beta, n, p).delta;
    if (std::abs(dl) < 1e-10) continue;
    ++checked;
    CHECK((dl <= 0.0) == in_beta_range(beta, n, p));
  }
  CHECK(checked > 4900);
}

TEST_CASE("interior beta and the m <-> beta map") {
  for (auto [n, p] : {std::pair{4.0, 3.8}, {2.5, 5.0}, {1.5, 8.0}}) {
    const auto beta = interior_beta(n, p);
    REQUIRE(beta.has_value());
    CHECK(delta_of_beta(*beta, n, p).delta < 0.0);
    CHECK(*beta > 1.0);
    const double m = m_of_beta(*beta, p);
    CHECK(beta_of_m(m, p) == doctest::Approx(*beta));
  }
  CHECK_FALSE(interior_beta(3.0, 7.0).has_value());
  CHECK_THROWS_AS(m_of_beta(0.0, 3.0), DomainError);
  CHECK_THROWS_AS(beta_of_m(1.0 - 2.0 / 3.0, 3.0), DomainError);
}

TEST_CASE("regularity coefficients and the adjusted constant") {
  const UltraParams p = UltraParams::make(2.5, 5.0, 2.0, 1e-3);
  const RegularityCoeffs rc = regularity_coeffs(0.3, p);
  const double den = 4.5 * p.m() - 2.5;
  CHECK(rc.alpha == doctest::Approx(2 / den));
  CHECK(rc.disc_eps == doctest::Approx(rc.b_eps * rc.b_eps - 4 * rc.a * rc.c_eps));
  const double lam = lambda_eps(p, 0.8, 0.2);
  const double g = 2.0 * 4.0 / 4.5 * 0.2 / 0.8;
  CHECK(lam == doctest::Approx(2.5 - 1e-3 * 0.5 * g * g));
  CHECK(lam < 2.5);
  CHECK_THROWS_AS(lambda_eps(UltraParams::make(3.0, 5.0, 2.0, 1e-3), 0.8, 0.2), DomainError);
  CHECK_THROWS_AS(lambda_eps(p, 1.2, 0.2), DomainError);
  CHECK_THROWS_AS(lambda_eps(p, 0.8, 0.0), DomainError);
  // beta = (n+2)/(n+2-p) makes (n+2) m - n vanish.
  const UltraParams bad = UltraParams::make(2.5, 5.0, 4.5 / (4.5 - 5.0));
  CHECK_THROWS_AS(regularity_coeffs(0.0, bad), DomainError);
}

TEST_CASE("q[u] is nonnegative inside the range") {
  const UltraParams params = UltraParams::make(2.5, 5.0, 2.0);
  const SpectralPlan plan = make_plan(params, 32, MeasureKind::plain);
  const GridFn u = plan.nodes().unaryExpr([](double z) { return std::exp(z * z - 0.5 * z); });
  CHECK(qform_value(u, 2.0, plan, params).minCoeff() >= -1e-12);
}
