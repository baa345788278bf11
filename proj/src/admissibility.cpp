#include "ultraflow/admissibility.hpp"

#include <cmath>
#include <limits>

#include "ultraflow/errors.hpp"
#include "ultraflow/operators.hpp"

namespace ultraflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Floating-point ties at a vanishing discriminant are a double root.
constexpr double kTieTolerance = 1e-13;

}  // namespace

double bakry_emery_exponent(double n) {
  if (n == 1.0) return kInf;
  return (2.0 * n * n + 1.0) / ((n - 1.0) * (n - 1.0));
}

double critical_exponent(double n) {
  if (n <= 2.0) return kInf;
  return 2.0 * n / (n - 2.0);
}

Thresholds thresholds(double n) {
  if (!(n > 0.0)) throw DomainError("thresholds need n > 0");
  return {bakry_emery_exponent(n), critical_exponent(n)};
}

DeltaBreakdown delta_of_beta(double beta, double n, double p) {
  DeltaBreakdown r{};
  const double g = (n - 1.0) * (p - 1.0) / (n + 2.0);
  r.A = g * g + 2.0 - p;
  r.B = (n + 3.0 - p) / (n + 2.0);
  r.C = 1.0;
  r.kappa = beta * (p - 2.0) + 1.0;
  const double s = r.kappa + beta - 1.0;
  r.b = (n - 1.0) / (n + 2.0) * s;
  r.c = r.kappa * (beta - 1.0) + n / (n + 2.0) * s;
  r.delta = r.A * beta * beta - 2.0 * r.B * beta + r.C;
  return r;
}

std::string to_string(RangeStatus status) {
  switch (status) {
    case RangeStatus::nonempty:
      return "nonempty";
    case RangeStatus::empty:
      return "empty";
    case RangeStatus::special_point:
      return "special_point";
  }
  return "unknown";
}

double m_of_beta(double beta, double p) {
  if (beta == 0.0) throw DomainError("beta = 0 has no m");
  return 1.0 + (2.0 / p) * (1.0 / beta - 1.0);
}

double beta_of_m(double m, double p) {
  const double x = 1.0 + 0.5 * p * (m - 1.0);
  if (x == 0.0) throw DomainError("m = 1 - 2/p corresponds to beta = infinity");
  return 1.0 / x;
}

namespace {

// beta intervals whose reciprocals fill [x_lo, x_hi].
std::vector<Interval> invert_x_interval(double x_lo, double x_hi) {
  std::vector<Interval> out;
  if (x_lo > 0.0 || x_hi < 0.0) {
    out.push_back({1.0 / x_hi, 1.0 / x_lo});
  } else if (x_lo < 0.0 && x_hi > 0.0) {
    out.push_back({-kInf, 1.0 / x_lo});
    out.push_back({1.0 / x_hi, kInf});
  } else if (x_lo == 0.0 && x_hi > 0.0) {
    out.push_back({1.0 / x_hi, kInf});
  } else if (x_hi == 0.0 && x_lo < 0.0) {
    out.push_back({-kInf, 1.0 / x_lo});
  }
  return out;
}

struct XInterval {
  RangeStatus status;
  double lo = 0.0;
  double hi = 0.0;
};

XInterval x_interval(double n, double p) {
  const DeltaBreakdown coeffs = delta_of_beta(1.0, n, p);
  if (std::abs(coeffs.A) < kTieTolerance &&
      std::abs(coeffs.B) < kTieTolerance) {
    return {RangeStatus::special_point};
  }
  // B^2 - A = n (p-1)(2n - (n-2)p)/(n+2)^2; the last factor decides the sign.
  double factor = 2.0 * n - (n - 2.0) * p;
  if (std::abs(factor) < kTieTolerance * (2.0 * n + std::abs(n - 2.0) * p)) {
    factor = 0.0;
  }
  if (factor < 0.0) return {RangeStatus::empty};
  const double root = std::sqrt(n * (p - 1.0) * factor) / (n + 2.0);
  return {RangeStatus::nonempty, coeffs.B - root, coeffs.B + root};
}

}  // namespace

AdmissibleRange m_range(double n, double p) {
  if (!(n > 0.0)) throw DomainError("m_range needs n > 0");
  if (!(p > 1.0)) throw DomainError("m_range needs p > 1");
  AdmissibleRange r{};
  r.n = n;
  r.p = p;
  const Thresholds t = thresholds(n);
  r.p_sharp = t.p_sharp;
  r.p_crit = t.p_crit;
  const DeltaBreakdown coeffs = delta_of_beta(1.0, n, p);
  r.A = coeffs.A;
  r.B = coeffs.B;
  r.C = coeffs.C;
  r.reduced_disc = r.B * r.B - r.A * r.C;
  r.full_disc = 4.0 * r.reduced_disc;
  if (p != n + 2.0) r.beta_excluded = (n + 2.0) / (n + 2.0 - p);

  const XInterval xi = x_interval(n, p);
  r.status = xi.status;
  if (xi.status == RangeStatus::empty) return r;

  double radicand = n * (p - 1.0) * (2.0 * n - (n - 2.0) * p);
  if (xi.status == RangeStatus::special_point || xi.lo == xi.hi) {
    radicand = 0.0;
  }
  const double root = 2.0 * std::sqrt(std::max(radicand, 0.0));
  const double denom = (n + 2.0) * p;
  r.m_minus = (n * p + 2.0 - root) / denom;
  r.m_plus = (n * p + 2.0 + root) / denom;
  if (xi.status == RangeStatus::nonempty) {
    r.beta_intervals = invert_x_interval(xi.lo, xi.hi);
  }
  return r;
}

std::vector<Figure1Row> figure1_table(double n, double p_min, double p_max,
                                      int steps) {
  if (!(p_min > 1.0)) throw DomainError("figure 1 needs p_min > 1");
  if (!(p_max >= p_min)) throw DomainError("figure 1 needs p_max >= p_min");
  if (steps < 0 || (steps == 0 && p_max != p_min)) {
    throw DomainError("figure 1 needs steps >= 1");
  }
  std::vector<Figure1Row> rows;
  rows.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    const double p =
        i == steps ? p_max
                   : p_min + (p_max - p_min) * static_cast<double>(i) / steps;
    const AdmissibleRange r = m_range(n, p);
    rows.push_back({p, r.status, r.m_minus, r.m_plus, n / (n + 2.0),
                    (n - 2.0) / n});
  }
  return rows;
}

std::vector<Interval> beta_range(double n, double p) {
  return m_range(n, p).beta_intervals;
}

bool in_beta_range(double beta, double n, double p) {
  for (const Interval& iv : beta_range(n, p)) {
    if (iv.contains(beta)) return true;
  }
  return false;
}

std::optional<double> interior_beta(double n, double p) {
  const XInterval xi = x_interval(n, p);
  if (xi.status != RangeStatus::nonempty || !(xi.lo < xi.hi)) {
    return std::nullopt;
  }
  const double lo = std::max(xi.lo, 0.0);
  const double hi = std::min(xi.hi, 1.0);
  double x;
  if (lo < hi) {
    x = 0.5 * (lo + hi);
  } else {
    x = 0.5 * (xi.lo + xi.hi);
    if (x == 0.0) x = 0.5 * xi.hi;
  }
  return 1.0 / x;
}

GridFn qform_value(const GridFn& u, double beta, const SpectralPlan& plan,
                   const UltraParams& params) {
  plan.check_shape(u);
  if (!(u.minCoeff() > 0.0)) throw DomainError("q[u] needs u > 0");
  const DeltaBreakdown coeffs = delta_of_beta(beta, params.n(), params.p());
  const Eigen::ArrayXd d1 = plan.derivative(u).array();
  const Eigen::ArrayXd d2 = plan.second_derivative(u).array();
  const Eigen::ArrayXd g = d1.square() / u.array();
  return (d2.square() - 2.0 * coeffs.b * d2 * g + coeffs.c * g.square())
      .matrix();
}

RegularityCoeffs regularity_coeffs(double z, const UltraParams& params) {
  const double n = params.n();
  const double m = params.m();
  const double eps = params.eps();
  const double den = (n + 2.0) * m - n;
  if (std::abs(den) < 1e-14) {
    throw DomainError(
        "(n+2) m - n = 0: beta = (n+2)/(n+2-p) is excluded from the "
        "regularity estimate");
  }
  RegularityCoeffs r{};
  r.alpha = 2.0 / den;
  const double rho2 = 1.0 - z * z;
  r.a = -n * (1.0 - m) * (2.0 - n * (1.0 - m)) * rho2 / (den * den);
  r.b_eps = eps == 0.0 ? 0.0
                       : 2.0 * (1.0 - m) * (params.d() - n) * eps * z /
                             (den * (1.0 + eps - z * z));
  r.c_eps = -drift_prime(z, params);
  r.disc_eps = r.b_eps * r.b_eps - 4.0 * r.a * r.c_eps;
  return r;
}

double lambda_eps(const UltraParams& params, double h0, double h1) {
  const double n = params.n();
  const int d = params.d();
  if (!(n < d)) {
    throw DomainError(
        "adjusted constant needs 0 < n < d; the case n > d is open");
  }
  if (!(h0 > 0.0 && h0 < 1.0)) throw DomainError("h0 must lie in (0,1)");
  if (!(h1 > 0.0)) throw DomainError("h1 must be positive");
  const double g = params.beta() * (params.p() - 1.0) / (n + 2.0) * h1 / h0;
  return n + params.eps() * (n - d) * g * g;
}

}  // namespace ultraflow
