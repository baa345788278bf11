#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultraflow/params.hpp"
#include "ultraflow/spectral.hpp"

namespace ultraflow {

/// Bakry-Emery exponent 2^# = (2n^2 + 1)/(n - 1)^2; +inf at n = 1.
double bakry_emery_exponent(double n);
/// Critical exponent 2^* = 2n/(n - 2) for n > 2, +inf otherwise.
double critical_exponent(double n);

struct Thresholds {
  double p_sharp;
  double p_crit;
};

Thresholds thresholds(double n);

/// The discriminant of the carre du champ quadratic form as a function of
/// beta, delta(beta) = A beta^2 - 2 B beta + C, together with the
/// coefficients b and c of q[u] at this beta (delta = b^2 - c).
struct DeltaBreakdown {
  double A, B, C;
  double kappa;
  double b, c;
  double delta;
};

DeltaBreakdown delta_of_beta(double beta, double n, double p);

/// Interval with possibly infinite ends; ends are closed unless infinite.
struct Interval {
  double lo;
  double hi;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class RangeStatus {
  nonempty,      ///< at least one admissible value
  empty,         ///< B^2 - AC < 0: n > 2 and p > 2^*
  special_point  ///< A = B = 0, delta == 1: (n,p) = (3,6)
};

std::string to_string(RangeStatus status);

/// Admissible exponents for the nonlinear flow at (n, p).
///
/// The admissible set in m is [m_minus, m_plus] with
///
///   m_pm = (n p + 2 +- 2 sqrt(n (p-1)(2n - (n-2) p))) / ((n + 2) p),
///
/// obtained by writing delta(beta) <= 0 as x^2 - 2 B x + A <= 0 in
/// x = 1/beta and mapping x to m = 1 + (2/p)(x - 1).
struct AdmissibleRange {
  double n, p;
  double p_sharp, p_crit;
  double A, B, C;
  double reduced_disc;  ///< B^2 - AC
  double full_disc;     ///< (2B)^2 - 4AC = 4 n (p-1)(2n - (n-2)p)/(n+2)^2
  RangeStatus status;
  std::optional<double> m_minus, m_plus;
  /// Admissible beta: up to two intervals (the map beta -> m has a pole at 0).
  std::vector<Interval> beta_intervals;
  /// beta = (n+2)/(n+2-p), where (n+2) m - n vanishes; absent when p = n+2.
  std::optional<double> beta_excluded;
};

AdmissibleRange m_range(double n, double p);

/// One sample of the admissible m-range along a p-grid, with the reference
/// levels n/(n+2) (where (n+2)m - n vanishes) and (n-2)/n.
struct Figure1Row {
  double p;
  RangeStatus status;
  std::optional<double> m_minus, m_plus;
  double m_excluded;  ///< n/(n+2)
  double m_lower;     ///< (n-2)/n
};

/// steps + 1 equally spaced p in [p_min, p_max]. Throws DomainError unless
/// 1 < p_min <= p_max and steps >= 1 (steps may be 0 when p_min == p_max).
std::vector<Figure1Row> figure1_table(double n, double p_min, double p_max,
                                      int steps);

/// The set R(n,p) of beta with delta(beta) <= 0, as intervals. Throws
/// DomainError unless p > 1.
std::vector<Interval> beta_range(double n, double p);

bool in_beta_range(double beta, double n, double p);

/// An admissible beta strictly inside R(n,p), preferring beta > 1: the
/// midpoint in x = 1/beta of R's image intersected with (0, 1) when that is
/// nonempty, else the midpoint of the whole x-interval. Empty if no beta is
/// admissible.
std::optional<double> interior_beta(double n, double p);

/// m from beta: 1 + (2/p)(1/beta - 1).
double m_of_beta(double beta, double p);
/// beta from m; throws DomainError where m = 1 - 2/p (beta infinite).
double beta_of_m(double m, double p);

/// Pointwise values of q[u] = |u''|^2 - 2b u''|u'|^2/u + c |u'|^4/u^2 at the
/// plan's nodes, with b and c evaluated at the given beta.
GridFn qform_value(const GridFn& u, double beta, const SpectralPlan& plan,
                   const UltraParams& params);

/// Coefficients of the quadratic p_eps(f, z) = a f^2 + b_eps f + c_eps with
/// alpha fixed to 2 / ((n + 2) m - n), and its discriminant b^2 - 4ac.
struct RegularityCoeffs {
  double a;
  double b_eps;
  double c_eps;
  double disc_eps;
  double alpha;
};

/// Throws DomainError when (n + 2) m - n = 0.
RegularityCoeffs regularity_coeffs(double z, const UltraParams& params);

/// lambda = n + eps (n - d) (beta (p - 1)/(n + 2) * h1/h0)^2.
/// Throws DomainError unless 0 < n < d, 0 < h0 < 1 and h1 > 0.
double lambda_eps(const UltraParams& params, double h0, double h1);

}  // namespace ultraflow
