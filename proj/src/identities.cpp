#include "ultraflow/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ultraflow/errors.hpp"
#include "ultraflow/operators.hpp"

namespace ultraflow {

namespace {

constexpr int kDenseSamples = 2001;
// Slope at +-1 below which u counts as satisfying the Neumann condition.
constexpr double kNeumannTolerance = 1e-8;

double horner(const std::vector<double>& c, double z) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  std::vector<double> out;
  for (std::size_t k = 1; k < c.size(); ++k) {
    out.push_back(static_cast<double>(k) * c[k]);
  }
  if (out.empty()) out.push_back(0.0);
  return out;
}

IdentityReport report(double lhs, double rhs, IdentityTag tag) {
  IdentityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
  r.tag = tag;
  return r;
}

struct Pieces {
  Eigen::ArrayXd z, rho2, u, d1, d2;
};

Pieces pieces(const GridFn& u, const SpectralPlan& plan) {
  plan.check_shape(u);
  if (!(u.minCoeff() > 0.0)) throw DomainError("identities need u > 0");
  Pieces p;
  p.z = plan.nodes().array();
  p.rho2 = 1.0 - p.z.square();
  p.u = u.array();
  p.d1 = plan.derivative(u).array();
  p.d2 = plan.second_derivative(u).array();
  return p;
}

void require_plain(const SpectralPlan& plan, const UltraParams& params) {
  const Quadrature& q = plan.quadrature();
  if (q.kind != MeasureKind::plain || q.n != params.n()) {
    throw ValidationError("identity needs the plain rule for dnu_n");
  }
}

void require_regularized(const SpectralPlan& plan, const UltraParams& params) {
  if (!params.regularized_valid()) {
    throw DomainError("regularized measure needs eps > 0 or integer n");
  }
  const Quadrature& q = plan.quadrature();
  const bool ok =
      q.n == params.n() &&
      (q.kind == MeasureKind::regularized ? q.eps == params.eps()
                                          : params.integer_dimension());
  if (!ok) throw ValidationError("identity needs the rule for dnu_{eps,n}");
}

void require_neumann(const GridFn& u, const SpectralPlan& plan) {
  Eigen::VectorXd ends(2);
  ends << -1.0, 1.0;
  const Eigen::VectorXd slope = plan.evaluate(u, ends, 1);
  const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  if (slope.cwiseAbs().maxCoeff() > kNeumannTolerance * scale) {
    throw ValidationError("u violates the Neumann condition u'(+-1) = 0");
  }
}

}  // namespace

double TestFunction::P(double z, int derivative_order) const {
  std::vector<double> c = poly;
  for (int k = 0; k < derivative_order; ++k) c = differentiate(c);
  return horner(c, z);
}

TestFunction make_test_function(std::uint64_t seed, const SpectralPlan& plan,
                                bool neumann, int degree, double amplitude) {
  if (degree < (neumann ? 3 : 1)) {
    throw DomainError("test polynomial degree too small");
  }
  if (!(amplitude > 0.0)) throw DomainError("amplitude must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  TestFunction t;
  t.seed = seed;
  t.neumann = neumann;
  if (neumann) {
    std::vector<double> q(static_cast<std::size_t>(degree - 2));
    for (double& c : q) c = coef(rng);
    // (1 - s^2) Q(s), then integrate from 0.
    std::vector<double> g(q.size() + 2, 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) {
      g[k] += q[k];
      g[k + 2] -= q[k];
    }
    t.poly.assign(g.size() + 1, 0.0);
    t.poly[0] = coef(rng);
    for (std::size_t k = 0; k < g.size(); ++k) {
      t.poly[k + 1] = g[k] / static_cast<double>(k + 1);
    }
  } else {
    t.poly.resize(static_cast<std::size_t>(degree + 1));
    for (double& c : t.poly) c = coef(rng);
  }

  const Eigen::VectorXd grid =
      Eigen::VectorXd::LinSpaced(kDenseSamples, -1.0, 1.0);
  double peak = 0.0;
  for (double z : grid) peak = std::max(peak, std::abs(horner(t.poly, z)));
  if (peak > amplitude) {
    for (double& c : t.poly) c *= amplitude / peak;
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double z : grid) {
    const double v = std::exp(horner(t.poly, z));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  t.h0 = std::min(lo, 1.0 / hi);
  t.u = plan.nodes().unaryExpr(
      [&](double z) { return std::exp(horner(t.poly, z)); });
  return t;
}

std::string to_string(IdentityTag tag) {
  switch (tag) {
    case IdentityTag::gamma2:
      return "gamma2";
    case IdentityTag::lgamma:
      return "lgamma";
    case IdentityTag::gamma2_eps:
      return "gamma2_eps";
    case IdentityTag::lgamma_eps:
      return "lgamma_eps";
  }
  return "unknown";
}

IdentityReport check_gamma2(const GridFn& u, const SpectralPlan& plan,
                            const UltraParams& params, bool require_bc) {
  require_plain(plan, params);
  const Pieces p = pieces(u, plan);
  if (require_bc) require_neumann(u, plan);
  const double n = params.n();
  const Eigen::VectorXd& w = plan.quadrature().weights;
  const Eigen::ArrayXd Lu = p.rho2 * p.d2 - n * p.z * p.d1;
  const double lhs = w.dot(Lu.square().matrix());
  const double rhs = w.dot((p.d2.square() * p.rho2.square() +
                            n * p.rho2 * p.d1.square()).matrix());
  return report(lhs, rhs, IdentityTag::gamma2);
}

IdentityReport check_lgamma(const GridFn& u, const SpectralPlan& plan,
                            const UltraParams& params, bool require_bc) {
  require_plain(plan, params);
  const Pieces p = pieces(u, plan);
  if (require_bc) require_neumann(u, plan);
  const double n = params.n();
  const Eigen::VectorXd& w = plan.quadrature().weights;
  const Eigen::ArrayXd Lu = p.rho2 * p.d2 - n * p.z * p.d1;
  const Eigen::ArrayXd g = p.d1.square() * p.rho2 / p.u;
  const double lhs = w.dot((g * Lu).matrix());
  const double rhs =
      n / (n + 2.0) * w.dot(g.square().matrix()) -
      2.0 * (n - 1.0) / (n + 2.0) * w.dot((g * p.d2 * p.rho2).matrix());
  return report(lhs, rhs, IdentityTag::lgamma);
}

IdentityReport check_gamma2_eps(const GridFn& u, const SpectralPlan& plan,
                                const UltraParams& params) {
  require_regularized(plan, params);
  const Pieces p = pieces(u, plan);
  const OperatorCoeffs oc = OperatorCoeffs::from(params);
  const double n = params.n();
  const double eps = params.eps();
  const Eigen::VectorXd& w = plan.quadrature().weights;
  const Eigen::ArrayXd ell = p.z.unaryExpr([&](double z) { return oc.ell(z); });
  const Eigen::ArrayXd Lu = p.rho2 * p.d2 - ell * p.d1;
  const Eigen::ArrayXd den = 1.0 + eps - p.z.square();
  const Eigen::ArrayXd corr = eps * (n - params.d()) *
                              (1.0 + eps + p.z.square()) / den.square() *
                              p.rho2 * p.d1.square();
  const double lhs = w.dot(Lu.square().matrix());
  const double rhs = w.dot((p.d2.square() * p.rho2.square() +
                            n * p.rho2 * p.d1.square() - corr).matrix());
  return report(lhs, rhs, IdentityTag::gamma2_eps);
}

IdentityReport check_lgamma_eps(const GridFn& u, const SpectralPlan& plan,
                                const UltraParams& params) {
  require_regularized(plan, params);
  const Pieces p = pieces(u, plan);
  const OperatorCoeffs oc = OperatorCoeffs::from(params);
  const double n = params.n();
  const double eps = params.eps();
  const Eigen::VectorXd& w = plan.quadrature().weights;
  const Eigen::ArrayXd ell = p.z.unaryExpr([&](double z) { return oc.ell(z); });
  const Eigen::ArrayXd Lu = p.rho2 * p.d2 - ell * p.d1;
  const Eigen::ArrayXd g = p.d1.square() * p.rho2 / p.u;
  const Eigen::ArrayXd den = 1.0 + eps - p.z.square();
  const double lhs = w.dot((g * Lu).matrix());
  const double rhs =
      n / (n + 2.0) * w.dot(g.square().matrix()) -
      2.0 * (n - 1.0) / (n + 2.0) * w.dot((g * p.d2 * p.rho2).matrix()) +
      2.0 * eps * (n - params.d()) / (n + 2.0) *
          w.dot((g * p.d1 * p.z / den).matrix());
  return report(lhs, rhs, IdentityTag::lgamma_eps);
}

IdentitySweep identity_sweep(double n, double eps, int trials,
                             std::uint64_t seed, int nodes, bool neumann) {
  if (trials < 1) throw DomainError("need at least one trial");
  const UltraParams params = UltraParams::make(n, 3.0, 1.0, eps);
  IdentitySweep out;
  out.n = n;
  out.eps = eps;
  out.trials = trials;

  auto keep_worst = [](IdentityReport& slot, const IdentityReport& r) {
    if (r.residual >= slot.residual) slot = r;
  };

  const int n_plain =
      nodes > 0 ? nodes : default_node_count(params, MeasureKind::plain);
  const SpectralPlan plain = make_plan(params, n_plain, MeasureKind::plain);
  out.nodes = n_plain;
  IdentityReport g2{}, lg{};
  g2.residual = lg.residual = -1.0;
  for (int k = 0; k < trials; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const TestFunction t = make_test_function(s, plain, neumann);
    IdentityReport r = check_gamma2(t.u, plain, params, neumann);
    r.seed = s;
    keep_worst(g2, r);
    r = check_lgamma(t.u, plain, params, neumann);
    r.seed = s;
    keep_worst(lg, r);
  }
  out.worst = {g2, lg};

  if (params.regularized_valid()) {
    const int n_reg = nodes > 0
                          ? nodes
                          : default_node_count(params, MeasureKind::regularized);
    const SpectralPlan reg = make_plan(params, n_reg, MeasureKind::regularized);
    IdentityReport g2e{}, lge{};
    g2e.residual = lge.residual = -1.0;
    for (int k = 0; k < trials; ++k) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
      const TestFunction t = make_test_function(s, reg, false);
      IdentityReport r = check_gamma2_eps(t.u, reg, params);
      r.seed = s;
      keep_worst(g2e, r);
      r = check_lgamma_eps(t.u, reg, params);
      r.seed = s;
      keep_worst(lge, r);
    }
    out.worst.push_back(g2e);
    out.worst.push_back(lge);
  }
  return out;
}

}  // namespace ultraflow
