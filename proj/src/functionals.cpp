#include "ultraflow/functionals.hpp"

#include <cmath>

#include "ultraflow/admissibility.hpp"
#include "ultraflow/errors.hpp"

namespace ultraflow {

namespace {

// Relative slack when comparing p against 2^*.
constexpr double kExponentSlack = 1e-12;

double l2_squared(const GridFn& f, const SpectralPlan& plan) {
  return plan.quadrature().weights.dot(f.cwiseAbs2());
}

double lp_power(const GridFn& f, const SpectralPlan& plan, double p) {
  const GridFn fine = plan.refine(f);
  return plan.refined().weights.dot(fine.cwiseAbs().array().pow(p).matrix());
}

void require_nonzero(const GridFn& f) {
  if (f.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("function is identically zero");
  }
}

}  // namespace

double lp_norm(const GridFn& f, const SpectralPlan& plan, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1");
  plan.check_shape(f);
  return std::pow(lp_power(f, plan, p), 1.0 / p);
}

double fisher(const GridFn& f, const SpectralPlan& plan) {
  const GridFn df = plan.derivative(f);
  const Eigen::VectorXd& z = plan.nodes();
  const Eigen::VectorXd integrand =
      (1.0 - z.array().square()) * df.array().square();
  return plan.quadrature().weights.dot(integrand);
}

DeficitReport deficit(const GridFn& f, const SpectralPlan& plan,
                      const UltraParams& params, double lambda) {
  const double p = params.p();
  const double n = params.n();
  if (p == 2.0) {
    throw DomainError("p = 2 is the log-Sobolev case; use logsob_deficit");
  }
  const double p_crit = critical_exponent(n);
  if (n > 2.0 && p > p_crit * (1.0 + kExponentSlack)) {
    throw DomainError("p exceeds the critical exponent 2n/(n-2)");
  }
  plan.check_shape(f);
  require_nonzero(f);

  DeficitReport r;
  r.p = p;
  r.lambda_used = lambda;
  r.critical = n > 2.0 && std::abs(p - p_crit) <= kExponentSlack * p_crit;
  r.fisher = fisher(f, plan);
  const double l2sq = l2_squared(f, plan);
  if (p == 1.0) {
    const double mean = integrate(plan.quadrature(), f);
    r.entropy_term = l2sq - mean * mean;
  } else {
    const double lp = std::pow(lp_power(f, plan, p), 1.0 / p);
    r.entropy_term = (lp * lp - l2sq) / (p - 2.0);
  }
  r.deficit = r.fisher - lambda * r.entropy_term;
  return r;
}

DeficitReport logsob_deficit(const GridFn& f, const SpectralPlan& plan,
                             const UltraParams& params) {
  plan.check_shape(f);
  require_nonzero(f);
  const double l2sq = l2_squared(f, plan);
  const GridFn fine = plan.refine(f);
  Eigen::VectorXd integrand(fine.size());
  for (Eigen::Index i = 0; i < fine.size(); ++i) {
    const double f2 = fine(i) * fine(i);
    integrand(i) = f2 > 0.0 ? f2 * std::log(f2 / l2sq) : 0.0;
  }
  DeficitReport r;
  r.p = 2.0;
  r.lambda_used = 0.5 * params.n();
  r.fisher = fisher(f, plan);
  r.entropy_term = plan.refined().weights.dot(integrand);
  r.deficit = r.fisher - r.lambda_used * r.entropy_term;
  return r;
}

LyapunovValue lyapunov_F(const GridFn& u, const SpectralPlan& plan,
                         const UltraParams& params, double lambda) {
  plan.check_shape(u);
  if (!(u.minCoeff() > 0.0)) {
    throw DomainError("Lyapunov functional needs u > 0");
  }
  const double p = params.p();
  if (p == 2.0) throw DomainError("Lyapunov functional undefined at p = 2");
  const double beta = params.beta();

  const GridFn w = u.array().pow(beta);
  const GridFn fine = plan.refine(u);
  if (!(fine.minCoeff() > 0.0)) {
    throw DomainError("interpolant of u is not positive on the refined rule");
  }
  const Eigen::VectorXd& wf = plan.refined().weights;
  const GridFn w_fine = fine.array().pow(beta);
  const double l2sq = wf.dot(w_fine.cwiseAbs2());
  const double mass = wf.dot(w_fine.array().pow(p).matrix());
  const double lp_sq = std::pow(mass, 2.0 / p);

  LyapunovValue out;
  out.lambda = lambda;
  out.beta = beta;
  out.mass = mass;
  out.value = fisher(w, plan) + lambda / (p - 2.0) * (l2sq - lp_sq);
  return out;
}

GridFn extremal_profile(const Eigen::VectorXd& z, double n, double a,
                        double b) {
  if (!(std::abs(b) < 1.0)) {
    throw DomainError("extremal profile needs |b| < 1");
  }
  const double expo = -0.5 * (n - 2.0);
  return a * (1.0 - b * z.array()).abs().pow(expo);
}

}  // namespace ultraflow
