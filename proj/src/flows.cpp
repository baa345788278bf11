#include "ultraflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ultraflow/admissibility.hpp"
#include "ultraflow/errors.hpp"
#include "ultraflow/functionals.hpp"
#include "ultraflow/operators.hpp"

namespace ultraflow {

std::string to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::heat:
      return "heat";
    case FlowKind::nonlinear:
      return "nonlinear";
    case FlowKind::regularized:
      return "regularized";
  }
  return "unknown";
}

FlowKind flow_kind_from_string(const std::string& name) {
  if (name == "heat") return FlowKind::heat;
  if (name == "nonlinear") return FlowKind::nonlinear;
  if (name == "regularized") return FlowKind::regularized;
  throw DomainError("unknown flow kind '" + name + "'");
}

double FlowConfig::alpha() const {
  const double den = (params.n() + 2.0) * params.m() - params.n();
  if (std::abs(den) < 1e-14) {
    throw DomainError("(n+2) m - n = 0, alpha undefined");
  }
  return 2.0 / den;
}

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(t_end >= 0.0)) throw DomainError("t_end must be non-negative");
  if (record_every < 0) throw DomainError("record_every must be >= 0");
  if (params.p() == 2.0) throw DomainError("F is undefined at p = 2");
  if (kind == FlowKind::heat && params.beta() != 1.0) {
    throw DomainError("the heat flow runs with beta = 1");
  }
  if (kind == FlowKind::regularized && !params.regularized_valid()) {
    throw DomainError("regularized flow needs eps > 0 or integer n");
  }
  alpha();
}

DataBounds data_bounds(const GridFn& u, const SpectralPlan& plan) {
  plan.check_shape(u);
  constexpr int kDense = 2001;
  const Eigen::Index N = plan.size();
  Eigen::VectorXd pts(kDense + N);
  pts.head(kDense) = Eigen::VectorXd::LinSpaced(kDense, -1.0, 1.0);
  pts.tail(N) = plan.nodes();
  const Eigen::VectorXd val = plan.evaluate(u, pts, 0);
  const Eigen::VectorXd der = plan.evaluate(u, pts, 1);
  const double lo = val.minCoeff();
  const double hi = val.maxCoeff();
  if (!(lo > 0.0)) throw DomainError("data must be positive");
  return {std::min(lo, 1.0 / hi), der.cwiseAbs().maxCoeff()};
}

FlowConfig make_flow_config(FlowKind kind, const UltraParams& params,
                            double dt, double t_end, const GridFn& u0,
                            const SpectralPlan& plan) {
  FlowConfig cfg;
  cfg.kind = kind;
  cfg.params = kind == FlowKind::heat ? params.with_beta(1.0) : params;
  cfg.dt = dt;
  cfg.t_end = t_end;
  const DataBounds b = data_bounds(u0, plan);
  cfg.h0 = b.h0;
  cfg.h1 = b.h1;
  cfg.lambda = params.n();
  if (kind == FlowKind::regularized && params.n() < params.d() &&
      b.h1 > 0.0 && b.h0 < 1.0) {
    cfg.lambda = lambda_eps(cfg.params, b.h0, b.h1);
  }
  cfg.validate();
  return cfg;
}

double FlowTrace::relative_mass_drift() const {
  if (mass.empty()) return 0.0;
  double worst = 0.0;
  for (double m : mass) {
    worst = std::max(worst, std::abs(m - mass.front()));
  }
  return worst / std::abs(mass.front());
}

double FlowTrace::worst_F_increase(double rel, double abs) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < F_values.size(); ++k) {
    const double excess = F_values[k] - F_values[k - 1] -
                          (rel * std::abs(F_values[k - 1]) + abs);
    worst = std::max(worst, excess);
  }
  return F_values.size() < 2 ? 0.0 : worst;
}

namespace {

void check_plan(const SpectralPlan& plan, const FlowConfig& cfg) {
  const Quadrature& q = plan.quadrature();
  const bool want_reg = cfg.kind == FlowKind::regularized;
  const bool ok = want_reg ? (q.kind == MeasureKind::regularized &&
                              q.n == cfg.params.n() &&
                              q.eps == cfg.params.eps())
                           : (q.kind == MeasureKind::plain &&
                              q.n == cfg.params.n());
  if (!ok) {
    throw ValidationError("plan does not match the flow's measure");
  }
}

class Recorder {
 public:
  Recorder(const SpectralPlan& plan, const FlowConfig& cfg, FlowTrace& trace)
      : plan_(plan), cfg_(cfg), trace_(trace) {
    const UltraParams& P = cfg.params;
    const double s = P.n() + 2.0 - P.beta() * (P.n() + 2.0 - P.p());
    sign_ = s >= 0.0 ? 1.0 : -1.0;
    inv_power_ = 1.0 / (P.beta() * P.p());
  }

  GridFn u_of(const GridFn& v) const {
    return v.array().pow(inv_power_).matrix();
  }

  void record(double t, const GridFn& v) {
    const GridFn u = u_of(v);
    const GridFn w = u.array().pow(cfg_.params.beta()).matrix();
    const GridFn du = plan_.derivative(u);
    trace_.times.push_back(t);
    trace_.mass.push_back(plan_.quadrature().weights.dot(v));
    trace_.fisher_beta.push_back(fisher(w, plan_));
    trace_.F_values.push_back(
        lyapunov_F(u, plan_, cfg_.params, cfg_.lambda).value);
    const double lo = u.minCoeff();
    const double hi = u.maxCoeff();
    const double g = du.cwiseAbs().maxCoeff();
    trace_.u_min.push_back(lo);
    trace_.u_max.push_back(hi);
    trace_.grad_max.push_back(g);
    trace_.signed_grad_max.push_back((sign_ * du).maxCoeff());
    trace_.signed_grad_min.push_back((sign_ * du).minCoeff());
    if (cfg_.kind != FlowKind::regularized) return;
    if (cfg_.h0 > 0.0) {
      if (lo < cfg_.h0 - kBoundTolerance) {
        trace_.events.push_back({t, "u_min below h0", lo});
      }
      if (hi > 1.0 / cfg_.h0 + kBoundTolerance) {
        trace_.events.push_back({t, "u_max above 1/h0", hi});
      }
    }
    if (cfg_.h1 > 0.0 && g > cfg_.h1 + kBoundTolerance) {
      trace_.events.push_back({t, "max |u'| above h1", g});
    }
  }

  void finish(const GridFn& v) {
    const GridFn u = u_of(v);
    trace_.final_u = u;
    const double level = std::pow(trace_.mass.back(), inv_power_);
    trace_.equilibrium_distance = (u.array() - level).abs().maxCoeff();
  }

  bool positive(const GridFn& v) const {
    if (!v.allFinite() || !(v.minCoeff() > 0.0)) return false;
    return std::pow(v.minCoeff(), inv_power_) >= kPositivityFloor;
  }

 private:
  const SpectralPlan& plan_;
  const FlowConfig& cfg_;
  FlowTrace& trace_;
  double sign_ = 1.0;
  double inv_power_ = 1.0;
};

void abort_trace(FlowTrace& trace, double t, const std::string& why) {
  trace.aborted = true;
  trace.failure_time = t;
  trace.failure = why;
}

FlowTrace run_v_form(const GridFn& u0, const SpectralPlan& plan,
                     const FlowConfig& cfg, const Eigen::MatrixXd& A) {
  FlowTrace trace;
  trace.params_echo = cfg;
  Recorder rec(plan, cfg, trace);
  const double power = cfg.params.beta() * cfg.params.p();
  const double m = cfg.params.m();
  GridFn v = u0.array().pow(power).matrix();
  if (!rec.positive(v)) throw DomainError("initial data must be positive");

  // Explicit stability: the linearization is v^{m-1} L, whose spectrum
  // reaches lambda_{N-1}; the max principle keeps v within its initial range.
  const double lam_top = eigenvalue(cfg.params.n(), plan.size() - 1);
  const double vmax_pow = std::max(std::pow(v.minCoeff(), m - 1.0),
                                   std::pow(v.maxCoeff(), m - 1.0));
  double h = std::min(cfg.dt, 0.5 / (lam_top * std::max(1.0, vmax_pow)));
  const long steps = cfg.t_end > 0.0
                         ? static_cast<long>(std::ceil(cfg.t_end / h - 1e-9))
                         : 0;
  if (steps > 0) h = cfg.t_end / static_cast<double>(steps);
  trace.dt_used = h;
  const long every = cfg.record_every > 0
                         ? cfg.record_every
                         : std::max(1L, steps / kAutoRecords);

  auto rhs = [&](const GridFn& x) -> GridFn {
    return (A * x.array().pow(m).matrix()) / m;
  };

  rec.record(0.0, v);
  for (long k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * h;
    const GridFn k1 = rhs(v);
    const GridFn v2 = v + 0.5 * h * k1;
    if (!rec.positive(v2)) { abort_trace(trace, t0, "positivity lost"); break; }
    const GridFn k2 = rhs(v2);
    const GridFn v3 = v + 0.5 * h * k2;
    if (!rec.positive(v3)) { abort_trace(trace, t0, "positivity lost"); break; }
    const GridFn k3 = rhs(v3);
    const GridFn v4 = v + h * k3;
    if (!rec.positive(v4)) { abort_trace(trace, t0, "positivity lost"); break; }
    const GridFn k4 = rhs(v4);
    GridFn next = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t = static_cast<double>(k) * h;
    if (!rec.positive(next)) { abort_trace(trace, t, "positivity lost"); break; }
    v = std::move(next);
    trace.steps = k;
    if (k % every == 0 || k == steps) rec.record(t, v);
  }
  rec.finish(v);
  return trace;
}

}  // namespace

FlowTrace run_heat_flow(const GridFn& u0, const SpectralPlan& plan,
                        const FlowConfig& cfg) {
  if (cfg.kind != FlowKind::heat) throw ValidationError("config is not heat");
  cfg.validate();
  check_plan(plan, cfg);
  plan.check_shape(u0);
  if (!(u0.minCoeff() > 0.0)) {
    throw DomainError("initial data must be positive");
  }
  FlowTrace trace;
  trace.params_echo = cfg;
  Recorder rec(plan, cfg, trace);
  const GridFn v0 = u0.array().pow(cfg.params.p()).matrix();
  const Eigen::VectorXd c0 = plan.coefficients(v0);
  Eigen::VectorXd lam(c0.size());
  for (Eigen::Index k = 0; k < c0.size(); ++k) {
    lam(k) = eigenvalue(cfg.params.n(), static_cast<int>(k));
  }
  const double spacing = cfg.dt * std::max(1, cfg.record_every);
  const long records =
      static_cast<long>(std::ceil(cfg.t_end / spacing - 1e-9));
  trace.dt_used = cfg.dt;
  GridFn v = v0;
  rec.record(0.0, v);
  for (long k = 1; k <= records; ++k) {
    const double t = std::min(cfg.t_end, static_cast<double>(k) * spacing);
    const Eigen::VectorXd c = c0.cwiseProduct((-lam * t).array().exp().matrix());
    GridFn next = plan.vandermonde() * c;
    if (!rec.positive(next)) {
      abort_trace(trace, t, "positivity lost");
      break;
    }
    v = std::move(next);
    trace.steps = k;
    rec.record(t, v);
  }
  rec.finish(v);
  return trace;
}

FlowTrace run_nonlinear_flow(const GridFn& u0, const SpectralPlan& plan,
                             const FlowConfig& cfg) {
  if (cfg.kind != FlowKind::nonlinear) {
    throw ValidationError("config is not nonlinear");
  }
  cfg.validate();
  check_plan(plan, cfg);
  plan.check_shape(u0);
  return run_v_form(u0, plan, cfg, L_matrix(plan, cfg.params));
}

FlowTrace run_regularized_flow(const GridFn& u0, const SpectralPlan& plan,
                               const FlowConfig& cfg) {
  if (cfg.kind != FlowKind::regularized) {
    throw ValidationError("config is not regularized");
  }
  cfg.validate();
  check_plan(plan, cfg);
  plan.check_shape(u0);
  return run_v_form(u0, plan, cfg, L_eps_matrix(plan, cfg.params));
}

FlowTrace run_flow(const GridFn& u0, const SpectralPlan& plan,
                   const FlowConfig& cfg) {
  switch (cfg.kind) {
    case FlowKind::heat:
      return run_heat_flow(u0, plan, cfg);
    case FlowKind::nonlinear:
      return run_nonlinear_flow(u0, plan, cfg);
    case FlowKind::regularized:
      return run_regularized_flow(u0, plan, cfg);
  }
  throw ValidationError("unknown flow kind");
}

double dF_dt_closed_form(const GridFn& u, const SpectralPlan& plan,
                         const FlowConfig& cfg) {
  plan.check_shape(u);
  if (!(u.minCoeff() > 0.0)) throw DomainError("dF/dt needs u > 0");
  const UltraParams& P = cfg.params;
  const double n = P.n();
  const double beta = P.beta();
  const double kappa = P.kappa();
  const double eps = cfg.kind == FlowKind::regularized ? P.eps() : 0.0;
  const double nd = n - P.d();

  const Eigen::ArrayXd z = plan.nodes().array();
  const Eigen::ArrayXd rho2 = 1.0 - z.square();
  const Eigen::ArrayXd d1 = plan.derivative(u).array();
  const Eigen::ArrayXd d2 = plan.second_derivative(u).array();
  const Eigen::ArrayXd uu = u.array();
  const Eigen::VectorXd& w = plan.quadrature().weights;
  auto integral = [&](const Eigen::ArrayXd& f) { return w.dot(f.matrix()); };

  const double I1 = integral(rho2 * d1.square());
  const double I2 = integral(d2.square() * rho2.square());
  const double I3 = integral(d2 * d1.square() * rho2.square() / uu);
  const double I4 = integral(d1.square().square() * rho2.square() / uu.square());
  const double s = kappa + beta - 1.0;
  double val = (cfg.lambda - n) * I1 - I2 + 2.0 * (n - 1.0) / (n + 2.0) * s * I3 -
               (kappa * (beta - 1.0) + n * s / (n + 2.0)) * I4;
  if (eps != 0.0 && nd != 0.0) {
    const Eigen::ArrayXd g = 1.0 + eps - z.square();
    const double I5 = integral(d1.cube() * rho2 * z / (g * uu));
    const double I6 =
        integral(d1.square() * (1.0 + eps + z.square()) * rho2 / g.square());
    const double gamma = s / (n + 2.0);
    val -= eps * nd * (2.0 * gamma * I5 - I6);
  }
  return val;
}


CounterexampleSearch search_heat_counterexample(const SpectralPlan& plan,
                                                const UltraParams& params) {
  FlowConfig cfg;
  cfg.kind = FlowKind::heat;
  cfg.params = params.with_beta(1.0);
  cfg.lambda = params.n();
  check_plan(plan, cfg);
  const Eigen::ArrayXd z = plan.nodes().array();

  std::vector<double> gammas;
  for (int k = -18; k <= 18; ++k) {
    if (k != 0) gammas.push_back(k / 6.0);
  }
  const double b = delta_of_beta(1.0, params.n(), params.p()).b;
  if (b != 1.0) gammas.push_back(1.0 / (1.0 - b));

  CounterexampleSearch best;
  best.dF_dt = -std::numeric_limits<double>::infinity();
  double best_rate = -std::numeric_limits<double>::infinity();
  auto consider = [&](const char* family, double s, double gamma,
                      const GridFn& u) {
    const GridFn v = u.array().pow(params.p()).matrix();
    if (plan.tail_ratio(v) > kTailWarning) return;
    const double val = dF_dt_closed_form(u, plan, cfg);
    const double F = std::abs(lyapunov_F(u, plan, cfg.params, cfg.lambda).value);
    const double rate = val / std::max(F, 1e-300);
    if (rate > best_rate) {
      best_rate = rate;
      best.family = family;
      best.s = s;
      best.gamma = gamma;
      best.dF_dt = val;
      best.u = u;
    }
  };
  for (int i = 1; i <= 9; ++i) {
    const double s = 0.1 * i;
    for (double gamma : gammas) {
      consider("power", s, gamma, ((1.0 + s * z).pow(gamma)).matrix());
    }
    consider("exp", s, 0.0, ((s * z).exp()).matrix());
  }
  best.found = best_rate > 0.0;
  return best;
}

}  // namespace ultraflow
