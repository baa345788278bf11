#pragma once

#include <string>
#include <vector>

#include "ultraflow/params.hpp"
#include "ultraflow/spectral.hpp"

namespace ultraflow {

enum class FlowKind { heat, nonlinear, regularized };

std::string to_string(FlowKind kind);
/// Throws DomainError for an unknown name.
FlowKind flow_kind_from_string(const std::string& name);

/// Tolerance of the bound monitors (u in [h0, 1/h0], |u'| <= h1). The
/// monitors run on regularized flows only.
inline constexpr double kBoundTolerance = 1e-8;
/// Target record count when record_every is 0.
inline constexpr long kAutoRecords = 1000;
/// Node values of u below this abort a run.
inline constexpr double kPositivityFloor = 1e-12;

struct FlowConfig {
  FlowKind kind = FlowKind::heat;
  UltraParams params = UltraParams::make(1.0, 3.0);
  double dt = 1e-3;     ///< requested step (heat: spacing of records)
  double t_end = 1.0;
  int record_every = 1;  ///< 0: about kAutoRecords records (heat: 1)
  double lambda = 0.0;  ///< constant in F
  double h0 = 0.0;      ///< lower bound scale, 0 disables the monitor
  double h1 = 0.0;      ///< gradient bound, 0 disables the monitor

  /// alpha = 2/((n+2) m - n).
  double alpha() const;
  /// Checks kind-specific invariants; throws DomainError. For the heat kind
  /// beta must be 1 (so kappa = p - 1).
  void validate() const;
};

/// h0 = min(min u, 1/max u) and h1 = max |u'| of the interpolant of u,
/// sampled on the nodes, +-1 and a dense uniform grid.
struct DataBounds {
  double h0;
  double h1;
};

DataBounds data_bounds(const GridFn& u, const SpectralPlan& plan);

/// Config with lambda = n (heat, nonlinear) or lambda_eps(params, h0, h1)
/// (regularized; lambda = n when u0 is constant), and h0/h1 taken from u0.
/// Heat configs get beta = 1.
FlowConfig make_flow_config(FlowKind kind, const UltraParams& params,
                            double dt, double t_end, const GridFn& u0,
                            const SpectralPlan& plan);

struct BoundEvent {
  double t;
  std::string what;
  double value;
};

/// Diagnostics of one run, one entry per recorded time.
struct FlowTrace {
  std::vector<double> times;
  std::vector<double> mass;         ///< int u^{beta p}
  std::vector<double> fisher_beta;  ///< int rho^2 |(u^beta)'|^2
  std::vector<double> F_values;
  std::vector<double> u_min, u_max;
  std::vector<double> grad_max;         ///< max |u'|
  std::vector<double> signed_grad_max;  ///< max sgn(n+2-beta(n+2-p)) u'
  std::vector<double> signed_grad_min;
  std::vector<BoundEvent> events;
  FlowConfig params_echo;
  GridFn final_u;
  double dt_used = 0.0;
  long steps = 0;
  double equilibrium_distance = 0.0;  ///< ||u - mass^{1/(beta p)}||_inf
  bool aborted = false;
  double failure_time = 0.0;
  std::string failure;

  std::size_t size() const noexcept { return times.size(); }
  double relative_mass_drift() const;
  /// Largest F_{k+1} - F_k - (rel |F_k| + abs) over the trace (<= 0 when
  /// F is non-increasing within the tolerance).
  double worst_F_increase(double rel, double abs) const;
};

/// Heat flow through v = u^p: exact mode-wise decay e^{-lambda_k t} in the
/// plan's basis. Needs a plain plan for n.
FlowTrace run_heat_flow(const GridFn& u0, const SpectralPlan& plan,
                        const FlowConfig& cfg);

/// Nonlinear flow in v-form, dv/dt = (1/m) L v^m with v = u^{beta p},
/// integrated by classical RK4. Needs a plain plan for n.
FlowTrace run_nonlinear_flow(const GridFn& u0, const SpectralPlan& plan,
                             const FlowConfig& cfg);

/// Same with L_{eps,n} on dnu_{eps,n}. Needs a regularized plan.
FlowTrace run_regularized_flow(const GridFn& u0, const SpectralPlan& plan,
                               const FlowConfig& cfg);

FlowTrace run_flow(const GridFn& u0, const SpectralPlan& plan,
                   const FlowConfig& cfg);

/// (1/(2 beta^2)) dF/dt along the flow through u, in closed form:
///
///   (lambda - n) I1 - I2 + 2 (n-1)/(n+2) (kappa+beta-1) I3
///   - [kappa (beta-1) + n (kappa+beta-1)/(n+2)] I4
///   - eps (n-d) (2 gamma I5 - I6)
///
/// with I1 = int rho^2 u'^2, I2 = int u''^2 rho^4, I3 = int u'' u'^2 rho^4/u,
/// I4 = int u'^4 rho^4/u^2, I5 = int u'^3 rho^2 z/((1+eps-z^2) u),
/// I6 = int u'^2 (1+eps+z^2) rho^2/(1+eps-z^2)^2 and
/// gamma = (kappa+beta-1)/(n+2). eps is taken as 0 except for the
/// regularized kind.
double dF_dt_closed_form(const GridFn& u, const SpectralPlan& plan,
                         const FlowConfig& cfg);

/// Result of scanning u = (1 + s z)^gamma and u = exp(a z) for the
/// largest relative growth (dF/dt)/|F| along the heat flow. Candidates
/// whose u^p the plan cannot resolve are skipped.
struct CounterexampleSearch {
  bool found = false;  ///< some candidate has dF/dt > 0
  std::string family;
  double s = 0.0;      ///< s or a
  double gamma = 0.0;
  double dF_dt = 0.0;  ///< (1/2) dF/dt of the best candidate (beta = 1)
  GridFn u;
};

/// Above 2^# the pointwise form q[u] has c < b^2, and u = (1 + s z)^gamma
/// with gamma = 1/(1 - b) makes q < 0 everywhere. The scan includes that
/// exponent. Needs a plain plan for params.n().
CounterexampleSearch search_heat_counterexample(const SpectralPlan& plan,
                                                const UltraParams& params);

}  // namespace ultraflow
