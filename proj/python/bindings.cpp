#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ultraflow/admissibility.hpp"
#include "ultraflow/errors.hpp"
#include "ultraflow/flows.hpp"
#include "ultraflow/fnspec.hpp"
#include "ultraflow/functionals.hpp"
#include "ultraflow/identities.hpp"
#include "ultraflow/measure.hpp"

namespace py = pybind11;
using namespace ultraflow;

namespace {

// A function argument is either an expression string ("1 + 0.1*z") or a
// callable taking the node array and returning the values.
GridFn sample(const py::object& fn, const SpectralPlan& plan, double n) {
  if (py::isinstance<py::str>(fn)) {
    return FnSpec::parse(fn.cast<std::string>()).sample(plan.nodes(), n);
  }
  GridFn out = fn(plan.nodes()).cast<GridFn>();
  if (out.size() != plan.size()) {
    throw ShapeError("callable returned " + std::to_string(out.size()) +
                     " values for " + std::to_string(plan.size()) + " nodes");
  }
  return out;
}

py::object opt(const std::optional<double>& v) {
  return v ? py::cast(*v) : py::none();
}

py::dict range_dict(const AdmissibleRange& r) {
  py::dict d;
  d["n"] = r.n;
  d["p"] = r.p;
  d["status"] = to_string(r.status);
  d["m_minus"] = opt(r.m_minus);
  d["m_plus"] = opt(r.m_plus);
  d["A"] = r.A;
  d["B"] = r.B;
  d["C"] = r.C;
  py::list beta;
  for (const Interval& i : r.beta_intervals) beta.append(py::make_tuple(i.lo, i.hi));
  d["beta_intervals"] = beta;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ultraspherical functional inequalities and flows.";
  m.attr("__version__") = "0.3.0";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());

  m.def("thresholds", [](double n) {
    const Thresholds t = thresholds(n);
    return py::make_tuple(t.p_sharp, t.p_crit);
  }, py::arg("n"), "(2^#, 2^*) for dimension n.");

  m.def("delta_of_beta", [](double beta, double n, double p) {
    const DeltaBreakdown b = delta_of_beta(beta, n, p);
    py::dict d;
    d["A"] = b.A;
    d["B"] = b.B;
    d["C"] = b.C;
    d["delta"] = b.delta;
    return d;
  }, py::arg("beta"), py::arg("n"), py::arg("p"));

  m.def("m_range", [](double n, double p) { return range_dict(m_range(n, p)); },
        py::arg("n"), py::arg("p"), "Admissible interval of m with its status.");

  m.def("interior_beta", [](double n, double p) { return opt(interior_beta(n, p)); },
        py::arg("n"), py::arg("p"));

  m.def("figure1_table", [](double n, double p_min, double p_max, int steps) {
    py::list rows;
    for (const Figure1Row& r : figure1_table(n, p_min, p_max, steps)) {
      rows.append(py::make_tuple(r.p, opt(r.m_minus), opt(r.m_plus), r.m_excluded, r.m_lower));
    }
    return rows;
  }, py::arg("n"), py::arg("p_min"), py::arg("p_max"), py::arg("steps") = 200,
     "Rows (p, m_minus, m_plus, n/(n+2), (n-2)/n).");

  m.def("nodes", [](double n, int N) {
    return make_plan(UltraParams::make(n, 3.0), N, MeasureKind::plain).nodes();
  }, py::arg("n"), py::arg("N") = kDefaultNodes, "Gauss nodes of the measure.");

  m.def("deficit", [](const py::object& f, double n, double p, std::optional<double> lam, int N) {
    const UltraParams params = UltraParams::make(n, p);
    const SpectralPlan plan = make_plan(params, N, MeasureKind::plain);
    const GridFn g = sample(f, plan, n);
    const DeficitReport r = p == 2.0 ? logsob_deficit(g, plan, params)
                                     : deficit(g, plan, params, lam.value_or(n));
    py::dict d;
    d["deficit"] = r.deficit;
    d["fisher"] = r.fisher;
    d["entropy_term"] = r.entropy_term;
    d["lambda"] = r.lambda_used;
    return d;
  }, py::arg("f"), py::arg("n"), py::arg("p"), py::arg("lam") = py::none(),
     py::arg("nodes") = kDefaultNodes,
     "Sobolev-type deficit of f (log-Sobolev at p = 2).");

  m.def("run_flow", [](const std::string& kind, double n, double p, std::optional<double> beta,
                       double eps, const py::object& u0, double t_end, double dt,
                       int record_every, int N) {
    const FlowKind k = flow_kind_from_string(kind);
    double b = 1.0;
    if (k != FlowKind::heat) {
      const auto ib = interior_beta(n, p);
      if (!beta && !ib) throw DomainError("no interior beta for these (n, p)");
      b = beta.value_or(ib.value_or(1.0));
    }
    const UltraParams params = UltraParams::make(n, p, b, eps);
    const MeasureKind mk = k == FlowKind::regularized ? MeasureKind::regularized : MeasureKind::plain;
    const SpectralPlan plan = make_plan(params, N > 0 ? N : default_node_count(params, mk), mk);
    const GridFn u = sample(u0, plan, n);
    FlowConfig cfg = make_flow_config(k, params, dt, t_end, u, plan);
    cfg.record_every = record_every;
    FlowTrace tr;
    {
      py::gil_scoped_release release;
      tr = run_flow(u, plan, cfg);
    }
    py::dict d;
    d["t"] = tr.times;
    d["mass"] = tr.mass;
    d["F"] = tr.F_values;
    d["fisher_beta"] = tr.fisher_beta;
    d["u_min"] = tr.u_min;
    d["u_max"] = tr.u_max;
    d["nodes"] = plan.nodes();
    d["final_u"] = tr.final_u;
    d["steps"] = tr.steps;
    d["lambda"] = cfg.lambda;
    d["beta"] = b;
    d["equilibrium_distance"] = tr.equilibrium_distance;
    d["aborted"] = tr.aborted;
    d["failure"] = tr.failure;
    d["bound_events"] = tr.events.size();
    return d;
  }, py::arg("kind"), py::arg("n"), py::arg("p"), py::arg("beta") = py::none(),
     py::arg("eps") = 0.0, py::arg("u0") = "1 + 0.1*z + 0.05*z^2", py::arg("t_end") = 1.0,
     py::arg("dt") = 1e-3, py::arg("record_every") = 0, py::arg("nodes") = 0,
     "Runs a heat, nonlinear or regularized flow and returns its trace.");

  m.def("identity_sweep", [](double n, double eps, int trials, std::uint64_t seed) {
    const IdentitySweep s = identity_sweep(n, eps, trials, seed);
    py::dict d;
    for (const IdentityReport& r : s.worst) d[py::str(to_string(r.tag))] = r.residual;
    return d;
  }, py::arg("n"), py::arg("eps") = 0.0, py::arg("trials") = 100, py::arg("seed") = 0,
     "Worst residual of each integral identity over random test functions.");
}
