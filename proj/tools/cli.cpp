#include "cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ultraflow/admissibility.hpp"
#include "ultraflow/errors.hpp"
#include "ultraflow/flows.hpp"
#include "ultraflow/fnspec.hpp"
#include "ultraflow/functionals.hpp"
#include "ultraflow/identities.hpp"

#ifndef ULTRAFLOW_VERSION
#define ULTRAFLOW_VERSION "0.0.0"
#endif

namespace ultraflow::cli {

using Json = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

// Raised for a bad command line or invalid parameters; exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  bool json = false;
  int nodes = 0;
  std::string out;
  std::string manifest;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Machine-readable JSON report");
  sub->add_option("--nodes", c.nodes, "Quadrature node count")
      ->check(CLI::Range(2, 100000));
  sub->add_option("--out", c.out, "Write the primary output to this file");
  sub->add_option("--manifest", c.manifest,
                  "Manifest path (default: <out>.manifest.json)");
}

int resolve_nodes(const Common& c, const UltraParams& params, MeasureKind kind) {
  if (c.nodes > 0) return c.nodes;
  if (const char* env = std::getenv("ULTRAFLOW_NODES"); env && *env) {
    int v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec != std::errc() || res.ptr != end || v < 2) {
      throw UsageError("ULTRAFLOW_NODES must be an integer >= 2");
    }
    return v;
  }
  return default_node_count(params, kind);
}

Json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json opt_num(const std::optional<double>& v) {
  return v ? num(*v) : Json(nullptr);
}

std::string scalar_text(const Json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += scalar_text(v[i]);
    }
    return s + "]";
  }
  return v.dump();
}

void print_text(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, val] : j.items()) {
    if (val.is_object()) {
      os << pad << key << ":\n";
      print_text(os, val, indent + 2);
    } else if (val.is_array()) {
      os << pad << key << ":\n";
      for (const auto& item : val) {
        if (item.is_object()) {
          os << pad << "  -\n";
          print_text(os, item, indent + 4);
        } else {
          os << pad << "  - " << scalar_text(item) << '\n';
        }
      }
    } else {
      os << pad << key << ": " << scalar_text(val) << '\n';
    }
  }
}

std::string render(const Json& report, bool json) {
  std::ostringstream os;
  if (json) {
    os << report.dump(2) << '\n';
  } else {
    print_text(os, report, 0);
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

void write_manifest(const Common& c, const std::string& command,
                    const Json& parameters, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  if (c.out.empty()) return;
  Json m;
  m["command"] = command;
  m["parameters"] = parameters;
  m["tool_version"] = ULTRAFLOW_VERSION;
  m["seed"] = seed;
  Json outs = Json::array();
  for (const auto& o : outputs) outs.push_back(o);
  const std::string path =
      c.manifest.empty() ? c.out + ".manifest.json" : c.manifest;
  outs.push_back(path);
  m["outputs"] = outs;
  write_file(path, m.dump(2) + "\n");
}

// Report goes to --out when given, else to stdout.
void emit_report(const Common& c, const std::string& command,
                 const Json& params, std::uint64_t seed, const Json& report,
                 std::ostream& out) {
  const std::string text = render(report, c.json);
  if (c.out.empty()) {
    out << text;
    return;
  }
  write_file(c.out, text);
  write_manifest(c, command, params, seed, {c.out});
}

Json intervals_json(const std::vector<Interval>& ivs) {
  Json arr = Json::array();
  for (const Interval& iv : ivs) arr.push_back({num(iv.lo), num(iv.hi)});
  return arr;
}

// ---- range ---------------------------------------------------------------

struct RangeArgs {
  Common c;
  double n = 0.0;
  double p = 0.0;
};

int cmd_range(const RangeArgs& a, std::ostream& out) {
  if (!(a.n > 0.0) || !(a.p > 1.0)) {
    throw UsageError("range needs n > 0 and p > 1");
  }
  const AdmissibleRange r = m_range(a.n, a.p);
  Json rep;
  rep["n"] = a.n;
  rep["p"] = a.p;
  rep["p_sharp"] = num(r.p_sharp);
  rep["p_crit"] = num(r.p_crit);
  rep["A"] = r.A;
  rep["B"] = r.B;
  rep["C"] = r.C;
  rep["B2_minus_AC"] = r.reduced_disc;
  rep["full_discriminant"] = r.full_disc;
  rep["status"] = to_string(r.status);
  rep["m_minus"] = opt_num(r.m_minus);
  rep["m_plus"] = opt_num(r.m_plus);
  rep["beta_intervals"] = intervals_json(r.beta_intervals);
  rep["beta_excluded"] = opt_num(r.beta_excluded);
  if (r.status == RangeStatus::special_point) {
    rep["note"] = "A = B = 0: delta(beta) = 1 for every finite beta; the "
                  "range degenerates to m = (n-1)/n, reached only as "
                  "beta -> infinity";
  } else if (r.status == RangeStatus::empty) {
    rep["note"] = "no admissible exponent: p exceeds 2n/(n-2)";
  }
  Json params{{"n", a.n}, {"p", a.p}};
  emit_report(a.c, "range", params, 0, rep, out);
  return kOk;
}

// ---- figure1 -------------------------------------------------------------

struct Figure1Args {
  Common c;
  double n = 0.0;
  double p_min = 1.05;
  std::optional<double> p_max;
  int steps = 200;
};

int cmd_figure1(const Figure1Args& a, std::ostream& out) {
  if (!(a.n > 0.0)) throw UsageError("figure1 needs n > 0");
  const double p_max = a.p_max ? *a.p_max
                       : a.n > 2.0 ? critical_exponent(a.n)
                                   : 12.0;
  if (!(a.p_min > 1.0) || !(p_max >= a.p_min) || a.steps < 1) {
    throw UsageError("figure1 needs 1 < p_min <= p_max and steps >= 1");
  }
  const std::vector<Figure1Row> rows =
      figure1_table(a.n, a.p_min, p_max, a.steps);
  std::ostringstream csv;
  csv << "p,m_minus,m_plus,n_over_n_plus_2,n_minus_2_over_n\n";
  for (const Figure1Row& r : rows) {
    csv << format_number(r.p) << ','
        << (r.m_minus ? format_number(*r.m_minus) : "") << ','
        << (r.m_plus ? format_number(*r.m_plus) : "") << ','
        << format_number(r.m_excluded) << ',' << format_number(r.m_lower)
        << '\n';
  }
  Json params{{"n", a.n}, {"p_min", a.p_min}, {"p_max", p_max},
              {"steps", a.steps}};
  if (a.c.out.empty()) {
    out << csv.str();
    return kOk;
  }
  write_file(a.c.out, csv.str());
  write_manifest(a.c, "figure1", params, 0, {a.c.out});
  std::size_t empty = 0;
  for (const Figure1Row& r : rows) empty += r.m_minus ? 0 : 1;
  Json rep{{"rows", rows.size()}, {"empty_rows", empty}, {"csv", a.c.out}};
  out << render(rep, a.c.json);
  return kOk;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  Common c;
  double n = 0.0;
  double p = 0.0;
  std::string fn;
  std::optional<double> lambda;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const FnSpec spec = FnSpec::parse(a.fn);
  const UltraParams params = UltraParams::make(a.n, a.p);
  const int N = resolve_nodes(a.c, params, MeasureKind::plain);
  const SpectralPlan plan = make_plan(params, N, MeasureKind::plain);
  const GridFn f = spec.sample(plan.nodes(), a.n);
  if (!f.allFinite()) {
    throw NumericalError("function is not finite at the nodes");
  }
  DeficitReport d;
  std::string inequality;
  if (a.p == 2.0) {
    d = logsob_deficit(f, plan, params);
    inequality = "logarithmic Sobolev";
    if (a.lambda) {
      d.lambda_used = *a.lambda;
      d.deficit = d.fisher - d.lambda_used * d.entropy_term;
    }
  } else {
    d = deficit(f, plan, params, a.lambda.value_or(a.n));
    inequality = "interpolation";
  }
  Json rep;
  rep["n"] = a.n;
  rep["p"] = a.p;
  rep["function"] = a.fn;
  rep["inequality"] = inequality;
  rep["lambda"] = d.lambda_used;
  rep["fisher"] = d.fisher;
  rep["entropy_term"] = d.entropy_term;
  rep["deficit"] = d.deficit;
  rep["critical"] = d.critical;
  rep["nodes"] = N;
  rep["tail_ratio"] = plan.tail_ratio(f);
  Json params_json{{"n", a.n}, {"p", a.p}, {"fn", a.fn}, {"nodes", N}};
  if (a.lambda) params_json["lambda"] = *a.lambda;
  emit_report(a.c, "verify", params_json, 0, rep, out);
  return kOk;
}

// ---- flow ----------------------------------------------------------------

struct FlowArgs {
  Common c;
  std::string kind;
  double n = 0.0;
  double p = 0.0;
  std::optional<double> beta;
  double eps = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 0;
  std::optional<double> lambda;
  std::string fn = "1 + 0.1*z + 0.05*z^2";
};

bool monotonicity_expected(const FlowConfig& cfg) {
  const UltraParams& P = cfg.params;
  if (P.p() <= 1.0) return false;
  switch (cfg.kind) {
    case FlowKind::heat:
      return P.p() <= bakry_emery_exponent(P.n());
    case FlowKind::nonlinear:
      return in_beta_range(P.beta(), P.n(), P.p()) && cfg.lambda <= P.n();
    case FlowKind::regularized:
      if (!in_beta_range(P.beta(), P.n(), P.p())) return false;
      if (P.n() < P.d() && cfg.h0 < 1.0 && cfg.h1 > 0.0) {
        return cfg.lambda <= lambda_eps(P, cfg.h0, cfg.h1);
      }
      return cfg.lambda <= P.n();
  }
  return false;
}

int cmd_flow(const FlowArgs& a, std::ostream& out, std::ostream& err) {
  const FlowKind kind = flow_kind_from_string(a.kind);
  double beta = 1.0;
  if (kind != FlowKind::heat) {
    if (a.beta) {
      beta = *a.beta;
    } else {
      const auto b = a.p > 1.0 ? interior_beta(a.n, a.p) : std::nullopt;
      if (!b) {
        throw UsageError("no admissible beta for this (n, p); pass --beta");
      }
      beta = *b;
    }
  } else if (a.beta && *a.beta != 1.0) {
    throw UsageError("the heat flow runs with beta = 1");
  }
  const UltraParams params = UltraParams::make(a.n, a.p, beta, a.eps);
  const MeasureKind mk =
      kind == FlowKind::regularized ? MeasureKind::regularized : MeasureKind::plain;
  const int N = resolve_nodes(a.c, params, mk);
  const SpectralPlan plan = make_plan(params, N, mk);
  const FnSpec spec = FnSpec::parse(a.fn);
  const GridFn u0 = spec.sample(plan.nodes(), a.n);
  if (!u0.allFinite()) throw NumericalError("initial data not finite");

  FlowConfig cfg = make_flow_config(kind, params, a.dt, a.t_end, u0, plan);
  cfg.record_every = a.record_every;
  if (a.lambda) cfg.lambda = *a.lambda;
  const FlowTrace tr = run_flow(u0, plan, cfg);

  std::ostringstream csv;
  csv << "t,mass,F,fisher_beta,u_min,u_max,grad_max\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    csv << format_number(tr.times[i]) << ',' << format_number(tr.mass[i])
        << ',' << format_number(tr.F_values[i]) << ','
        << format_number(tr.fisher_beta[i]) << ','
        << format_number(tr.u_min[i]) << ',' << format_number(tr.u_max[i])
        << ',' << format_number(tr.grad_max[i]) << '\n';
  }

  const bool expected = monotonicity_expected(cfg);
  const double increase = tr.worst_F_increase(1e-9, 1e-12);
  Json rep;
  rep["kind"] = to_string(kind);
  rep["n"] = a.n;
  rep["p"] = a.p;
  rep["beta"] = beta;
  rep["m"] = params.m();
  rep["eps"] = a.eps;
  rep["lambda"] = cfg.lambda;
  rep["h0"] = cfg.h0;
  rep["h1"] = cfg.h1;
  rep["nodes"] = N;
  rep["dt_used"] = tr.dt_used;
  rep["steps"] = tr.steps;
  rep["records"] = tr.size();
  rep["F_initial"] = tr.F_values.front();
  rep["F_final"] = tr.F_values.back();
  rep["F_monotone_expected"] = expected;
  rep["F_worst_increase"] = increase;
  rep["mass_drift"] = tr.relative_mass_drift();
  rep["equilibrium_distance"] = tr.equilibrium_distance;
  rep["bound_events"] = tr.events.size();
  rep["aborted"] = tr.aborted;
  if (tr.aborted) {
    rep["failure"] = tr.failure;
    rep["failure_time"] = tr.failure_time;
  }

  Json params_json{{"kind", a.kind}, {"n", a.n},        {"p", a.p},
                   {"beta", beta},   {"eps", a.eps},    {"t_end", a.t_end},
                   {"dt", a.dt},     {"fn", a.fn},      {"nodes", N},
                   {"lambda", cfg.lambda}, {"record_every", a.record_every}};
  if (a.c.out.empty()) {
    out << csv.str();
    err << render(rep, a.c.json);
  } else {
    write_file(a.c.out, csv.str());
    write_manifest(a.c, "flow", params_json, 0, {a.c.out});
    out << render(rep, a.c.json);
  }
  if (tr.aborted) {
    err << "error: " << tr.failure << " at t = "
        << format_number(tr.failure_time) << '\n';
    return kNumerical;
  }
  if (expected && increase > 0.0) {
    err << "property violation: F increased by "
        << format_number(increase) << '\n';
    return kPropertyViolation;
  }
  return kOk;
}

// ---- identities ----------------------------------------------------------

struct IdentityArgs {
  Common c;
  double n = 3.0;
  double eps = 0.0;
  int trials = 100;
  std::uint64_t seed = 0;
  bool no_neumann = false;
};

constexpr double kIdentityGate = 1e-6;

int cmd_identities(const IdentityArgs& a, std::ostream& out,
                   std::ostream& err) {
  if (a.trials < 1) throw UsageError("trials must be >= 1");
  const UltraParams params = UltraParams::make(a.n, 3.0, 1.0, a.eps);
  const int N = a.c.nodes > 0 || std::getenv("ULTRAFLOW_NODES")
                    ? resolve_nodes(a.c, params, MeasureKind::plain)
                    : 0;
  const IdentitySweep s =
      identity_sweep(a.n, a.eps, a.trials, a.seed, N, !a.no_neumann);
  Json rep;
  rep["n"] = a.n;
  rep["eps"] = a.eps;
  rep["trials"] = a.trials;
  rep["seed"] = a.seed;
  rep["neumann"] = !a.no_neumann;
  rep["nodes"] = s.nodes;
  Json arr = Json::array();
  double worst = 0.0;
  for (const IdentityReport& r : s.worst) {
    arr.push_back({{"identity", to_string(r.tag)},
                   {"residual", r.residual},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"seed", r.seed}});
    worst = std::max(worst, r.residual);
  }
  rep["identities"] = arr;
  Json params_json{{"n", a.n},         {"eps", a.eps},
                   {"trials", a.trials}, {"neumann", !a.no_neumann},
                   {"nodes", s.nodes}};
  emit_report(a.c, "identities", params_json, a.seed, rep, out);
  if (worst > kIdentityGate) {
    err << "property violation: residual " << format_number(worst)
        << " exceeds " << format_number(kIdentityGate) << '\n';
    return kPropertyViolation;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Ultraspherical functional inequalities and flows"};
  app.name("ultraflow");
  app.require_subcommand(1);
  app.set_version_flag("--version", ULTRAFLOW_VERSION);

  RangeArgs ra;
  CLI::App* range = app.add_subcommand("range", "Admissible exponent range");
  add_common(range, ra.c);
  range->add_option("--n", ra.n, "Dimension")->required();
  range->add_option("--p", ra.p, "Exponent")->required();

  Figure1Args fa;
  CLI::App* fig = app.add_subcommand("figure1", "m-range curves as CSV");
  add_common(fig, fa.c);
  fig->add_option("--n", fa.n, "Dimension")->required();
  fig->add_option("--p-min", fa.p_min, "Smallest p (> 1)");
  fig->add_option("--p-max", fa.p_max,
                  "Largest p (default 2n/(n-2) for n > 2, else 12)");
  fig->add_option("--steps", fa.steps, "Number of p intervals");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Deficit of one function");
  add_common(verify, va.c);
  verify->add_option("--n", va.n, "Dimension")->required();
  verify->add_option("--p", va.p, "Exponent")->required();
  verify->add_option("--fn", va.fn, "Function of z")->required();
  verify->add_option("--lambda", va.lambda,
                     "Constant (default n, or n/2 at p = 2)");

  FlowArgs wa;
  CLI::App* flow = app.add_subcommand("flow", "Evolve a flow, trace as CSV");
  add_common(flow, wa.c);
  flow->add_option("--kind", wa.kind, "heat | nonlinear | regularized")
      ->required();
  flow->add_option("--n", wa.n, "Dimension")->required();
  flow->add_option("--p", wa.p, "Exponent")->required();
  flow->add_option("--beta", wa.beta, "Flow exponent (default: admissible)");
  flow->add_option("--eps", wa.eps, "Regularization");
  flow->add_option("--t-end", wa.t_end, "Final time");
  flow->add_option("--dt", wa.dt,
                   "Time step cap (heat: spacing of records)");
  flow->add_option("--record-every", wa.record_every,
                   "Record every k steps (0: about 1000 records)");
  flow->add_option("--lambda", wa.lambda, "Constant in F");
  flow->add_option("--fn", wa.fn, "Initial datum u0(z)");

  IdentityArgs ia;
  CLI::App* ident = app.add_subcommand("identities", "Integral identity sweep");
  add_common(ident, ia.c);
  ident->add_option("--n", ia.n, "Dimension");
  ident->add_option("--eps", ia.eps, "Regularization");
  ident->add_option("--trials", ia.trials, "Test functions per identity");
  ident->add_option("--seed", ia.seed, "First seed");
  ident->add_flag("--no-neumann", ia.no_neumann,
                  "Use test functions without u'(+-1) = 0");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << ULTRAFLOW_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (range->parsed()) return cmd_range(ra, out);
    if (fig->parsed()) return cmd_figure1(fa, out);
    if (verify->parsed()) return cmd_verify(va, out);
    if (flow->parsed()) return cmd_flow(wa, out, err);
    if (ident->parsed()) return cmd_identities(ia, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace ultraflow::cli
