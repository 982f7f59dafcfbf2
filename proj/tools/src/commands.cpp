#include "ricsol_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "ricsol/ansatz.hpp"
#include "ricsol/catalog.hpp"
#include "ricsol/errors.hpp"
#include "ricsol/expression.hpp"
#include "ricsol/fitter.hpp"
#include "ricsol/geometry.hpp"
#include "ricsol/minimal.hpp"
#include "ricsol/semiconformal.hpp"
#include "ricsol/soliton.hpp"
#include "ricsol/tensor_lab.hpp"
#include "ricsol/warped.hpp"
#include "ricsol_cli/report.hpp"

namespace ricsol::cli {

namespace {

struct Common {
  std::string grid;
  std::string box;
  std::string out;
  std::optional<double> fd_step;
  std::optional<double> tol;
  std::uint64_t seed = catalog::kSeed;
  bool json = false;
};

struct Outcome {
  Report report;
  std::string text;
};

void add_common(CLI::App* app, Common& o) {
  app->add_option("--grid", o.grid, "sample counts NX,NY[,NZ]");
  app->add_option("--box", o.box, "sample box lo:hi,lo:hi[,lo:hi]");
  app->add_option("--fd-step", o.fd_step, "finite-difference step; analytic jets when absent")
      ->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "pass tolerance")->check(CLI::PositiveNumber);
  app->add_option("--out", o.out, "report path (JSON)");
  app->add_option("--seed", o.seed, "seed for random sample points");
  app->add_flag("--json", o.json, "print the report instead of the summary");
}

Differ differ_of(const Common& o) {
  if (o.fd_step) return {DiffMode::finite_difference, *o.fd_step};
  return {};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Chart override_chart(Chart c, const Common& o, const Differ& d) {
  if (!o.grid.empty()) {
    const auto n = parse_counts(o.grid, c.dim);
    for (int i = 0; i < c.dim; ++i) c.box.counts[i] = n[i];
  }
  if (!o.box.empty()) {
    const auto b = parse_box(o.box, c.dim);
    for (int i = 0; i < c.dim; ++i) {
      c.box.lo[i] = b[i].first;
      c.box.hi[i] = b[i].second;
    }
  }
  try {
    c.validate(d.fd_step);
    if (d.mode == DiffMode::finite_difference)
      for (const Point& p : c.grid()) c.require(p, tensor_lab::fd_reach(4, d));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid sample box: ") + e.what());
  }
  return c;
}

Json grid_json(const Chart& c) {
  Json g;
  g["names"] = c.names;
  std::vector<double> lo, hi;
  std::vector<int> counts;
  for (int i = 0; i < c.dim; ++i) {
    lo.push_back(c.box.lo[i]);
    hi.push_back(c.box.hi[i]);
    counts.push_back(c.box.counts[i]);
  }
  g["lo"] = lo;
  g["hi"] = hi;
  g["counts"] = counts;
  return g;
}

Report base_report(const std::string& command, const std::string& id, const Common& o, double tol,
                   const std::string& anchor) {
  Report r;
  r.command = command;
  r.case_id = id;
  const Differ d = differ_of(o);
  r.mode = d.mode == DiffMode::analytic ? "analytic" : "finite_difference";
  r.fd_step = d.fd_step;
  r.tolerance = tol;
  r.seed = o.seed;
  r.anchor = anchor;
  return r;
}

const catalog::CatalogCase& lookup(const std::string& id) {
  try {
    return catalog::get(id);
  } catch (const std::out_of_range&) {
    throw ParseError("unknown case '" + id + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double two_form_norm(const DMat& w, const DMat& g, int dim) { return tensor_lab::norm_sym(w, g, dim) / std::sqrt(2.0); }

DMat metric_at(const MetricField& g, const Point& p) { return geo::values(g.components.value_jet(p)); }

Json falsify_json(const fitter::FalsifyReport& f) {
  Json j;
  j["mode"] = f.mode == fitter::AMode::joint ? "joint" : "grid";
  j["basis_size"] = f.basis_size;
  j["min_rms"] = f.min_rms;
  j["A_at_min"] = f.A;
  j["floor"] = f.floor;
  Json cal = Json::object();
  for (const auto& [id, r] : f.calibration) cal[id] = r;
  j["calibration"] = cal;
  j["calibration_bound"] = f.calibration_bound;
  j["killing_scan"] = {{"min_rms", f.killing_scan.min_rms}, {"A", f.killing_scan.A}, {"bound", f.killing_bound}};
  j["evidence_not_proof"] = f.evidence_not_proof;
  return j;
}

std::string falsify_text(const std::string& id, const fitter::FalsifyReport& f) {
  std::string t = id + ": no flow found (evidence, not proof)\n";
  t += "  min rms " + fmt(f.min_rms) + " over " + std::to_string(f.basis_size) + " fields, floor " + fmt(f.floor) +
       "\n";
  for (const auto& [cid, r] : f.calibration) t += "  calibration " + cid + " rms " + fmt(r) + "\n";
  t += "  Killing-only scan min " + fmt(f.killing_scan.min_rms) + " at A = " + fmt(f.killing_scan.A) + "\n";
  return t;
}

Outcome verify(const std::string& id, const Common& o) {
  const auto& c = lookup(id);
  const Differ d = differ_of(o);
  const Chart chart = override_chart(c.chart, o, d);
  const double tol = o.tol.value_or(1e-5);
  Outcome out{base_report("verify", id, o, tol, c.anchor), ""};
  out.report.grid = grid_json(chart);
  Json& m = out.report.metrics;
  bool pass = true;
  std::string& t = out.text;
  t = id + " (" + c.title + ")\n";

  MetricField g = c.g;
  g.chart = chart;
  if (c.fibration) {
    auto setup = *c.fibration;
    setup.chart_M = chart;
    setup.g = g;
    const double oracle_tol = d.mode == DiffMode::analytic ? 1e-8 : 1e-4;
    double worst = 0.0;
    const auto pts = chart.random_points(100, o.seed);
    for (const Point& p : pts) {
      const DMat dec = semiconformal::ricci_decomposed(setup, p, d).full;
      const DMat direct = tensor_lab::curvature(g, p, d).ricci.mat();
      DMat diff{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) diff[i][j] = dec[i][j] - direct[i][j];
      worst = std::max(worst, tensor_lab::norm_sym(diff, metric_at(g, p), chart.dim));
    }
    m["oracle"] = {{"points", pts.size()}, {"max", worst}, {"tolerance", oracle_tol}, {"pass", worst < oracle_tol}};
    pass = pass && worst < oracle_tol;
    t += "  Ricci decomposition vs direct: " + fmt(worst) + (worst < oracle_tol ? " ok\n" : " FAIL\n");
  }

  if (c.E) {
    const soliton::SolitonCandidate cand{g, *c.E, c.A.value_or(0.0), std::nullopt};
    const auto rr = soliton::residual_report(id, cand, chart, tol, d);
    m["soliton"] = {{"A", cand.A},          {"points", rr.per_point.size()}, {"max", rr.max},
                    {"mean", rr.mean},      {"ricci_term", rr.ricci_term},   {"lie_term", rr.lie_term},
                    {"a_term", rr.a_term},  {"pass", rr.pass}};
    pass = pass && rr.pass;
    t += "  soliton residual max " + fmt(rr.max) + (rr.pass ? " ok\n" : " FAIL\n");

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    Json per = Json::array();
    for (const Point& p : c.designated) {
      const double n = two_form_norm(soliton::gradient_type_defect(cand, p, d), metric_at(c.g, p), chart.dim);
      lo = std::min(lo, n);
      hi = std::max(hi, n);
      per.push_back({{"point", {p[0], p[1], p[2]}}, {"norm", n}});
    }
    const bool gpass = c.gradient ? hi < 1e-6 : lo > 0.1;
    m["gradient_type"] = {{"expected_gradient", c.gradient}, {"points", per}, {"pass", gpass}};
    pass = pass && gpass;
    t += std::string("  dE norm ") + (c.gradient ? "max " + fmt(hi) : "min " + fmt(lo)) +
         (c.gradient ? " (gradient)" : " (not gradient)") + (gpass ? " ok\n" : " FAIL\n");
  } else {
    const auto f = fitter::falsify(id, {}, fitter::AMode::joint, d);
    m["outcome"] = "no flow found";
    m["falsify"] = falsify_json(f);
    pass = pass && f.pass;
    t += falsify_text(id, f);
  }
  out.report.pass = pass;
  return out;
}

Json system_json(const ansatz::SystemReport& s) {
  return {{"points", s.points},     {"max_r_i", s.max_r_i},   {"max_r_iia", s.max_r_iia},
          {"max_r_u", s.max_r_u},   {"iib_mean", s.iib_mean}, {"iib_std", s.iib_std},
          {"alpha_variation", s.alpha_variation},             {"tolerance", s.tolerance},
          {"pass", s.pass}};
}

Json build_json(const ansatz::BuildReport& b) {
  return {{"soliton_max", b.soliton.max},
          {"soliton_mean", b.soliton.mean},
          {"theta_defect", b.theta_defect},
          {"mean_curvature_defect", b.mean_curvature_defect},
          {"harmonic_morphism_defect", b.harmonic_morphism_defect},
          {"psi_defect", b.psi_defect},
          {"integrability_defect", b.integrability_defect},
          {"riemann_max", b.riemann_max},
          {"tolerance", b.tolerance},
          {"pass", b.pass}};
}

struct AnsatzOptions {
  std::string file;
  double R = 1.0;
  double delta = 1.0;
  double system_tol = 1e-6;
};

Outcome ansatz_cmd(const AnsatzOptions& a, const Common& o) {
  auto data = ansatz::load_surface_data(a.file);
  const Differ d = differ_of(o);
  data.chart_N = override_chart(data.chart_N, o, d);
  data.h.chart = data.chart_N;
  const double tol = o.tol.value_or(1e-5);
  Outcome out{base_report("ansatz", data.name, o, tol, "surface data " + data.name), ""};
  out.report.grid = grid_json(data.chart_N);
  Json& m = out.report.metrics;
  m["input"] = a.file;
  m["R"] = a.R;
  m["delta"] = a.delta;
  m["A"] = data.A;
  const auto sys = ansatz::system_report(data, a.system_tol, d);
  m["system"] = system_json(sys);
  std::string& t = out.text;
  t = data.name + ": system residuals (i) " + fmt(sys.max_r_i) + ", (ii)(a) " + fmt(sys.max_r_iia) + ", (u) " +
      fmt(sys.max_r_u) + ", (ii)(b) " + fmt(sys.iib_mean) + " ± " + fmt(sys.iib_std) + "\n";
  if (!sys.pass) {
    out.report.pass = false;
    t += "  system not satisfied; nothing built\n";
    return out;
  }
  try {
    const auto res = ansatz::build_and_verify(data, a.R, a.delta, tol, d, a.system_tol);
    m["build"] = build_json(res.report);
    out.report.pass = res.report.pass;
    t += "  built soliton residual max " + fmt(res.report.soliton.max) + ", Riemann max " +
         fmt(res.report.riemann_max) + (res.report.pass ? " ok\n" : " FAIL\n");
  } catch (const DomainError& e) {
    m["error"] = e.what();
    out.report.pass = false;
    t += std::string("  build rejected: ") + e.what() + "\n";
  }
  return out;
}

struct MinimalOptions {
  std::string file;
  double delta = 1.0;
};

Outcome minimal_cmd(const MinimalOptions& a, const Common& o) {
  auto datum = minimal::parse_datum(read_file(a.file));
  const Differ d = differ_of(o);
  datum.chart = override_chart(datum.chart, o, d);
  const double tol = o.tol.value_or(1e-5);
  Outcome out{base_report("minimal", datum.name, o, tol, "holomorphic datum " + datum.name), ""};
  out.report.grid = grid_json(datum.chart);
  Json& m = out.report.metrics;
  m["input"] = a.file;
  m["B"] = datum.B;
  m["C"] = datum.C;
  m["A"] = 3 * datum.C;
  double cr = 0.0, prim = 0.0, minv = std::numeric_limits<double>::infinity(), cx = 0.0;
  const auto beta = minimal::beta_field(datum);
  const auto gamma = minimal::gamma_field(datum);
  for (const Point& q : datum.chart.grid()) {
    const auto dd = minimal::datum_defects(datum, q, d);
    cr = std::max(cr, dd.cauchy_riemann);
    prim = std::max(prim, dd.primitive);
    minv = std::min(minv, dd.min_abs_v);
    cx = std::max(cx, minimal::complex_residuals(beta, gamma, datum.C, 3 * datum.C, q, d).max());
  }
  const double complex_tol = d.mode == DiffMode::analytic ? 1e-6 : 5e-6;
  m["datum"] = {{"cauchy_riemann", cr}, {"primitive", prim}, {"min_abs_v", minv}};
  m["complex_residual"] = {{"max", cx}, {"tolerance", complex_tol}};
  bool pass = cx < complex_tol;
  std::string& t = out.text;
  t = datum.name + ": complex residual max " + fmt(cx) + ", min |v| " + fmt(minv) + "\n";
  const auto nb = minimal::nil_build(datum, a.delta, tol, d);
  if (nb.twod_branch) {
    m["branch"] = "two-dimensional";
    m["twod_residual"] = nb.twod_residual;
    pass = pass && nb.twod_residual < tol;
    t += "  C = 0: 2-D soliton residual " + fmt(nb.twod_residual) + "\n";
  } else {
    m["branch"] = "fibred";
    m["system"] = system_json(nb.build->report.system);
    m["build"] = build_json(nb.build->report);
    pass = pass && nb.build->report.pass;
    t += "  built soliton residual max " + fmt(nb.build->report.soliton.max) + "\n";
    if (nb.isometry_witness) {
      m["isometry_witness"] = *nb.isometry_witness;
      pass = pass && *nb.isometry_witness < 1e-8;
      t += "  isometry witness to the Nil metric " + fmt(*nb.isometry_witness) + "\n";
    }
  }
  out.report.pass = pass;
  t += pass ? "  ok\n" : "  FAIL\n";
  return out;
}

struct FitOptions {
  std::string id;
  int degree = 2;
  bool no_extras = false;
  std::string mode = "joint";
  bool falsify = false;
};

Outcome fit_cmd(const FitOptions& a, const Common& o) {
  const auto& c = lookup(a.id);
  const Differ d = differ_of(o);
  const Chart chart = override_chart(c.chart, o, d);
  const double tol = o.tol.value_or(1e-5);
  Outcome out{base_report("fit", a.id, o, tol, c.anchor), ""};
  out.report.grid = grid_json(chart);
  Json& m = out.report.metrics;
  fitter::BasisSpec spec{a.degree, !a.no_extras, true};
  m["basis"] = {{"degree", a.degree}, {"extras", !a.no_extras}};
  const auto mode = a.mode == "grid" ? fitter::AMode::grid : fitter::AMode::joint;
  if (!c.E || a.falsify) {
    const auto f = fitter::falsify(a.id, spec, mode, d, chart.grid());
    m["falsify"] = falsify_json(f);
    out.report.pass = f.pass;
    out.text = falsify_text(a.id, f);
    return out;
  }
  const auto f = fitter::fit_case(a.id, spec, d, chart.grid());
  const auto& r = f.result;
  m["basis"]["size"] = f.basis.fields.size();
  m["rank"] = r.rank;
  m["null_dimension"] = r.null_space.size();
  m["A"] = r.A.value_or(0.0);
  m["min_rms"] = r.min_rms_residual;
  if (f.a_error) m["A_error"] = *f.a_error;
  if (f.lie_difference) m["lie_difference"] = *f.lie_difference;
  m["rank_deficient"] = f.system.rank_deficient;
  Json coeffs = Json::object();
  for (std::size_t k = 0; k < r.coefficients.size(); ++k)
    if (std::abs(r.coefficients[k]) > 1e-12) coeffs[f.basis.labels[k]] = r.coefficients[k];
  m["coefficients"] = coeffs;
  Json kc = Json::object();
  for (std::size_t k = 0; k < r.killing_component.names.size(); ++k)
    kc[r.killing_component.names[k]] = r.killing_component.coefficients[k];
  m["killing_component"] = {{"against_reference", r.killing_component.against_reference},
                            {"coefficients", kc},
                            {"remainder_rms", r.killing_component.remainder_rms}};
  const bool pass = r.min_rms_residual < 1e-7 && f.a_error.value_or(0.0) < 1e-6 && f.lie_difference.value_or(0.0) < tol;
  out.report.pass = pass;
  out.text = a.id + ": fitted A = " + fmt(r.A.value_or(0.0)) + ", rms " + fmt(r.min_rms_residual) + ", |L_(E_fit - E) g| " +
             fmt(f.lie_difference.value_or(0.0)) + ", " + std::to_string(r.null_space.size()) +
             " Killing directions in the basis" + (pass ? " ok\n" : " FAIL\n");
  return out;
}

warped::Function1D function_of(const std::string& text) {
  const Expression e = Expression::parse(text, {"t"});
  return [e](const Jet& t) {
    const std::array<Jet, 1> x{t};
    return e.eval(std::span<const Jet>(x));
  };
}

struct WpOptions {
  std::string lambda;
  std::string f;
  double lambda0 = 1.0, d1 = 1.0, d2 = 0.0;
  double K = 0.0, A = 0.0;
  double t0 = 1.0, t1 = 2.0, step = 1e-3;
  std::string range = "1:2";
  int samples = 101;
  std::string csv;
};

Outcome wp_integrate(const WpOptions& a, const Common& o) {
  const double tol = o.tol.value_or(1e-6);
  Outcome out{base_report("wp integrate", "warped", o, tol, "warped-product third-order equation"), ""};
  out.report.grid = {{"t0", a.t0}, {"t1", a.t1}, {"step", a.step}};
  Json& m = out.report.metrics;
  warped::State init{a.lambda0, a.d1, a.d2};
  std::optional<warped::Function1D> closed;
  if (!a.lambda.empty()) {
    closed = function_of(a.lambda);
    const Jet j = warped::jet_of(*closed, a.t0, 2, differ_of(o));
    init = {j.value(), j.partial(1, 0, 0), j.partial(2, 0, 0)};
    m["lambda"] = a.lambda;
  }
  m["K"] = a.K;
  m["A"] = a.A;
  m["initial"] = {init.lambda, init.d1, init.d2};
  const auto tr = warped::integrate(init, a.K, a.A, a.t0, a.t1, a.step);
  m["steps"] = tr.t.size();
  m["truncated"] = tr.truncated;
  if (tr.truncated) m["reason"] = tr.reason;
  m["final"] = {{"t", tr.t.back()}, {"lambda", tr.state.back().lambda}};
  bool pass = !tr.truncated;
  out.text = "RK4 from t = " + fmt(a.t0) + " to " + fmt(tr.t.back()) + ", " + std::to_string(tr.t.size()) + " nodes" +
             (tr.truncated ? ", stopped: " + tr.reason : "") + "\n";
  if (closed) {
    double err = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i)
      err = std::max(err, std::abs(tr.state[i].lambda - (*closed)(Jet(tr.t[i])).value()));
    m["tracking_error"] = err;
    pass = pass && err < tol;
    out.text += "  max |lambda_rk - lambda| " + fmt(err) + (err < tol ? " ok\n" : " FAIL\n");
  }
  if (!a.csv.empty()) {
    std::ostringstream s;
    warped::write_csv(tr, s);
    write_atomic(a.csv, s.str());
    m["csv"] = a.csv;
  }
  out.report.pass = pass;
  return out;
}

Outcome wp_check(const WpOptions& a, const Common& o) {
  if (a.lambda.empty()) throw ParseError("wp check needs --lambda");
  if (a.samples < 2) throw ParseError("--samples must be at least 2");
  const auto range = parse_box(a.range, 1)[0];
  const Differ d = differ_of(o);
  const double tol = o.tol.value_or(1e-9);
  Outcome out{base_report("wp check", "warped", o, tol, "warped-product third-order equation"), ""};
  out.report.grid = {{"t_lo", range.first}, {"t_hi", range.second}, {"samples", a.samples}};
  warped::WarpedProfile p;
  p.lambda = function_of(a.lambda);
  p.K = a.K;
  p.A = a.A;
  p.t_lo = range.first;
  p.t_hi = range.second;
  if (!a.f.empty()) p.f = function_of(a.f);
  double third = 0.0, cc = 0.0, r1 = 0.0, r2 = 0.0;
  for (int k = 0; k < a.samples; ++k) {
    const double t = range.first + (range.second - range.first) * k / (a.samples - 1);
    third = std::max(third, std::abs(warped::third_order_residual(p, t, d)));
    cc = std::max(cc, warped::constant_curvature_defect(p, t, d));
    if (p.f) {
      const auto r = warped::wp_residuals(p, t, d);
      r1 = std::max(r1, std::abs(r.r1));
      r2 = std::max(r2, std::abs(r.r2));
    }
  }
  Json& m = out.report.metrics;
  m["lambda"] = a.lambda;
  m["K"] = a.K;
  m["A"] = a.A;
  m["third_order_residual"] = third;
  m["constant_curvature_defect"] = cc;
  bool pass = third < tol;
  if (p.f) {
    m["f"] = a.f;
    m["wp_residuals"] = {{"r1", r1}, {"r2", r2}};
    pass = pass && r1 < tol && r2 < tol;
  }
  out.report.pass = pass;
  out.text = "lambda = " + a.lambda + ": third-order residual " + fmt(third) + ", constant-curvature defect " + fmt(cc) +
             (p.f ? ", wp residuals " + fmt(r1) + ", " + fmt(r2) : "") + (pass ? " ok\n" : " FAIL\n");
  return out;
}

Json case_json(const catalog::CatalogCase& c) {
  Json j;
  j["id"] = c.id;
  j["title"] = c.title;
  j["anchor"] = c.anchor;
  j["grid"] = grid_json(c.chart);
  j["fibred"] = c.fibration.has_value();
  j["has_flow"] = c.E.has_value();
  if (c.A) j["A"] = *c.A;
  j["gradient"] = c.gradient;
  Json k = Json::array();
  for (const auto& f : c.killing) k.push_back(f.name);
  j["killing"] = k;
  Json s = Json::array();
  for (const auto& f : c.extra_scalars) s.push_back(f.name);
  j["extra_scalars"] = s;
  Json e = Json::array();
  for (const auto& n : c.expected) e.push_back({{"name", n.name}, {"value", n.value}, {"source", n.source}});
  j["expected"] = e;
  return j;
}

Outcome catalog_list(const Common& o) {
  Outcome out{base_report("catalog list", "catalog", o, 0.0, "catalog"), ""};
  Json cases = Json::array();
  for (const auto& id : catalog::ids()) {
    const auto& c = catalog::get(id);
    cases.push_back({{"id", id}, {"title", c.title}});
    out.text += id + std::string(std::max<std::size_t>(1, 16 - id.size()), ' ') + c.title + "\n";
  }
  out.report.metrics["cases"] = cases;
  out.report.pass = true;
  return out;
}

Outcome catalog_show(const std::string& id, const Common& o) {
  const auto& c = lookup(id);
  Outcome out{base_report("catalog show", id, o, 0.0, c.anchor), ""};
  out.report.grid = grid_json(c.chart);
  out.report.metrics = case_json(c);
  out.report.pass = true;
  auto& t = out.text;
  t = c.id + ": " + c.title + "\n";
  t += "  " + c.anchor + "\n";
  t += std::string("  flow: ") + (c.E ? "yes" : "none") + (c.A ? ", A = " + fmt(*c.A) : "") +
       (c.gradient ? ", gradient" : "") + "\n";
  t += "  Killing fields:";
  for (const auto& k : c.killing) t += " [" + k.name + "]";
  t += "\n  extra scalars:";
  for (const auto& s : c.extra_scalars) t += " " + s.name;
  t += "\n";
  for (const auto& n : c.expected) t += "  " + n.name + " = " + fmt(n.value) + " (" + n.source + ")\n";
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream s(text);
  while (std::getline(s, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ParseError("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<int> parse_counts(const std::string& text, int dim) {
  const auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != dim)
    throw ParseError("--grid needs " + std::to_string(dim) + " counts, got '" + text + "'");
  std::vector<int> n;
  for (const auto& p : parts) {
    const double v = number(p);
    if (v != std::floor(v) || v < 3 || v > 10000) throw ParseError("grid counts must be integers ≥ 3: '" + text + "'");
    n.push_back(static_cast<int>(v));
  }
  return n;
}

std::vector<std::pair<double, double>> parse_box(const std::string& text, int dim) {
  const auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != dim)
    throw ParseError("box needs " + std::to_string(dim) + " ranges, got '" + text + "'");
  std::vector<std::pair<double, double>> out;
  for (const auto& p : parts) {
    const auto ends = split(p, ':');
    if (ends.size() != 2) throw ParseError("range must be lo:hi, got '" + p + "'");
    const double lo = number(ends[0]), hi = number(ends[1]);
    if (!(lo < hi)) throw ParseError("range must have lo < hi, got '" + p + "'");
    out.emplace_back(lo, hi);
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ricci soliton verification, construction and flow search"};
  app.name("ricsol");
  app.require_subcommand(1);
  Common common;
  std::string case_id;
  AnsatzOptions ans;
  MinimalOptions mini;
  FitOptions fit;
  WpOptions wp;

  auto* verify_cmd = app.add_subcommand("verify", "soliton residual, Ricci decomposition oracle and gradient type");
  verify_cmd->add_option("case", case_id, "catalog case")->required();
  add_common(verify_cmd, common);

  auto* ansatz_sub = app.add_subcommand("ansatz", "surface-data system and fibration build");
  ansatz_sub->add_option("file", ans.file, "surface data document (JSON)")->required();
  ansatz_sub->add_option("--R", ans.R, "vertical scale R");
  ansatz_sub->add_option("--delta", ans.delta, "half-height of the fibre interval")->check(CLI::PositiveNumber);
  ansatz_sub->add_option("--system-tol", ans.system_tol, "tolerance on the surface system")
      ->check(CLI::PositiveNumber);
  add_common(ansatz_sub, common);

  auto* wp_cmd = app.add_subcommand("wp", "warped products over surfaces of constant curvature");
  wp_cmd->require_subcommand(1);
  auto* wp_int = wp_cmd->add_subcommand("integrate", "RK4 integration of the third-order equation");
  wp_int->add_option("--lambda", wp.lambda, "closed form in t; initial data taken from it");
  wp_int->add_option("--lambda0", wp.lambda0, "lambda(t0)");
  wp_int->add_option("--dlambda", wp.d1, "lambda'(t0)");
  wp_int->add_option("--ddlambda", wp.d2, "lambda''(t0)");
  wp_int->add_option("--KN,--K", wp.K, "curvature of the base");
  wp_int->add_option("--A", wp.A, "soliton constant");
  wp_int->add_option("--t0", wp.t0);
  wp_int->add_option("--t1", wp.t1);
  wp_int->add_option("--step", wp.step)->check(CLI::PositiveNumber);
  wp_int->add_option("--csv", wp.csv, "trajectory CSV path");
  add_common(wp_int, common);
  auto* wp_chk = wp_cmd->add_subcommand("check", "residuals of a closed-form lambda(t)");
  wp_chk->add_option("--lambda", wp.lambda, "lambda as an expression in t")->required();
  wp_chk->add_option("--f", wp.f, "vertical component f as an expression in t");
  wp_chk->add_option("--KN,--K", wp.K, "curvature of the base");
  wp_chk->add_option("--A", wp.A, "soliton constant");
  wp_chk->add_option("--range", wp.range, "t range lo:hi");
  wp_chk->add_option("--samples", wp.samples);
  add_common(wp_chk, common);

  auto* minimal_sub = app.add_subcommand("minimal", "minimal-fibre pipeline from a holomorphic datum");
  minimal_sub->add_option("file", mini.file, "datum document (JSON)")->required();
  minimal_sub->add_option("--delta", mini.delta)->check(CLI::PositiveNumber);
  add_common(minimal_sub, common);

  auto* fit_sub = app.add_subcommand("fit", "least-squares flow search");
  fit_sub->add_option("case", fit.id, "catalog case")->required();
  fit_sub->add_option("--degree", fit.degree, "monomial degree")->check(CLI::Range(0, 4));
  fit_sub->add_flag("--no-extras", fit.no_extras, "monomials only");
  fit_sub->add_option("--mode", fit.mode, "A handling")->check(CLI::IsMember({"joint", "grid"}));
  fit_sub->add_flag("--falsify", fit.falsify, "calibrated non-existence report");
  add_common(fit_sub, common);

  auto* cat_cmd = app.add_subcommand("catalog", "built-in geometries");
  cat_cmd->require_subcommand(1);
  auto* cat_list = cat_cmd->add_subcommand("list", "case ids");
  add_common(cat_list, common);
  auto* cat_show = cat_cmd->add_subcommand("show", "one case");
  cat_show->add_option("case", case_id)->required();
  add_common(cat_show, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitParse;
  }

  try {
    Outcome res;
    if (*verify_cmd) res = verify(case_id, common);
    else if (*ansatz_sub) res = ansatz_cmd(ans, common);
    else if (*wp_int) res = wp_integrate(wp, common);
    else if (*wp_chk) res = wp_check(wp, common);
    else if (*minimal_sub) res = minimal_cmd(mini, common);
    else if (*fit_sub) res = fit_cmd(fit, common);
    else if (*cat_list) res = catalog_list(common);
    else res = catalog_show(case_id, common);
    const std::string text = dump(res.report);
    if (!common.out.empty()) write_atomic(common.out, text);
    out << (common.json ? text : res.text);
    return res.report.pass ? kExitPass : kExitFail;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SingularError& e) {
    err << "singular: " << e.what() << "\n";
    return kExitSingular;
  } catch (const DomainError& e) {
    err << "failed: " << e.what() << "\n";
    return kExitFail;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ricsol"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ricsol::cli
