// ricsol_acceptance [criterion...]: one PASS/FAIL line per criterion; exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ricsol/ansatz.hpp"
#include "ricsol/catalog.hpp"
#include "ricsol/fitter.hpp"
#include "ricsol/minimal.hpp"
#include "ricsol/semiconformal.hpp"
#include "ricsol/soliton.hpp"
#include "ricsol/tensor_lab.hpp"
#include "ricsol/warped.hpp"

using namespace ricsol;

namespace {

const Differ kAnalytic{};
const Differ kFd{DiffMode::finite_difference, 1e-4};

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what, double value) {
    pass = pass && ok;
    detail << " " << what << "=" << value << (ok ? "" : "(!)");
  }
  void below(const std::string& what, double value, double bound) { expect(value < bound, what, value); }
  void above(const std::string& what, double value, double bound) { expect(value > bound, what, value); }
};

DMat metric_at(const MetricField& g, const Point& p) { return geo::values(g.components.value_jet(p)); }

double two_form_norm(const DMat& w, const DMat& g) { return tensor_lab::norm_sym(w, g, 3) / std::sqrt(2.0); }

double oracle_gap(const semiconformal::SubmersionSetup& s, const Differ& d) {
  double worst = 0.0;
  for (const Point& p : s.chart_M.random_points(100, catalog::kSeed)) {
    const DMat dec = semiconformal::ricci_decomposed(s, p, d).full;
    const DMat direct = tensor_lab::curvature(s.g, p, d).ricci.mat();
    DMat diff{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) diff[i][j] = dec[i][j] - direct[i][j];
    worst = std::max(worst, tensor_lab::norm_sym(diff, metric_at(s.g, p), 3));
  }
  return worst;
}

void oracle(Check& c) {
  for (const std::string id : {"nil", "sol", "sl2", "s2xr", "h2xr"}) {
    const auto& s = *catalog::get(id).fibration;
    c.below(id + ".analytic", oracle_gap(s, kAnalytic), 1e-8);
    c.below(id + ".fd", oracle_gap(s, kFd), 1e-4);
  }
  const auto helix = ansatz::build(ansatz::helix_data());
  c.below("helix.analytic", oracle_gap(helix.setup, kAnalytic), 1e-8);
  c.below("helix.fd", oracle_gap(helix.setup, kFd), 1e-4);
}

void residuals(Check& c) {
  for (const std::string id : {"nil", "sol", "s2xr", "h2xr"}) {
    const auto& k = catalog::get(id);
    const soliton::SolitonCandidate cand{k.g, *k.E, *k.A, std::nullopt};
    const auto r = soliton::residual_report(id, cand, k.chart, 1e-5);
    c.expect(r.per_point.size() == 729u, id + ".points", static_cast<double>(r.per_point.size()));
    c.below(id, r.max, 1e-5);
  }
  const auto& gauss = catalog::get("r3_gaussian");
  for (double A : {-1.0, 0.0, 1.0}) {
    const VectorField E([A](const JetPoint& x) { return JVec{-A * x[0], -A * x[1], -A * x[2]}; });
    const auto r = soliton::residual_report("r3_gaussian", {gauss.g, E, A, std::nullopt}, gauss.chart, 1e-5);
    c.below("r3_gaussian(A=" + std::to_string(static_cast<int>(A)) + ")", r.max, 1e-5);
  }
}

double dE_norm(const std::string& id, const Point& p, const Differ& d = kAnalytic) {
  const auto& k = catalog::get(id);
  const DMat w = soliton::gradient_type_defect({k.g, *k.E, *k.A, std::nullopt}, p, d);
  return two_form_norm(w, metric_at(k.g, p));
}

void witnesses(Check& c) {
  c.above("nil(1,1,0)", dE_norm("nil", {1, 1, 0}), 0.5);
  c.above("sol(0,0,1)", dE_norm("sol", {0, 0, 1}), 1.0);
  for (const std::string id : {"r3_gaussian", "s2xr", "h2xr", "wp_exceptional", "cigar"}) {
    double worst = 0.0;
    for (const Point& p : catalog::get(id).designated) worst = std::max(worst, dE_norm(id, p, kFd));
    c.below(id, worst, 1e-6);
  }
}

void warped_ode(Check& c) {
  const double r2 = std::sqrt(2.0);
  for (double k : {1 / r2, -1 / r2}) {
    const std::string tag = k > 0 ? "+" : "-";
    const warped::WarpedProfile p{[k](const Jet& t) { return pow(t, k); }, {}, 0.0, 0.0, 1.0, 2.0};
    double third = 0.0;
    for (int i = 0; i <= 100; ++i) third = std::max(third, std::abs(warped::third_order_residual(p, 1.0 + i / 100.0)));
    c.below("third" + tag, third, 1e-9);
    const auto tr = warped::integrate({1.0, k, k * (k - 1)}, 0.0, 0.0, 1.0, 2.0);
    double track = tr.truncated ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i)
      track = std::max(track, std::abs(tr.state[i].lambda - std::pow(tr.t[i], k)));
    c.below("rk" + tag, track, 1e-6);
  }
  const auto& wp = catalog::get("wp_exceptional");
  const auto r = soliton::residual_report("wp_exceptional", {wp.g, *wp.E, *wp.A, std::nullopt}, wp.chart, 1e-5);
  c.below("metric", r.max, 1e-5);
  const warped::WarpedProfile ex{[r2](const Jet& t) { return pow(t, -1 / r2); }, {}, 0.0, 0.0, 1.0, 2.0};
  double defect = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100; ++i) defect = std::min(defect, warped::constant_curvature_defect(ex, 1.0 + i / 100.0));
  c.above("cc_defect", defect, 0.1);
}

void end_to_end(Check& c) {
  const auto nb = minimal::nil_build(minimal::make_datum("1", std::nullopt, 1.0, 0.5));
  if (!nb.build || !nb.isometry_witness) {
    c.expect(false, "nil.build", 0.0);
  } else {
    const auto& s = nb.build->report.system;
    c.below("nil.system", std::max({s.max_r_i, s.max_r_iia, s.max_r_u}), 1e-8);
    c.below("nil.witness", *nb.isometry_witness, 1e-8);
    c.below("nil.soliton", nb.build->report.soliton.max, 1e-5);
  }
  const auto sd = ansatz::sol_data();
  const auto sol = ansatz::build_and_verify(sd);
  c.below("sol.iib", std::abs(sol.report.system.iib_mean - sd.A - 2.0), 1e-6);
  c.below("sol.soliton", sol.report.soliton.max, 1e-5);
  const auto helix = ansatz::build_and_verify(ansatz::helix_data());
  const auto& hs = helix.report.system;
  c.below("helix.system", std::max({hs.max_r_i, hs.max_r_iia, hs.max_r_u}), 1e-6);
  c.below("helix.riemann", helix.report.riemann_max, 1e-4);
}

void dichotomy(Check& c) {
  for (const char* v : {"1", "exp(z)", "1 + 0.1*z"}) {
    const auto d = minimal::make_datum(v, std::nullopt, 1.0, 1.0);
    const ScalarField b = minimal::beta_field(d), g = minimal::gamma_field(d);
    double worst = 0.0, perturbed = 0.0;
    for (const Point& q : d.chart.grid()) {
      worst = std::max(worst, minimal::complex_residuals(b, g, 1.0, 3.0, q).max());
      perturbed = std::max(perturbed, minimal::complex_residuals(b, g, 1.0, 3.1, q).max());
    }
    c.below(std::string(v), worst, 1e-6);
    c.above(std::string(v) + "(A+0.1)", perturbed, 1e-3);
  }
}

void cigar(Check& c) {
  const auto cig = minimal::cigar_data(31);
  double worst = 0.0;
  for (const Point& q : cig.chart_N.grid()) worst = std::max(worst, minimal::twod_soliton_residual(cig.h, cig.nu, 0.0, q));
  c.expect(cig.chart_N.grid().size() == 961u, "points", static_cast<double>(cig.chart_N.grid().size()));
  c.below("residual", worst, 1e-6);
}

void fitter_recovery(Check& c) {
  for (const std::string id : {"nil", "sol"}) {
    const auto f = fitter::fit_case(id);
    c.below(id + ".A", f.a_error.value_or(1.0), 1e-6);
    c.below(id + ".lie", f.lie_difference.value_or(1.0), 1e-5);
  }
}

void sl2(Check& c) {
  const auto f = fitter::falsify("sl2");
  for (const auto& [id, r] : f.calibration) c.below(id, r, f.calibration_bound);
  c.above("min_rms", f.min_rms, std::max(1e-2, fitter::kSl2Floor));
  c.above("killing_scan", f.killing_scan.min_rms, 0.3);
  c.expect(f.pass, "report.pass", f.pass);
}

void suites(Check& c) {
  for (const char* exe : {RICSOL_UNIT_TESTS, RICSOL_CLI_TESTS}) {
    if (*exe == '\0') continue;
    const std::string cmd = std::string("\"") + exe + "\" --gtest_brief=1 > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    c.expect(rc == 0, std::string(exe).substr(std::string(exe).find_last_of('/') + 1), rc);
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  std::function<void(Check&)> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "Ricci decomposition oracle", 60.0, oracle},
    {2, "soliton residuals on 9^3 grids", 35.0, residuals},
    {3, "non-gradient witnesses", 1.0, witnesses},
    {4, "warped product ODE", 5.0, warped_ode},
    {5, "Nil, Sol and Helix end to end", 30.0, end_to_end},
    {6, "holomorphic dichotomy", 5.0, dichotomy},
    {7, "cigar", 2.0, cigar},
    {8, "fitter recovery", 20.0, fitter_recovery},
    {9, "SL2 falsification", 60.0, sl2},
    {10, "unit suites", 300.0, suites},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& cr : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), cr.id) == wanted.end()) continue;
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= cr.budget;
    const bool ok = c.pass && in_budget;
    failed += ok ? 0 : 1;
    std::printf("criterion %2d %s: %s [%.2f s / %.0f s%s]%s\n", cr.id, cr.name, ok ? "PASS" : "FAIL", secs, cr.budget,
                in_budget ? "" : " over budget", c.detail.str().c_str());
  }
  return failed == 0 ? 0 : 1;
}
