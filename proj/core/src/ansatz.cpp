#include "ricsol/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "ricsol/errors.hpp"
#include "ricsol/expression.hpp"
#include "ricsol/geometry.hpp"
#include "ricsol/quadrature.hpp"
#include "ricsol/tensor_lab.hpp"

namespace ricsol::ansatz {

using namespace geo;

namespace {

Point base_of(const Point& p) { return {p[0], p[1], 0.0}; }
JetPoint base_of(const JetPoint& x) { return {x[0], x[1], Jet(0.0)}; }

ScalarField scalar2(ScalarField::JetFn fn) { return ScalarField(std::move(fn), 2); }

JMat diag2(const Jet& a, const Jet& b) {
  JMat m = zero_mat();
  m[0][0] = a;
  m[1][1] = b;
  return m;
}

// Second-order jets of the base data at q.
struct NJets {
  JMat h, hinv;
  Gamma gam;
  double K = 0.0;
  Jet lnl, lnr, lnn, psi, lnpsi;
  bool psi_zero = true;

  double lap(const Jet& f) const { return laplacian(f, gam, hinv, 2).value(); }
  double ip(const Jet& a, const Jet& b) const {
    return pair(differential(a, 2), raise(hinv, differential(b, 2), 2), 2).value();
  }
  double l2() const { return std::exp(2.0 * lnl.value()); }
};

NJets njets(const SurfaceData& d, const Point& q, const Differ& differ) {
  NJets n;
  n.h = d.h.components.at(q, 2, differ);
  check_metric(n.h, 2);
  n.hinv = inverse(n.h, 2);
  n.gam = christoffel(n.h, n.hinv, 2);
  n.K = 0.5 * trace(ricci(n.h, 2), n.hinv, 2).value();
  auto positive_log = [&](const ScalarField& f, const char* what) {
    const Jet j = f.at(q, 2, differ);
    if (!(j.value() > 0.0)) throw DomainError(std::string(what) + " must be positive");
    return log(j);
  };
  n.lnl = positive_log(d.lambda, "lambda");
  n.lnr = positive_log(d.rho, "rho");
  n.lnn = positive_log(d.nu, "nu");
  n.psi = d.psi.at(q, 2, differ);
  if (n.psi.value() < -kPsiZero) throw DomainError("psi must be nonnegative");
  n.psi_zero = n.psi.value() < kPsiZero;
  if (!n.psi_zero) n.lnpsi = log(n.psi);
  return n;
}

double norm_h(const DMat& t, const DMat& hi) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += t[i][j] * t[k][l] * hi[i][k] * hi[j][l];
  return std::sqrt(std::max(0.0, s));
}

// Trace-free part of t with respect to h; returns (|t°|_h, ½ tr_h t).
std::pair<double, double> trace_free(const DMat& t, const DMat& h, const DMat& hi) {
  double tr = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tr += hi[i][j] * t[i][j];
  const double alpha = 0.5 * tr;
  DMat tf{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tf[i][j] = t[i][j] - alpha * h[i][j];
  return {norm_h(tf, hi), alpha};
}

// Coefficient F of w·Ω̄ = F dy¹∧dy².
Jet omega_coefficient(const SurfaceData& d, const JetPoint& y, bool weighted) {
  const Jet psi = d.psi(y);
  if (psi.value() < kPsiZero) return Jet(0.0);
  const Jet lam = d.lambda(y);
  Jet F = sqrt(2.0 * psi) / (lam * lam) * sqrt(det(d.h.components(y), 2));
  if (weighted) F = d.rho(y) * F;
  return F;
}

VectorField lift_theta(const SurfaceData& d, double R, bool weighted) {
  if (R == 0.0) throw DomainError("vertical gauge constant R must be nonzero");
  const VectorField alpha = potential(d, weighted);
  const ScalarField rho = d.rho;
  return VectorField([alpha, rho, R, weighted](const JetPoint& x) {
    const JetPoint y = base_of(x);
    const JVec a = alpha(y);
    if (!weighted) return JVec{a[0], a[1], Jet(R)};
    const Jet inv = Jet(1.0) / rho(y);
    return JVec{a[0] * inv, a[1] * inv, R * inv};
  });
}

MetricField assemble(const SurfaceData& d, const Chart& chart_M, const VectorField& theta) {
  const MatrixField h = d.h.components;
  const ScalarField lambda = d.lambda;
  return MetricField{chart_M, MatrixField([h, lambda, theta](const JetPoint& x) {
                       const JetPoint y = base_of(x);
                       const JMat hy = h(y);
                       const Jet lam = lambda(y);
                       const Jet w = Jet(1.0) / (lam * lam);
                       const JVec th = theta(x);
                       JMat g;
                       for (int i = 0; i < 3; ++i)
                         for (int j = 0; j < 3; ++j) {
                           g[i][j] = th[i] * th[j];
                           if (i < 2 && j < 2) g[i][j] += w * hy[i][j];
                         }
                       return g;
                     }),
                     1};
}

Chart product_chart(const Chart& n, double delta, int slices) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  std::vector<std::string> names = n.names;
  names.resize(2);
  names.push_back("t");
  std::function<bool(const Point&)> domain;
  if (n.domain) domain = [dn = n.domain](const Point& p) { return dn(base_of(p)); };
  return make_chart(3, names, {n.box.lo[0], n.box.lo[1], -delta}, {n.box.hi[0], n.box.hi[1], delta},
                    {n.box.counts[0], n.box.counts[1], slices}, domain);
}

BuiltFibration build_with(const SurfaceData& data, double R, double delta, int slices, bool weighted) {
  BuiltFibration b;
  b.data = data;
  b.R = R;
  b.delta = delta;
  b.chart_M = product_chart(data.chart_N, delta, slices);
  b.theta = weighted ? solve_theta(data, R) : lift_theta(data, R, false);
  b.g = assemble(data, b.chart_M, b.theta);
  b.setup = semiconformal::make_setup(b.chart_M, data.chart_N, semiconformal::coordinate_projection(),
                                      semiconformal::coordinate_section(0.0), b.g, data.h);
  const ScalarField rho = data.rho, nu = data.nu;
  b.rho = ScalarField([rho](const JetPoint& x) { return rho(base_of(x)); });
  b.ln_nu = ScalarField([nu](const JetPoint& x) { return log(nu(base_of(x))); });
  return b;
}

double form_norm(const DMat& w, const DMat& gi) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += w[i][j] * w[k][l] * gi[i][k] * gi[j][l];
  return std::sqrt(std::max(0.0, 0.5 * s));
}

double covector_norm(const DVec& w, const DMat& gi) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += w[i] * w[j] * gi[i][j];
  return std::sqrt(std::max(0.0, s));
}

// Expression-backed data documents.
using nlohmann::json;

std::string expr_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw ParseError("field '" + key + "' must be an expression string or a number");
}

ScalarField expr_field(const json& doc, const std::string& key, const std::vector<std::string>& vars) {
  if (!doc.contains(key)) throw ParseError("missing field '" + key + "'");
  const Expression e = Expression::parse(expr_text(doc.at(key), key), vars);
  return scalar2([e](const JetPoint& x) {
    const std::array<Jet, 2> a{x[0], x[1]};
    return e.eval(std::span<const Jet>(a));
  });
}

}  // namespace

SurfaceData nil_data() {
  SurfaceData d;
  d.name = "nil";
  d.chart_N = make_chart(2, {"y1", "y2"}, {-1, -1, 0}, {1, 1, 0}, {9, 9, 1});
  d.h = MetricField{d.chart_N, MatrixField([](const JetPoint&) { return diag2(1.0, 1.0); }, 2), 1};
  d.lambda = scalar2([](const JetPoint&) { return Jet(1.0); });
  d.rho = d.lambda;
  d.nu = scalar2([](const JetPoint& y) { return exp(-0.5 * (y[0] * y[0] + y[1] * y[1])); });
  d.psi = scalar2([](const JetPoint&) { return Jet(0.5); });
  d.A = 1.5;
  return d;
}

SurfaceData sol_data() {
  SurfaceData d;
  d.name = "sol";
  d.chart_N = make_chart(2, {"x1", "x2"}, {-1, -1, 0}, {1, 1, 0}, {9, 9, 1});
  d.h = MetricField{d.chart_N, MatrixField([](const JetPoint& x) { return diag2(1.0, exp(2.0 * x[0])); }, 2), 1};
  d.lambda = scalar2([](const JetPoint&) { return Jet(1.0); });
  d.rho = scalar2([](const JetPoint& x) { return exp(x[0]); });
  d.nu = scalar2([](const JetPoint& x) { return exp(-x[0]); });
  d.psi = scalar2([](const JetPoint&) { return Jet(0.0); });
  d.A = 2.0;
  return d;
}

SurfaceData helix_data(double c) {
  SurfaceData d;
  d.name = "helix";
  d.chart_N = make_chart(2, {"r", "v"}, {0.5, -1, 0}, {2, 1, 0}, {9, 9, 1}, [](const Point& p) { return p[0] > 0.1; });
  d.h = MetricField{d.chart_N, MatrixField([c](const JetPoint& x) {
                      return diag2((1.0 + c * x[0] * x[0]) / (x[0] * x[0]), 1.0);
                    }, 2),
                    1};
  d.lambda = scalar2([c](const JetPoint& x) { return sqrt(1.0 + c * x[0] * x[0]) / x[0]; });
  d.rho = scalar2([c](const JetPoint& x) { return Jet(1.0) / sqrt(1.0 + c * x[0] * x[0]); });
  d.nu = d.rho;
  d.psi = scalar2([c](const JetPoint& x) {
    const Jet s = 1.0 + c * x[0] * x[0];
    return 2.0 * c / (s * s);
  });
  d.A = 0.0;
  return d;
}

SurfaceData parse_surface_data(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("surface data must be a JSON object");
  try {
    SurfaceData d;
    d.name = doc.value("name", std::string("surface"));
    std::vector<std::string> vars = doc.value("variables", std::vector<std::string>{"x", "y"});
    if (vars.size() != 2) throw ParseError("surface data needs exactly two variables");
    const json& box = doc.at("box");
    const auto lo = box.at("lo").get<std::vector<double>>();
    const auto hi = box.at("hi").get<std::vector<double>>();
    const auto counts = box.value("counts", std::vector<int>{9, 9});
    if (lo.size() != 2 || hi.size() != 2 || counts.size() != 2) throw ParseError("box needs two entries per key");
    std::function<bool(const Point&)> domain;
    if (doc.contains("domain")) {
      const Expression e = Expression::parse(expr_text(doc.at("domain"), "domain"), vars);
      domain = [e](const Point& p) {
        const std::array<double, 2> a{p[0], p[1]};
        try {
          return e.eval(std::span<const double>(a)) > 0.0;
        } catch (const DomainError&) {
          return false;
        }
      };
    }
    d.chart_N = make_chart(2, vars, {lo[0], lo[1], 0}, {hi[0], hi[1], 0}, {counts[0], counts[1], 1}, domain);
    const json& h = doc.at("h");
    std::array<std::string, 3> keys{"11", "12", "22"};
    std::array<ScalarField, 3> hc;
    for (int k = 0; k < 3; ++k) hc[k] = expr_field(h, keys[k], vars);
    d.h = MetricField{d.chart_N, MatrixField([hc](const JetPoint& x) {
                        JMat m = diag2(hc[0](x), hc[2](x));
                        m[0][1] = m[1][0] = hc[1](x);
                        return m;
                      }, 2),
                      1};
    d.lambda = expr_field(doc, "lambda", vars);
    d.rho = expr_field(doc, "rho", vars);
    if (doc.contains("log_nu")) {
      const ScalarField ln = expr_field(doc, "log_nu", vars);
      d.nu = scalar2([ln](const JetPoint& x) { return exp(ln(x)); });
    } else {
      d.nu = expr_field(doc, "nu", vars);
    }
    d.psi = expr_field(doc, "psi", vars);
    if (!doc.contains("A") || !doc.at("A").is_number()) throw ParseError("missing numeric 'A'");
    d.A = doc.at("A").get<double>();
    return d;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed surface data: ") + e.what());
  }
}

SurfaceData load_surface_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_surface_data(ss.str());
}

SystemResiduals system_residuals(const SurfaceData& data, const Point& q, const Differ& differ) {
  const NJets n = njets(data, q, differ);
  const double l2 = n.l2();
  const double psi = n.psi.value();
  const double A = data.A;
  SystemResiduals r;
  r.r_i = n.K + 0.5 * (2.0 * n.lap(n.lnl) + n.lap(n.lnn) - n.ip(n.lnr, n.lnr)) + (A - psi) / l2;
  if (!n.psi_zero)
    r.r_iia = n.lap(2.0 * n.lnr + n.lnn - 0.5 * n.lnpsi) + n.ip(n.lnr, n.lnr) - 0.25 * n.ip(n.lnpsi, n.lnpsi) +
              0.5 * n.ip(n.lnpsi, n.lnn) + (psi + A) / l2;
  r.iib_value = l2 * (n.lap(n.lnr) - n.ip(n.lnr, n.lnn)) + psi + A;
  r.iib_reduced = r.iib_value - A;
  const JVec dl = differential(n.lnl, 2), dn = differential(n.lnn, 2), dr = differential(n.lnr, 2);
  const DMat t = values(hessian(n.lnn, n.gam, 2) + 2.0 * sym(dl, dn) - outer(dr, dr));
  const auto [tf, alpha] = trace_free(t, values(n.h), values(n.hinv));
  r.r_u = tf;
  r.alpha = alpha;
  return r;
}

SystemReport system_report(const SurfaceData& data, double tolerance, const Differ& differ) {
  SystemReport rep;
  rep.tolerance = tolerance;
  double amin = 1e300, amax = -1e300, s1 = 0.0, s2 = 0.0;
  for (const Point& q : data.chart_N.grid()) {
    const SystemResiduals r = system_residuals(data, q, differ);
    rep.max_r_i = std::max(rep.max_r_i, std::abs(r.r_i));
    rep.max_r_iia = std::max(rep.max_r_iia, std::abs(r.r_iia));
    rep.max_r_u = std::max(rep.max_r_u, r.r_u);
    amin = std::min(amin, r.alpha);
    amax = std::max(amax, r.alpha);
    s1 += r.iib_value;
    s2 += r.iib_value * r.iib_value;
    ++rep.points;
  }
  rep.iib_mean = s1 / rep.points;
  rep.iib_std = std::sqrt(std::max(0.0, s2 / rep.points - rep.iib_mean * rep.iib_mean));
  rep.alpha_variation = amax - amin;
  rep.pass = rep.max_r_i < tolerance && rep.max_r_iia < tolerance && rep.max_r_u < tolerance &&
             rep.iib_std < tolerance;
  return rep;
}

SurfaceData conformal_change(const SurfaceData& data, const ScalarField& u) {
  SurfaceData d = data;
  const MatrixField h = data.h.components;
  d.h.components = MatrixField([h, u](const JetPoint& x) { return exp(2.0 * u(x)) * h(x); }, 2);
  const ScalarField lambda = data.lambda;
  d.lambda = scalar2([lambda, u](const JetPoint& x) { return exp(u(x)) * lambda(x); });
  return d;
}

double conformal_change_covariance(const SurfaceData& data, const ScalarField& u, const Point& q,
                                   const Differ& differ) {
  const SystemResiduals a = system_residuals(data, q, differ);
  const SystemResiduals b = system_residuals(conformal_change(data, u), q, differ);
  const double e = std::exp(-2.0 * u.value_jet(q).value());
  return std::max({std::abs(b.r_i - e * a.r_i), std::abs(b.r_iia - e * a.r_iia), std::abs(b.iib_value - a.iib_value),
                   std::abs(b.r_u - e * a.r_u)});
}

ScalarField sigma_bar(const SurfaceData& data) {
  const ScalarField psi = data.psi, lambda = data.lambda;
  return scalar2([psi, lambda](const JetPoint& x) {
    const Jet p = psi(x);
    if (p.value() < kPsiZero) return Jet(0.0);
    const Jet l = lambda(x);
    return sqrt(2.0 * p) / (l * l);
  });
}

double psi_sigma_defect(const SurfaceData& data, const Point& q) {
  const double psi = data.psi.value_jet(q).value();
  const double l = data.lambda.value_jet(q).value();
  const double s = sigma_bar(data).value_jet(q).value();
  return std::abs(2.0 * psi - l * l * l * l * s * s);
}

VectorField potential(const SurfaceData& data, bool weighted) {
  const Point c = data.chart_N.center();
  return VectorField(
      [data, c, weighted](const JetPoint& x) {
        const Jet dx = x[0] - c[0], dy = x[1] - c[1];
        Jet acc(0.0);
        for (const auto& [s, w] : gauss_unit()) {
          const JetPoint y{c[0] + s * dx, c[1] + s * dy, Jet(0.0)};
          acc += (w * s) * omega_coefficient(data, y, weighted);
        }
        return JVec{-acc * dy, acc * dx, Jet(0.0)};
      },
      2);
}

VectorField solve_theta(const SurfaceData& data, double R) { return lift_theta(data, R, true); }

BuiltFibration build(const SurfaceData& data, double R, double delta, int slices) {
  return build_with(data, R, delta, slices, true);
}

double theta_defect(const BuiltFibration& b, const Point& p, const Differ& differ) {
  const JVec th = b.theta.at(p, 1, differ);
  const JVec dr = differential(log(b.rho.at(p, 1, differ)), 3);
  const DMat lhs = values(d1(th, 3) + wedge(dr, truncated(th, 0)));
  const double F = omega_coefficient(b.data, constant(base_of(p)), false).value();
  DMat diff = lhs;
  diff[0][1] -= F;
  diff[1][0] += F;
  const JMat g = b.g.components.at(p, 0, differ);
  return form_norm(diff, values(inverse(g, 3)));
}

double closure_defect(const BuiltFibration& b, const Point& p) {
  const JetPoint x = seed(p, 3, 1);
  const Jet F = omega_coefficient(b.data, base_of(x), true);
  JMat w = zero_mat(1);
  w[0][1] = F;
  w[1][0] = -F;
  return std::abs(d2(w).value());
}

double wedge_identity_defect(const BuiltFibration& b, const Point& p, const Differ& differ) {
  const JMat g = b.g.components.at(p, 2, differ);
  const JMat gi = inverse(g, 3);
  const Gamma gam = christoffel(g, gi, 3);
  const JVec th = b.theta.at(p, 2, differ);
  const JVec dr = differential(log(b.rho.at(p, 3, differ)), 3);
  const DVec lhs = values(codiff2(wedge(dr, th), gam, gi, 3));
  const NJets n = njets(b.data, base_of(p), differ);
  const double c = -n.l2() * n.lap(n.lnr);
  const DVec t = values(th);
  DVec diff{};
  for (int i = 0; i < 3; ++i) diff[i] = lhs[i] - c * t[i];
  return covector_norm(diff, values(gi));
}

std::pair<DVec, DVec> f_equation(const BuiltFibration& b, const Point& p) {
  const SurfaceData& d = b.data;
  const Point q = base_of(p);
  const NJets n = njets(d, q, Differ{});
  const JetPoint y = seed(q, 2, 1);
  const Jet F = omega_coefficient(d, y, false);
  JMat om = zero_mat(1);
  om[0][1] = F;
  om[1][0] = -F;
  const DVec ds = values(codiff2(om, n.gam, n.hinv, 2));
  const DVec beta = values(differential(n.lnr + n.lnn - 2.0 * n.lnl, 2));
  const DMat hi = values(n.hinv);
  const DMat o = values(om);
  DVec grad{};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) grad[a] += hi[a][c] * beta[c];
  const double l2 = n.l2();
  const double iib = l2 * (n.lap(n.lnr) - n.ip(n.lnr, n.lnn)) + n.psi.value() + d.A;
  // θ dual to the unit vertical U = (ρ/|R|)∂_t
  const DVec th = values(b.theta.value_jet(p));
  const double sgn = b.R > 0 ? 1.0 : -1.0;
  const DVec dr = values(differential(n.lnr, 2));
  DVec m{dr[0], dr[1], 0.0};
  DVec w{};
  for (int c = 0; c < 2; ++c) {
    double cont = 0.0;
    for (int a = 0; a < 2; ++a) cont += grad[a] * o[a][c];
    w[c] = -l2 * (ds[c] + cont);
  }
  for (int i = 0; i < 3; ++i) w[i] -= iib * sgn * th[i];
  return {m, w};
}

Flow reconstruct_flow(const BuiltFibration& b) {
  using Cache = std::map<std::pair<double, double>, std::pair<DVec, DVec>>;
  auto cache = std::make_shared<Cache>();
  const auto fib = std::make_shared<const BuiltFibration>(b);
  soliton::PathCoefficients coeffs = [cache, fib](const Point& p) {
    const auto key = std::make_pair(p[0], p[1]);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    return cache->emplace(key, f_equation(*fib, p)).first->second;
  };

  const Box& box = b.chart_M.box;
  std::array<int, 3> n{};
  std::array<double, 3> step{};
  for (int i = 0; i < 3; ++i) {
    n[i] = std::max(1, box.counts[i]);
    step[i] = n[i] > 1 ? (box.hi[i] - box.lo[i]) / (n[i] - 1) : 0.0;
  }
  auto node = [box, step](int i, int j, int k) {
    return Point{box.lo[0] + i * step[0], box.lo[1] + j * step[1], box.lo[2] + k * step[2]};
  };
  auto segment = [coeffs](const Point& a, const Point& c, double f0) {
    if (a == c) return f0;
    return soliton::integrate_path({a, c}, f0, coeffs).f.back();
  };
  const Point centre = b.chart_M.center();
  std::array<int, 3> base{};
  for (int i = 0; i < 3; ++i)
    base[i] = step[i] > 0 ? std::clamp(static_cast<int>(std::lround((centre[i] - box.lo[i]) / step[i])), 0, n[i] - 1)
                          : 0;
  auto values_ptr = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n[0]) * n[1] * n[2], 0.0);
  auto& fv = *values_ptr;
  auto idx = [n](int i, int j, int k) { return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k; };

  fv[idx(base[0], base[1], base[2])] = segment(centre, node(base[0], base[1], base[2]), 0.0);
  // Sweep along each axis outward from the base node.
  auto sweep = [&](int axis, std::array<int, 3> start) {
    for (int dir : {1, -1}) {
      std::array<int, 3> cur = start;
      while (true) {
        std::array<int, 3> next = cur;
        next[axis] += dir;
        if (next[axis] < 0 || next[axis] >= n[axis]) break;
        fv[idx(next[0], next[1], next[2])] = segment(node(cur[0], cur[1], cur[2]), node(next[0], next[1], next[2]),
                                                     fv[idx(cur[0], cur[1], cur[2])]);
        cur = next;
      }
    }
  };
  sweep(0, base);
  for (int i = 0; i < n[0]; ++i) sweep(1, {i, base[1], base[2]});
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j) sweep(2, {i, j, base[2]});

  auto f_value = [box, step, n, node, idx, values_ptr, segment](const Point& p) {
    std::array<int, 3> k{};
    for (int i = 0; i < 3; ++i)
      k[i] = step[i] > 0 ? std::clamp(static_cast<int>(std::lround((p[i] - box.lo[i]) / step[i])), 0, n[i] - 1) : 0;
    return segment(node(k[0], k[1], k[2]), p, (*values_ptr)[idx(k[0], k[1], k[2])]);
  };

  Flow out;
  out.f = ScalarField::from_local([f_value, coeffs](const Point& p, int order) {
    if (order > 1) throw DomainError("reconstructed f carries first derivatives only");
    const double v = f_value(p);
    if (order == 0) return Jet(v);
    const auto [m, w] = coeffs(p);
    Jet j = Jet::zero(1);
    j[0] = v;
    for (int i = 0; i < 3; ++i) j[Jet::index(i == 0, i == 1, i == 2)] = w[i] - v * m[i];
    return j;
  });
  const ScalarField f = out.f;
  out.E = VectorField::from_local([fib, f](const Point& p, int order) {
    if (order > 1) throw DomainError("reconstructed flow carries first derivatives only");
    const JMat g = fib->g.components.at(p, order);
    const JMat gi = inverse(g, 3);
    const Jet s = fib->ln_nu.at(p, order + 1) - log(fib->rho.at(p, order + 1));
    JVec e = raise(gi, differential(s, 3), 3);
    const Jet fu = f.at(p, order) * fib->rho.at(p, order) / std::abs(fib->R);
    e[2] += fu;
    if (order == 0)
      for (auto& c : e) c = Jet(c.value());
    return e;
  });
  return out;
}

BuildResult build_and_verify(const SurfaceData& data, double R, double delta, double tolerance,
                             const Differ& differ, double precondition_tol) {
  BuildResult res;
  BuildReport& rep = res.report;
  rep.tolerance = tolerance;
  rep.system = system_report(data, precondition_tol, differ);
  if (!rep.system.pass)
    throw DomainError("surface data does not satisfy the system: max residual " +
                      std::to_string(std::max({rep.system.max_r_i, rep.system.max_r_iia, rep.system.max_r_u,
                                               rep.system.iib_std})));
  res.fibration = build(data, R, delta);
  const BuiltFibration& b = res.fibration;

  for (const Point& p : b.chart_M.random_points(4, 0x51CC1))
    rep.integrability_defect =
        std::max(rep.integrability_defect, soliton::integrability_defect(b.setup, b.ln_nu, data.A, p));
  if (rep.integrability_defect >= precondition_tol)
    throw DomainError("f equation is not integrable: defect " + std::to_string(rep.integrability_defect));

  res.flow = reconstruct_flow(b);
  const soliton::SolitonCandidate cand{b.g, res.flow.E, data.A, std::nullopt};
  rep.soliton = soliton::residual_report(data.name, cand, b.chart_M, tolerance, differ);

  const BuiltFibration tilde = build_with(data, 1.0, delta, 11, false);
  for (const Point& p : b.chart_M.grid()) {
    rep.theta_defect = std::max(rep.theta_defect, theta_defect(b, p, differ));
    const auto fr = semiconformal::frame(b.setup, p, differ);
    const DVec dr = values(differential(log(b.rho.at(p, 1, differ)), 3));
    const DMat gi = values(inverse(b.g.components.at(p, 0, differ), 3));
    DVec diff{};
    for (int i = 0; i < 3; ++i) diff[i] = fr.mu_flat[i] - dr[i];
    rep.mean_curvature_defect = std::max(rep.mean_curvature_defect, covector_norm(diff, gi));
    rep.psi_defect = std::max(rep.psi_defect, std::abs(fr.psi - data.psi.value_jet(base_of(p)).value()));
    const auto ft = semiconformal::frame(tilde.setup, p, differ);
    const DMat gti = values(inverse(tilde.g.components.at(p, 0, differ), 3));
    rep.harmonic_morphism_defect = std::max(rep.harmonic_morphism_defect, covector_norm(ft.mu_flat, gti));
    const JMat g2 = tensor_lab::metric_jet(b.g, p, 2, differ);
    rep.riemann_max = std::max(rep.riemann_max, std::sqrt(riemann_norm2(riemann(g2, 3), values(g2), 3)));
  }
  rep.pass = rep.soliton.pass && rep.theta_defect < tolerance && rep.mean_curvature_defect < tolerance &&
             rep.harmonic_morphism_defect < tolerance && rep.psi_defect < tolerance;
  return res;
}

ConstantCurvature constant_curvature_defect(const SurfaceData& data, const Point& q, const Differ& differ) {
  ConstantCurvature out;
  double psi_max = 0.0, vmin = 1e300, vmax = -1e300;
  for (const Point& y : data.chart_N.grid()) {
    const double psi = data.psi.value_jet(y).value();
    const double rho = data.rho.value_jet(y).value();
    psi_max = std::max(psi_max, psi);
    if (psi < kPsiZero) continue;
    const double v = rho * rho / std::sqrt(psi);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  out.cond_i = psi_max < kPsiZero ? 0.0 : std::min(psi_max, vmax - vmin);

  const NJets n = njets(data, q, differ);
  const double brace = n.K + n.lap(n.lnl - n.lnr) + n.ip(n.lnr, n.lnr) - n.ip(n.lnl, n.lnr) -
                       2.0 * n.psi.value() / n.l2();
  const JVec dl = differential(n.lnl, 2), dr = differential(n.lnr, 2);
  DMat t = values(hessian(n.lnr, n.gam, 2) + 2.0 * sym(dl, dr) - outer(dr, dr));
  const DMat h = values(n.h);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t[i][j] += brace * h[i][j];
  out.cond_ii = norm_h(t, values(n.hinv));
  return out;
}

}  // namespace ricsol::ansatz
