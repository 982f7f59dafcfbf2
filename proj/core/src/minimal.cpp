#include "ricsol/minimal.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ricsol/errors.hpp"
#include "ricsol/geometry.hpp"
#include "ricsol/quadrature.hpp"

namespace ricsol::minimal {

using namespace geo;

namespace {

ScalarField scalar2(ScalarField::JetFn fn) { return ScalarField(std::move(fn), 2); }

CJet cjet(std::complex<double> c) { return CJet{Jet(c.real()), Jet(c.imag())}; }
std::complex<double> cvalue(const CJet& c) { return {c.re.value(), c.im.value()}; }
CJet at_point(const JetPoint& x) { return CJet{x[0], x[1]}; }

JMat flat2() {
  JMat m = zero_mat();
  m[0][0] = m[1][1] = 1.0;
  return m;
}

double norm_h(const DMat& t, const DMat& hi) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += t[i][j] * t[k][l] * hi[i][k] * hi[j][l];
  return std::sqrt(std::max(0.0, s));
}

bool is_identically_one(const HolomorphicDatum& d) {
  for (const Point& q : d.chart.grid()) {
    const std::vector<std::complex<double>> z{{q[0], q[1]}};
    if (std::abs(d.v.eval(z) - 1.0) > 1e-15) return false;
  }
  return true;
}

}  // namespace

Chart default_chart() { return make_chart(2, {"x", "y"}, {-1, -1, 0}, {1, 1, 0}, {9, 9, 1}); }

HolomorphicDatum make_datum(const std::string& v, const std::optional<std::string>& u, double B, double C,
                            std::complex<double> z0, Chart chart) {
  if (!(B > 0.0)) throw DomainError("B must be positive");
  if (C < 0.0) throw DomainError("C must be nonnegative");
  HolomorphicDatum d;
  d.v = Expression::parse(v, {"z"});
  if (u) d.u = Expression::parse(*u, {"z"});
  d.B = B;
  d.C = C;
  d.z0 = z0;
  d.chart = std::move(chart);
  return d;
}

HolomorphicDatum parse_datum(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("v")) throw ParseError("holomorphic datum needs 'v'");
    std::optional<std::string> u;
    if (doc.contains("u")) u = doc.at("u").get<std::string>();
    std::complex<double> z0{};
    if (doc.contains("z0")) {
      const auto z = doc.at("z0").get<std::vector<double>>();
      if (z.size() != 2) throw ParseError("z0 must be [re, im]");
      z0 = {z[0], z[1]};
    }
    Chart chart = default_chart();
    if (doc.contains("box")) {
      const json& box = doc.at("box");
      const auto lo = box.at("lo").get<std::vector<double>>();
      const auto hi = box.at("hi").get<std::vector<double>>();
      const auto n = box.value("counts", std::vector<int>{9, 9});
      if (lo.size() != 2 || hi.size() != 2 || n.size() != 2) throw ParseError("box needs two entries per key");
      chart = make_chart(2, {"x", "y"}, {lo[0], lo[1], 0}, {hi[0], hi[1], 0}, {n[0], n[1], 1});
    }
    HolomorphicDatum d = make_datum(doc.at("v").get<std::string>(), u, doc.value("B", 1.0), doc.value("C", 0.5), z0,
                                    chart);
    d.name = doc.value("name", std::string("holomorphic"));
    return d;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed holomorphic datum: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

CJet eval_v(const HolomorphicDatum& d, const CJet& z) { return d.v.eval(std::span<const CJet>(&z, 1)); }

CJet primitive(const HolomorphicDatum& d, const CJet& z) {
  const CJet z0 = cjet(d.z0);
  if (d.u) {
    return d.u->eval(std::span<const CJet>(&z, 1)) - d.u->eval(std::span<const CJet>(&z0, 1));
  }
  const CJet dz = z - z0;
  CJet acc{Jet(0.0), Jet(0.0)};
  for (const auto& [s, w] : gauss_unit()) {
    const CJet zs = z0 + CJet{s * dz.re, s * dz.im};
    acc = acc + CJet{Jet(w), Jet(0.0)} * eval_v(d, zs);
  }
  return acc * dz;
}

std::complex<double> integrate_conj_v(const HolomorphicDatum& d, const std::vector<std::complex<double>>& path) {
  std::complex<double> total{};
  for (std::size_t k = 1; k < path.size(); ++k) {
    const std::complex<double> a = path[k - 1], step = path[k] - path[k - 1];
    std::complex<double> acc{};
    for (const auto& [s, w] : gauss_unit()) {
      const std::vector<std::complex<double>> z{a + s * step};
      acc += w * std::conj(d.v.eval(z));
    }
    total += acc * std::conj(step);
  }
  return total;
}

DatumDefects datum_defects(const HolomorphicDatum& d, const Point& q, const Differ& differ) {
  auto part = [&d](bool use_u, bool imag) {
    return scalar2([&d, use_u, imag](const JetPoint& x) {
      const CJet w = use_u ? primitive(d, at_point(x)) : eval_v(d, at_point(x));
      return imag ? w.im : w.re;
    });
  };
  const Jet vr = part(false, false).at(q, 1, differ), vi = part(false, true).at(q, 1, differ);
  const Jet ur = part(true, false).at(q, 1, differ), ui = part(true, true).at(q, 1, differ);
  DatumDefects out;
  out.cauchy_riemann = std::abs(vr.d(0) - vi.d(1)) + std::abs(vr.d(1) + vi.d(0));
  out.primitive = std::hypot(ur.d(0) - vr.value(), ui.d(0) - vi.value());
  out.min_abs_v = std::hypot(vr.value(), vi.value());
  return out;
}

HolomorphicValue from_holomorphic(const HolomorphicDatum& d, std::complex<double> z) {
  const std::vector<std::complex<double>> arg{z};
  const std::complex<double> v = d.v.eval(arg);
  if (std::abs(v) < 1e-14) throw SingularError("holomorphic datum v vanishes");
  const std::complex<double> u = cvalue(primitive(d, cjet(z)));
  return {d.B / std::abs(v), -d.C * v * std::conj(u) / (d.B * d.B)};
}

ScalarField beta_field(const HolomorphicDatum& d) {
  return scalar2([d](const JetPoint& x) {
    const Jet m = abs2(eval_v(d, at_point(x)));
    if (m.value() < 1e-28) throw SingularError("holomorphic datum v vanishes");
    return std::log(d.B) - 0.5 * log(m);
  });
}

ScalarField gamma_field(const HolomorphicDatum& d) {
  return scalar2([d](const JetPoint& x) { return (-d.C / (d.B * d.B)) * abs2(primitive(d, at_point(x))); });
}

ansatz::SurfaceData surface_data(const HolomorphicDatum& d) {
  ansatz::SurfaceData s;
  s.name = d.name;
  s.chart_N = d.chart;
  s.h = MetricField{d.chart, MatrixField([](const JetPoint&) { return flat2(); }, 2), 1};
  const ScalarField beta = beta_field(d), gamma = gamma_field(d);
  s.lambda = scalar2([beta](const JetPoint& x) { return exp(beta(x)); });
  s.rho = scalar2([](const JetPoint&) { return Jet(1.0); });
  s.nu = scalar2([gamma](const JetPoint& x) { return exp(gamma(x)); });
  const double C = d.C;
  s.psi = scalar2([C](const JetPoint&) { return Jet(C); });
  s.A = 3.0 * d.C;
  return s;
}

MinbisResiduals minbis_residuals(const MetricField& h, const ScalarField& lambda, const ScalarField& nu, double C,
                                 double A, const Point& q, const Differ& differ) {
  ansatz::SurfaceData s;
  s.chart_N = h.chart;
  s.h = h;
  s.lambda = lambda;
  s.rho = scalar2([](const JetPoint&) { return Jet(1.0); });
  s.nu = nu;
  s.psi = scalar2([C](const JetPoint&) { return Jet(C); });
  s.A = A;
  const ansatz::SystemResiduals r = ansatz::system_residuals(s, q, differ);
  return {r.r_i, C == 0.0 ? 0.0 : r.r_iia, r.r_u};
}

double ComplexResiduals::max() const { return std::max({std::abs(r1), std::abs(r2), std::abs(r3)}); }

ComplexResiduals complex_residuals(const ScalarField& beta, const ScalarField& gamma, double C, double A,
                                   const Point& q, const Differ& differ) {
  using cd = std::complex<double>;
  const Jet b = beta.at(q, 2, differ), g = gamma.at(q, 2, differ);
  const double bzzb = 0.25 * (b.d2(0, 0) + b.d2(1, 1));
  const double gzzb = 0.25 * (g.d2(0, 0) + g.d2(1, 1));
  const cd bz = 0.5 * cd(b.d(0), -b.d(1));
  const cd gz = 0.5 * cd(g.d(0), -g.d(1));
  const cd gzz = 0.25 * cd(g.d2(0, 0) - g.d2(1, 1), -2.0 * g.d2(0, 1));
  const double e = std::exp(-2.0 * b.value());
  ComplexResiduals r;
  r.r1 = 4.0 * bzzb - 0.5 * (3.0 * C - A) * e;
  r.r2 = 4.0 * gzzb + (C + A) * e;
  r.r3 = gzz + 2.0 * gz * bz;
  return r;
}

double twod_soliton_residual(const MetricField& h, const ScalarField& nu, double A, const Point& q,
                             const Differ& differ) {
  const JMat hj = h.components.at(q, 2, differ);
  check_metric(hj, 2);
  const JMat hinv = inverse(hj, 2);
  const Gamma gam = christoffel(hj, hinv, 2);
  const double K = 0.5 * trace(ricci(hj, 2), hinv, 2).value();
  const Jet n = nu.at(q, 2, differ);
  if (!(n.value() > 0.0)) throw DomainError("nu must be positive");
  DMat t = values(hessian(log(n), gam, 2));
  const DMat hv = values(hj);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t[i][j] += (K + A) * hv[i][j];
  return norm_h(t, values(hinv));
}

ansatz::SurfaceData cigar_data(int grid) {
  ansatz::SurfaceData s;
  s.name = "cigar";
  s.chart_N = make_chart(2, {"x", "y"}, {-2, -2, 0}, {2, 2, 0}, {grid, grid, 1});
  s.h = MetricField{s.chart_N, MatrixField([](const JetPoint& x) {
                      return (Jet(1.0) / (1.0 + x[0] * x[0] + x[1] * x[1])) * flat2();
                    }, 2),
                    1};
  s.lambda = scalar2([](const JetPoint&) { return Jet(1.0); });
  s.rho = s.lambda;
  s.nu = scalar2([](const JetPoint& x) { return Jet(1.0) / (1.0 + x[0] * x[0] + x[1] * x[1]); });
  s.psi = scalar2([](const JetPoint&) { return Jet(0.0); });
  s.A = 0.0;
  return s;
}

NilBuild nil_build(const HolomorphicDatum& d, double delta, double tolerance, const Differ& differ) {
  NilBuild out;
  const ansatz::SurfaceData s = surface_data(d);
  if (d.C == 0.0) {
    // Conformal change h → h/λ̄² leaves a flat base with ν̄ = 1.
    out.twod_branch = true;
    const ScalarField lambda = s.lambda;
    const MetricField hc{d.chart, MatrixField([lambda](const JetPoint& x) {
                           const Jet l = lambda(x);
                           return (Jet(1.0) / (l * l)) * flat2();
                         }, 2),
                         1};
    for (const Point& q : d.chart.grid())
      out.twod_residual = std::max(out.twod_residual, twod_soliton_residual(hc, s.nu, s.A, q, differ));
    return out;
  }
  out.build = ansatz::build_and_verify(s, 1.0, delta, tolerance, differ);
  if (!is_identically_one(d)) return out;

  // g = (dy₁² + dy₂²)/B² + (F y₁dy₂ + dy₃)² with y₃ = t − F y₁y₂/2 − F(c₁y₂ − c₂y₁)/2.
  const auto& b = out.build->fibration;
  const double F = std::sqrt(2.0 * d.C) / (d.B * d.B);
  const Point c = d.chart.center();
  double witness = 0.0;
  for (const Point& x : b.chart_M.grid()) {
    const double y1 = x[0], y2 = x[1];
    // x = Φ(y): t = y₃ + F y₁y₂/2 + F(c₁y₂ − c₂y₁)/2
    const double dt1 = 0.5 * F * (y2 - c[1]);
    const double dt2 = 0.5 * F * (y1 + c[0]);
    const double J[3][3] = {{1, 0, 0}, {0, 1, 0}, {dt1, dt2, 1}};
    const DMat g = values(b.g.components.at(x, 0));
    const double th[3] = {0.0, F * y1, 1.0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double pulled = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int e = 0; e < 3; ++e) pulled += J[a][i] * g[a][e] * J[e][j];
        const double target = th[i] * th[j] + (i == j && i < 2 ? 1.0 / (d.B * d.B) : 0.0);
        witness = std::max(witness, std::abs(pulled - target));
      }
  }
  out.isometry_witness = witness;
  return out;
}

}  // namespace ricsol::minimal
