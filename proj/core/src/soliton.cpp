#include "ricsol/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "ricsol/geometry.hpp"
#include "ricsol/tensor_lab.hpp"

namespace ricsol::soliton {

using namespace ricsol::geo;
using semiconformal::frame_jets;
using semiconformal::FrameJets;
using semiconformal::SubmersionSetup;

namespace {

DMat sym_d(const DVec& a, const DVec& b) {
  DMat m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = 0.5 * (a[i] * b[j] + a[j] * b[i]);
  return m;
}

double form_norm(const DMat& w, const DMat& g) { return tensor_lab::norm_sym(w, g, 3) / std::sqrt(2.0); }

double vec_norm(const DVec& v, const DMat& g) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += g[i][j] * v[i] * v[j];
  return std::sqrt(std::max(0.0, s));
}

Point base_point(const JVec& phi) { return {phi[0].value(), phi[1].value(), 0.0}; }

struct VerticalJets {
  JVec m, w;
};

VerticalJets vertical_jets(const FrameJets& f, const Jet& ln_nu, double A) {
  const JVec grad = raise(f.ginv, differential(ln_nu, 3), 3);
  const JVec om_grad = contract(f.Omega, grad, 3);
  const JVec ds = codiff2(f.Omega, f.gamma, f.ginv, 3);
  const Jet c = f.psi - Jet(A);
  JVec w = zero_vec();
  for (int i = 0; i < 3; ++i) w[i] = -(om_grad[i] + ds[i] - c * f.theta[i]);
  return {f.mu_flat, w};
}

}  // namespace

ResidualTerms residual_terms(const SolitonCandidate& c, const Point& p, const Differ& differ) {
  ResidualTerms t;
  t.g = values(tensor_lab::metric_jet(c.g, p, 0, differ));
  const DMat ric = tensor_lab::curvature(c.g, p, differ).ricci.mat();
  const DMat lie = tensor_lab::lie_derivative_metric(c.g, c.E, p, differ).mat();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      t.ricci[i][j] = -2.0 * ric[i][j];
      t.lie[i][j] = -lie[i][j];
      t.a[i][j] = -2.0 * c.A * t.g[i][j];
      t.total[i][j] = t.ricci[i][j] + t.lie[i][j] + t.a[i][j];
    }
  return t;
}

DMat soliton_residual(const SolitonCandidate& c, const Point& p, const Differ& differ) {
  return residual_terms(c, p, differ).total;
}

double residual_norm(const SolitonCandidate& c, const Point& p, const Differ& differ) {
  const auto t = residual_terms(c, p, differ);
  return tensor_lab::norm_sym(t.total, t.g, 3);
}

ResidualReport residual_report(const std::string& case_id, const SolitonCandidate& c, const Chart& chart,
                               double tolerance, const Differ& differ) {
  ResidualReport r;
  r.case_id = case_id;
  r.grid = chart.box;
  r.tolerance = tolerance;
  double sum = 0.0;
  for (const Point& p : chart.grid()) {
    const auto t = residual_terms(c, p, differ);
    const double n = tensor_lab::norm_sym(t.total, t.g, 3);
    r.per_point.push_back(n);
    sum += n;
    r.max = std::max(r.max, n);
    r.ricci_term = std::max(r.ricci_term, tensor_lab::norm_sym(t.ricci, t.g, 3));
    r.lie_term = std::max(r.lie_term, tensor_lab::norm_sym(t.lie, t.g, 3));
    r.a_term = std::max(r.a_term, tensor_lab::norm_sym(t.a, t.g, 3));
  }
  if (!r.per_point.empty()) r.mean = sum / static_cast<double>(r.per_point.size());
  r.pass = std::isfinite(r.max) && r.max < tolerance;
  return r;
}

VectorField horizontal_part(const SubmersionSetup& s, const VectorField& E, const ScalarField& f,
                            const Differ& differ) {
  return VectorField::from_local([s, E, f, differ](const Point& p, int order) {
    const FrameJets fj = frame_jets(s, p, order + 1, differ);
    const JVec e = E.at(p, order, differ);
    const Jet fv = f.at(p, order, differ);
    JVec x = zero_vec();
    for (int i = 0; i < 3; ++i) x[i] = (e[i] + fj.mu[i] - fv * fj.U[i]).truncated(order);
    return x;
  });
}

double decomposition_defect(const SubmersionSetup& s, const SolitonCandidate& c, const Point& p,
                            const Differ& differ) {
  if (!c.decomposition) return 0.0;
  const FrameJets fj = frame_jets(s, p, 1, differ);
  const DVec e = values(c.E.value_jet(p));
  const DVec x = values(c.decomposition->X.value_jet(p));
  const double fv = c.decomposition->f.value_jet(p).value();
  DVec d{};
  for (int i = 0; i < 3; ++i) d[i] = e[i] - (-fj.mu[i].value() + x[i] + fv * fj.U[i].value());
  return vec_norm(d, values(fj.g));
}

DMat residual_decomposed(const SubmersionSetup& s, const VectorField& X, const ScalarField& f, double A,
                         const Point& p, const Differ& differ) {
  const FrameJets fj = frame_jets(s, p, 2, differ);
  const DMat g = values(fj.g);
  const DVec th = values(fj.theta);
  const DVec muf = values(fj.mu_flat);

  const JVec dln = differential(fj.lnlambda, 3);
  const Jet u_ln = pair(dln, fj.U, 3);
  const double ul = u_ln.value();
  const DVec dul = values(differential(u_ln, 3));
  const double lap = laplacian(fj.lnlambda, fj.gamma, fj.ginv, 3).value();
  const double mu_ln = pair(dln, fj.mu, 3).value();
  const DVec ds = values(codiff2(fj.Omega, fj.gamma, fj.ginv, 3));
  const double psi = fj.psi.value();

  const JMat hq = s.h.components.at(base_point(fj.phi), 2, differ);
  const double K = 0.5 * trace(ricci(hq, 2), inverse(hq, 2), 2).value();

  const Jet F = f.at(p, 1, differ);
  const double fv = F.value();
  const DVec df = values(differential(F, 3));
  const DMat lx = values(lie_metric(fj.g, X.at(p, 1, differ), 3));

  const double scal = fj.lambda2.value() * K + lap + mu_ln - fv * ul;
  DVec v{}, a{};
  for (int i = 0; i < 3; ++i) {
    v[i] = df[i] + fv * muf[i] + 2.0 * dul[i] + ds[i];
    a[i] = muf[i] + ul * th[i];
  }
  const DMat sv = sym_d(v, th);
  DMat out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double rhs = scal * (g[i][j] - th[i] * th[j]) - psi * g[i][j] + 0.5 * lx[i][j] + A * g[i][j] -
                         a[i] * a[j] - ul * ul * th[i] * th[j] + sv[i][j];
      out[i][j] = -2.0 * rhs;
    }
  return out;
}

PathSolution integrate_path(const std::vector<Point>& polyline, double f0, const PathCoefficients& coeffs,
                            int per_unit) {
  if (polyline.empty()) throw std::invalid_argument("integrate_path: empty path");
  PathSolution out;
  out.nodes.push_back(polyline.front());
  out.f.push_back(f0);
  auto [m0, w0] = coeffs(polyline.front());
  for (std::size_t k = 1; k < polyline.size(); ++k) {
    const Point& a = polyline[k - 1];
    const Point& b = polyline[k];
    DVec step{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double len = std::sqrt(step[0] * step[0] + step[1] * step[1] + step[2] * step[2]);
    const int n = std::max(1, static_cast<int>(std::ceil(len * per_unit)));
    for (auto& c : step) c /= n;
    auto dot = [&](const DVec& v) { return v[0] * step[0] + v[1] * step[1] + v[2] * step[2]; };
    double f = out.f.back();
    for (int i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const Point x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
      auto [m1, w1] = coeffs(x);
      const double a0 = dot(m0), a1 = dot(m1);
      f = (f * (1.0 - 0.5 * a0) + 0.5 * (dot(w0) + dot(w1))) / (1.0 + 0.5 * a1);
      out.nodes.push_back(x);
      out.f.push_back(f);
      m0 = m1;
      w0 = w1;
    }
  }
  return out;
}

std::pair<DVec, DVec> vertical_equation(const SubmersionSetup& s, const ScalarField& ln_nu, double A,
                                        const Point& p, const Differ& differ) {
  const FrameJets fj = frame_jets(s, p, 2, differ);
  const auto v = vertical_jets(fj, ln_nu.at(p, 1, differ), A);
  return {values(v.m), values(v.w)};
}

double integrability_defect(const SubmersionSetup& s, const ScalarField& ln_nu, double A, const Point& p,
                            const Differ& differ) {
  const FrameJets fj = frame_jets(s, p, 3, differ);
  const auto v = vertical_jets(fj, ln_nu.at(p, 2, differ), A);
  const DMat g = values(fj.g);
  const DMat dw = values(d1(v.w, 3));
  const DMat wm = values(wedge(v.w, v.m));
  DMat c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = dw[i][j] - wm[i][j];
  return form_norm(c, g) + form_norm(values(d1(v.m, 3)), g);
}

FSolution solve_f(const SubmersionSetup& s, const ScalarField& ln_nu, double A, const std::vector<Point>& polyline,
                  double f0, const Differ& differ, double tolerance) {
  FSolution out;
  for (const Point& p : polyline)
    out.integrability_defect = std::max(out.integrability_defect, integrability_defect(s, ln_nu, A, p, differ));
  if (!(out.integrability_defect < tolerance))
    throw DomainError("no consistent f: integrability defect " + std::to_string(out.integrability_defect));
  out.path = integrate_path(polyline, f0, [&](const Point& x) { return vertical_equation(s, ln_nu, A, x, differ); });
  return out;
}

DMat gradient_type_defect(const SolitonCandidate& c, const Point& p, const Differ& differ) {
  const JMat g = tensor_lab::metric_jet(c.g, p, 1, differ);
  return values(d1(lower(g, c.E.at(p, 1, differ), 3), 3));
}

}  // namespace ricsol::soliton
