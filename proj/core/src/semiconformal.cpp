#include "ricsol/semiconformal.hpp"

#include <algorithm>
#include <cmath>

namespace ricsol::semiconformal {

using namespace ricsol::geo;

namespace {

JetPoint offset(const JVec& x, int order) {
  JetPoint d = x;
  for (auto& c : d) {
    c = c.truncated(order);
    c[0] = 0.0;
  }
  return d;
}

JMat substitute(const JMat& m, const JetPoint& delta) {
  JMat out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = ricsol::substitute(m[i][j], delta);
  return out;
}

JVec substitute(const JVec& v, const JetPoint& delta) {
  return {ricsol::substitute(v[0], delta), ricsol::substitute(v[1], delta), ricsol::substitute(v[2], delta)};
}

Point base_point(const JVec& phi) { return {phi[0].value(), phi[1].value(), 0.0}; }

// Jets of an N-side field composed with φ, honouring the differentiation mode on N.
template <class V>
V compose_base(const Field<V>& f, const JVec& phi, int order, const Differ& differ) {
  const Point q = base_point(phi);
  V local = f.at(q, order, differ);
  JetPoint delta = offset(phi, order);
  delta[2] = Jet(0.0);
  if constexpr (std::is_same_v<V, Jet>) {
    return ricsol::substitute(local, delta);
  } else {
    return substitute(local, delta);
  }
}

DVec dvals(const JVec& v) { return values(v); }

double g_norm(const DVec& w, const DMat& ginv) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += w[i] * ginv[i][j] * w[j];
  return std::sqrt(std::max(0.0, s));
}

// Basic lift of ∂_a: X^i = g^{ij} φ^b_j h_ba / λ².
std::array<JVec, 2> basic_lifts(const FrameJets& f) {
  std::array<JVec, 2> lifts;
  const Jet inv_l2 = Jet(1.0) / f.lambda2;
  for (int a = 0; a < 2; ++a) {
    JVec w = zero_vec();
    for (int j = 0; j < 3; ++j)
      for (int b = 0; b < 2; ++b) w[j] += f.dphi[b][j] * f.h_at_phi[b][a];
    lifts[a] = inv_l2 * raise(f.ginv, w, 3);
  }
  return lifts;
}

JVec bracket(const JVec& x, const JVec& y) {
  JVec out = zero_vec();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += x[j] * y[i].derivative(j) - y[j] * x[i].derivative(j);
  return out;
}

double bilinear(const DMat& t, const DVec& x, const DVec& y) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += t[i][j] * x[i] * y[j];
  return s;
}

DMat sym_d(const DVec& a, const DVec& b) {
  DMat m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = 0.5 * (a[i] * b[j] + a[j] * b[i]);
  return m;
}

DMat pullback(const FrameJets& f, const DMat& alpha) {
  DMat out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out[i][j] += f.dphi[a][i].value() * f.dphi[b][j].value() * alpha[a][b];
  return out;
}

DVec pullback(const FrameJets& f, const DVec& w) {
  DVec out{};
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 2; ++a) out[i] += f.dphi[a][i].value() * w[a];
  return out;
}

void require_basic(const FrameJets& f, double tol) {
  const double u_ln = pair(differential(f.lnlambda, 3), f.U, 3).value();
  if (std::abs(u_ln) > tol) throw DomainError("dilation is not basic: |U(ln λ)| = " + std::to_string(u_ln));
}

}  // namespace

VectorField coordinate_projection() {
  return VectorField([](const JetPoint& x) { return JVec{x[0], x[1], Jet(0.0)}; });
}

VectorField coordinate_section(double t) {
  return VectorField([t](const JetPoint& y) { return JVec{y[0], y[1], Jet(t)}; }, 2);
}

SubmersionSetup make_setup(Chart chart_M, Chart chart_N, VectorField projection, VectorField section, MetricField g,
                           MetricField h, const Differ& differ) {
  SubmersionSetup s{std::move(chart_M), std::move(chart_N), std::move(projection), std::move(section),
                    std::move(g), std::move(h), 1};
  const FrameJets f = frame_jets(s, s.chart_M.center(), 1, differ);
  if (f.theta[2].value() < 0.0) s.vertical_sign = -1;
  return s;
}

FrameJets frame_jets(const SubmersionSetup& s, const Point& p, int order, const Differ& differ) {
  if (order < 1 || order + 1 > Jet::kMaxOrder) throw std::invalid_argument("frame_jets: order out of range");
  FrameJets f;
  f.order = order;
  f.g = s.g.components.at(p, order, differ);
  check_metric(f.g, 3);
  f.ginv = inverse(f.g, 3);
  f.gamma = christoffel(f.g, f.ginv, 3);
  f.phi = s.projection.at(p, order + 1, differ);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 3; ++i) f.dphi[a][i] = f.phi[a].derivative(i);
  f.h_at_phi = compose_base(s.h.components, f.phi, order, differ);

  // λ² = ½ h_ab φ^a_i g^ij φ^b_j
  Jet tr = Jet::zero(order);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      tr += f.h_at_phi[a][b] * pair(f.dphi[a], raise(f.ginv, f.dphi[b], 3), 3);
  f.lambda2 = 0.5 * tr;
  if (f.lambda2.value() <= 0.0) throw SingularError("projection is not a submersion at this point");
  f.lnlambda = 0.5 * log(f.lambda2);

  // V^i = ε^{ijk} ∂_jφ¹ ∂_kφ², a density along the fibres.
  const auto& a = f.dphi[0];
  const auto& b = f.dphi[1];
  JVec v{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  const Jet norm = sqrt(dot(f.g, v, v, 3));
  f.U = (Jet(static_cast<double>(s.vertical_sign)) / norm) * v;
  f.theta = lower(f.g, f.U, 3);
  f.Omega = d1(f.theta, 3);
  f.mu_flat = contract(f.Omega, truncated(f.U, order - 1), 3);
  f.mu = raise(f.ginv, f.mu_flat, 3);
  f.Omega_tilde = f.Omega + wedge(f.mu_flat, truncated(f.theta, order - 1));
  f.psi = 0.25 * norm2(f.Omega_tilde, f.ginv, 3);
  return f;
}

BaseJets base_jets(const SubmersionSetup& s, const Point& q, int order, const Differ& differ) {
  const JVec sec = s.section.at(q, order + 1, differ);
  const Point x0 = values(sec);
  const FrameJets f = frame_jets(s, x0, order + 1, differ);
  const JetPoint delta = offset(sec, order);
  BaseJets b;
  b.h = s.h.components.at(q, order, differ);
  b.lambda = ricsol::substitute(sqrt(f.lambda2), delta);
  b.psi = ricsol::substitute(f.psi, delta);
  const JMat om = substitute(f.Omega_tilde, delta);
  const JVec mu = substitute(f.mu_flat, delta);
  b.Omega_bar = zero_mat();
  b.eta = zero_vec();
  for (int a = 0; a < 2; ++a) {
    for (int i = 0; i < 3; ++i) b.eta[a] += sec[i].derivative(a) * mu[i];
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b.Omega_bar[a][c] += sec[i].derivative(a) * sec[j].derivative(c) * om[i][j];
  }
  return b;
}

Defect semiconformality_defect(const SubmersionSetup& s, const Point& p, const Differ& differ) {
  const JMat g = s.g.components.at(p, 0, differ);
  check_metric(g, 3);
  const DMat ginv = values(inverse(g, 3));
  const JVec phi = s.projection.at(p, 1, differ);
  const DMat h = values(s.h.components.at(base_point(phi), 0, differ));
  // S^{ab} = dφ^a · g⁻¹ · dφ^b
  double S[2][2] = {};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) S[a][c] += phi[a].d(i) * ginv[i][j] * phi[c].d(j);
  double tr = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) tr += h[a][c] * S[c][a];
  Defect d;
  d.lambda2 = 0.5 * tr;
  const double det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
  const double hinv[2][2] = {{h[1][1] / det, -h[0][1] / det}, {-h[1][0] / det, h[0][0] / det}};
  double E[2][2];
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) E[a][c] = S[a][c] - d.lambda2 * hinv[a][c];
  // |E|² with indices lowered by h
  double hE[2][2] = {};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 2; ++k) hE[a][c] += h[a][k] * E[k][c];
  double n2 = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) n2 += hE[a][c] * hE[c][a];
  d.defect = std::sqrt(std::max(0.0, n2));
  return d;
}

FibrationFrame frame(const SubmersionSetup& s, const Point& p, const Differ& differ) {
  const FrameJets f = frame_jets(s, p, 1, differ);
  FibrationFrame out;
  out.lambda = std::sqrt(f.lambda2.value());
  out.U = dvals(f.U);
  out.theta = dvals(f.theta);
  out.mu = dvals(f.mu);
  out.mu_flat = dvals(f.mu_flat);
  out.Omega = values(f.Omega);
  out.Omega_tilde = values(f.Omega_tilde);
  out.psi = f.psi.value();
  return out;
}

RicciDecomposition ricci_decomposed(const SubmersionSetup& s, const Point& p, const Differ& differ) {
  const FrameJets f = frame_jets(s, p, 2, differ);
  const DMat g = values(f.g);
  const DVec U = dvals(f.U);
  const DVec th = dvals(f.theta);
  const DVec muf = dvals(f.mu_flat);

  const JVec dln = differential(f.lnlambda, 3);
  const Jet u_ln = pair(dln, f.U, 3);
  const DVec d_u_ln = dvals(differential(u_ln, 3));
  const double uu_ln = pair(differential(u_ln, 3), f.U, 3).value();
  const double ul = u_ln.value();
  const double lap_ln = laplacian(f.lnlambda, f.gamma, f.ginv, 3).value();
  const double mu_ln = pair(dln, f.mu, 3).value();
  const DMat lmu = values(lie_metric(f.g, f.mu, 3));
  const DVec dsO = dvals(codiff2(f.Omega, f.gamma, f.ginv, 3));
  const double psi = f.psi.value();

  const JMat hq = s.h.components.at(base_point(f.phi), 2, differ);
  const JMat hinv = inverse(hq, 2);
  const double K = 0.5 * trace(ricci(hq, 2), hinv, 2).value();
  const double l2K = f.lambda2.value() * K;
  const double scal = l2K + lap_ln + mu_ln;

  RicciDecomposition r;
  DVec mt{};
  for (int i = 0; i < 3; ++i) mt[i] = muf[i] + ul * th[i];
  const DMat sym_du = sym_d(d_u_ln, th);
  const DMat sym_ds = sym_d(dsO, th);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.full[i][j] = scal * (g[i][j] - th[i] * th[j]) - psi * g[i][j] + 0.5 * lmu[i][j] - mt[i] * mt[j] -
                     ul * ul * th[i] * th[j] + 2.0 * sym_du[i][j] + sym_ds[i][j];

  // Blocks, each from its own formula.
  r.vv = 2.0 * uu_ln - 2.0 * ul * ul - psi + 0.5 * bilinear(lmu, U, U) + (dsO[0] * U[0] + dsO[1] * U[1] + dsO[2] * U[2]);

  DMat P{};  // P^i_j = δ^i_j − U^i θ_j
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P[i][j] = (i == j ? 1.0 : 0.0) - U[i] * th[j];

  DVec w{};
  for (int j = 0; j < 3; ++j) {
    double lmu_u = 0.0;
    for (int k = 0; k < 3; ++k) lmu_u += lmu[j][k] * U[k];
    w[j] = d_u_ln[j] + 0.5 * dsO[j] - ul * muf[j] + 0.5 * lmu_u;
  }
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) r.hv[j] += w[i] * P[i][j];

  DMat t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = (scal - psi) * g[i][j] + 0.5 * lmu[i][j] - muf[i] * muf[j];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.hh[a][b] += P[i][a] * P[j][b] * t[i][j];

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.blocks_reassembled[i][j] = r.hh[i][j] + r.hv[i] * th[j] + th[i] * r.hv[j] + r.vv * th[i] * th[j];
  return r;
}

DMat pullback_hessian(const SubmersionSetup& s, const ScalarField& f_bar, const Point& p, const Differ& differ,
                      double basic_tol) {
  const FrameJets f = frame_jets(s, p, 2, differ);
  require_basic(f, basic_tol);
  const Point q = base_point(f.phi);
  const BaseJets b = base_jets(s, q, 1, differ);
  const JMat hinv = inverse(b.h, 2);
  const Gamma gn = christoffel(b.h, hinv, 2);
  const Jet F = f_bar.at(q, 2, differ);
  const DMat hessN = values(hessian(F, gn, 2));
  const DVec dF = dvals(differential(F, 2));
  const DVec dl = dvals(differential(log(b.lambda), 2));
  const DMat h = values(b.h);
  const DMat hi = values(hinv);
  double h_grad = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) h_grad += hi[a][c] * dl[a] * dF[c];
  DMat inner{};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      inner[a][c] = hessN[a][c] + (dl[a] * dF[c] + dl[c] * dF[a]) - h_grad * h[a][c];

  DMat out = pullback(f, inner);
  const DVec dFm = pullback(f, dF);
  const DMat gi = values(f.ginv);
  DVec grad{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) grad[i] += gi[i][j] * dFm[j];
  const DMat om = values(f.Omega);
  DVec c{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) c[j] += grad[i] * om[i][j];
  const DMat sc = sym_d(c, dvals(f.theta));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] += sc[i][j];
  return out;
}

double laplacian_relation_defect(const SubmersionSetup& s, const ScalarField& f_bar, const Point& p,
                                 const Differ& differ) {
  const FrameJets f = frame_jets(s, p, 2, differ);
  const Jet F = compose_base(f_bar, f.phi, 2, differ);
  const double lhs = laplacian(F, f.gamma, f.ginv, 3).value() + pair(differential(F, 3), f.mu, 3).value();
  const Point q = base_point(f.phi);
  const JMat hq = s.h.components.at(q, 1, differ);
  const JMat hinv = inverse(hq, 2);
  const double lapN = laplacian(f_bar.at(q, 2, differ), christoffel(hq, hinv, 2), hinv, 2).value();
  return std::abs(lhs - f.lambda2.value() * lapN);
}

DstarTildeOmega dstar_tilde_omega(const SubmersionSetup& s, const Point& p, const Differ& differ) {
  const FrameJets f = frame_jets(s, p, 2, differ);
  DstarTildeOmega out;
  out.lhs = dvals(codiff2(f.Omega_tilde, f.gamma, f.ginv, 3));

  const BaseJets b = base_jets(s, base_point(f.phi), 1, differ);
  const JMat hinv = inverse(b.h, 2);
  const Gamma gn = christoffel(b.h, hinv, 2);
  const DVec ds = dvals(codiff2(b.Omega_bar, gn, hinv, 2));
  const DVec dl = dvals(differential(log(b.lambda), 2));
  const DMat hi = values(hinv);
  const DMat om = values(b.Omega_bar);
  DVec beta{};
  for (int a = 0; a < 2; ++a) beta[a] = b.eta[a].value() - 2.0 * dl[a];
  DVec grad{};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) grad[a] += hi[a][c] * beta[c];
  DVec w{};
  for (int c = 0; c < 2; ++c) {
    w[c] = ds[c];
    for (int a = 0; a < 2; ++a) w[c] += grad[a] * om[a][c];
  }
  const DVec pw = pullback(f, w);
  const DVec th = dvals(f.theta);
  const double l2 = f.lambda2.value();
  const double psi = f.psi.value();
  for (int i = 0; i < 3; ++i) out.rhs[i] = l2 * pw[i] + 2.0 * psi * th[i];
  DVec diff{};
  for (int i = 0; i < 3; ++i) diff[i] = out.lhs[i] - out.rhs[i];
  out.defect = g_norm(diff, values(f.ginv));
  return out;
}

double dstar_tilde_omega_defect(const SubmersionSetup& s, const Point& p, const Differ& differ) {
  return dstar_tilde_omega(s, p, differ).defect;
}

double basicness_defect(const SubmersionSetup& s, const ScalarField& F, const Point& p, const Differ& differ) {
  const FrameJets f = frame_jets(s, p, 1, differ);
  const Jet Fj = F.at(p, 1, differ);
  return std::abs(pair(differential(Fj, 3), f.U, 3).value());
}

StructureIdentities structure_identities(const SubmersionSetup& s, const Point& p, const Differ& differ) {
  const FrameJets f = frame_jets(s, p, 2, differ);
  StructureIdentities out;
  const auto X = basic_lifts(f);
  const DVec x1 = dvals(X[0]);
  const DVec x2 = dvals(X[1]);
  const DMat g = values(f.g);
  const Jet u_ln = pair(differential(f.lnlambda, 3), f.U, 3);
  const double ul = u_ln.value();

  const DMat lug = values(lie_metric(f.g, f.U, 3));
  for (const auto& a : {x1, x2})
    for (const auto& b : {x1, x2})
      out.foliation = std::max(out.foliation, std::abs(bilinear(lug, a, b) + 2.0 * ul * bilinear(g, a, b)));

  // Horizontal orthonormal frame by Gram–Schmidt on the lifts.
  const Jet n1 = sqrt(dot(f.g, X[0], X[0], 3));
  const JVec e1 = (Jet(1.0) / n1) * X[0];
  const JVec y2 = X[1] - dot(f.g, X[1], e1, 3) * e1;
  const JVec e2 = (Jet(1.0) / sqrt(dot(f.g, y2, y2, 3))) * y2;
  double mean = 0.0;
  for (const auto& e : {e1, e2}) {
    DVec nab{};
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        nab[k] += e[i].value() * e[k].d(i);
        for (int j = 0; j < 3; ++j) nab[k] += f.gamma[k][i][j].value() * e[i].value() * e[j].value();
      }
    }
    mean += bilinear(g, dvals(f.U), nab);
  }
  out.horizontal_mean = std::abs(mean - 2.0 * ul);

  const DVec th = dvals(f.theta);
  const DVec U = dvals(f.U);
  for (const auto& x : X) {
    DVec br = dvals(bracket(f.U, x));
    double tv = 0.0;
    for (int i = 0; i < 3; ++i) tv += th[i] * br[i];
    for (int i = 0; i < 3; ++i) br[i] -= tv * U[i];
    out.bracket = std::max(out.bracket, std::sqrt(std::max(0.0, bilinear(g, br, br))));
  }

  const JMat& om = f.Omega_tilde;
  DMat lo{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        lo[i][j] += U[k] * om[i][j].d(k) + om[k][j].value() * f.U[k].d(i) + om[i][k].value() * f.U[k].d(j);
  out.omega_tilde_basic = std::abs(bilinear(lo, x1, x2));
  out.dmu_horizontal = std::abs(bilinear(values(d1(f.mu_flat, 3)), x1, x2));
  return out;
}

}  // namespace ricsol::semiconformal
