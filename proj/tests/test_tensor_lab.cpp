#include <gtest/gtest.h>

#include <cmath>

#include "ricsol/tensor_lab.hpp"

using namespace ricsol;
using tensor_lab::FormField;

namespace {

const Differ kFd{DiffMode::finite_difference, 1e-4};

MetricField metric(int dim, MatrixField::JetFn fn, Point lo, Point hi) {
  MetricField g;
  g.chart = make_chart(dim, {}, lo, hi, {5, 5, 5});
  g.components = MatrixField(std::move(fn), dim);
  return g;
}

JMat zero() { return geo::zero_mat(); }

MetricField flat3() {
  return metric(3, [](const JetPoint&) {
    JMat m = zero();
    for (int i = 0; i < 3; ++i) m[i][i] = Jet(1.0);
    return m;
  }, {-1, -1, -1}, {1, 1, 1});
}

MetricField hyperbolic() {
  MetricField g = metric(2, [](const JetPoint& x) {
    JMat m = zero();
    const Jet w = Jet(1.0) / (x[1] * x[1]);
    m[0][0] = w;
    m[1][1] = w;
    return m;
  }, {-1, 0.5, 0}, {1, 2, 0});
  g.chart.domain = [](const Point& p) { return p[1] > 0; };
  return g;
}

MetricField sol() {
  return metric(3, [](const JetPoint& x) {
    JMat m = zero();
    m[0][0] = Jet(1.0);
    m[1][1] = exp(2.0 * x[0]);
    m[2][2] = exp(-2.0 * x[0]);
    return m;
  }, {-1, -1, -1}, {1, 1, 1});
}

MetricField nil() {
  return metric(3, [](const JetPoint& y) {
    JMat m = zero();
    m[0][0] = Jet(1.0);
    m[1][1] = 1.0 + y[0] * y[0];
    m[1][2] = m[2][1] = y[0];
    m[2][2] = Jet(1.0);
    return m;
  }, {-1, -1, -1}, {1, 1, 1});
}

MetricField sphere2() {
  MetricField g = metric(2, [](const JetPoint& x) {
    JMat m = zero();
    m[0][0] = Jet(1.0);
    const Jet s = sin(x[0]);
    m[1][1] = s * s;
    return m;
  }, {0.5, -1, 0}, {2.5, 1, 0});
  g.chart.domain = [](const Point& p) { return p[0] > 0 && p[0] < M_PI; };
  return g;
}

}  // namespace

TEST(TensorLab, FlatChristoffelVanishes) {
  const auto c = tensor_lab::christoffel(flat3(), {0.1, 0.2, 0.3});
  for (double v : c.components) EXPECT_EQ(v, 0.0);
}

TEST(TensorLab, HyperbolicPlaneChristoffel) {
  for (const Differ& d : {Differ{}, kFd}) {
    const auto c = tensor_lab::christoffel(hyperbolic(), {0, 1, 0}, d);
    const double tol = d.mode == DiffMode::analytic ? 1e-14 : 1e-7;
    EXPECT_NEAR(c(0, 0, 1), -1.0, tol);
    EXPECT_NEAR(c(1, 0, 0), 1.0, tol);
    EXPECT_NEAR(c(1, 1, 1), -1.0, tol);
    EXPECT_NEAR(c(0, 0, 0), 0.0, tol);
  }
}

TEST(TensorLab, SolChristoffelAtOrigin) {
  const auto c = tensor_lab::christoffel(sol(), {0, 0, 0});
  EXPECT_NEAR(c(0, 1, 1), -1.0, 1e-14);
  EXPECT_NEAR(c(0, 2, 2), 1.0, 1e-14);
  EXPECT_NEAR(c(1, 0, 1), 1.0, 1e-14);
  EXPECT_NEAR(c(1, 1, 0), 1.0, 1e-14);
  EXPECT_NEAR(c(2, 0, 2), -1.0, 1e-14);
  EXPECT_NEAR(c(0, 0, 0), 0.0, 1e-14);
}

TEST(TensorLab, RicciOfModelGeometries) {
  const auto flat = tensor_lab::curvature(flat3(), {0.3, 0.1, 0.2}, kFd);
  for (double v : flat.ricci.components) EXPECT_NEAR(v, 0.0, 1e-9);

  for (const Differ& d : {Differ{}, kFd}) {
    const auto n = tensor_lab::curvature(nil(), {0, 0, 0}, d);
    const double tol = d.mode == DiffMode::analytic ? 1e-13 : 1e-6;
    EXPECT_NEAR(n.ricci(0, 0), -0.5, tol);
    EXPECT_NEAR(n.ricci(1, 1), -0.5, tol);
    EXPECT_NEAR(n.ricci(2, 2), 0.5, tol);
    EXPECT_NEAR(n.ricci(1, 2), 0.0, tol);
  }
  const auto s = tensor_lab::curvature(sol(), {0.4, -0.2, 0.7});
  EXPECT_NEAR(s.ricci(0, 0), -2.0, 1e-12);
  EXPECT_NEAR(s.ricci(1, 1), 0.0, 1e-12);
  EXPECT_NEAR(s.ricci(2, 2), 0.0, 1e-12);
}

TEST(TensorLab, SphereConventionLock) {
  const Point p{1.1, 0.3, 0};
  for (const Differ& d : {Differ{}, kFd}) {
    const auto c = tensor_lab::curvature(sphere2(), p, d);
    EXPECT_NEAR(*c.gauss, 1.0, 1e-8);
    EXPECT_NEAR(c.ricci(0, 0), 1.0, 1e-8);
    EXPECT_NEAR(c.ricci(1, 1), std::sin(1.1) * std::sin(1.1), 1e-8);
  }
}

TEST(TensorLab, RicciScaleInvariance) {
  const Point p{0.2, -0.3, 0.5};
  const auto base = tensor_lab::curvature(nil(), p, kFd);
  for (double c : {0.5, 2.0}) {
    MetricField scaled = nil();
    const auto inner = scaled.components;
    scaled.components = MatrixField([inner, c](const JetPoint& x) { return Jet(c) * inner(x); });
    const auto s = tensor_lab::curvature(scaled, p, kFd);
    for (size_t i = 0; i < s.ricci.components.size(); ++i)
      EXPECT_NEAR(s.ricci.components[i], base.ricci.components[i], 1e-8);
  }
}

TEST(TensorLab, LieDerivativeExamples) {
  const double a = 0.7;
  VectorField radial([a](const JetPoint& x) { return JVec{-a * x[0], -a * x[1], -a * x[2]}; });
  const auto l = tensor_lab::lie_derivative_metric(flat3(), radial, {0.3, 0.2, -0.1});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(l(i, j), i == j ? -2 * a : 0.0, 1e-14);

  VectorField solflow([](const JetPoint& x) { return JVec{Jet(-2.0), Jet(0.0), -4.0 * x[2]}; });
  const Point p{0.3, 0.1, 0.4};
  for (const Differ& d : {Differ{}, kFd}) {
    const auto s = tensor_lab::lie_derivative_metric(sol(), solflow, p, d);
    const double tol = d.mode == DiffMode::analytic ? 1e-13 : 1e-7;
    EXPECT_NEAR(s(0, 0), 0.0, tol);
    EXPECT_NEAR(s(1, 1), -4 * std::exp(0.6), tol);
    EXPECT_NEAR(s(2, 2), -4 * std::exp(-0.6), tol);
  }

  MetricField plane = metric(2, [](const JetPoint&) {
    JMat m = zero();
    m[0][0] = m[1][1] = Jet(1.0);
    return m;
  }, {-1, -1, 0}, {1, 1, 0});
  VectorField rot([](const JetPoint& x) { return JVec{-x[1], x[0], Jet(0.0)}; }, 2);
  const auto r = tensor_lab::lie_derivative_metric(plane, rot, {0.4, -0.2, 0});
  for (double v : r.components) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(TensorLab, HessianAndLaplacian) {
  ScalarField quad([](const JetPoint& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); });
  MetricField plane = metric(2, [](const JetPoint&) {
    JMat m = zero();
    m[0][0] = m[1][1] = Jet(1.0);
    return m;
  }, {-1, -1, 0}, {1, 1, 0});
  const auto h = tensor_lab::covariant_hessian(plane, quad, {0.3, 0.4, 0}, kFd);
  EXPECT_NEAR(h(0, 0), 1.0, 1e-7);
  EXPECT_NEAR(h(1, 1), 1.0, 1e-7);
  EXPECT_NEAR(h(0, 1), 0.0, 1e-7);
  EXPECT_NEAR(tensor_lab::laplacian(plane, quad, {0.3, 0.4, 0}), 2.0, 1e-14);

  ScalarField c([](const JetPoint&) { return Jet(4.0); });
  const auto hc = tensor_lab::covariant_hessian(nil(), c, {0.1, 0.2, 0.3});
  for (double v : hc.components) EXPECT_EQ(v, 0.0);

  // Δ ln λ for λ = t^{1/√2} on g = h/λ² + dt², with t the third coordinate.
  const double k = 1.0 / std::sqrt(2.0);
  MetricField warped = metric(3, [k](const JetPoint& x) {
    JMat m = zero();
    const Jet w = pow(x[2], -2 * k);
    m[0][0] = m[1][1] = w;
    m[2][2] = Jet(1.0);
    return m;
  }, {-1, -1, 1}, {1, 1, 2});
  ScalarField lnlam([k](const JetPoint& x) { return k * log(x[2]); });
  for (double t : {1.0, 1.5, 2.0}) {
    const double lp = k / t, lpp = -k / (t * t);
    const double expected = -2 * lp * lp + lpp;
    EXPECT_NEAR(tensor_lab::laplacian(warped, lnlam, {0.1, 0.2, t}), expected, 1e-12);
    EXPECT_NEAR(expected, -(1 + k) / (t * t), 1e-14);
  }
}

TEST(TensorLab, ExteriorDerivativeExamples) {
  VectorField theta([](const JetPoint& y) { return JVec{Jet(0.0), y[0], Jet(1.0)}; });
  const auto d = tensor_lab::exterior_derivative(FormField::one_form(theta), 3, {0.5, -0.2, 0.3});
  EXPECT_NEAR(d(0, 1), 1.0, 1e-14);
  EXPECT_NEAR(d(1, 0), -1.0, 1e-14);
  EXPECT_NEAR(d(0, 2), 0.0, 1e-14);
  EXPECT_NEAR(d(1, 2), 0.0, 1e-14);

  VectorField sl2([](const JetPoint& x) { return JVec{Jet(1.0) / x[1], Jet(0.0), Jet(1.0)}; });
  const auto ds = tensor_lab::exterior_derivative(FormField::one_form(sl2), 3, {0.2, 1.5, 0.0}, kFd);
  EXPECT_NEAR(ds(0, 1), 1.0 / (1.5 * 1.5), 1e-8);

  FormField top;
  top.degree = 3;
  EXPECT_THROW(tensor_lab::exterior_derivative(top, 3, {0, 0, 0}), std::invalid_argument);
}

TEST(TensorLab, DDIsZero) {
  ScalarField f([](const JetPoint& x) { return sin(x[0] * x[1]) + exp(0.3 * x[2]) * x[0]; });
  VectorField w([](const JetPoint& x) { return JVec{x[1] * x[2] * x[2], cos(x[0]) * x[2], exp(x[1] - x[0])}; });
  const Point p{0.3, -0.4, 0.2};
  for (const Differ& d : {Differ{}, kFd}) {
    const Jet f2 = f.at(p, 2, d);
    const JMat ddf = geo::d1(geo::differential(f2, 3), 3);
    for (const auto& row : ddf)
      for (const auto& v : row) EXPECT_LT(std::abs(v.value()), 1e-6);
    const JVec w2 = w.at(p, 2, d);
    EXPECT_LT(std::abs(geo::d2(geo::d1(w2, 3)).value()), 1e-6);
  }
}

TEST(TensorLab, CodifferentialExamples) {
  MetricField plane = metric(2, [](const JetPoint&) {
    JMat m = zero();
    m[0][0] = m[1][1] = Jet(1.0);
    return m;
  }, {-1, -1, 0}, {1, 1, 0});
  VectorField df([](const JetPoint& x) { return JVec{2.0 * x[0], 4.0 * x[1], Jet(0.0)}; }, 2);
  const auto c = tensor_lab::codifferential(plane, FormField::one_form(df), {0.2, 0.1, 0});
  EXPECT_NEAR(c(0), -6.0, 1e-14);

  // d*(x dx∧dy) = −μ⌋grad x = −dy
  MatrixField xvol([](const JetPoint& x) {
    JMat m = zero();
    m[0][1] = x[0];
    m[1][0] = -x[0];
    return m;
  }, 2);
  const auto c2 = tensor_lab::codifferential(plane, FormField::two_form(xvol), {0.3, 0.2, 0});
  EXPECT_NEAR(c2(0), 0.0, 1e-14);
  EXPECT_NEAR(c2(1), -1.0, 1e-14);
}

TEST(TensorLab, SurfaceIdentitiesPinSigns) {
  auto alpha = [](const JetPoint& x) { return x[0] + 2.0 * x[1]; };
  auto beta = [](const JetPoint& x) { return x[0] * x[1]; };
  MetricField plane = metric(2, [](const JetPoint&) {
    JMat m = zero();
    m[0][0] = m[1][1] = Jet(1.0);
    return m;
  }, {-1, -1, 0}, {1, 1, 0});
  for (const MetricField& h : {plane, hyperbolic()}) {
    auto vol = [h](const JetPoint& x) {
      const JMat m = h.components(x);
      const Jet s = sqrt(geo::det(m, 2));
      JMat v = zero();
      v[0][1] = s;
      v[1][0] = -s;
      return v;
    };
    for (const Point& p : {Point{0.2, 0.8, 0}, Point{-0.4, 1.3, 0}}) {
      const JetPoint x = seed(p, 2, 3);
      const JMat m = h.components(x);
      const JMat mi = geo::inverse(m, 2);
      const geo::Gamma gam = geo::christoffel(m, mi, 2);
      const Jet a = alpha(x), b = beta(x);
      const JVec grad_a = geo::raise(mi, geo::differential(a, 2), 2);
      const JVec grad_b = geo::raise(mi, geo::differential(b, 2), 2);
      const JMat mu = vol(x);
      // (i)
      const JMat lhs1 = geo::wedge(geo::differential(a, 2), geo::contract(mu, grad_b, 2));
      const Jet hab = geo::dot(m, grad_a, grad_b, 2);
      EXPECT_NEAR(lhs1[0][1].value(), (hab * mu[0][1]).value(), 1e-10);
      // (ii)
      const JMat lhs2 = geo::d1(geo::contract(mu, grad_a, 2), 2);
      const Jet lap = geo::laplacian(a, gam, mi, 2);
      EXPECT_NEAR(lhs2[0][1].value(), (lap * mu[0][1]).value(), 1e-10);
      // (iii) through the point-level codifferential
      MatrixField amu([vol, alpha](const JetPoint& y) { return alpha(y) * vol(y); }, 2);
      const auto c = tensor_lab::codifferential(h, FormField::two_form(amu), p, kFd);
      const JVec rhs = geo::contract(mu, grad_a, 2);
      EXPECT_NEAR(c(0), -rhs[0].value(), 1e-6);
      EXPECT_NEAR(c(1), -rhs[1].value(), 1e-6);
    }
  }
}

TEST(TensorLab, NormsAndMusical) {
  const MetricField g = nil();
  VectorField u([](const JetPoint&) { return JVec{Jet(0.0), Jet(0.0), Jet(1.0)}; });
  const auto theta = tensor_lab::flat(g, u, {0, 0, 0});
  EXPECT_NEAR(theta(2), 1.0, 1e-14);
  EXPECT_NEAR(tensor_lab::norm_sq(g, theta, {0, 0, 0}), 1.0, 1e-14);
  DMat om{};
  om[0][1] = 1.0;
  om[1][0] = -1.0;
  const auto omega = tensor_lab::make_matrix(tensor_lab::Kind::twoform, om, 3);
  EXPECT_NEAR(tensor_lab::norm_sq(g, omega, {0, 0, 0}), 2.0, 1e-14);

  MetricField sl2 = metric(3, [](const JetPoint& x) {
    JMat m = zero();
    const Jet w = Jet(1.0) / (x[1] * x[1]);
    m[0][0] = w + w;
    m[1][1] = w;
    m[0][2] = m[2][0] = Jet(1.0) / x[1];
    m[2][2] = Jet(1.0);
    return m;
  }, {-1, 0.5, -1}, {1, 2, 1});
  DMat os{};
  os[0][1] = 1.0;
  os[1][0] = -1.0;
  const double n2 = tensor_lab::norm_sq(sl2, tensor_lab::make_matrix(tensor_lab::Kind::twoform, os, 3), {0, 1, 0});
  EXPECT_NEAR(0.25 * n2, 0.5, 1e-14);

  const auto vol = tensor_lab::volume_form(hyperbolic(), {0, 2, 0});
  EXPECT_NEAR(vol(0, 1), 0.25, 1e-14);
}

TEST(TensorLab, SingularAndDomainErrors) {
  MetricField bad = metric(3, [](const JetPoint&) {
    JMat m = zero();
    m[0][0] = Jet(1.0);
    m[1][1] = Jet(1e-12);
    m[2][2] = Jet(1.0);
    return m;
  }, {-1, -1, -1}, {1, 1, 1});
  EXPECT_THROW(tensor_lab::curvature(bad, {0, 0, 0}), SingularError);
  EXPECT_THROW(tensor_lab::curvature(hyperbolic(), {0, -1, 0}), DomainError);
}
