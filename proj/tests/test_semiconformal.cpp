#include <gtest/gtest.h>

#include <cmath>

#include "ricsol/catalog.hpp"
#include "ricsol/semiconformal.hpp"
#include "ricsol/tensor_lab.hpp"

using namespace ricsol;
using namespace ricsol::semiconformal;

namespace {

const Differ kFd{DiffMode::finite_difference, 1e-4};

const SubmersionSetup& setup(const std::string& id) { return *catalog::get(id).fibration; }

double gnorm(const DMat& a, const DMat& b, const DMat& g) {
  DMat d{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d[i][j] = a[i][j] - b[i][j];
  return tensor_lab::norm_sym(d, g, 3);
}

DMat metric_at(const SubmersionSetup& s, const Point& p) { return geo::values(s.g.components.value_jet(p)); }

ScalarField lift(const SubmersionSetup& s, ScalarField f_bar) {
  return ScalarField([proj = s.projection, f_bar](const JetPoint& x) {
    const JVec y = proj(x);
    return f_bar(JetPoint{y[0], y[1], Jet(0.0)});
  });
}

const std::vector<std::string> kFibred = {"nil", "sol", "sl2", "s2xr", "h2xr", "s3",
                                          "h3",  "r3_gaussian", "helix", "wp_exceptional", "cigar"};

}  // namespace

TEST(Semiconformal, DefectAndDilation) {
  const auto d = semiconformality_defect(setup("nil"), {0.3, -0.2, 0.4});
  EXPECT_NEAR(d.lambda2, 1.0, 1e-12);
  EXPECT_LT(d.defect, 1e-10);

  for (const Point& p : {Point{0.7, 0.1, 0.2}, Point{1.6, -0.5, 0.9}}) {
    const auto h = semiconformality_defect(setup("helix"), p, kFd);
    EXPECT_NEAR(h.lambda2, (1.0 + p[0] * p[0]) / (p[0] * p[0]), 1e-6);
    EXPECT_LT(h.defect, 1e-6);
  }

  SubmersionSetup squeezed = setup("nil");
  squeezed.h.components = MatrixField([](const JetPoint&) {
    JMat m = geo::zero_mat();
    m[0][0] = Jet(1.0);
    m[1][1] = Jet(4.0);
    return m;
  }, 2);
  EXPECT_GT(semiconformality_defect(squeezed, {0.3, -0.2, 0.4}).defect, 0.1);
}

TEST(Semiconformal, FrameExamples) {
  const Point p{0.3, 0.4, 0.1};
  const auto nil = frame(setup("nil"), p);
  EXPECT_NEAR(nil.theta[0], 0.0, 1e-14);
  EXPECT_NEAR(nil.theta[1], 0.3, 1e-14);
  EXPECT_NEAR(nil.theta[2], 1.0, 1e-14);
  EXPECT_NEAR(nil.psi, 0.5, 1e-12);
  for (double m : nil.mu) EXPECT_NEAR(m, 0.0, 1e-14);

  for (const auto& id : kFibred) {
    const auto& s = setup(id);
    const Point q = catalog::get(id).designated.front();
    for (const Differ& d : {Differ{}, kFd}) {
      const auto f = frame(s, q, d);
      double tu = 0.0;
      for (int i = 0; i < 3; ++i) tu += f.theta[i] * f.U[i];
      EXPECT_NEAR(tu, 1.0, 1e-9) << id;
      const JVec phi = s.projection.at(q, 1, d);
      for (int a = 0; a < 2; ++a) {
        double du = 0.0;
        for (int i = 0; i < 3; ++i) du += phi[a].d(i) * f.U[i];
        EXPECT_NEAR(du, 0.0, 1e-8) << id;
      }
      EXPECT_GE(f.psi, 0.0);
      // Ω = Ω̃ − μ♭∧θ
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          EXPECT_NEAR(f.Omega[i][j],
                      f.Omega_tilde[i][j] - (f.mu_flat[i] * f.theta[j] - f.mu_flat[j] * f.theta[i]), 1e-9);
    }
  }

  const Point ps{0.4, -0.3, 0.2};
  const auto sol = frame(setup("sol"), ps);
  EXPECT_NEAR(sol.psi, 0.0, 1e-14);
  EXPECT_NEAR(sol.mu_flat[0], 1.0, 1e-12);  // d ln ρ with ρ = e^{x1}
  EXPECT_NEAR(sol.mu_flat[1], 0.0, 1e-12);
  EXPECT_NEAR(sol.theta[2], std::exp(-0.4), 1e-14);

  const auto wp = frame(setup("s2xr"), {1.0, 0.2, 0.5});
  EXPECT_NEAR(wp.psi, 0.0, 1e-14);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(wp.mu[i], 0.0, 1e-14);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(wp.Omega[i][j], 0.0, 1e-14);
  }
}

TEST(Semiconformal, RicciExamples) {
  const auto nil = ricci_decomposed(setup("nil"), {0, 0, 0});
  const double want[3] = {-0.5, -0.5, 0.5};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(nil.full[i][j], i == j ? want[i] : 0.0, 1e-12);

  const auto sol = ricci_decomposed(setup("sol"), {0, 0, 0});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(sol.full[i][j], i == 0 && j == 0 ? -2.0 : 0.0, 1e-12);

  const Point p{1.0, 0.2, 0.5};
  const auto s2 = ricci_decomposed(setup("s2xr"), p);
  const DMat g = metric_at(setup("s2xr"), p);
  EXPECT_NEAR(s2.vv, 0.0, 1e-12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(s2.hh[i][j], (i < 2 && j < 2) ? g[i][j] : 0.0, 1e-12);
}

TEST(Semiconformal, OracleEquivalenceAndBlocks) {
  for (const auto& id : kFibred) {
    const auto& c = catalog::get(id);
    const auto pts = c.chart.random_points(12, catalog::kSeed);
    for (const Differ& d : {Differ{}, kFd}) {
      const double tol = d.mode == DiffMode::analytic ? 1e-8 : 1e-4;
      for (const Point& p : pts) {
        const auto r = ricci_decomposed(*c.fibration, p, d);
        const DMat g = metric_at(*c.fibration, p);
        const DMat oracle = tensor_lab::curvature(c.g, p, d).ricci.mat();
        EXPECT_LT(gnorm(r.full, oracle, g), tol) << id;
        EXPECT_LT(gnorm(r.full, r.blocks_reassembled, g), 1e-8) << id;
      }
    }
  }
}

TEST(Semiconformal, PullbackHessian) {
  const ScalarField one([](const JetPoint&) { return Jet(2.5); }, 2);
  const DMat zero = pullback_hessian(setup("nil"), one, {0.3, 0.1, 0.2});
  for (const auto& row : zero)
    for (double v : row) EXPECT_NEAR(v, 0.0, 1e-14);

  struct Case {
    std::string id;
    ScalarField f;
    Point p;
  };
  const std::vector<Case> cases = {
      {"nil", ScalarField([](const JetPoint& y) { return 0.5 * (y[0] * y[0] + y[1] * y[1]); }, 2), {0.3, -0.4, 0.2}},
      {"helix", ScalarField([](const JetPoint& y) { return y[0]; }, 2), {1.2, 0.3, -0.2}},
      {"sol", ScalarField([](const JetPoint& y) { return sin(y[0]) * y[1]; }, 2), {0.2, 0.5, -0.3}},
      {"sl2", ScalarField([](const JetPoint& y) { return y[0] * y[1]; }, 2), {0.1, 1.3, 0.4}},
  };
  for (const auto& c : cases) {
    const auto& s = setup(c.id);
    for (const Differ& d : {Differ{}, kFd}) {
      const double tol = d.mode == DiffMode::analytic ? 1e-10 : 1e-5;
      const DMat rhs = pullback_hessian(s, c.f, c.p, d);
      const DMat oracle = tensor_lab::covariant_hessian(s.g, lift(s, c.f), c.p, d).mat();
      EXPECT_LT(gnorm(rhs, oracle, metric_at(s, c.p)), tol) << c.id;
    }
  }

  // Nil with F̄ = |y|²/2: the horizontal block is the identity.
  const auto nil = frame(setup("nil"), {0.3, -0.4, 0.2});
  const DMat hess = pullback_hessian(setup("nil"), cases[0].f, {0.3, -0.4, 0.2});
  const DVec x1{1.0, 0.0, 0.0};
  const DVec x2{0.0, 1.0, -0.3};
  auto bil = [&](const DVec& a, const DVec& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += hess[i][j] * a[i] * b[j];
    return s;
  };
  EXPECT_NEAR(bil(x1, x1), 1.0, 1e-12);
  EXPECT_NEAR(bil(x2, x2), 1.0, 1e-12);
  EXPECT_NEAR(bil(x1, x2), 0.0, 1e-12);
  // Mixed term ½(Ω⌋grad F)(X₁) with grad F = y1 X₁ + y2 X₂.
  EXPECT_NEAR(bil(x1, nil.U), 0.5 * (-0.4) * nil.Omega[1][0], 1e-12);

  EXPECT_THROW(pullback_hessian(setup("s3"), cases[0].f, {0.3, 0.2, 0.1}), DomainError);
}

TEST(Semiconformal, LaplacianRelation) {
  const ScalarField y1sq([](const JetPoint& y) { return y[0] * y[0]; }, 2);
  const ScalarField x1([](const JetPoint& y) { return y[0]; }, 2);
  const ScalarField c([](const JetPoint&) { return Jet(3.0); }, 2);
  for (const Differ& d : {Differ{}, kFd}) {
    EXPECT_LT(laplacian_relation_defect(setup("nil"), y1sq, {0.3, -0.2, 0.5}, d), 1e-6);
    EXPECT_LT(laplacian_relation_defect(setup("sol"), x1, {0.3, -0.2, 0.5}, d), 1e-6);
    EXPECT_LT(laplacian_relation_defect(setup("helix"), y1sq, {1.1, -0.2, 0.5}, d), 1e-6);
    EXPECT_NEAR(laplacian_relation_defect(setup("nil"), c, {0.3, -0.2, 0.5}, d), 0.0, 1e-12);
  }
}

TEST(Semiconformal, DstarTildeOmega) {
  EXPECT_LT(dstar_tilde_omega_defect(setup("nil"), {0.3, -0.2, 0.5}), 1e-10);
  EXPECT_LT(dstar_tilde_omega_defect(setup("nil"), {0.3, -0.2, 0.5}, kFd), 1e-5);
  const auto sol = dstar_tilde_omega(setup("sol"), {0.3, -0.2, 0.5});
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(sol.lhs[i], 0.0, 1e-12);
    EXPECT_NEAR(sol.rhs[i], 0.0, 1e-12);
  }
  for (const Point& p : {Point{0.8, 0.3, -0.4}, Point{1.7, -0.6, 0.2}}) {
    EXPECT_LT(dstar_tilde_omega_defect(setup("helix"), p), 1e-9);
    EXPECT_LT(dstar_tilde_omega_defect(setup("helix"), p, kFd), 1e-4);
  }
  EXPECT_LT(dstar_tilde_omega_defect(setup("sl2"), {0.2, 1.1, 0.3}), 1e-10);
}

TEST(Semiconformal, Basicness) {
  const auto& nil = setup("nil");
  const ScalarField lambda([&](const JetPoint&) { return Jet(1.0); });
  EXPECT_NEAR(basicness_defect(nil, lambda, {0.1, 0.2, 0.3}), 0.0, 1e-14);
  const auto& sol = setup("sol");
  const Point p{0.3, 0.2, -0.1};
  const ScalarField x3([](const JetPoint& x) { return x[2]; });
  EXPECT_NEAR(basicness_defect(sol, x3, p), std::exp(0.3), 1e-12);  // |U(x3)| = e^{x1}
  const ScalarField rho([](const JetPoint& x) { return exp(x[0]); });
  EXPECT_LT(basicness_defect(sol, rho, p), 1e-10);
  EXPECT_LT(basicness_defect(sol, rho, p, kFd), 1e-10);
}

TEST(Semiconformal, StructureIdentities) {
  for (const auto& id : kFibred) {
    for (const Point& p : catalog::get(id).designated) {
      for (const Differ& d : {Differ{}, kFd}) {
        const auto s = structure_identities(setup(id), p, d);
        EXPECT_LT(s.foliation, 1e-5) << id;
        EXPECT_LT(s.horizontal_mean, 1e-5) << id;
        EXPECT_LT(s.bracket, 1e-5) << id;
      }
    }
  }
  const auto sol = structure_identities(setup("sol"), {0.2, 0.3, -0.4});
  EXPECT_LT(sol.omega_tilde_basic, 1e-10);
  EXPECT_LT(sol.dmu_horizontal, 1e-10);

  // Twisted fibration with a fibre-dependent stretch: μ♭ is no longer closed on H.
  SubmersionSetup bent = setup("nil");
  bent.g.components = MatrixField([](const JetPoint& y) {
    const Jet b = exp(0.5 * y[0] * y[2]);
    const JVec th{Jet(0.0), b * y[0], b};
    JMat m = geo::outer(th, th);
    m[0][0] += 1.0;
    m[1][1] += 1.0;
    return m;
  });
  const auto s = structure_identities(bent, {0.4, 0.3, 0.5});
  EXPECT_GT(s.dmu_horizontal, 0.01);
  EXPECT_GT(s.omega_tilde_basic, 0.01);
  EXPECT_LT(s.foliation, 1e-10);
}
