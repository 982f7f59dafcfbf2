#include <gtest/gtest.h>

#include <cmath>

#include "ricsol/catalog.hpp"
#include "ricsol/soliton.hpp"
#include "ricsol/tensor_lab.hpp"

using namespace ricsol;
using namespace ricsol::soliton;

namespace {

const Differ kFd{DiffMode::finite_difference, 1e-4};

SolitonCandidate candidate(const std::string& id) {
  const auto& c = catalog::get(id);
  return {c.g, *c.E, *c.A, std::nullopt};
}

double gnorm(const DMat& t, const MetricField& g, const Point& p) {
  return tensor_lab::norm_sym(t, geo::values(g.components.value_jet(p)), 3);
}

DMat minus(const DMat& a, const DMat& b) {
  DMat d{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d[i][j] = a[i][j] - b[i][j];
  return d;
}

const std::vector<std::string> kFlows = {"nil", "sol", "s2xr", "h2xr", "s3", "h3",
                                         "r3_gaussian", "helix", "wp_exceptional", "cigar"};

}  // namespace

TEST(Soliton, CatalogFlowsAreSolitons) {
  for (const auto& id : kFlows) {
    const auto& c = catalog::get(id);
    const auto cand = candidate(id);
    for (const Point& p : c.chart.random_points(15, catalog::kSeed)) {
      EXPECT_LT(residual_norm(cand, p), 1e-9) << id;
      EXPECT_LT(residual_norm(cand, p, kFd), 1e-5) << id;
    }
  }
}

TEST(Soliton, GaussianForAnyA) {
  const auto& c = catalog::get("r3_gaussian");
  for (double A : {-1.0, 0.0, 1.0}) {
    const SolitonCandidate cand{c.g, VectorField([A](const JetPoint& x) {
                                  return JVec{-A * x[0], -A * x[1], -A * x[2]};
                                }),
                                A, std::nullopt};
    for (const Point& p : c.designated) EXPECT_NEAR(residual_norm(cand, p), 0.0, 1e-14);
  }
}

TEST(Soliton, ReportOnGrid) {
  const auto& c = catalog::get("sol");
  const auto r = residual_report("sol", candidate("sol"), c.chart, 1e-5, kFd);
  EXPECT_EQ(r.per_point.size(), 729u);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.max, r.mean);
  EXPECT_GE(r.mean, 0.0);
  EXPECT_GT(r.ricci_term, 1.0);
}

TEST(Soliton, TwoPathEquivalence) {
  for (const auto& id : kFlows) {
    const auto& c = catalog::get(id);
    const auto& s = *c.fibration;
    const VectorField X = horizontal_part(s, *c.E, *c.f);
    SolitonCandidate cand = candidate(id);
    cand.decomposition = Decomposition{X, *c.f};
    for (const Point& p : c.designated) {
      EXPECT_LT(decomposition_defect(s, cand, p), 1e-12) << id;
      for (const Differ& d : {Differ{}, kFd}) {
        const double tol = d.mode == DiffMode::analytic ? 1e-9 : 1e-5;
        const DMat a = soliton_residual(cand, p, d);
        const DMat b = residual_decomposed(s, X, *c.f, *c.A, p, d);
        EXPECT_LT(gnorm(minus(a, b), c.g, p), tol) << id;
        EXPECT_LT(gnorm(b, c.g, p), tol) << id;
      }
    }
  }
}

TEST(Soliton, NilDecomposition) {
  const auto& c = catalog::get("nil");
  const auto& s = *c.fibration;
  const Point p{0.4, -0.3, 0.2};
  // The horizontal part of the Nil flow is −y1∂1 − y2∂2 + y1y2∂3, not zero.
  const VectorField X([](const JetPoint& y) { return JVec{-y[0], -y[1], y[0] * y[1]}; });
  EXPECT_LT(gnorm(residual_decomposed(s, X, *c.f, 1.5, p), c.g, p), 1e-12);
  const VectorField zero([](const JetPoint&) { return geo::zero_vec(); });
  EXPECT_GT(gnorm(residual_decomposed(s, zero, *c.f, 1.5, p), c.g, p), 0.1);

  // Sol with E = 0 is not Einstein.
  const auto& sol = catalog::get("sol");
  const ScalarField f0([](const JetPoint&) { return Jet(0.0); });
  EXPECT_GT(gnorm(residual_decomposed(*sol.fibration, zero, f0, 0.0, p), sol.g, p), 1.0);
}

TEST(Soliton, AffineAndKillingInvariant) {
  const auto& c = catalog::get("sl2");
  const VectorField e1([](const JetPoint& x) { return JVec{x[1] * x[2], sin(x[0]), x[1] * x[1]}; });
  const VectorField e2([](const JetPoint& x) { return JVec{exp(x[2]), x[0] * x[1], log(x[1])}; });
  const VectorField e12([&](const JetPoint& x) { return e1(x) + e2(x); });
  const VectorField zero([](const JetPoint&) { return geo::zero_vec(); });
  const Point p{0.2, 1.1, -0.3};
  const DMat r12 = soliton_residual({c.g, e12, 0.7 + 1.3, std::nullopt}, p);
  const DMat r1 = soliton_residual({c.g, e1, 0.7, std::nullopt}, p);
  const DMat r2 = soliton_residual({c.g, e2, 1.3, std::nullopt}, p);
  const DMat r0 = soliton_residual({c.g, zero, 0.0, std::nullopt}, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(r12[i][j] - r1[i][j] - r2[i][j] + r0[i][j], 0.0, 1e-10);

  for (const auto& id : kFlows) {
    const auto& cc = catalog::get(id);
    const auto base = candidate(id);
    for (const auto& k : cc.killing) {
      SolitonCandidate moved = base;
      moved.E = VectorField([E = *cc.E, K = k.field](const JetPoint& x) { return E(x) + K(x); });
      for (const Point& p2 : cc.designated)
        EXPECT_LT(gnorm(minus(soliton_residual(moved, p2), soliton_residual(base, p2)), cc.g, p2), 1e-8) << id;
    }
  }

  // SL2 with any Killing field and A = 0 is far from a soliton.
  for (const auto& k : c.killing)
    EXPECT_GT(residual_norm({c.g, k.field, 0.0, std::nullopt}, p), 0.5);
}

TEST(Soliton, SolveF) {
  const auto& sol = catalog::get("sol");
  const ScalarField ln_nu_sol([](const JetPoint& x) { return -x[0]; });
  const std::vector<Point> path{{0, 0, 0}, {0.5, 0, 0.7}, {0.5, -0.3, 0.2}, {-0.4, 0.2, -0.6}};
  const auto r = solve_f(*sol.fibration, ln_nu_sol, 2.0, path);
  EXPECT_LT(r.integrability_defect, 1e-8);
  double err = 0.0;
  for (std::size_t i = 0; i < r.path.nodes.size(); ++i) {
    const Point& x = r.path.nodes[i];
    err = std::max(err, std::abs(r.path.f[i] + 4.0 * x[2] * std::exp(-x[0])));
  }
  // Trapezoid truncation, O(L h²) with h = 1/512 over a path of length ≈ 3.3.
  EXPECT_LT(err, 5e-6);

  // Halving the step divides the error by four.
  auto coeffs = [&](const Point& x) { return vertical_equation(*sol.fibration, ln_nu_sol, 2.0, x); };
  const std::vector<Point> seg{{0, 0, 0}, {0.8, 0, 0.9}};
  double e1 = 0.0, e2 = 0.0;
  for (int per_unit : {64, 128}) {
    const auto q = integrate_path(seg, 0.0, coeffs, per_unit);
    const double e = std::abs(q.f.back() + 4.0 * 0.9 * std::exp(-0.8));
    (per_unit == 64 ? e1 : e2) = e;
  }
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);

  // df + f dx1 + 4e^{-x1} dx3 = 0 at a point.
  const auto [m, w] = vertical_equation(*sol.fibration, ln_nu_sol, 2.0, {0.3, 0.1, 0.2});
  EXPECT_NEAR(m[0], 1.0, 1e-12);
  EXPECT_NEAR(w[2], -4.0 * std::exp(-0.3), 1e-12);
  EXPECT_NEAR(w[0], 0.0, 1e-12);

  const auto& nil = catalog::get("nil");
  const ScalarField ln_nu_nil([](const JetPoint& y) { return -0.5 * (y[0] * y[0] + y[1] * y[1]); });
  const std::vector<Point> loop{{0, 0, 0}, {0.6, 0.2, 0.1}, {-0.3, 0.7, -0.4}, {0, 0, 0}};
  const auto n = solve_f(*nil.fibration, ln_nu_nil, 1.5, loop, 0.0, kFd);
  for (std::size_t i = 0; i < n.path.nodes.size(); ++i) {
    const Point& y = n.path.nodes[i];
    EXPECT_NEAR(n.path.f[i], -y[0] * y[1] - 2.0 * y[2], 1e-6);
  }
  EXPECT_NEAR(n.path.f.back(), 0.0, 1e-6);

  // Wrong A: dw ≠ w∧m, no consistent f.
  EXPECT_GT(integrability_defect(*nil.fibration, ln_nu_nil, 1.0, {0.1, 0.2, 0.3}), 0.1);
  EXPECT_THROW(solve_f(*nil.fibration, ln_nu_nil, 1.0, loop), DomainError);
}

TEST(Soliton, GradientType) {
  const DMat nil = gradient_type_defect(candidate("nil"), {1, 1, 0});
  EXPECT_NEAR(nil[0][1], -2.0, 1e-12);
  EXPECT_NEAR(nil[0][2], -1.0, 1e-12);
  EXPECT_NEAR(nil[1][2], 1.0, 1e-12);
  const DMat sol = gradient_type_defect(candidate("sol"), {0, 0, 1});
  EXPECT_NEAR(sol[0][2], 8.0, 1e-12);
  EXPECT_NEAR(sol[0][1], 0.0, 1e-12);
  EXPECT_NEAR(sol[1][2], 0.0, 1e-12);
  for (const std::string id : {"r3_gaussian", "s2xr", "h2xr", "wp_exceptional", "cigar"}) {
    const auto& c = catalog::get(id);
    for (const Point& p : c.designated) {
      const DMat d = gradient_type_defect(candidate(id), p, kFd);
      EXPECT_LT(gnorm(d, c.g, p), 1e-6) << id;
    }
  }
}
