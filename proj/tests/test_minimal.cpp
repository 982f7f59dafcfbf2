#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "ricsol/errors.hpp"
#include "ricsol/geometry.hpp"
#include "ricsol/minimal.hpp"
#include "ricsol/tensor_lab.hpp"

using namespace ricsol;
using namespace ricsol::minimal;
using cd = std::complex<double>;

namespace {

const Differ kFd{DiffMode::finite_difference, 1e-4};

MetricField conformal_flat(const Chart& chart, std::function<Jet(const JetPoint&)> w) {
  return MetricField{chart, MatrixField([w](const JetPoint& x) {
                       JMat m = geo::zero_mat();
                       m[0][0] = m[1][1] = w(x);
                       return m;
                     }, 2),
                     1};
}

ScalarField sf(std::function<Jet(const JetPoint&)> f) { return ScalarField(std::move(f), 2); }

}  // namespace

TEST(Minimal, MinbisNil) {
  const Chart c = default_chart();
  const MetricField flat = conformal_flat(c, [](const JetPoint&) { return Jet(1.0); });
  const ScalarField one = sf([](const JetPoint&) { return Jet(1.0); });
  const ScalarField nu = sf([](const JetPoint& y) { return exp(-0.5 * (y[0] * y[0] + y[1] * y[1])); });
  for (const Point& q : c.grid()) {
    const auto r = minbis_residuals(flat, one, nu, 0.5, 1.5, q);
    EXPECT_NEAR(r.r_i, 0.0, 1e-12);
    EXPECT_NEAR(r.r_ii, 0.0, 1e-12);
    EXPECT_NEAR(r.r_u, 0.0, 1e-12);
  }
}

TEST(Minimal, MinbisConstantCurvatureBranch) {
  const Chart c = default_chart();
  const MetricField s2 = conformal_flat(c, [](const JetPoint& y) {
    return 2.0 / ipow(1.0 + y[0] * y[0] + y[1] * y[1], 2);
  });
  const ScalarField one = sf([](const JetPoint&) { return Jet(1.0); });
  for (const Point& q : c.random_points(10, 2)) {
    const auto r = minbis_residuals(s2, one, one, 1.0, -1.0, q);
    EXPECT_NEAR(r.r_i, 0.0, 1e-12);
    EXPECT_NEAR(r.r_ii, 0.0, 1e-12);
    EXPECT_NEAR(r.r_u, 0.0, 1e-12);
  }
  // Flat base does not solve (i) on this branch.
  const MetricField flat = conformal_flat(c, [](const JetPoint&) { return Jet(1.0); });
  EXPECT_NEAR(minbis_residuals(flat, one, one, 1.0, -1.0, {0.1, 0.2, 0}).r_i, -2.0, 1e-12);
}

TEST(Minimal, CigarBranch) {
  const auto cig = cigar_data();
  const MetricField& h = cig.h;
  double worst = 0.0;
  for (const Point& q : cig.chart_N.grid()) {
    worst = std::max(worst, twod_soliton_residual(h, cig.nu, 0.0, q));
    EXPECT_NEAR(minbis_residuals(h, cig.lambda, cig.nu, 0.0, 0.0, q).r_i, 0.0, 1e-10);
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_EQ(cig.chart_N.grid().size(), 31u * 31u);
  for (const Point& q : cig.chart_N.random_points(10, 4)) EXPECT_LT(twod_soliton_residual(h, cig.nu, 0.0, q, kFd), 1e-6);
  // Independent check of the cigar curvature K = 2/(1+r²).
  const Point q{0.7, -0.3, 0};
  const auto curv = tensor_lab::curvature(h, q);
  EXPECT_NEAR(*curv.gauss, 2.0 / (1.0 + 0.49 + 0.09), 1e-12);
  EXPECT_GT(twod_soliton_residual(h, cig.nu, 0.5, q), 0.1);
}

TEST(Minimal, TwodFlatAndRound) {
  const Chart c = default_chart();
  const ScalarField one = sf([](const JetPoint&) { return Jet(1.0); });
  const MetricField flat = conformal_flat(c, [](const JetPoint&) { return Jet(1.0); });
  const MetricField sphere = conformal_flat(c, [](const JetPoint& y) {
    return 4.0 / ipow(1.0 + y[0] * y[0] + y[1] * y[1], 2);
  });
  for (const Point& q : c.random_points(5, 9)) {
    EXPECT_NEAR(twod_soliton_residual(flat, one, 0.0, q), 0.0, 1e-14);
    EXPECT_NEAR(twod_soliton_residual(sphere, one, -1.0, q), 0.0, 1e-12);
  }
}

TEST(Minimal, ConformalReductionOfFlatBranch) {
  // C = 0: data (λ̄²h, λ̄, ν̄) and (h, 1, ν̄) carry the same (i) up to the factor λ̄².
  const auto cig = cigar_data(9);
  const ScalarField lambda = sf([](const JetPoint& y) { return exp(0.3 * y[0] - 0.2 * y[1] * y[1]); });
  const MatrixField hc = cig.h.components;
  const MetricField h{cig.chart_N, MatrixField([hc, lambda](const JetPoint& x) {
                        const Jet l = lambda(x);
                        return (l * l) * hc(x);
                      }, 2),
                      1};
  const ScalarField nu = sf([](const JetPoint& y) { return exp(0.2 * y[0] * y[1]); });
  for (const Point& q : cig.chart_N.random_points(8, 5)) {
    const double l = lambda.value_jet(q).value();
    const auto a = minbis_residuals(h, lambda, nu, 0.0, 0.7, q);
    const auto b = minbis_residuals(cig.h, cig.lambda, nu, 0.0, 0.7, q);
    EXPECT_NEAR(a.r_i * l * l, b.r_i, 1e-10);
    EXPECT_GT(std::abs(b.r_i), 1e-3);
    EXPECT_NEAR(minbis_residuals(h, lambda, cig.nu, 0.0, 0.0, q).r_i, 0.0, 1e-10);
    EXPECT_NEAR(minbis_residuals(h, lambda, cig.nu, 0.0, 0.0, q).r_u, 0.0, 1e-10);
  }
}

TEST(Minimal, FromHolomorphicExamples) {
  const auto one = make_datum("1", std::nullopt, 1.0, 0.5);
  for (cd z : {cd(0.3, -0.4), cd(-0.9, 0.2)}) {
    const auto v = from_holomorphic(one, z);
    EXPECT_NEAR(v.lambda, 1.0, 1e-15);
    EXPECT_NEAR(std::abs(v.gamma_z - (-0.5 * std::conj(z))), 0.0, 1e-14);
  }
  const auto ez = make_datum("exp(z)", std::nullopt, 1.0, 0.5);
  const cd z{0.4, 0.7};
  EXPECT_NEAR(from_holomorphic(ez, z).lambda, std::exp(-0.4), 1e-14);
  const auto ez2 = make_datum("exp(z)", std::nullopt, 2.0, 0.5);
  EXPECT_NEAR(from_holomorphic(ez2, z).lambda, 2.0 * std::exp(-0.4), 1e-14);
  EXPECT_NEAR(std::abs(from_holomorphic(ez2, z).gamma_z - 0.25 * from_holomorphic(ez, z).gamma_z), 0.0, 1e-15);
  const auto zero = make_datum("z", std::nullopt, 1.0, 0.5);
  EXPECT_THROW(from_holomorphic(zero, {0.0, 0.0}), SingularError);
}

TEST(Minimal, GammaFieldMatchesGammaZ) {
  for (const char* v : {"1", "exp(z)", "1 + 0.1*z"}) {
    const auto d = make_datum(v, std::nullopt, 1.3, 0.7, {0.1, -0.2});
    const ScalarField g = gamma_field(d);
    for (const Point& q : d.chart.random_points(6, 8)) {
      const Jet j = g.at(q, 1);
      const cd gz = 0.5 * cd(j.d(0), -j.d(1));
      EXPECT_NEAR(std::abs(gz - from_holomorphic(d, {q[0], q[1]}).gamma_z), 0.0, 1e-13) << v;
    }
  }
}

TEST(Minimal, Dichotomy) {
  for (const char* v : {"1", "exp(z)", "1 + 0.1*z"}) {
    for (double C : {0.5, 1.0}) {
      const auto d = make_datum(v, std::nullopt, 1.0, C);
      const ScalarField b = beta_field(d), g = gamma_field(d);
      double worst = 0.0, perturbed = 0.0, fd = 0.0;
      for (const Point& q : d.chart.grid()) {
        worst = std::max(worst, complex_residuals(b, g, C, 3 * C, q).max());
        perturbed = std::max(perturbed, complex_residuals(b, g, C, 3 * C + 0.1, q).max());
        fd = std::max(fd, complex_residuals(b, g, C, 3 * C, q, kFd).max());
      }
      EXPECT_LT(worst, 1e-6) << v;
      EXPECT_LT(fd, 5e-6) << v;
      EXPECT_GT(perturbed, 1e-3) << v;
      EXPECT_GE(3 * C, 0.0);
    }
  }
}

TEST(Minimal, ComplexFdConvergesSecondOrder) {
  const auto d = make_datum("exp(z)", std::nullopt, 1.0, 1.0);
  const ScalarField b = beta_field(d), g = gamma_field(d);
  auto worst = [&](double h) {
    double w = 0.0;
    for (const Point& q : d.chart.grid())
      w = std::max(w, complex_residuals(b, g, 1.0, 3.0, q, {DiffMode::finite_difference, h}).max());
    return w;
  };
  EXPECT_NEAR(worst(1e-3) / worst(5e-4), 4.0, 0.2);
}

TEST(Minimal, ComplexConstantData) {
  const ScalarField zero = sf([](const JetPoint&) { return Jet(0.0); });
  const ScalarField harmonic = sf([](const JetPoint& y) { return y[0] * y[0] - y[1] * y[1] + 0.3 * y[0]; });
  EXPECT_NEAR(complex_residuals(zero, zero, 1.0, -1.0, {0.2, 0.1, 0}).r2, 0.0, 1e-15);
  EXPECT_NEAR(std::abs(complex_residuals(zero, zero, 1.0, -1.0, {0.2, 0.1, 0}).r3), 0.0, 1e-15);
  EXPECT_GT(std::abs(complex_residuals(harmonic, zero, 1.0, 1.0, {0.2, 0.1, 0}).r1), 0.1);
}

TEST(Minimal, ComplexMatchesMinbis) {
  const auto d = make_datum("exp(z)", std::nullopt, 1.0, 0.5);
  const auto s = surface_data(d);
  for (const Point& q : d.chart.random_points(6, 1)) {
    const auto m = minbis_residuals(s.h, s.lambda, s.nu, d.C, s.A, q);
    EXPECT_LT(std::max({std::abs(m.r_i), std::abs(m.r_ii), m.r_u}), 1e-10);
    const auto sys = ansatz::system_residuals(s, q);
    EXPECT_NEAR(sys.iib_value, 0.5 + 1.5, 1e-10);
  }
  EXPECT_LT(ansatz::system_report(s, 1e-8).iib_std, 1e-8);
}

TEST(Minimal, DatumInvariants) {
  const auto supplied = make_datum("exp(z)", std::string("exp(z)"), 1.0, 0.5);
  const auto quadrature = make_datum("1 + 0.1*z", std::nullopt, 1.0, 0.5, {0.2, 0.1});
  for (const auto* d : {&supplied, &quadrature})
    for (const Point& q : d->chart.grid()) {
      const auto a = datum_defects(*d, q);
      EXPECT_LT(a.cauchy_riemann, 1e-12);
      EXPECT_LT(a.primitive, 1e-12);
      EXPECT_GT(a.min_abs_v, 0.0);
      const auto f = datum_defects(*d, q, kFd);
      EXPECT_LT(f.cauchy_riemann, 2e-8);
      EXPECT_LT(f.primitive, 1e-8);
    }
}

TEST(Minimal, DatumFdConvergesSecondOrder) {
  const auto d = make_datum("exp(z)", std::string("exp(z)"), 1.0, 0.5);
  const Point q{0.9, -0.7, 0};
  const double coarse = datum_defects(d, q, {DiffMode::finite_difference, 2e-4}).cauchy_riemann;
  const double fine = datum_defects(d, q, {DiffMode::finite_difference, 1e-4}).cauchy_riemann;
  EXPECT_NEAR(coarse / fine, 4.0, 0.1);
}

TEST(Minimal, PathIndependence) {
  const auto d = make_datum("exp(z) + z^2", std::nullopt, 1.0, 0.5, {0.1, 0.1});
  const cd z0 = d.z0, z{0.8, -0.6};
  const cd straight = integrate_conj_v(d, {z0, z});
  const cd bent = integrate_conj_v(d, {z0, cd(z0.real(), z.imag()), z});
  const cd loop = integrate_conj_v(d, {z0, cd(-0.7, 0.9), cd(0.5, 0.5), z});
  const cd exact = std::conj(std::exp(z) + z * z * z / 3.0 - std::exp(z0) - z0 * z0 * z0 / 3.0);
  EXPECT_NEAR(std::abs(straight - exact), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(bent - exact), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(loop - exact), 0.0, 1e-13);
  const CJet u = primitive(d, CJet{Jet(z.real()), Jet(z.imag())});
  EXPECT_NEAR(std::abs(cd(u.re.value(), u.im.value()) - std::conj(exact)), 0.0, 1e-13);
}

TEST(Minimal, NilBuild) {
  const auto d = make_datum("1", std::nullopt, 1.0, 0.5);
  const auto nb = nil_build(d);
  ASSERT_TRUE(nb.build.has_value());
  ASSERT_TRUE(nb.isometry_witness.has_value());
  EXPECT_LT(*nb.isometry_witness, 1e-8);
  EXPECT_LT(nb.build->report.system.max_r_i, 1e-8);
  EXPECT_LT(nb.build->report.soliton.max, 1e-5);
  // Off-centre box: the gauge shift is accounted for.
  auto shifted = d;
  shifted.chart = make_chart(2, {"x", "y"}, {-0.5, -1, 0}, {1.5, 0.6, 0}, {7, 7, 1});
  const auto ns = nil_build(shifted);
  EXPECT_LT(*ns.isometry_witness, 1e-8);
}

TEST(Minimal, NilBuildGeneralDatum) {
  const auto d = make_datum("1 + 0.1*z", std::nullopt, 1.0, 0.5);
  const auto nb = nil_build(d);
  EXPECT_FALSE(nb.isometry_witness.has_value());
  EXPECT_LT(nb.build->report.soliton.max, 1e-4);
  EXPECT_TRUE(nb.build->report.pass);
}

TEST(Minimal, NilBuildFlatBranch) {
  const auto d = make_datum("exp(z)", std::nullopt, 1.0, 0.0);
  const auto nb = nil_build(d);
  EXPECT_TRUE(nb.twod_branch);
  EXPECT_FALSE(nb.build.has_value());
  EXPECT_LT(nb.twod_residual, 1e-10);
}

TEST(Minimal, ParseDatum) {
  const auto d = parse_datum(R"j({"v": "exp(z)", "B": 2, "C": 0.25, "z0": [0.1, 0], "name": "ez"})j");
  EXPECT_EQ(d.name, "ez");
  EXPECT_EQ(d.B, 2.0);
  EXPECT_EQ(d.C, 0.25);
  EXPECT_EQ(d.z0, cd(0.1, 0.0));
  EXPECT_THROW(parse_datum(R"j({"B": 1})j"), ParseError);
  EXPECT_THROW(parse_datum(R"j({"v": "exp(", "B": 1})j"), ParseError);
  EXPECT_THROW(parse_datum(R"j({"v": "1", "B": -1})j"), ParseError);
}
