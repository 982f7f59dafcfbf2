#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ricsol/ansatz.hpp"
#include "ricsol/expression.hpp"
#include "ricsol/field.hpp"

// Minimal fibres: ρ̄ constant, ψ̄ = C.
namespace ricsol::minimal {

// Holomorphic v (non-vanishing) and optionally its primitive u, both in the variable z.
struct HolomorphicDatum {
  Expression v;
  std::optional<Expression> u;
  double B = 1.0;
  double C = 0.5;
  std::complex<double> z0{};
  Chart chart;  // isothermal chart (x, y), z = x + iy
  std::string name = "holomorphic";
};

Chart default_chart();
HolomorphicDatum make_datum(const std::string& v, const std::optional<std::string>& u = std::nullopt, double B = 1.0,
                            double C = 0.5, std::complex<double> z0 = {}, Chart chart = default_chart());
// JSON document {"v", "u"?, "B", "C", "z0"?, "box"?}; throws ParseError.
HolomorphicDatum parse_datum(const std::string& json_text);

CJet eval_v(const HolomorphicDatum& d, const CJet& z);
// u(z) − u(z₀): the supplied primitive, or radial Gauss quadrature of v.
CJet primitive(const HolomorphicDatum& d, const CJet& z);
// ∫ conj(v) dz̄ along a polyline.
std::complex<double> integrate_conj_v(const HolomorphicDatum& d, const std::vector<std::complex<double>>& path);

struct DatumDefects {
  double cauchy_riemann = 0.0;
  double primitive = 0.0;  // |u′ − v|
  double min_abs_v = 0.0;
};

DatumDefects datum_defects(const HolomorphicDatum& d, const Point& q, const Differ& differ = {});

struct HolomorphicValue {
  double lambda = 0.0;
  std::complex<double> gamma_z;
};

// λ̄ = B/|v|, γ_z = −C v conj(u − u(z₀))/B². Throws SingularError where v vanishes.
HolomorphicValue from_holomorphic(const HolomorphicDatum& d, std::complex<double> z);

// β = ln λ̄ and γ = −C|u − u(z₀)|²/B² as fields on the chart.
ScalarField beta_field(const HolomorphicDatum& d);
ScalarField gamma_field(const HolomorphicDatum& d);

// Flat h, λ̄ = B/|v|, ρ̄ = 1, ν̄ = e^γ, ψ̄ = C, A = 3C.
ansatz::SurfaceData surface_data(const HolomorphicDatum& d);

struct MinbisResiduals {
  double r_i = 0.0;
  double r_ii = 0.0;
  double r_u = 0.0;
};

MinbisResiduals minbis_residuals(const MetricField& h, const ScalarField& lambda, const ScalarField& nu, double C,
                                 double A, const Point& q, const Differ& differ = {});

struct ComplexResiduals {
  double r1 = 0.0;
  double r2 = 0.0;
  std::complex<double> r3;
  double max() const;
};

// Wirtinger form on a flat isothermal chart.
ComplexResiduals complex_residuals(const ScalarField& beta, const ScalarField& gamma, double C, double A,
                                   const Point& q, const Differ& differ = {});

// ‖K h + ∇d ln ν̄ + A h‖_h
double twod_soliton_residual(const MetricField& h, const ScalarField& nu, double A, const Point& q,
                             const Differ& differ = {});

// Hamilton's cigar: h = (dx²+dy²)/(1+x²+y²), ν̄ = 1/(1+x²+y²), A = 0.
ansatz::SurfaceData cigar_data(int grid = 31);

struct NilBuild {
  bool twod_branch = false;
  double twod_residual = 0.0;
  std::optional<ansatz::BuildResult> build;
  // max |Φ*g − g_Nil| over the grid, v ≡ 1 only
  std::optional<double> isometry_witness;
};

NilBuild nil_build(const HolomorphicDatum& d, double delta = 1.0, double tolerance = 1e-5, const Differ& differ = {});

}  // namespace ricsol::minimal
