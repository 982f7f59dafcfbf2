#pragma once

#include <string>
#include <vector>

#include "ricsol/field.hpp"
#include "ricsol/semiconformal.hpp"
#include "ricsol/soliton.hpp"

namespace ricsol::ansatz {

// Data on a surface N. Fields have dim 2; h is the upper-left 2×2 block.
struct SurfaceData {
  std::string name;
  Chart chart_N;
  MetricField h;
  ScalarField lambda, rho, nu, psi;
  double A = 0.0;
};

// Below this ψ̄ counts as zero and (ii)(a) is skipped.
inline constexpr double kPsiZero = 1e-12;

SurfaceData nil_data();
SurfaceData sol_data();
// Helix data over the base chart (r, v), h = ((1+cr²)/r²)dr² + dv².
SurfaceData helix_data(double c = 1.0);

// JSON document with expression strings; throws ParseError.
SurfaceData parse_surface_data(const std::string& json_text);
SurfaceData load_surface_data(const std::string& path);

struct SystemResiduals {
  double r_i = 0.0;
  double r_iia = 0.0;
  double iib_value = 0.0;
  double iib_reduced = 0.0;  // iib_value − A
  double r_u = 0.0;
  double alpha = 0.0;        // half the h-trace of the (u) tensor
};

SystemResiduals system_residuals(const SurfaceData& data, const Point& q, const Differ& differ = {});

struct SystemReport {
  int points = 0;
  double max_r_i = 0.0;
  double max_r_iia = 0.0;
  double max_r_u = 0.0;
  double iib_mean = 0.0;
  double iib_std = 0.0;
  double alpha_variation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

SystemReport system_report(const SurfaceData& data, double tolerance = 1e-6, const Differ& differ = {});

// h → e^{2u}h, λ̄ → e^u λ̄.
SurfaceData conformal_change(const SurfaceData& data, const ScalarField& u);
// Largest discrepancy between transformed residuals and e^{−2u}·original ((ii)(b) value unchanged).
double conformal_change_covariance(const SurfaceData& data, const ScalarField& u, const Point& q,
                                   const Differ& differ = {});

// σ̄ = √(2ψ̄)/λ̄²
ScalarField sigma_bar(const SurfaceData& data);
// |2ψ̄ − λ̄⁴σ̄²|
double psi_sigma_defect(const SurfaceData& data, const Point& q);

struct BuiltFibration {
  SurfaceData data;
  Chart chart_M;
  VectorField theta;
  MetricField g;
  double R = 1.0;
  double delta = 1.0;
  semiconformal::SubmersionSetup setup;
  ScalarField rho, ln_nu;  // basic lifts to M
};

// ᾱ with dᾱ = w·Ω̄ by the radial homotopy from the box center; weight ρ̄ when `weighted`.
VectorField potential(const SurfaceData& data, bool weighted = true);
// θ = (φ*ᾱ + R dt)/ρ on N × (−δ, δ).
VectorField solve_theta(const SurfaceData& data, double R);
BuiltFibration build(const SurfaceData& data, double R = 1.0, double delta = 1.0, int slices = 11);

// ‖dθ + d ln ρ∧θ − φ*Ω̄‖_g
double theta_defect(const BuiltFibration& b, const Point& p, const Differ& differ = {});
// ‖d(ρ̄Ω̄)‖ of the lifted form
double closure_defect(const BuiltFibration& b, const Point& p);
// |d*(μ♭∧θ) + λ²(Δ^N ln ρ̄)∘φ·θ|
double wedge_identity_defect(const BuiltFibration& b, const Point& p, const Differ& differ = {});

// One-forms (m, w) of df + f m = w from the base data; depend only on the base point.
std::pair<DVec, DVec> f_equation(const BuiltFibration& b, const Point& p);

// f on chart_M, f(center) = 0, integrated along grid sweeps; E = −μ + grad ln ν + fU.
struct Flow {
  ScalarField f;
  VectorField E;
};

Flow reconstruct_flow(const BuiltFibration& b);

struct BuildReport {
  SystemReport system;
  soliton::ResidualReport soliton;
  double theta_defect = 0.0;
  double mean_curvature_defect = 0.0;     // μ♭ − d ln ρ
  double harmonic_morphism_defect = 0.0;  // |μ̃| for θ̃ with dθ̃ = Ω̃
  double psi_defect = 0.0;
  double integrability_defect = 0.0;
  double riemann_max = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct BuildResult {
  BuiltFibration fibration;
  Flow flow;
  BuildReport report;
};

// Throws DomainError when the system residuals or the f-integrability defect exceed `precondition_tol`.
BuildResult build_and_verify(const SurfaceData& data, double R = 1.0, double delta = 1.0, double tolerance = 1e-5,
                             const Differ& differ = {}, double precondition_tol = 1e-6);

struct ConstantCurvature {
  double cond_i = 0.0;
  double cond_ii = 0.0;
};

// cond_i over the base grid, cond_ii at q.
ConstantCurvature constant_curvature_defect(const SurfaceData& data, const Point& q, const Differ& differ = {});

}  // namespace ricsol::ansatz
