#pragma once

#include "ricsol/field.hpp"
#include "ricsol/geometry.hpp"

namespace ricsol::semiconformal {

struct SubmersionSetup {
  Chart chart_M;
  Chart chart_N;
  VectorField projection;  // (φ¹, φ², unused) in M coordinates
  VectorField section;     // s: N → M with φ∘s = id, in N coordinates
  MetricField g;
  MetricField h;
  int vertical_sign = 1;   // U = sign·(ε dφ¹ dφ²)♯ normalised
};

// Fixes vertical_sign so that θ(∂_last) > 0 at the base point of chart_M.
SubmersionSetup make_setup(Chart chart_M, Chart chart_N, VectorField projection, VectorField section, MetricField g,
                           MetricField h, const Differ& differ = {});

// (x¹, x², x³) ↦ (x¹, x²) and its section at height t.
VectorField coordinate_projection();
VectorField coordinate_section(double t = 0.0);

// Jets about p of every structural quantity. θ, U, λ² carry `order`;
// Ω, Ω̃, μ♭, ψ carry order − 1.
struct FrameJets {
  int order = 0;
  JMat g, ginv;
  geo::Gamma gamma;
  JVec phi;
  std::array<JVec, 2> dphi;
  JMat h_at_phi;  // h_ab(φ), 2×2 block
  Jet lambda2, lnlambda;
  JVec U, theta;
  JMat Omega, Omega_tilde;
  JVec mu_flat, mu;
  Jet psi;
};

FrameJets frame_jets(const SubmersionSetup& s, const Point& p, int order, const Differ& differ = {});

// Jets about q ∈ N of the basic data transported through the section.
struct BaseJets {
  JMat h;
  Jet lambda;      // λ̄
  JMat Omega_bar;  // s*Ω̃
  JVec eta;        // s*μ♭, equal to d ln ρ̄ when μ is a basic gradient
  Jet psi;
};

BaseJets base_jets(const SubmersionSetup& s, const Point& q, int order, const Differ& differ = {});

struct Defect {
  double lambda2 = 0.0;
  double defect = 0.0;
};

Defect semiconformality_defect(const SubmersionSetup& s, const Point& p, const Differ& differ = {});

struct FibrationFrame {
  double lambda = 0.0;
  DVec U{}, theta{}, mu{}, mu_flat{};
  DMat Omega{}, Omega_tilde{};
  double psi = 0.0;
};

FibrationFrame frame(const SubmersionSetup& s, const Point& p, const Differ& differ = {});

struct RicciDecomposition {
  DMat full{};
  double vv = 0.0;
  DVec hv{};
  DMat hh{};
  DMat blocks_reassembled{};
};

RicciDecomposition ricci_decomposed(const SubmersionSetup& s, const Point& p, const Differ& differ = {});

// Right side of the pulled-back Hessian identity for a basic F = F̄∘φ.
DMat pullback_hessian(const SubmersionSetup& s, const ScalarField& f_bar, const Point& p, const Differ& differ = {},
                      double basic_tol = 1e-6);
double laplacian_relation_defect(const SubmersionSetup& s, const ScalarField& f_bar, const Point& p,
                                 const Differ& differ = {});

struct DstarTildeOmega {
  DVec lhs{}, rhs{};
  double defect = 0.0;
};

DstarTildeOmega dstar_tilde_omega(const SubmersionSetup& s, const Point& p, const Differ& differ = {});
double dstar_tilde_omega_defect(const SubmersionSetup& s, const Point& p, const Differ& differ = {});
double basicness_defect(const SubmersionSetup& s, const ScalarField& f, const Point& p, const Differ& differ = {});

// Structural identities of a conformal foliation, measured at p.
struct StructureIdentities {
  double foliation = 0.0;           // |(L_U g)(X,Y) + 2U(ln λ)g(X,Y)| on H×H
  double horizontal_mean = 0.0;     // |g(U, ∇_{e_a}e_a) − 2U(ln λ)|
  double bracket = 0.0;             // |H[U, X_a]| for basic lifts
  double omega_tilde_basic = 0.0;   // |(L_U Ω̃)(X_1, X_2)|
  double dmu_horizontal = 0.0;      // |dμ♭(X_1, X_2)|
};

StructureIdentities structure_identities(const SubmersionSetup& s, const Point& p, const Differ& differ = {});

}  // namespace ricsol::semiconformal
