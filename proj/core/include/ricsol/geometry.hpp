#pragma once

#include <array>

#include "ricsol/field.hpp"

namespace ricsol {

JVec operator+(const JVec& a, const JVec& b);
JVec operator-(const JVec& a, const JVec& b);
JVec operator*(const Jet& s, const JVec& a);
JMat operator+(const JMat& a, const JMat& b);
JMat operator-(const JMat& a, const JMat& b);
JMat operator*(const Jet& s, const JMat& a);

}  // namespace ricsol

// Jet-level coordinate tensor calculus. Index conventions: G[k][i][j] = Γ^k_ij,
// two-forms as antisymmetric matrices with ω = ½ ω_ij dx^i∧dx^j.
namespace ricsol::geo {

using Gamma = std::array<JMat, 3>;
using Riemann = std::array<std::array<DMat, 3>, 3>;  // R[ρ][σ][μ][ν] = R^ρ_σμν

inline constexpr double kConditionCap = 1e10;

JVec zero_vec(int order = Jet::kExact);
JMat zero_mat(int order = Jet::kExact);


using ricsol::values;
DMat values(const JMat& m);
JMat truncated(const JMat& m, int order);
JVec truncated(const JVec& v, int order);

Jet det(const JMat& g, int dim);
JMat inverse(const JMat& g, int dim);
// Throws SingularError when the value matrix is not positive definite or is ill-conditioned.
void check_metric(const JMat& g, int dim);
double condition_number(const DMat& g, int dim);

Gamma christoffel(const JMat& g, const JMat& ginv, int dim);
JMat ricci(const JMat& g, int dim);
Riemann riemann(const JMat& g, int dim);
// Full contraction R_abcd R^abcd.
double riemann_norm2(const Riemann& r, const DMat& g, int dim);

JVec differential(const Jet& f, int dim);
JMat d1(const JVec& w, int dim);
Jet d2(const JMat& w);

JMat lie_metric(const JMat& g, const JVec& e, int dim);
JMat hessian(const Jet& f, const Gamma& gam, int dim);
Jet laplacian(const Jet& f, const Gamma& gam, const JMat& ginv, int dim);
// d*ω = −g^ij ∇_i ω_j
Jet codiff1(const JVec& w, const Gamma& gam, const JMat& ginv, int dim);
// (d*Ω)_j = −g^ik (∇_i Ω)_kj
JVec codiff2(const JMat& w, const Gamma& gam, const JMat& ginv, int dim);

JVec raise(const JMat& ginv, const JVec& w, int dim);
JVec lower(const JMat& g, const JVec& x, int dim);
Jet pair(const JVec& w, const JVec& x, int dim);
Jet dot(const JMat& g, const JVec& a, const JVec& b, int dim);
// T_ij T_kl g^ik g^jl, the double-counting norm for two-forms.
Jet norm2(const JMat& t, const JMat& ginv, int dim);
// (S⌋X)_j = S(X, ·)_j = X^i S_ij
JVec contract(const JMat& s, const JVec& x, int dim);
JMat outer(const JVec& a, const JVec& b);
// a⊙b = ½(a⊗b + b⊗a)
JMat sym(const JVec& a, const JVec& b);
JMat wedge(const JVec& a, const JVec& b);
Jet trace(const JMat& s, const JMat& ginv, int dim);

}  // namespace ricsol::geo
