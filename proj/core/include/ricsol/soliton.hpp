#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ricsol/field.hpp"
#include "ricsol/semiconformal.hpp"

namespace ricsol::soliton {

// E = −μ + X + fU
struct Decomposition {
  VectorField X;
  ScalarField f;
};

struct SolitonCandidate {
  MetricField g;
  VectorField E;
  double A = 0.0;
  std::optional<Decomposition> decomposition;
};

struct ResidualTerms {
  DMat total{};
  DMat ricci{};  // −2 Ric
  DMat lie{};    // −L_E g
  DMat a{};      // −2A g
  DMat g{};
};

ResidualTerms residual_terms(const SolitonCandidate& c, const Point& p, const Differ& differ = {});
// −2 Ric − L_E g − 2A g
DMat soliton_residual(const SolitonCandidate& c, const Point& p, const Differ& differ = {});
double residual_norm(const SolitonCandidate& c, const Point& p, const Differ& differ = {});

struct ResidualReport {
  std::string case_id;
  Box grid;
  std::vector<double> per_point;
  double max = 0.0;
  double mean = 0.0;
  double ricci_term = 0.0;
  double lie_term = 0.0;
  double a_term = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

ResidualReport residual_report(const std::string& case_id, const SolitonCandidate& c, const Chart& chart,
                               double tolerance, const Differ& differ = {});

// Horizontal part X = E + μ − fU as a field (jets up to order 2).
VectorField horizontal_part(const semiconformal::SubmersionSetup& s, const VectorField& E, const ScalarField& f,
                            const Differ& differ = {});
// ‖E − (−μ + X + fU)‖_g at p.
double decomposition_defect(const semiconformal::SubmersionSetup& s, const SolitonCandidate& c, const Point& p,
                            const Differ& differ = {});

// −2 × the right side of the decomposed soliton equation; comparable with soliton_residual.
DMat residual_decomposed(const semiconformal::SubmersionSetup& s, const VectorField& X, const ScalarField& f,
                         double A, const Point& p, const Differ& differ = {});

// Linear equation df + f m = w along a path; m, w one-forms at a point.
using PathCoefficients = std::function<std::pair<DVec, DVec>(const Point&)>;

struct PathSolution {
  std::vector<Point> nodes;
  std::vector<double> f;
};

// Implicit trapezoid, `per_unit` segments per unit chart length.
PathSolution integrate_path(const std::vector<Point>& polyline, double f0, const PathCoefficients& coeffs,
                            int per_unit = 512);

// df + f μ♭ = −(Ω⌋grad ln ν + d*Ω − (ψ − A)θ)
std::pair<DVec, DVec> vertical_equation(const semiconformal::SubmersionSetup& s, const ScalarField& ln_nu, double A,
                                        const Point& p, const Differ& differ = {});

// ‖dw − w∧m‖ + ‖dm‖ for the vertical equation at p.
double integrability_defect(const semiconformal::SubmersionSetup& s, const ScalarField& ln_nu, double A,
                            const Point& p, const Differ& differ = {});

struct FSolution {
  PathSolution path;
  double integrability_defect = 0.0;
};

FSolution solve_f(const semiconformal::SubmersionSetup& s, const ScalarField& ln_nu, double A,
                  const std::vector<Point>& polyline, double f0 = 0.0, const Differ& differ = {},
                  double tolerance = 1e-6);

// dE♭ at p.
DMat gradient_type_defect(const SolitonCandidate& c, const Point& p, const Differ& differ = {});

}  // namespace ricsol::soliton
