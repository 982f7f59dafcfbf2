#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricsol/field.hpp"
#include "ricsol/geometry.hpp"

namespace ricsol::tensor_lab {

enum class Kind { scalar, vector, oneform, twoform, threeform, symtensor, christoffel, riemann };

std::string kind_name(Kind kind);

struct TensorAtPoint {
  Kind kind = Kind::scalar;
  int dim = 3;
  std::vector<double> components;

  int rank() const;
  double operator()(int i) const { return components.at(i); }
  double operator()(int i, int j) const { return components.at(i * dim + j); }
  double operator()(int i, int j, int k) const { return components.at((i * dim + j) * dim + k); }
  double operator()(int i, int j, int k, int l) const { return components.at(((i * dim + j) * dim + k) * dim + l); }
  DVec vec() const;
  DMat mat() const;
};

TensorAtPoint make_vector(Kind kind, const DVec& v, int dim);
TensorAtPoint make_matrix(Kind kind, const DMat& m, int dim);

struct FormField {
  int degree = 0;
  ScalarField f0;   // degree 0, or the dx^1∧dx^2∧dx^3 coefficient for degree 3
  VectorField f1;
  MatrixField f2;   // antisymmetric components ω_ij

  static FormField zero_form(ScalarField f);
  static FormField one_form(VectorField w);
  static FormField two_form(MatrixField w);
};

// Metric jet about p; checks the fd-safe domain and the condition-number cap.
JMat metric_jet(const MetricField& g, const Point& p, int order, const Differ& differ);
double fd_reach(int order, const Differ& differ);

TensorAtPoint christoffel(const MetricField& g, const Point& p, const Differ& differ = {});

struct Curvature {
  TensorAtPoint riemann;
  TensorAtPoint ricci;
  double scalar = 0.0;
  std::optional<double> gauss;
};

Curvature curvature(const MetricField& g, const Point& p, const Differ& differ = {});
TensorAtPoint lie_derivative_metric(const MetricField& g, const VectorField& e, const Point& p,
                                    const Differ& differ = {});
TensorAtPoint covariant_hessian(const MetricField& g, const ScalarField& f, const Point& p,
                                const Differ& differ = {});
double laplacian(const MetricField& g, const ScalarField& f, const Point& p, const Differ& differ = {});
TensorAtPoint exterior_derivative(const FormField& w, int dim, const Point& p, const Differ& differ = {});
TensorAtPoint codifferential(const MetricField& g, const FormField& w, const Point& p, const Differ& differ = {});
TensorAtPoint flat(const MetricField& g, const VectorField& x, const Point& p, const Differ& differ = {});
TensorAtPoint sharp(const MetricField& g, const VectorField& w, const Point& p, const Differ& differ = {});
// g-raised norm on every slot; two-forms use the double-counting convention.
double norm_sq(const MetricField& g, const TensorAtPoint& t, const Point& p, const Differ& differ = {});
TensorAtPoint volume_form(const MetricField& g, const Point& p, const Differ& differ = {});

// Value-level helpers shared by reports.
double norm_sym(const DMat& t, const DMat& g, int dim);

}  // namespace ricsol::tensor_lab
