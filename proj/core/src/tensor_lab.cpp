#include "ricsol/tensor_lab.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ricsol::tensor_lab {

using namespace ricsol::geo;

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::scalar: return "scalar";
    case Kind::vector: return "vector";
    case Kind::oneform: return "oneform";
    case Kind::twoform: return "twoform";
    case Kind::threeform: return "threeform";
    case Kind::symtensor: return "symtensor";
    case Kind::christoffel: return "christoffel";
    case Kind::riemann: return "riemann";
  }
  return "unknown";
}

int TensorAtPoint::rank() const {
  switch (kind) {
    case Kind::scalar:
    case Kind::threeform: return 0;
    case Kind::vector:
    case Kind::oneform: return 1;
    case Kind::twoform:
    case Kind::symtensor: return 2;
    case Kind::christoffel: return 3;
    case Kind::riemann: return 4;
  }
  return 0;
}

DVec TensorAtPoint::vec() const {
  DVec v{0, 0, 0};
  for (int i = 0; i < dim; ++i) v[i] = components.at(i);
  return v;
}

DMat TensorAtPoint::mat() const {
  DMat m{};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m[i][j] = (*this)(i, j);
  return m;
}

TensorAtPoint make_vector(Kind kind, const DVec& v, int dim) {
  TensorAtPoint t{kind, dim, {}};
  for (int i = 0; i < dim; ++i) t.components.push_back(v[i]);
  return t;
}

TensorAtPoint make_matrix(Kind kind, const DMat& m, int dim) {
  TensorAtPoint t{kind, dim, {}};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t.components.push_back(m[i][j]);
  return t;
}

FormField FormField::zero_form(ScalarField f) {
  FormField w;
  w.degree = 0;
  w.f0 = std::move(f);
  return w;
}

FormField FormField::one_form(VectorField v) {
  FormField w;
  w.degree = 1;
  w.f1 = std::move(v);
  return w;
}

FormField FormField::two_form(MatrixField m) {
  FormField w;
  w.degree = 2;
  w.f2 = std::move(m);
  return w;
}

double fd_reach(int order, const Differ& differ) {
  if (differ.mode == DiffMode::analytic) return 0.0;
  return 2.0 * differ.step(std::max(order, 2));
}

JMat metric_jet(const MetricField& g, const Point& p, int order, const Differ& differ) {
  g.chart.require(p, fd_reach(order, differ));
  JMat m = g.components.at(p, order, differ);
  const int dim = g.chart.dim;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(m[i][j].value() - m[j][i].value()) > 1e-12 * (1.0 + std::abs(m[i][j].value())))
        throw SingularError("metric components not symmetric");
  check_metric(m, dim);
  return m;
}

TensorAtPoint christoffel(const MetricField& g, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 1, differ);
  const Gamma gam = geo::christoffel(m, inverse(m, dim), dim);
  TensorAtPoint t{Kind::christoffel, dim, {}};
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) t.components.push_back(gam[k][i][j].value());
  return t;
}

Curvature curvature(const MetricField& g, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 2, differ);
  const Riemann r = geo::riemann(m, dim);
  Curvature c;
  c.riemann = TensorAtPoint{Kind::riemann, dim, {}};
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int e = 0; e < dim; ++e)
        for (int d = 0; d < dim; ++d) c.riemann.components.push_back(r[a][b][e][d]);
  DMat ric{};
  for (int s = 0; s < dim; ++s)
    for (int n = 0; n < dim; ++n)
      for (int a = 0; a < dim; ++a) ric[s][n] += r[a][s][a][n];
  c.ricci = make_matrix(Kind::symtensor, ric, dim);
  const DMat gi = values(inverse(m, dim));
  double scal = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) scal += gi[i][j] * ric[i][j];
  c.scalar = scal;
  if (dim == 2) c.gauss = 0.5 * scal;
  return c;
}

TensorAtPoint lie_derivative_metric(const MetricField& g, const VectorField& e, const Point& p,
                                    const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 1, differ);
  const JVec ev = e.at(p, 1, differ);
  return make_matrix(Kind::symtensor, values(lie_metric(m, ev, dim)), dim);
}

TensorAtPoint covariant_hessian(const MetricField& g, const ScalarField& f, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 1, differ);
  const Gamma gam = geo::christoffel(m, inverse(m, dim), dim);
  return make_matrix(Kind::symtensor, values(hessian(f.at(p, 2, differ), gam, dim)), dim);
}

double laplacian(const MetricField& g, const ScalarField& f, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 1, differ);
  const JMat gi = inverse(m, dim);
  const Gamma gam = geo::christoffel(m, gi, dim);
  return geo::laplacian(f.at(p, 2, differ), gam, gi, dim).value();
}

TensorAtPoint exterior_derivative(const FormField& w, int dim, const Point& p, const Differ& differ) {
  if (w.degree >= dim) throw std::invalid_argument("exterior derivative of a top-degree form is identically zero");
  if (w.degree == 0) return make_vector(Kind::oneform, values(differential(w.f0.at(p, 1, differ), dim)), dim);
  if (w.degree == 1) return make_matrix(Kind::twoform, values(d1(w.f1.at(p, 1, differ), dim)), dim);
  TensorAtPoint t{Kind::threeform, dim, {d2(w.f2.at(p, 1, differ)).value()}};
  return t;
}

TensorAtPoint codifferential(const MetricField& g, const FormField& w, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 1, differ);
  const JMat gi = inverse(m, dim);
  const Gamma gam = geo::christoffel(m, gi, dim);
  if (w.degree == 1) return TensorAtPoint{Kind::scalar, dim, {codiff1(w.f1.at(p, 1, differ), gam, gi, dim).value()}};
  if (w.degree == 2) return make_vector(Kind::oneform, values(codiff2(w.f2.at(p, 1, differ), gam, gi, dim)), dim);
  throw std::invalid_argument("codifferential implemented for degree 1 and 2");
}

TensorAtPoint flat(const MetricField& g, const VectorField& x, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 0, differ);
  return make_vector(Kind::oneform, values(lower(m, x.at(p, 0, differ), dim)), dim);
}

TensorAtPoint sharp(const MetricField& g, const VectorField& w, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 0, differ);
  return make_vector(Kind::vector, values(raise(inverse(m, dim), w.at(p, 0, differ), dim)), dim);
}

double norm_sym(const DMat& t, const DMat& g, int dim) {
  Eigen::MatrixXd gm(dim, dim), tm(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      gm(i, j) = g[i][j];
      tm(i, j) = t[i][j];
    }
  const Eigen::MatrixXd gi = gm.inverse();
  const double s = (gi * tm * gi * tm.transpose()).trace();
  return std::sqrt(std::max(0.0, s));
}

double norm_sq(const MetricField& g, const TensorAtPoint& t, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const DMat m = values(metric_jet(g, p, 0, differ));
  Eigen::MatrixXd gm(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) gm(i, j) = m[i][j];
  switch (t.rank()) {
    case 0: return t.components.at(0) * t.components.at(0);
    case 1: {
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = t(i);
      return t.kind == Kind::vector ? v.dot(gm * v) : v.dot(gm.inverse() * v);
    }
    case 2: {
      const double n = norm_sym(t.mat(), m, dim);
      return n * n;
    }
    default: throw std::invalid_argument("norm_sq supports ranks 0 to 2");
  }
}

TensorAtPoint volume_form(const MetricField& g, const Point& p, const Differ& differ) {
  const int dim = g.chart.dim;
  const JMat m = metric_jet(g, p, 0, differ);
  const double vol = g.orientation * std::sqrt(det(m, dim).value());
  if (dim == 3) return TensorAtPoint{Kind::threeform, 3, {vol}};
  DMat w{};
  w[0][1] = vol;
  w[1][0] = -vol;
  return make_matrix(Kind::twoform, w, 2);
}

}  // namespace ricsol::tensor_lab
