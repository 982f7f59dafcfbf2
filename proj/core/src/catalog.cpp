#include "ricsol/catalog.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "ricsol/geometry.hpp"

namespace ricsol::catalog {

namespace {

using semiconformal::coordinate_projection;
using semiconformal::coordinate_section;

constexpr int kGrid = 9;

JMat diag(const Jet& a, const Jet& b, const Jet& c) {
  JMat m = geo::zero_mat();
  m[0][0] = a;
  m[1][1] = b;
  m[2][2] = c;
  return m;
}

Chart chart3(std::vector<std::string> names, Point lo, Point hi, std::function<bool(const Point&)> domain = {}) {
  return make_chart(3, std::move(names), lo, hi, {kGrid, kGrid, kGrid}, std::move(domain));
}

Chart chart2(std::vector<std::string> names, Point lo, Point hi, std::function<bool(const Point&)> domain = {}) {
  lo[2] = hi[2] = 0.0;
  return make_chart(2, std::move(names), lo, hi, {kGrid, kGrid, 1}, std::move(domain));
}

MetricField metric(const Chart& c, MatrixField::JetFn fn) { return MetricField{c, MatrixField(std::move(fn), c.dim), 1}; }

VectorField vf(VectorField::JetFn fn) { return VectorField(std::move(fn)); }
ScalarField sf(ScalarField::JetFn fn, int dim = 3) { return ScalarField(std::move(fn), dim); }

void fibre(CatalogCase& c, const Chart& base, MatrixField::JetFn h, VectorField projection = coordinate_projection(),
           VectorField section = {}) {
  if (!section.valid()) section = coordinate_section(c.chart.center()[2]);
  c.fibration = semiconformal::make_setup(c.chart, base, std::move(projection), std::move(section), c.g,
                                          metric(base, std::move(h)));
}

JMat flat2(const JetPoint&) { return diag(1.0, 1.0, 0.0); }

JMat hyperbolic2(const JetPoint& x) {
  const Jet w = Jet(1.0) / (x[1] * x[1]);
  return diag(w, w, 0.0);
}

void add_polynomials(CatalogCase& c) {
  const char* names[] = {"x1", "x2", "x3"};
  c.extra_scalars.push_back({"1", sf([](const JetPoint&) { return Jet(1.0); })});
  for (int i = 0; i < 3; ++i)
    c.extra_scalars.push_back({names[i], sf([i](const JetPoint& x) { return x[i]; })});
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      c.extra_scalars.push_back(
          {std::string(names[i]) + "*" + names[j], sf([i, j](const JetPoint& x) { return x[i] * x[j]; })});
}

CatalogCase nil() {
  CatalogCase c;
  c.id = "nil";
  c.title = "Nil: dy1^2 + dy2^2 + (y1 dy2 + dy3)^2";
  c.anchor = "Nil metric and its explicit soliton flow";
  c.chart = chart3({"y1", "y2", "y3"}, {-1, -1, -1}, {1, 1, 1});
  c.g = metric(c.chart, [](const JetPoint& y) {
    JMat m = diag(1.0, 1.0 + y[0] * y[0], 1.0);
    m[1][2] = m[2][1] = y[0];
    return m;
  });
  fibre(c, chart2({"y1", "y2"}, {-1, -1, 0}, {1, 1, 0}), flat2);
  c.E = vf([](const JetPoint& y) { return JVec{-y[0], -y[1], -2.0 * y[2]}; });
  c.A = 1.5;
  c.f = sf([](const JetPoint& y) { return -(y[0] * y[1]) - 2.0 * y[2]; });
  c.killing = {
      {"d2", vf([](const JetPoint&) { return JVec{0.0, 1.0, 0.0}; })},
      {"d3", vf([](const JetPoint&) { return JVec{0.0, 0.0, 1.0}; })},
      {"d1 - y2 d3", vf([](const JetPoint& y) { return JVec{1.0, 0.0, -y[1]}; })},
      {"rotation", vf([](const JetPoint& y) { return JVec{-y[1], y[0], 0.5 * (y[1] * y[1] - y[0] * y[0])}; })},
  };
  add_polynomials(c);
  c.extra_scalars.push_back({"y1*y2", sf([](const JetPoint& y) { return y[0] * y[1]; })});
  c.extra_scalars.push_back({"y3", sf([](const JetPoint& y) { return y[2]; })});
  c.expected = {{"A", 1.5, "computed"}, {"ricci_00_origin", -0.5, "computed"}, {"ricci_22_origin", 0.5, "computed"},
                {"psi", 0.5, "computed"}};
  c.designated = {{0.5, 0.5, 0.0}, {1.0, 1.0, 0.0}, {-0.3, 0.4, 0.2}};
  return c;
}

CatalogCase sol() {
  CatalogCase c;
  c.id = "sol";
  c.title = "Sol: dx1^2 + e^(2x1) dx2^2 + e^(-2x1) dx3^2";
  c.anchor = "Sol example with flow";
  c.chart = chart3({"x1", "x2", "x3"}, {-1, -1, -1}, {1, 1, 1});
  c.g = metric(c.chart, [](const JetPoint& x) { return diag(1.0, exp(2.0 * x[0]), exp(-2.0 * x[0])); });
  fibre(c, chart2({"x1", "x2"}, {-1, -1, 0}, {1, 1, 0}),
        [](const JetPoint& x) { return diag(1.0, exp(2.0 * x[0]), 0.0); });
  c.E = vf([](const JetPoint& x) { return JVec{-2.0, 0.0, -4.0 * x[2]}; });
  c.A = 2.0;
  c.f = sf([](const JetPoint& x) { return -4.0 * x[2] * exp(-x[0]); });
  c.killing = {
      {"d2", vf([](const JetPoint&) { return JVec{0.0, 1.0, 0.0}; })},
      {"d3", vf([](const JetPoint&) { return JVec{0.0, 0.0, 1.0}; })},
      {"d1 - x2 d2 + x3 d3", vf([](const JetPoint& x) { return JVec{1.0, -x[1], x[2]}; })},
  };
  add_polynomials(c);
  c.extra_scalars.push_back({"exp(x1)", sf([](const JetPoint& x) { return exp(x[0]); })});
  c.extra_scalars.push_back({"exp(-x1)", sf([](const JetPoint& x) { return exp(-x[0]); })});
  c.extra_scalars.push_back({"x3*exp(-x1)", sf([](const JetPoint& x) { return x[2] * exp(-x[0]); })});
  c.expected = {{"A", 2.0, "reference"}, {"ricci_00", -2.0, "computed"}, {"iib_value", 4.0, "computed"},
                {"psi", 0.0, "exact"}};
  c.designated = {{0.0, 0.0, 0.5}, {0.3, -0.2, 0.7}, {-0.5, 0.5, -0.5}};
  return c;
}

CatalogCase sl2() {
  CatalogCase c;
  c.id = "sl2";
  c.title = "SL2: (dx1^2 + dx2^2)/x2^2 + (dx1/x2 + dx3)^2";
  c.anchor = "SL2 admits no soliton structure";
  c.chart = chart3({"x1", "x2", "x3"}, {-1, 0.5, -1}, {1, 2, 1}, [](const Point& p) { return p[1] > 0.2; });
  c.g = metric(c.chart, [](const JetPoint& x) {
    const Jet w = Jet(1.0) / (x[1] * x[1]);
    JMat m = diag(w + w, w, 1.0);
    m[0][2] = m[2][0] = Jet(1.0) / x[1];
    return m;
  });
  fibre(c, chart2({"x1", "x2"}, {-1, 0.5, 0}, {1, 2, 0}, [](const Point& p) { return p[1] > 0.2; }), hyperbolic2);
  c.killing = {
      {"d1", vf([](const JetPoint&) { return JVec{1.0, 0.0, 0.0}; })},
      {"d3", vf([](const JetPoint&) { return JVec{0.0, 0.0, 1.0}; })},
      {"dilation", vf([](const JetPoint& x) { return JVec{x[0], x[1], 0.0}; })},
      {"special", vf([](const JetPoint& x) {
         return JVec{x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1], 2.0 * x[1]};
       })},
  };
  add_polynomials(c);
  c.extra_scalars.push_back({"log(x2)", sf([](const JetPoint& x) { return log(x[1]); })});
  c.extra_scalars.push_back({"1/x2", sf([](const JetPoint& x) { return Jet(1.0) / x[1]; })});
  c.extra_scalars.push_back({"x2*log(x2)", sf([](const JetPoint& x) { return x[1] * log(x[1]); })});
  c.extra_scalars.push_back({"x3/x2", sf([](const JetPoint& x) { return x[2] / x[1]; })});
  c.expected = {{"psi", 0.5, "reference"}};
  c.designated = {{0.0, 1.0, 0.0}, {0.3, 1.5, -0.4}};
  return c;
}

CatalogCase s2xr() {
  CatalogCase c;
  c.id = "s2xr";
  c.title = "S2 x R: dth^2 + sin(th)^2 dph^2 + dt^2";
  c.anchor = "warped products, S2 x R";
  auto dom = [](const Point& p) { return p[0] > 0.0 && p[0] < M_PI; };
  c.chart = chart3({"theta", "phi", "t"}, {0.5, -1, -1}, {2.5, 1, 1}, dom);
  c.g = metric(c.chart, [](const JetPoint& x) {
    const Jet s = sin(x[0]);
    return diag(1.0, s * s, 1.0);
  });
  fibre(c, chart2({"theta", "phi"}, {0.5, -1, 0}, {2.5, 1, 0}, dom), [](const JetPoint& x) {
    const Jet s = sin(x[0]);
    return diag(1.0, s * s, 0.0);
  });
  c.E = vf([](const JetPoint& x) { return JVec{0.0, 0.0, x[2]}; });
  c.A = -1.0;
  c.f = sf([](const JetPoint& x) { return x[2]; });
  c.gradient = true;
  c.killing = {
      {"d_phi", vf([](const JetPoint&) { return JVec{0.0, 1.0, 0.0}; })},
      {"d_t", vf([](const JetPoint&) { return JVec{0.0, 0.0, 1.0}; })},
      {"rot_x", vf([](const JetPoint& x) { return JVec{-sin(x[1]), -(cos(x[0]) / sin(x[0])) * cos(x[1]), 0.0}; })},
      {"rot_y", vf([](const JetPoint& x) { return JVec{cos(x[1]), -(cos(x[0]) / sin(x[0])) * sin(x[1]), 0.0}; })},
  };
  add_polynomials(c);
  c.expected = {{"A", -1.0, "reference"}, {"K", 1.0, "exact"}};
  c.designated = {{1.0, 0.2, 0.5}, {2.0, -0.5, -0.3}};
  return c;
}

CatalogCase h2xr() {
  CatalogCase c;
  c.id = "h2xr";
  c.title = "H2 x R: (dx^2 + dy^2)/y^2 + dt^2";
  c.anchor = "warped products, H2 x R";
  auto dom = [](const Point& p) { return p[1] > 0.0; };
  c.chart = chart3({"x", "y", "t"}, {-1, 0.5, -1}, {1, 2, 1}, dom);
  c.g = metric(c.chart, [](const JetPoint& x) {
    const Jet w = Jet(1.0) / (x[1] * x[1]);
    return diag(w, w, 1.0);
  });
  fibre(c, chart2({"x", "y"}, {-1, 0.5, 0}, {1, 2, 0}, dom), hyperbolic2);
  c.E = vf([](const JetPoint& x) { return JVec{0.0, 0.0, -x[2]}; });
  c.A = 1.0;
  c.f = sf([](const JetPoint& x) { return -x[2]; });
  c.gradient = true;
  c.killing = {
      {"d_x", vf([](const JetPoint&) { return JVec{1.0, 0.0, 0.0}; })},
      {"d_t", vf([](const JetPoint&) { return JVec{0.0, 0.0, 1.0}; })},
      {"dilation", vf([](const JetPoint& x) { return JVec{x[0], x[1], 0.0}; })},
      {"special", vf([](const JetPoint& x) { return JVec{x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1], 0.0}; })},
  };
  add_polynomials(c);
  c.expected = {{"A", 1.0, "reference"}, {"K", -1.0, "exact"}};
  c.designated = {{0.2, 1.0, 0.5}, {-0.5, 1.5, -0.3}};
  return c;
}

std::vector<Labelled<VectorField>> euclidean_killing() {
  std::vector<Labelled<VectorField>> k;
  for (int i = 0; i < 3; ++i)
    k.push_back({"translation_" + std::to_string(i + 1), vf([i](const JetPoint&) {
                   JVec v = geo::zero_vec();
                   v[i] = Jet(1.0);
                   return v;
                 })});
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    k.push_back({"rotation_" + std::to_string(i + 1), vf([a, b](const JetPoint& x) {
                   JVec v = geo::zero_vec();
                   v[a] = -x[b];
                   v[b] = x[a];
                   return v;
                 })});
  }
  return k;
}

CatalogCase s3() {
  CatalogCase c;
  c.id = "s3";
  c.title = "S3: 4|dx|^2/(1+|x|^2)^2";
  c.anchor = "only Killing soliton flows on S3";
  c.chart = chart3({"x1", "x2", "x3"}, {-1, -1, -1}, {1, 1, 1});
  c.g = metric(c.chart, [](const JetPoint& x) {
    const Jet q = 1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const Jet w = 4.0 / (q * q);
    return diag(w, w, w);
  });
  fibre(c, chart2({"x1", "x2"}, {-1, -1, 0}, {1, 1, 0}), flat2);
  c.E = vf([](const JetPoint&) { return geo::zero_vec(); });
  c.A = -2.0;
  c.f = sf([](const JetPoint&) { return Jet(0.0); });
  c.gradient = true;
  for (auto& k : euclidean_killing())
    if (k.name.rfind("rotation", 0) == 0) c.killing.push_back(k);
  for (int i = 0; i < 3; ++i)
    c.killing.push_back({"conformal_" + std::to_string(i + 1), vf([i](const JetPoint& x) {
                           const Jet r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                           JVec v = (2.0 * x[i]) * JVec{x[0], x[1], x[2]};
                           v[i] += 1.0 - r2;
                           return v;
                         })});
  add_polynomials(c);
  c.expected = {{"A", -2.0, "computed"}};
  c.designated = {{0.0, 0.0, 0.0}, {0.3, -0.2, 0.5}};
  return c;
}

CatalogCase h3() {
  CatalogCase c;
  c.id = "h3";
  c.title = "H3: |dx|^2/x3^2";
  c.anchor = "only Killing soliton flows on H3";
  auto dom = [](const Point& p) { return p[2] > 0.0; };
  c.chart = chart3({"x1", "x2", "x3"}, {-1, -1, 0.5}, {1, 1, 2}, dom);
  c.g = metric(c.chart, [](const JetPoint& x) {
    const Jet w = Jet(1.0) / (x[2] * x[2]);
    return diag(w, w, w);
  });
  fibre(c, chart2({"x1", "x2"}, {-1, -1, 0}, {1, 1, 0}), flat2);
  c.E = vf([](const JetPoint&) { return geo::zero_vec(); });
  c.A = 2.0;
  c.f = sf([](const JetPoint&) { return Jet(0.0); });
  c.gradient = true;
  c.killing = {
      {"d1", vf([](const JetPoint&) { return JVec{1.0, 0.0, 0.0}; })},
      {"d2", vf([](const JetPoint&) { return JVec{0.0, 1.0, 0.0}; })},
      {"rotation", vf([](const JetPoint& x) { return JVec{-x[1], x[0], 0.0}; })},
      {"dilation", vf([](const JetPoint& x) { return JVec{x[0], x[1], x[2]}; })},
  };
  for (int i = 0; i < 2; ++i)
    c.killing.push_back({"special_" + std::to_string(i + 1), vf([i](const JetPoint& x) {
                           const Jet r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                           JVec v = (2.0 * x[i]) * JVec{x[0], x[1], x[2]};
                           v[i] -= r2;
                           return v;
                         })});
  add_polynomials(c);
  c.expected = {{"A", 2.0, "computed"}};
  c.designated = {{0.0, 0.0, 1.0}, {0.3, -0.2, 1.5}};
  return c;
}

CatalogCase r3_gaussian() {
  CatalogCase c;
  c.id = "r3_gaussian";
  c.title = "R3 with the Gaussian flow E = -A x";
  c.anchor = "Gaussian solitons on R3";
  c.chart = chart3({"x1", "x2", "x3"}, {-1, -1, -1}, {1, 1, 1});
  c.g = metric(c.chart, [](const JetPoint&) { return diag(1.0, 1.0, 1.0); });
  fibre(c, chart2({"x1", "x2"}, {-1, -1, 0}, {1, 1, 0}), flat2);
  c.E = vf([](const JetPoint& x) { return JVec{-x[0], -x[1], -x[2]}; });
  c.A = 1.0;
  c.f = sf([](const JetPoint& x) { return -x[2]; });
  c.gradient = true;
  c.killing = euclidean_killing();
  add_polynomials(c);
  c.expected = {{"A", 1.0, "exact"}};
  c.designated = {{0.1, 0.2, 0.3}, {-0.5, 0.4, 0.8}};
  return c;
}

constexpr double kHelixC = 1.0;

CatalogCase helix() {
  CatalogCase c;
  c.id = "helix";
  c.title = "helix fibration of R3 in cylindrical coordinates (r, alpha, z), c = 1";
  c.anchor = "Helix example";
  auto dom = [](const Point& p) { return p[0] > 0.0; };
  c.chart = chart3({"r", "alpha", "z"}, {0.5, -1, -1}, {2, 1, 1}, dom);
  c.g = metric(c.chart, [](const JetPoint& x) { return diag(1.0, x[0] * x[0], 1.0); });
  const double sc = std::sqrt(kHelixC);
  VectorField proj = vf([sc](const JetPoint& x) { return JVec{x[0], sc * x[2] - x[1], Jet(0.0)}; });
  VectorField sec([](const JetPoint& y) { return JVec{y[0], -y[1], Jet(0.0)}; }, 2);
  fibre(c, chart2({"r", "v"}, {0.5, -1, 0}, {2, 1, 0}, dom),
        [](const JetPoint& y) { return diag((1.0 + kHelixC * y[0] * y[0]) / (y[0] * y[0]), 1.0, 0.0); },
        std::move(proj), std::move(sec));
  c.E = vf([](const JetPoint&) { return geo::zero_vec(); });
  c.A = 0.0;
  c.f = sf([](const JetPoint&) { return Jet(0.0); });
  c.gradient = true;
  c.killing = {
      {"d_alpha", vf([](const JetPoint&) { return JVec{0.0, 1.0, 0.0}; })},
      {"d_z", vf([](const JetPoint&) { return JVec{0.0, 0.0, 1.0}; })},
      {"d_x", vf([](const JetPoint& x) { return JVec{cos(x[1]), -sin(x[1]) / x[0], 0.0}; })},
      {"d_y", vf([](const JetPoint& x) { return JVec{sin(x[1]), cos(x[1]) / x[0], 0.0}; })},
  };
  add_polynomials(c);
  c.expected = {{"c", kHelixC, "exact"}, {"riemann_norm", 0.0, "reference"}};
  c.designated = {{1.0, 0.2, 0.3}, {1.5, -0.4, 0.6}};
  return c;
}

CatalogCase wp_exceptional() {
  CatalogCase c;
  c.id = "wp_exceptional";
  c.title = "warped product t^sqrt(2) (dx^2 + dy^2) + dt^2, lambda = t^(-1/sqrt(2))";
  c.anchor = "exceptional warped solutions lambda(t) = t^(+-1/sqrt(2))";
  auto dom = [](const Point& p) { return p[2] > 0.0; };
  c.chart = chart3({"x", "y", "t"}, {-1, -1, 1}, {1, 1, 2}, dom);
  c.g = metric(c.chart, [](const JetPoint& x) {
    const Jet w = pow(x[2], std::sqrt(2.0));
    return diag(w, w, 1.0);
  });
  fibre(c, chart2({"x", "y"}, {-1, -1, 0}, {1, 1, 0}), flat2);
  c.E = vf([](const JetPoint& x) { return JVec{0.0, 0.0, (std::sqrt(2.0) - 1.0) / x[2]}; });
  c.A = 0.0;
  c.f = sf([](const JetPoint& x) { return (std::sqrt(2.0) - 1.0) / x[2]; });
  c.gradient = true;
  c.killing = {
      {"d_x", vf([](const JetPoint&) { return JVec{1.0, 0.0, 0.0}; })},
      {"d_y", vf([](const JetPoint&) { return JVec{0.0, 1.0, 0.0}; })},
      {"rotation", vf([](const JetPoint& x) { return JVec{-x[1], x[0], 0.0}; })},
  };
  add_polynomials(c);
  c.expected = {{"A", 0.0, "reference"}, {"K", 0.0, "exact"}};
  c.designated = {{0.0, 0.0, 1.5}, {0.3, -0.2, 1.2}};
  return c;
}

CatalogCase cigar() {
  CatalogCase c;
  c.id = "cigar";
  c.title = "cigar x R: (dx^2 + dy^2)/(1 + x^2 + y^2) + dt^2";
  c.anchor = "two-dimensional gradient soliton reduction";
  c.chart = chart3({"x", "y", "t"}, {-1, -1, -1}, {1, 1, 1});
  auto h = [](const JetPoint& x) {
    const Jet w = Jet(1.0) / (1.0 + x[0] * x[0] + x[1] * x[1]);
    return diag(w, w, 0.0);
  };
  c.g = metric(c.chart, [h](const JetPoint& x) {
    JMat m = h(x);
    m[2][2] = Jet(1.0);
    return m;
  });
  fibre(c, chart2({"x", "y"}, {-1, -1, 0}, {1, 1, 0}), h);
  c.E = vf([](const JetPoint& x) { return JVec{-2.0 * x[0], -2.0 * x[1], Jet(0.0)}; });
  c.A = 0.0;
  c.f = sf([](const JetPoint&) { return Jet(0.0); });
  c.gradient = true;
  c.killing = {
      {"rotation", vf([](const JetPoint& x) { return JVec{-x[1], x[0], 0.0}; })},
      {"d_t", vf([](const JetPoint&) { return JVec{0.0, 0.0, 1.0}; })},
  };
  add_polynomials(c);
  c.expected = {{"A", 0.0, "computed"}};
  c.designated = {{0.0, 0.0, 0.0}, {0.5, -0.3, 0.2}};
  return c;
}

const std::map<std::string, CatalogCase>& registry() {
  static const std::map<std::string, CatalogCase> cases = [] {
    std::map<std::string, CatalogCase> m;
    for (auto&& c : {nil(), sol(), sl2(), s2xr(), h2xr(), s3(), h3(), r3_gaussian(), helix(), wp_exceptional(),
                     cigar()})
      m.emplace(c.id, c);
    return m;
  }();
  return cases;
}

}  // namespace

double CatalogCase::expected_value(const std::string& name) const {
  for (const auto& e : expected)
    if (e.name == name) return e.value;
  throw std::out_of_range("no expected quantity '" + name + "' for case " + id);
}

const std::vector<std::string>& ids() {
  static const std::vector<std::string> list = {"nil", "sol", "sl2", "s2xr", "h2xr", "s3",
                                                "h3",  "r3_gaussian", "helix", "wp_exceptional", "cigar"};
  return list;
}

const CatalogCase& get(const std::string& id) {
  const auto& r = registry();
  auto it = r.find(id);
  if (it == r.end()) throw std::out_of_range("unknown catalog case: " + id);
  return it->second;
}

std::array<double, 6> sl2_system_residual(const SlFields& s, double a, const Point& p, const Differ& differ) {
  if (p[1] <= 0.0) throw DomainError("sl2 system needs x2 > 0");
  const Jet al = s.alpha.at(p, 1, differ);
  const Jet be = s.beta.at(p, 1, differ);
  const Jet f = s.f.at(p, 1, differ);
  const double x2 = p[1];
  const double A = a - 0.5;
  return {
      2 * A - 1 - 2 * be.value() + x2 * al.d(0) + x2 * f.d(0),
      A - 1.5 + x2 * be.d(1),
      A + 0.5 + f.d(2),
      2 * al.value() / x2 + al.d(1) + be.d(0) + f.d(1),
      2 * (A + 0.5) - be.value() + al.d(2) + f.d(2) + x2 * f.d(0),
      al.value() + be.d(2) + x2 * f.d(1),
  };
}

}  // namespace ricsol::catalog
