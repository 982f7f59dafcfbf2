#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ricsol/errors.hpp"
#include "ricsol/jet.hpp"

namespace ricsol {

template <class T>
using Vec3 = std::array<T, 3>;
template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

using Point = std::array<double, 3>;
using JetPoint = std::array<Jet, 3>;
using DVec = Vec3<double>;
using DMat = Mat3<double>;
using JVec = Vec3<Jet>;
using JMat = Mat3<Jet>;

enum class DiffMode { analytic, finite_difference };

struct Differ {
  DiffMode mode = DiffMode::analytic;
  double fd_step = 1e-4;
  // Nested stencils: third derivatives use 10h, fourth 100h.
  double step(int order) const { return order <= 2 ? fd_step : order == 3 ? 10 * fd_step : 100 * fd_step; }
};

JetPoint seed(const Point& p, int dim, int order);
JetPoint constant(const Point& p);
Point values(const JetPoint& x);

// Σ_k poly[k] δ^k, substituting jets for the seed variables of a local expansion.
Jet substitute(const Jet& poly, const JetPoint& delta);

template <class V>
struct FieldTraits;

template <>
struct FieldTraits<Jet> {
  static constexpr int n = 1;
  static Jet& at(Jet& v, int) { return v; }
  static const Jet& at(const Jet& v, int) { return v; }
};
template <>
struct FieldTraits<JVec> {
  static constexpr int n = 3;
  static Jet& at(JVec& v, int i) { return v[i]; }
  static const Jet& at(const JVec& v, int i) { return v[i]; }
};
template <>
struct FieldTraits<JMat> {
  static constexpr int n = 9;
  static Jet& at(JMat& v, int i) { return v[i / 3][i % 3]; }
  static const Jet& at(const JMat& v, int i) { return v[i / 3][i % 3]; }
};

namespace detail {

// ∂^α f / α! from central-difference stencils of the value function.
template <class V, class F>
V fd_jet(const F& value_at, const Point& p, int dim, int order, const Differ& differ) {
  using Tr = FieldTraits<V>;
  static const std::array<std::vector<std::pair<int, double>>, 5> stencil = {{
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
  }};
  std::map<std::array<int, 4>, V> cache;
  auto eval = [&](int a, int b, int c, int level) -> const V& {
    const std::array<int, 4> key{a, b, c, level};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double h = differ.step(level);
    Point q{p[0] + a * h, p[1] + b * h, p[2] + c * h};
    return cache.emplace(key, value_at(q)).first->second;
  };
  V out{};
  for (int i = 0; i < Tr::n; ++i) Tr::at(out, i) = Jet::zero(order);
  const int size = Jet::size_for_order(order);
  for (int k = 0; k < size; ++k) {
    const auto e = Jet::exponents(k);
    if (dim < 3 && e[2] > 0) continue;
    if (dim < 2 && e[1] > 0) continue;
    const int deg = e[0] + e[1] + e[2];
    const int level = deg <= 2 ? 2 : deg;
    const double h = differ.step(level);
    double scale = 1.0;
    for (int v = 0; v < 3; ++v)
      for (int m = 1; m <= e[v]; ++m) scale *= m * h;
    std::array<double, FieldTraits<V>::n> acc{};
    for (const auto& [oa, wa] : stencil[e[0]])
      for (const auto& [ob, wb] : stencil[e[1]])
        for (const auto& [oc, wc] : stencil[e[2]]) {
          const V& val = eval(oa, ob, oc, level);
          const double w = wa * wb * wc;
          for (int i = 0; i < Tr::n; ++i) acc[i] += w * Tr::at(val, i).value();
        }
    for (int i = 0; i < Tr::n; ++i) Tr::at(out, i)[k] = acc[i] / scale;
  }
  return out;
}

}  // namespace detail

// Smooth field on a chart. Either evaluable on arbitrary jets (exact derivatives),
// or given through local expansions about points (supplied derivatives).
template <class V>
class Field {
 public:
  using JetFn = std::function<V(const JetPoint&)>;
  using LocalFn = std::function<V(const Point&, int)>;

  Field() = default;
  Field(JetFn fn, int dim = 3) : fn_(std::move(fn)), dim_(dim) {}  // NOLINT

  static Field from_local(LocalFn fn, int dim = 3) {
    Field f;
    f.local_ = std::move(fn);
    f.dim_ = dim;
    return f;
  }

  bool valid() const { return static_cast<bool>(fn_) || static_cast<bool>(local_); }
  int dim() const { return dim_; }

  V operator()(const JetPoint& x) const {
    if (fn_) return fn_(x);
    int order = 0;
    for (int i = 0; i < dim_; ++i) order = std::max(order, x[i].exact() ? 0 : x[i].order());
    const Point x0 = values(x);
    V loc = local_(x0, order);
    if (order == 0) return loc;
    JetPoint delta = x;
    for (int i = 0; i < 3; ++i) delta[i][0] = 0.0;
    V out = loc;
    for (int i = 0; i < FieldTraits<V>::n; ++i)
      FieldTraits<V>::at(out, i) = substitute(FieldTraits<V>::at(loc, i), delta);
    return out;
  }

  V value_jet(const Point& p) const { return fn_ ? fn_(constant(p)) : local_(p, 0); }

  // Taylor expansion about p in the chart coordinates, to the given order.
  V at(const Point& p, int order, const Differ& differ = {}) const {
    if (differ.mode == DiffMode::finite_difference && order > 0)
      return detail::fd_jet<V>([this](const Point& q) { return value_jet(q); }, p, dim_, order, differ);
    if (fn_) return fn_(seed(p, dim_, order));
    return local_(p, order);
  }

 private:
  JetFn fn_;
  LocalFn local_;
  int dim_ = 3;
};

using ScalarField = Field<Jet>;
using VectorField = Field<JVec>;
using MatrixField = Field<JMat>;

struct Box {
  Point lo{0, 0, 0};
  Point hi{0, 0, 0};
  std::array<int, 3> counts{1, 1, 1};
};

struct Chart {
  int dim = 3;
  std::vector<std::string> names;
  Box box;
  // True coordinate domain; the sampling box must sit inside it with a margin.
  std::function<bool(const Point&)> domain;
  double margin = 0.0;

  bool contains(const Point& p) const;
  bool fd_safe(const Point& p, double reach) const;
  void require(const Point& p, double reach) const;
  Point center() const;
  std::vector<Point> grid() const;
  std::vector<Point> random_points(int n, std::uint64_t seed) const;
  // Chart invariants: dim, positive step, grid inflated by 2·fd_step inside the domain.
  void validate(double fd_step) const;
};

struct MetricField {
  Chart chart;
  MatrixField components;
  int orientation = 1;
};

Chart make_chart(int dim, std::vector<std::string> names, Point lo, Point hi, std::array<int, 3> counts,
                 std::function<bool(const Point&)> domain = {});

}  // namespace ricsol
