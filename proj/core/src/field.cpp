#include "ricsol/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ricsol {

JetPoint seed(const Point& p, int dim, int order) {
  JetPoint x;
  for (int i = 0; i < 3; ++i) x[i] = i < dim ? Jet::variable(p[i], i, order) : Jet(p[i]);
  return x;
}

JetPoint constant(const Point& p) { return {Jet(p[0]), Jet(p[1]), Jet(p[2])}; }

Point values(const JetPoint& x) { return {x[0].value(), x[1].value(), x[2].value()}; }

Jet substitute(const Jet& poly, const JetPoint& delta) {
  int order = 0;
  for (const auto& d : delta)
    if (!d.exact()) order = std::max(order, d.order());
  order = std::min(order, poly.exact() ? 0 : poly.order());
  std::array<std::array<Jet, Jet::kMaxOrder + 1>, 3> powers;
  for (int v = 0; v < 3; ++v) {
    powers[v][0] = Jet(1.0);
    for (int m = 1; m <= order; ++m) powers[v][m] = powers[v][m - 1] * delta[v];
  }
  Jet out(poly.value());
  const int n = Jet::size_for_order(order);
  for (int k = 1; k < n; ++k) {
    if (poly[k] == 0.0) continue;
    const auto e = Jet::exponents(k);
    out += poly[k] * (powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]]);
  }
  // Result order follows the substituted jets, capped by the local expansion order.
  int res = Jet::kExact;
  for (const auto& d : delta)
    if (!d.exact()) res = std::min(res, d.order());
  if (!poly.exact()) res = std::min(res, poly.order());
  if (res < Jet::kExact && (out.exact() || res < out.order())) out.set_order(res);
  return out;
}

bool Chart::contains(const Point& p) const {
  for (int i = 0; i < dim; ++i)
    if (!std::isfinite(p[i])) return false;
  return domain ? domain(p) : true;
}

bool Chart::fd_safe(const Point& p, double reach) const {
  if (!contains(p)) return false;
  if (reach <= 0.0) return true;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Point q = p;
    for (int i = 0; i < dim; ++i) q[i] += ((mask >> i) & 1) ? reach : -reach;
    if (!contains(q)) return false;
  }
  return true;
}

void Chart::require(const Point& p, double reach) const {
  if (!fd_safe(p, reach))
    throw DomainError("point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " +
                      std::to_string(p[2]) + ") outside the fd-safe chart domain");
}

Point Chart::center() const {
  Point c{0, 0, 0};
  for (int i = 0; i < dim; ++i) c[i] = 0.5 * (box.lo[i] + box.hi[i]);
  return c;
}

std::vector<Point> Chart::grid() const {
  std::vector<Point> pts;
  std::array<int, 3> n{1, 1, 1};
  for (int i = 0; i < dim; ++i) n[i] = std::max(1, box.counts[i]);
  auto coord = [&](int axis, int k) {
    if (n[axis] == 1) return 0.5 * (box.lo[axis] + box.hi[axis]);
    return box.lo[axis] + (box.hi[axis] - box.lo[axis]) * k / (n[axis] - 1);
  };
  for (int a = 0; a < n[0]; ++a)
    for (int b = 0; b < n[1]; ++b)
      for (int c = 0; c < n[2]; ++c) {
        Point p{coord(0, a), dim > 1 ? coord(1, b) : 0.0, dim > 2 ? coord(2, c) : 0.0};
        pts.push_back(p);
      }
  return pts;
}

std::vector<Point> Chart::random_points(int n, std::uint64_t seed_value) const {
  std::mt19937_64 rng(seed_value);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) {
    Point p{0, 0, 0};
    for (int i = 0; i < dim; ++i) p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    pts.push_back(p);
  }
  return pts;
}

void Chart::validate(double fd_step) const {
  if (dim != 2 && dim != 3) throw DomainError("chart dimension must be 2 or 3");
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be positive");
  for (const auto& p : grid())
    if (!fd_safe(p, 2.0 * fd_step)) throw DomainError("sample grid leaves the chart domain");
}

Chart make_chart(int dim, std::vector<std::string> names, Point lo, Point hi, std::array<int, 3> counts,
                 std::function<bool(const Point&)> domain) {
  Chart c;
  c.dim = dim;
  c.names = std::move(names);
  c.box = Box{lo, hi, counts};
  c.domain = std::move(domain);
  return c;
}

}  // namespace ricsol
