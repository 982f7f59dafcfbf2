#include "ricsol/jet.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace ricsol {
namespace {

struct Tables {
  std::array<std::array<std::array<int, 5>, 5>, 5> idx{};
  std::array<std::array<int, 3>, Jet::kSize> exps{};
  std::array<int, Jet::kSize> deg{};
  // mult[n] lists (i, j, k) with deg i + deg j <= n and monomial k = i * j.
  std::array<std::vector<std::array<int, 3>>, Jet::kMaxOrder + 1> mult;
  // shift[v][k] = index of monomial k / x_v (or -1), with exponent factor.
  std::array<std::array<int, Jet::kSize>, 3> up{};

  Tables() {
    for (auto& a : idx)
      for (auto& b : a) b.fill(-1);
    int n = 0;
    for (int d = 0; d <= Jet::kMaxOrder; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          idx[a][b][c] = n;
          exps[n] = {a, b, c};
          deg[n] = d;
          ++n;
        }
    for (int order = 0; order <= Jet::kMaxOrder; ++order)
      for (int i = 0; i < Jet::kSize; ++i)
        for (int j = 0; j < Jet::kSize; ++j) {
          if (deg[i] + deg[j] > order) continue;
          const auto& e = exps[i];
          const auto& f = exps[j];
          mult[order].push_back({i, j, idx[e[0] + f[0]][e[1] + f[1]][e[2] + f[2]]});
        }
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < Jet::kSize; ++k) {
        auto e = exps[k];
        e[v] += 1;
        up[v][k] = (deg[k] + 1 <= Jet::kMaxOrder) ? idx[e[0]][e[1]][e[2]] : -1;
      }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

constexpr std::array<int, 6> kSizes = {1, 4, 10, 20, 35, 35};

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

int Jet::size_for_order(int order) {
  if (order >= kExact) return 1;
  return kSizes[std::clamp(order, 0, kMaxOrder)];
}

int Jet::index(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0 || a + b + c > kMaxOrder) return -1;
  return tables().idx[a][b][c];
}

std::array<int, 3> Jet::exponents(int index) { return tables().exps[index]; }
int Jet::degree(int index) { return tables().deg[index]; }

Jet Jet::variable(double value, int var, int order) {
  Jet r = zero(order);
  r.c_[0] = value;
  if (order >= 1) r.c_[1 + var] = 1.0;
  return r;
}

Jet Jet::zero(int order) {
  Jet r;
  r.order_ = std::min(order, kMaxOrder);
  return r;
}

void Jet::set_order(int order) {
  const int n = size_for_order(order);
  for (int i = n; i < kSize; ++i) c_[i] = 0.0;
  order_ = order >= kExact ? kExact : std::min(order, kMaxOrder);
}

double Jet::partial(int a, int b, int c) const {
  const int i = index(a, b, c);
  if (i < 0) return std::numeric_limits<double>::quiet_NaN();
  if (!exact() && a + b + c > order_) return std::numeric_limits<double>::quiet_NaN();
  return c_[i] * factorial(a) * factorial(b) * factorial(c);
}

double Jet::d(int var) const {
  if (exact()) return 0.0;
  if (order_ < 1) return std::numeric_limits<double>::quiet_NaN();
  return c_[1 + var];
}

double Jet::d2(int v1, int v2) const {
  std::array<int, 3> e{0, 0, 0};
  e[v1] += 1;
  e[v2] += 1;
  return partial(e[0], e[1], e[2]);
}

Jet Jet::derivative(int var) const {
  if (exact()) return Jet(0.0);
  if (order_ < 1) return Jet(std::numeric_limits<double>::quiet_NaN());
  Jet r = zero(order_ - 1);
  const auto& t = tables();
  const int n = size_for_order(order_ - 1);
  for (int k = 0; k < n; ++k) {
    const int src = t.up[var][k];
    r.c_[k] = (t.exps[k][var] + 1) * c_[src];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  Jet r = *this;
  if (order < order_) r.set_order(order);
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  const int n = active_size();
  for (int i = 0; i < n; ++i) c_[i] += o.c_[i];
  for (int i = n; i < kSize; ++i) c_[i] = 0.0;
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  const int n = active_size();
  for (int i = 0; i < n; ++i) c_[i] -= o.c_[i];
  for (int i = n; i < kSize; ++i) c_[i] = 0.0;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.exact()) {
    Jet r = b;
    for (double& v : r.c_) v *= a.c_[0];
    return r;
  }
  if (b.exact()) {
    Jet r = a;
    for (double& v : r.c_) v *= b.c_[0];
    return r;
  }
  Jet r = Jet::zero(std::min(a.order_, b.order_));
  for (const auto& [i, j, k] : tables().mult[r.order_]) r.c_[k] += a.c_[i] * b.c_[j];
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet Jet::compose(std::span<const double> taylor) const {
  if (exact() || order_ == 0) {
    Jet r(taylor[0]);
    r.order_ = order_;
    return r;
  }
  Jet delta = *this;
  delta.c_[0] = 0.0;
  const int n = std::min<int>(order_, static_cast<int>(taylor.size()) - 1);
  Jet r = Jet::zero(order_);
  r.c_[0] = taylor[n];
  for (int k = n - 1; k >= 0; --k) {
    r = r * delta;
    r.c_[0] += taylor[k];
  }
  return r;
}

namespace {

Jet reciprocal(const Jet& x) {
  const double x0 = x.value();
  std::array<double, Jet::kMaxOrder + 1> t{};
  double p = 1.0 / x0;
  for (int k = 0; k <= Jet::kMaxOrder; ++k) {
    t[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
    p /= x0;
  }
  return x.compose(t);
}

}  // namespace

Jet operator/(const Jet& a, const Jet& b) {
  if (b.exact()) return a * Jet(1.0 / b.value());
  return a * reciprocal(b);
}

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet exp(const Jet& x) {
  std::array<double, Jet::kMaxOrder + 1> t{};
  const double e = std::exp(x.value());
  for (int k = 0; k <= Jet::kMaxOrder; ++k) t[k] = e / factorial(k);
  return x.compose(t);
}

Jet log(const Jet& x) {
  const double x0 = x.value();
  std::array<double, Jet::kMaxOrder + 1> t{};
  t[0] = std::log(x0);
  double p = 1.0;
  for (int k = 1; k <= Jet::kMaxOrder; ++k) {
    p /= x0;
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / k;
  }
  return x.compose(t);
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, 4> cyc = {s, c, -s, -c};
  std::array<double, Jet::kMaxOrder + 1> t{};
  for (int k = 0; k <= Jet::kMaxOrder; ++k) t[k] = cyc[k % 4] / factorial(k);
  return x.compose(t);
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, 4> cyc = {c, -s, -c, s};
  std::array<double, Jet::kMaxOrder + 1> t{};
  for (int k = 0; k <= Jet::kMaxOrder; ++k) t[k] = cyc[k % 4] / factorial(k);
  return x.compose(t);
}

Jet tan(const Jet& x) { return sin(x) / cos(x); }

Jet sinh(const Jet& x) {
  const double s = std::sinh(x.value());
  const double c = std::cosh(x.value());
  std::array<double, Jet::kMaxOrder + 1> t{};
  for (int k = 0; k <= Jet::kMaxOrder; ++k) t[k] = (k % 2 == 0 ? s : c) / factorial(k);
  return x.compose(t);
}

Jet cosh(const Jet& x) {
  const double s = std::sinh(x.value());
  const double c = std::cosh(x.value());
  std::array<double, Jet::kMaxOrder + 1> t{};
  for (int k = 0; k <= Jet::kMaxOrder; ++k) t[k] = (k % 2 == 0 ? c : s) / factorial(k);
  return x.compose(t);
}

Jet tanh(const Jet& x) { return sinh(x) / cosh(x); }

Jet atan(const Jet& x) {
  const double x0 = x.value();
  const double a0 = 1.0 + x0 * x0;
  const double a1 = 2.0 * x0;
  std::array<double, Jet::kMaxOrder> q{};
  q[0] = 1.0 / a0;
  for (int m = 1; m < Jet::kMaxOrder; ++m)
    q[m] = -(a1 * q[m - 1] + (m >= 2 ? q[m - 2] : 0.0)) / a0;
  std::array<double, Jet::kMaxOrder + 1> t{};
  t[0] = std::atan(x0);
  for (int k = 1; k <= Jet::kMaxOrder; ++k) t[k] = q[k - 1] / k;
  return x.compose(t);
}

Jet pow(const Jet& x, double r) {
  if (r == std::round(r) && std::abs(r) <= 16.0) return ipow(x, static_cast<int>(r));
  const double x0 = x.value();
  std::array<double, Jet::kMaxOrder + 1> t{};
  double binom = 1.0;
  for (int k = 0; k <= Jet::kMaxOrder; ++k) {
    t[k] = binom * std::pow(x0, r - k);
    binom *= (r - k) / (k + 1);
  }
  return x.compose(t);
}

Jet pow(const Jet& x, const Jet& y) {
  if (y.exact()) return pow(x, y.value());
  return exp(y * log(x));
}

Jet ipow(const Jet& x, int n) {
  if (n < 0) return Jet(1.0) / ipow(x, -n);
  Jet r(1.0);
  Jet base = x;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return r;
}

Jet sqrt(const Jet& x) { return pow(x, 0.5); }

Jet abs(const Jet& x) { return x.value() < 0.0 ? -x : x; }

}  // namespace ricsol
