#include "ricsol/warped.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ricsol/geometry.hpp"

namespace ricsol::warped {

namespace {

constexpr double kTiny = 1e-12;

State add(const State& s, const State& k, double h) {
  return {s.lambda + h * k.lambda, s.d1 + h * k.d1, s.d2 + h * k.d2};
}

State rhs(const State& s, double K, double A) { return {s.d1, s.d2, third_derivative(s, K, A)}; }

State rk4(const State& s, double h, double K, double A) {
  const State k1 = rhs(s, K, A);
  const State k2 = rhs(add(s, k1, h / 2), K, A);
  const State k3 = rhs(add(s, k2, h / 2), K, A);
  const State k4 = rhs(add(s, k3, h), K, A);
  return {s.lambda + h / 6 * (k1.lambda + 2 * k2.lambda + 2 * k3.lambda + k4.lambda),
          s.d1 + h / 6 * (k1.d1 + 2 * k2.d1 + 2 * k3.d1 + k4.d1),
          s.d2 + h / 6 * (k1.d2 + 2 * k2.d2 + 2 * k3.d2 + k4.d2)};
}

double f_of(const State& s, double K, double A) {
  const double l = s.lambda;
  return (s.d2 + A * l + K * l * l * l) / s.d1 - 3.0 * s.d1 / l;
}

// Derivative of a sampled sequence, second order everywhere.
std::vector<double> differentiate(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2 * h);
  d[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h);
  d[n - 1] = (3 * y[n - 1] - 4 * y[n - 2] + y[n - 3]) / (2 * h);
  return d;
}

}  // namespace

Jet jet_of(const Function1D& fn, double t, int order, const Differ& differ) {
  if (differ.mode == DiffMode::finite_difference && order > 0)
    return detail::fd_jet<Jet>([&](const Point& q) { return fn(Jet(q[0])); }, Point{t, 0, 0}, 1, order, differ);
  return fn(Jet::variable(t, 0, order));
}

WpResiduals wp_residuals(const WarpedProfile& p, double t, const Differ& differ) {
  const Jet ln = log(jet_of(p.lambda, t, 2, differ));
  const Jet f = jet_of(p.f, t, 1, differ);
  const double l1 = ln.partial(1, 0, 0), l2 = ln.partial(2, 0, 0);
  const double lam = std::exp(ln.value());
  return {lam * lam * p.K + l2 - 2 * l1 * l1 - f.value() * l1 + p.A, f.partial(1, 0, 0) + 2 * l2 - 2 * l1 * l1 + p.A};
}

double f_from_lambda(const WarpedProfile& p, double t, const Differ& differ) {
  const Jet l = jet_of(p.lambda, t, 2, differ);
  const State s{l.value(), l.partial(1, 0, 0), l.partial(2, 0, 0)};
  if (std::abs(s.d1) < kTiny) throw SingularError("f_from_lambda: lambda' vanishes");
  return f_of(s, p.K, p.A);
}

double third_order_residual(const WarpedProfile& p, double t, const Differ& differ) {
  const Jet j = jet_of(p.lambda, t, 3, differ);
  const double l = j.value(), d1 = j.partial(1, 0, 0), d2 = j.partial(2, 0, 0), d3 = j.partial(3, 0, 0);
  return d3 * d1 * l * l - l * d2 * (d1 * d1 + l * d2) + p.A * l * l * (2 * d1 * d1 - l * d2) +
         p.K * l * l * l * l * (3 * d1 * d1 - l * d2) - d1 * d1 * d1 * d1;
}

double constant_curvature_defect(const WarpedProfile& p, double t, const Differ& differ) {
  const Jet l = jet_of(p.lambda, t, 2, differ);
  return std::abs(log(l).partial(2, 0, 0) - l.value() * l.value() * p.K);
}

double third_derivative(const State& s, double K, double A) {
  const double l = s.lambda, d1 = s.d1, d2 = s.d2;
  const double num = l * d2 * (d1 * d1 + l * d2) - A * l * l * (2 * d1 * d1 - l * d2) -
                     K * l * l * l * l * (3 * d1 * d1 - l * d2) + d1 * d1 * d1 * d1;
  return num / (d1 * l * l);
}

Trajectory integrate(const State& initial, double K, double A, double t0, double t1, double step) {
  Trajectory tr;
  tr.K = K;
  tr.A = A;
  tr.step = step;
  auto bad = [](const State& s) -> std::string {
    if (!(s.lambda > 0.0)) return "lambda <= 0";
    if (std::abs(s.d1) < kTiny) return "lambda' = 0";
    if (!std::isfinite(s.lambda) || !std::isfinite(s.d1) || !std::isfinite(s.d2)) return "non-finite state";
    return {};
  };
  State s = initial;
  if (auto why = bad(s); !why.empty()) {
    tr.truncated = true;
    tr.reason = why + " at t = " + std::to_string(t0);
    return tr;
  }
  const int n = static_cast<int>(std::llround((t1 - t0) / step));
  tr.t.push_back(t0);
  tr.state.push_back(s);
  for (int i = 1; i <= n; ++i) {
    const State next = rk4(s, step, K, A);
    if (auto why = bad(next); !why.empty()) {
      tr.truncated = true;
      tr.reason = why + " at t = " + std::to_string(t0 + i * step);
      break;
    }
    s = next;
    tr.t.push_back(t0 + i * step);
    tr.state.push_back(s);
  }

  // Residuals from sampled derivatives, independent of the integrator's right side.
  std::vector<double> d2(tr.state.size());
  for (std::size_t i = 0; i < d2.size(); ++i) d2[i] = tr.state[i].d2;
  const auto d3 = differentiate(d2, step);
  for (const auto& st : tr.state) tr.f.push_back(f_of(st, K, A));
  const auto df = differentiate(tr.f, step);
  for (std::size_t i = 0; i < tr.state.size(); ++i) {
    const State& st = tr.state[i];
    const double l = st.lambda, a = st.d1, b = st.d2;
    tr.third.push_back(d3[i] * a * l * l - l * b * (a * a + l * b) + A * l * l * (2 * a * a - l * b) +
                       K * l * l * l * l * (3 * a * a - l * b) - a * a * a * a);
    const double l1 = a / l, l2 = b / l - l1 * l1;
    tr.r1.push_back(l * l * K + l2 - 2 * l1 * l1 - tr.f[i] * l1 + A);
    tr.r2.push_back(df[i] + 2 * l2 - 2 * l1 * l1 + A);
  }
  return tr;
}

void write_csv(const Trajectory& tr, std::ostream& out) {
  out << "t,lambda,dlambda,ddlambda,f,third_order,r1,r2\n";
  out.precision(17);
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    out << tr.t[i] << ',' << tr.state[i].lambda << ',' << tr.state[i].d1 << ',' << tr.state[i].d2 << ','
        << tr.f[i] << ',' << tr.third[i] << ',' << tr.r1[i] << ',' << tr.r2[i] << '\n';
}

TrajectoryMetric trajectory_metric(const Trajectory& tr, std::array<double, 2> half) {
  if (tr.t.size() < 2) throw DomainError("trajectory too short for a metric");
  const double t_lo = tr.t.front(), t_hi = tr.t.back();
  // Local λ jet in the t seed: advance from the nearest node by one RK4 sub-step.
  auto local = [tr](double t, int order) {
    const double u = std::clamp((t - tr.t.front()) / tr.step, 0.0, static_cast<double>(tr.t.size() - 1));
    const std::size_t i = static_cast<std::size_t>(std::llround(u));
    const State s = rk4(tr.state[i], t - tr.t[i], tr.K, tr.A);
    const double d3 = third_derivative(s, tr.K, tr.A);
    const Jet d = Jet::variable(0.0, 2, std::max(order, 1));
    Jet lam = s.lambda + s.d1 * d + (0.5 * s.d2) * d * d + (d3 / 6.0) * d * d * d;
    if (order < lam.order()) lam = lam.truncated(order);
    return std::pair<Jet, State>{lam, s};
  };
  const double K = tr.K;
  auto conformal = [K](const Point& p, int order) {
    const Jet x = Jet::variable(p[0], 0, order), y = Jet::variable(p[1], 1, order);
    const Jet q = 1.0 + K * (x * x + y * y);
    return K == 0.0 ? Jet(1.0) : 4.0 / (q * q);
  };
  MetricField g;
  g.chart = make_chart(3, {"x", "y", "t"}, {-half[0], -half[1], t_lo}, {half[0], half[1], t_hi}, {9, 9, 9});
  g.components = MatrixField::from_local([local, conformal](const Point& p, int order) {
    const Jet lam = local(p[2], order).first;
    const Jet w = conformal(p, order) / (lam * lam);
    JMat m = geo::zero_mat();
    m[0][0] = w;
    m[1][1] = w;
    m[2][2] = Jet(1.0);
    return m;
  });
  VectorField E = VectorField::from_local([local, K, A = tr.A](const Point& p, int order) {
    // f = (λ″ + Aλ + Kλ³)/λ′ − 3λ′/λ as a jet in t, from the λ jet one order higher.
    auto [lam, s] = local(p[2], std::min(order + 2, 3));
    const Jet l1 = lam.derivative(2), l2 = l1.derivative(2);
    Jet f = (l2 + A * lam + K * lam * lam * lam) / l1 - 3.0 * l1 / lam;
    if (order < f.order()) f = f.truncated(order);
    return JVec{Jet(0.0), Jet(0.0), f};
  });
  return {g, E};
}

double elliptic_residual(const Function1D& F, double K, double A, double lambda, const Differ& differ) {
  const Jet j = jet_of(F, lambda, 2, differ);
  const double f = j.value(), f1 = j.partial(1, 0, 0), f2 = j.partial(2, 0, 0), l = lambda;
  return 2 * l * l * f * f2 - l * f1 * (2 * f + l * f1) + A * l * l * (4 * f - l * f1) +
         K * l * l * l * l * (6 * f - l * f1) - 4 * f * f;
}

}  // namespace ricsol::warped
