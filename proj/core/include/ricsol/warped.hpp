#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ricsol/field.hpp"

// Warped products g = h/λ(t)² + dt² over a surface of constant curvature K.
namespace ricsol::warped {

using Function1D = std::function<Jet(const Jet&)>;

struct WarpedProfile {
  Function1D lambda;
  Function1D f;
  double K = 0.0;
  double A = 0.0;
  double t_lo = 1.0;
  double t_hi = 2.0;
};

// Taylor jet of a univariate function about t in seed variable 0.
Jet jet_of(const Function1D& fn, double t, int order, const Differ& differ = {});

struct WpResiduals {
  double r1 = 0.0;
  double r2 = 0.0;
};

WpResiduals wp_residuals(const WarpedProfile& p, double t, const Differ& differ = {});
// Throws SingularError when λ′ vanishes.
double f_from_lambda(const WarpedProfile& p, double t, const Differ& differ = {});
double third_order_residual(const WarpedProfile& p, double t, const Differ& differ = {});
// |(ln λ)″ − λ²K|
double constant_curvature_defect(const WarpedProfile& p, double t, const Differ& differ = {});

struct State {
  double lambda = 0.0, d1 = 0.0, d2 = 0.0;
};

// λ‴ from the third-order equation.
double third_derivative(const State& s, double K, double A);

struct Trajectory {
  double K = 0.0, A = 0.0, step = 1e-3;
  std::vector<double> t;
  std::vector<State> state;
  std::vector<double> f, third, r1, r2;
  bool truncated = false;
  std::string reason;
};

// Classical RK4 at a fixed step; stops when λ ≤ 0 or λ′ = 0.
Trajectory integrate(const State& initial, double K, double A, double t0, double t1, double step = 1e-3);

void write_csv(const Trajectory& tr, std::ostream& out);

// h = 4(dx² + dy²)/(1 + K r²)², g = h/λ² + dt², E = f∂_t with λ following the trajectory.
struct TrajectoryMetric {
  MetricField g;
  VectorField E;
};

TrajectoryMetric trajectory_metric(const Trajectory& tr, std::array<double, 2> xy_half_width = {0.5, 0.5});

// 2λ²FF″ − λF′(2F + λF′) + Aλ²(4F − λF′) + Kλ⁴(6F − λF′) − 4F², where (λ′)² = 2F(λ).
double elliptic_residual(const Function1D& F, double K, double A, double lambda, const Differ& differ = {});

}  // namespace ricsol::warped
