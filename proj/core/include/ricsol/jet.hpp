#pragma once

#include <array>
#include <cmath>
#include <span>

namespace ricsol {

// Truncated Taylor polynomial in three variables, graded monomial order.
class Jet {
 public:
  static constexpr int kVars = 3;
  static constexpr int kMaxOrder = 4;
  static constexpr int kSize = 35;
  static constexpr int kExact = 1000;

  Jet() = default;
  Jet(double value) { c_[0] = value; }  // NOLINT(google-explicit-constructor)

  static Jet variable(double value, int var, int order);
  static Jet zero(int order);

  static int size_for_order(int order);
  static int index(int a, int b, int c);
  static std::array<int, 3> exponents(int index);
  static int degree(int index);

  int order() const { return order_; }
  bool exact() const { return order_ >= kExact; }
  int active_size() const { return exact() ? 1 : size_for_order(order_); }
  double value() const { return c_[0]; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  void set_order(int order);

  // Partial derivative ∂^a_x ∂^b_y ∂^c_z at the expansion point.
  double partial(int a, int b, int c) const;
  double d(int var) const;
  double d2(int v1, int v2) const;

  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  // f(x) for f given by its Taylor coefficients f^(k)(x0)/k! about x0 = value().
  Jet compose(std::span<const double> taylor) const;

 private:
  std::array<double, kSize> c_{};
  int order_ = kExact;
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);
Jet tanh(const Jet& x);
Jet atan(const Jet& x);
Jet sqrt(const Jet& x);
Jet abs(const Jet& x);
Jet pow(const Jet& x, double r);
Jet pow(const Jet& x, const Jet& y);
Jet ipow(const Jet& x, int n);

inline double ipow(double x, int n) {
  double r = 1.0;
  const bool inv = n < 0;
  for (int k = 0; k < (inv ? -n : n); ++k) r *= x;
  return inv ? 1.0 / r : r;
}

}  // namespace ricsol
