#include "ricsol/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace ricsol {

JVec operator+(const JVec& a, const JVec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
JVec operator-(const JVec& a, const JVec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
JVec operator*(const Jet& s, const JVec& a) { return {s * a[0], s * a[1], s * a[2]}; }

JMat operator+(const JMat& a, const JMat& b) {
  JMat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}

JMat operator-(const JMat& a, const JMat& b) {
  JMat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

JMat operator*(const Jet& s, const JMat& a) {
  JMat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = s * a[i][j];
  return r;
}

}  // namespace ricsol

namespace ricsol::geo {

JVec zero_vec(int order) {
  JVec v;
  for (auto& x : v) x = order >= Jet::kExact ? Jet(0.0) : Jet::zero(order);
  return v;
}

JMat zero_mat(int order) {
  JMat m;
  for (auto& row : m)
    for (auto& x : row) x = order >= Jet::kExact ? Jet(0.0) : Jet::zero(order);
  return m;
}

DMat values(const JMat& m) {
  DMat r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j].value();
  return r;
}

JMat truncated(const JMat& m, int order) {
  JMat r = m;
  for (auto& row : r)
    for (auto& x : row) x = x.truncated(order);
  return r;
}

JVec truncated(const JVec& v, int order) { return {v[0].truncated(order), v[1].truncated(order), v[2].truncated(order)}; }

Jet det(const JMat& g, int dim) {
  if (dim == 2) return g[0][0] * g[1][1] - g[0][1] * g[1][0];
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

JMat inverse(const JMat& g, int dim) {
  JMat r = zero_mat();
  const Jet inv_det = Jet(1.0) / det(g, dim);
  if (dim == 2) {
    r[0][0] = g[1][1] * inv_det;
    r[1][1] = g[0][0] * inv_det;
    r[0][1] = -(g[0][1] * inv_det);
    r[1][0] = -(g[1][0] * inv_det);
    return r;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, d = (i + 2) % 3;
      r[i][j] = (g[a][c] * g[b][d] - g[a][d] * g[b][c]) * inv_det;
    }
  return r;
}

double condition_number(const DMat& g, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = 0.5 * (g[i][j] + g[j][i]);
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(dim - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

void check_metric(const JMat& g, int dim) {
  const double cond = condition_number(values(g), dim);
  if (!(cond <= kConditionCap)) throw SingularError("metric matrix singular or condition number above 1e10");
}

Gamma christoffel(const JMat& g, const JMat& ginv, int dim) {
  // dg[l][i][j] = ∂_l g_ij
  std::array<JMat, 3> dg;
  for (int l = 0; l < dim; ++l)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) dg[l][i][j] = g[i][j].derivative(l);
  const int order = g[0][0].exact() ? Jet::kExact : std::max(0, g[0][0].order() - 1);
  Gamma gam;
  for (auto& m : gam) m = zero_mat(order);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      std::array<Jet, 3> low;
      for (int l = 0; l < dim; ++l) low[l] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
      for (int k = 0; k < dim; ++k) {
        Jet s(0.0);
        for (int l = 0; l < dim; ++l) s += ginv[k][l] * low[l];
        gam[k][i][j] = s;
        gam[k][j][i] = s;
      }
    }
  return gam;
}

JMat ricci(const JMat& g, int dim) {
  const JMat ginv = inverse(g, dim);
  const Gamma gam = christoffel(g, ginv, dim);
  JMat r = zero_mat();
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      Jet s(0.0);
      for (int k = 0; k < dim; ++k) {
        s += gam[k][i][j].derivative(k) - gam[k][k][j].derivative(i);
        for (int l = 0; l < dim; ++l) s += gam[k][k][l] * gam[l][i][j] - gam[k][i][l] * gam[l][k][j];
      }
      r[i][j] = s;
      r[j][i] = s;
    }
  return r;
}

Riemann riemann(const JMat& g, int dim) {
  const JMat ginv = inverse(g, dim);
  const Gamma gam = christoffel(g, ginv, dim);
  Riemann r{};
  for (int rho = 0; rho < dim; ++rho)
    for (int sig = 0; sig < dim; ++sig)
      for (int mu = 0; mu < dim; ++mu)
        for (int nu = 0; nu < dim; ++nu) {
          double s = gam[rho][nu][sig].d(mu) - gam[rho][mu][sig].d(nu);
          for (int l = 0; l < dim; ++l)
            s += gam[rho][mu][l].value() * gam[l][nu][sig].value() - gam[rho][nu][l].value() * gam[l][mu][sig].value();
          r[rho][sig][mu][nu] = s;
        }
  return r;
}

double riemann_norm2(const Riemann& r, const DMat& g, int dim) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = g[i][j];
  Eigen::Matrix3d mi = Eigen::Matrix3d::Identity();
  mi.topLeftCorner(dim, dim) = m.topLeftCorner(dim, dim).inverse();
  // Lower the first index, then contract with inverse metrics on all slots.
  double low[3][3][3][3] = {};
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          double s = 0.0;
          for (int e = 0; e < dim; ++e) s += m(a, e) * r[e][b][c][d];
          low[a][b][c][d] = s;
        }
  double total = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d)
          for (int p = 0; p < dim; ++p)
            for (int q = 0; q < dim; ++q)
              for (int s = 0; s < dim; ++s)
                for (int t = 0; t < dim; ++t)
                  total += low[a][b][c][d] * low[p][q][s][t] * mi(a, p) * mi(b, q) * mi(c, s) * mi(d, t);
  return total;
}

JVec differential(const Jet& f, int dim) {
  JVec r = zero_vec();
  for (int i = 0; i < dim; ++i) r[i] = f.derivative(i);
  return r;
}

JMat d1(const JVec& w, int dim) {
  JMat r = zero_mat();
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      r[i][j] = w[j].derivative(i) - w[i].derivative(j);
      r[j][i] = -r[i][j];
    }
  return r;
}

Jet d2(const JMat& w) { return w[1][2].derivative(0) + w[2][0].derivative(1) + w[0][1].derivative(2); }

JMat lie_metric(const JMat& g, const JVec& e, int dim) {
  JMat r = zero_mat();
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      Jet s(0.0);
      for (int k = 0; k < dim; ++k)
        s += e[k] * g[i][j].derivative(k) + g[k][j] * e[k].derivative(i) + g[i][k] * e[k].derivative(j);
      r[i][j] = s;
      r[j][i] = s;
    }
  return r;
}

JMat hessian(const Jet& f, const Gamma& gam, int dim) {
  JMat r = zero_mat();
  const JVec df = differential(f, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      Jet s = df[j].derivative(i);
      for (int k = 0; k < dim; ++k) s -= gam[k][i][j] * df[k];
      r[i][j] = s;
      r[j][i] = s;
    }
  return r;
}

Jet laplacian(const Jet& f, const Gamma& gam, const JMat& ginv, int dim) {
  return trace(hessian(f, gam, dim), ginv, dim);
}

Jet codiff1(const JVec& w, const Gamma& gam, const JMat& ginv, int dim) {
  Jet s(0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Jet nab = w[j].derivative(i);
      for (int k = 0; k < dim; ++k) nab -= gam[k][i][j] * w[k];
      s -= ginv[i][j] * nab;
    }
  return s;
}

JVec codiff2(const JMat& w, const Gamma& gam, const JMat& ginv, int dim) {
  JVec r = zero_vec();
  for (int j = 0; j < dim; ++j) {
    Jet s(0.0);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) {
        Jet nab = w[k][j].derivative(i);
        for (int l = 0; l < dim; ++l) nab -= gam[l][i][k] * w[l][j] + gam[l][i][j] * w[k][l];
        s -= ginv[i][k] * nab;
      }
    r[j] = s;
  }
  return r;
}

JVec raise(const JMat& ginv, const JVec& w, int dim) {
  JVec r = zero_vec();
  for (int i = 0; i < dim; ++i) {
    Jet s(0.0);
    for (int j = 0; j < dim; ++j) s += ginv[i][j] * w[j];
    r[i] = s;
  }
  return r;
}

JVec lower(const JMat& g, const JVec& x, int dim) { return raise(g, x, dim); }

Jet pair(const JVec& w, const JVec& x, int dim) {
  Jet s(0.0);
  for (int i = 0; i < dim; ++i) s += w[i] * x[i];
  return s;
}

Jet dot(const JMat& g, const JVec& a, const JVec& b, int dim) { return pair(lower(g, a, dim), b, dim); }

Jet norm2(const JMat& t, const JMat& ginv, int dim) {
  // T^ij = g^ik T_kl g^lj, then Σ T^ij T_ij
  JMat up = zero_mat();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Jet s(0.0);
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) s += ginv[i][k] * t[k][l] * ginv[l][j];
      up[i][j] = s;
    }
  Jet s(0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += up[i][j] * t[i][j];
  return s;
}

JVec contract(const JMat& s, const JVec& x, int dim) {
  JVec r = zero_vec();
  for (int j = 0; j < dim; ++j) {
    Jet acc(0.0);
    for (int i = 0; i < dim; ++i) acc += x[i] * s[i][j];
    r[j] = acc;
  }
  return r;
}

JMat outer(const JVec& a, const JVec& b) {
  JMat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i] * b[j];
  return r;
}

JMat sym(const JVec& a, const JVec& b) {
  JMat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = 0.5 * (a[i] * b[j] + b[i] * a[j]);
  return r;
}

JMat wedge(const JVec& a, const JVec& b) {
  JMat r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i] * b[j] - b[i] * a[j];
  return r;
}

Jet trace(const JMat& s, const JMat& ginv, int dim) {
  Jet acc(0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) acc += ginv[i][j] * s[i][j];
  return acc;
}

}  // namespace ricsol::geo
