#include "ricsol/fitter.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ricsol/errors.hpp"
#include "ricsol/geometry.hpp"
#include "ricsol/tensor_lab.hpp"

namespace ricsol::fitter {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Lower Cholesky factor of the dim×dim block.
Eigen::MatrixXd cholesky(const DMat& g, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = g[i][j];
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw SingularError("metric not positive definite");
  return llt.matrixL();
}

// Upper-triangle components of L⁻¹ T L⁻ᵀ, off-diagonal scaled by √2.
void frame_components(const Eigen::MatrixXd& L, const DMat& t, int dim, double* out) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = t[i][j];
  const auto tri = L.triangularView<Eigen::Lower>();
  const Eigen::MatrixXd a = tri.solve(m);
  const Eigen::MatrixXd f = tri.solve(a.transpose()).transpose();
  int r = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) out[r++] = i == j ? f(i, j) : std::sqrt(2.0) * f(i, j);
}

int numeric_rank(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  svd.setThreshold(kNullThreshold);
  return static_cast<int>(svd.rank());
}

// Cutoff 1e-10 against the larger of σ_max and the 2g column, so a numerically zero block stays rank 0.
void set_cutoff(Eigen::JacobiSVD<Eigen::MatrixXd>& svd, const LinearSystem& system) {
  const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  const Eigen::Map<const Eigen::VectorXd> gcol(system.metric_column.data(), system.rows);
  const double ref = std::max(smax, gcol.norm());
  if (smax > 0.0) svd.setThreshold(std::min(1.0, kNullThreshold * ref / smax));
}

std::string power(const std::string& name, int k) { return k == 1 ? name : name + "^" + std::to_string(k); }

}  // namespace

std::vector<Labelled<ScalarField>> monomials(int degree, const std::vector<std::string>& names, int dim) {
  if (degree < 0) throw DomainError("negative monomial degree");
  std::vector<Labelled<ScalarField>> out;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) {
        const int c = d - a - b;
        if ((dim < 2 && b > 0) || (dim < 3 && c > 0)) continue;
        std::string label;
        const int e[3] = {a, b, c};
        for (int v = 0; v < 3; ++v)
          if (e[v] > 0) label += (label.empty() ? "" : "*") + power(names.at(v), e[v]);
        if (label.empty()) label = "1";
        out.push_back({label, ScalarField([a, b, c](const JetPoint& x) {
                         Jet r(1.0);
                         for (int k = 0; k < a; ++k) r = r * x[0];
                         for (int k = 0; k < b; ++k) r = r * x[1];
                         for (int k = 0; k < c; ++k) r = r * x[2];
                         return r;
                       }, dim)});
      }
  return out;
}

FlowBasis make_basis(const std::vector<Labelled<ScalarField>>& scalars, int dim, bool include_A) {
  static const char* dirs[] = {"d1", "d2", "d3"};
  FlowBasis b;
  b.include_A = include_A;
  for (const auto& s : scalars)
    for (int i = 0; i < dim; ++i) {
      b.labels.push_back(s.name + " " + dirs[i]);
      const ScalarField f = s.field;
      b.fields.emplace_back([f, i](const JetPoint& x) {
        JVec v = geo::zero_vec();
        v[i] = f(x);
        return v;
      }, dim);
    }
  return b;
}

FlowBasis default_basis(const catalog::CatalogCase& c, const BasisSpec& spec) {
  auto candidates = monomials(spec.degree, c.chart.names, c.chart.dim);
  if (spec.extras) candidates.insert(candidates.end(), c.extra_scalars.begin(), c.extra_scalars.end());
  const auto pts = c.chart.grid();
  std::vector<Labelled<ScalarField>> kept;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(pts.size()), 0);
  for (const auto& s : candidates) {
    Eigen::VectorXd col(values.rows());
    for (std::size_t p = 0; p < pts.size(); ++p) col(static_cast<Eigen::Index>(p)) = s.field.value_jet(pts[p]).value();
    const double n = col.norm();
    if (n == 0.0) continue;
    Eigen::MatrixXd trial(values.rows(), values.cols() + 1);
    trial << values, col / n;
    if (numeric_rank(trial) <= values.cols()) continue;
    values = std::move(trial);
    kept.push_back(s);
  }
  return make_basis(kept, c.chart.dim, spec.include_A);
}

LinearSystem assemble(const MetricField& g, const FlowBasis& basis, const std::vector<Point>& points,
                      const Differ& differ, double fixed_A) {
  if (basis.columns() == 0) throw DomainError("empty flow basis");
  const int dim = g.chart.dim;
  const int comps = dim * (dim + 1) / 2;
  const int nf = static_cast<int>(basis.fields.size());
  LinearSystem s;
  s.points = static_cast<int>(points.size());
  s.components = comps;
  s.rows = s.points * comps;
  s.cols = basis.columns();
  s.labels = basis.labels;
  if (basis.include_A) s.labels.push_back("A");
  s.include_A = basis.include_A;
  s.fixed_A = basis.include_A ? 0.0 : fixed_A;
  s.matrix.assign(static_cast<std::size_t>(s.rows) * s.cols, 0.0);
  s.rhs.assign(s.rows, 0.0);
  s.metric_column.assign(s.rows, 0.0);
  Eigen::MatrixXd field_values(static_cast<Eigen::Index>(s.points) * dim, nf);
  std::vector<double> buf(comps);
  for (int p = 0; p < s.points; ++p) {
    const Point& q = points[p];
    const JMat gj = tensor_lab::metric_jet(g, q, 2, differ);
    const DMat gv = geo::values(gj);
    const Eigen::MatrixXd L = cholesky(gv, dim);
    const DMat ric = geo::values(geo::ricci(gj, dim));
    DMat target{};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) target[i][j] = -2.0 * ric[i][j] - 2.0 * s.fixed_A * gv[i][j];
    frame_components(L, target, dim, &s.rhs[static_cast<std::size_t>(p) * comps]);
    DMat two_g{};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) two_g[i][j] = 2.0 * gv[i][j];
    frame_components(L, two_g, dim, &s.metric_column[static_cast<std::size_t>(p) * comps]);
    for (int k = 0; k < nf; ++k) {
      const JVec e = basis.fields[k].at(q, 1, differ);
      frame_components(L, geo::values(geo::lie_metric(gj, e, dim)), dim, buf.data());
      for (int r = 0; r < comps; ++r) s.matrix[(static_cast<std::size_t>(p) * comps + r) * s.cols + k] = buf[r];
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = e[i].value();
      field_values.block(static_cast<Eigen::Index>(p) * dim, k, dim, 1) = L.transpose() * v;
    }
    if (basis.include_A)
      for (int r = 0; r < comps; ++r)
        s.matrix[(static_cast<std::size_t>(p) * comps + r) * s.cols + nf] =
            s.metric_column[static_cast<std::size_t>(p) * comps + r];
  }
  s.basis_rank = numeric_rank(field_values);
  s.rank_deficient = s.basis_rank < nf;
  if (s.basis_rank == 0 && !basis.include_A) throw DomainError("flow basis has rank 0 on the samples");
  return s;
}

double rms(const LinearSystem& system, const std::vector<double>& x) {
  const Eigen::Map<const RowMatrix> M(system.matrix.data(), system.rows, system.cols);
  const Eigen::Map<const Eigen::VectorXd> b(system.rhs.data(), system.rows);
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), system.cols);
  return (M * v - b).norm() / std::sqrt(static_cast<double>(std::max(system.points, 1)));
}

FitResult solve(const LinearSystem& system) {
  const Eigen::Map<const RowMatrix> M(system.matrix.data(), system.rows, system.cols);
  const Eigen::Map<const Eigen::VectorXd> b(system.rhs.data(), system.rows);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(M), Eigen::ComputeThinU | Eigen::ComputeThinV);
  set_cutoff(svd, system);
  const Eigen::VectorXd x = svd.solve(b);
  FitResult r;
  r.rank = static_cast<int>(svd.rank());
  const auto& sv = svd.singularValues();
  r.singular_values.assign(sv.data(), sv.data() + sv.size());
  const Eigen::MatrixXd& V = svd.matrixV();
  for (Eigen::Index k = r.rank; k < V.cols(); ++k) r.null_space.emplace_back(V.col(k).data(), V.col(k).data() + V.rows());
  std::vector<double> all(x.data(), x.data() + x.size());
  r.min_rms_residual = rms(system, all);
  if (system.include_A) {
    r.A = all.back();
    all.pop_back();
  }
  r.coefficients = std::move(all);
  return r;
}

VectorField flow(const FlowBasis& basis, const std::vector<double>& coefficients) {
  if (coefficients.size() != basis.fields.size()) throw DomainError("coefficient count does not match the basis");
  const int dim = basis.fields.empty() ? 3 : basis.fields.front().dim();
  return VectorField([fields = basis.fields, coefficients](const JetPoint& x) {
    JVec v = geo::zero_vec();
    for (std::size_t k = 0; k < fields.size(); ++k)
      if (coefficients[k] != 0.0) v = v + Jet(coefficients[k]) * fields[k](x);
    return v;
  }, dim);
}

KillingComponent killing_decomposition(const MetricField& g, const VectorField& e,
                                       const std::vector<Labelled<VectorField>>& killing,
                                       const std::vector<Point>& points, const Differ& differ) {
  const int dim = g.chart.dim;
  const auto nk = static_cast<Eigen::Index>(killing.size());
  const auto rows = static_cast<Eigen::Index>(points.size()) * dim;
  Eigen::MatrixXd K(rows, nk);
  Eigen::VectorXd b(rows);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const DMat gv = geo::values(tensor_lab::metric_jet(g, points[p], 0, differ));
    const Eigen::MatrixXd Lt = cholesky(gv, dim).transpose();
    auto lift = [&](const VectorField& f) {
      const JVec j = f.value_jet(points[p]);
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = j[i].value();
      return Eigen::VectorXd(Lt * v);
    };
    const auto r0 = static_cast<Eigen::Index>(p) * dim;
    b.segment(r0, dim) = lift(e);
    for (Eigen::Index k = 0; k < nk; ++k) K.block(r0, k, dim, 1) = lift(killing[k].field);
  }
  KillingComponent out;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nk);
  if (nk > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kNullThreshold);
    c = svd.solve(b);
  }
  for (Eigen::Index k = 0; k < nk; ++k) {
    out.names.push_back(killing[k].name);
    out.coefficients.push_back(c(k));
  }
  out.remainder_rms = (b - K * c).norm() / std::sqrt(static_cast<double>(std::max<std::size_t>(points.size(), 1)));
  for (const Point& q : points) {
    const DMat l = tensor_lab::lie_derivative_metric(g, e, q, differ).mat();
    const DMat gv = geo::values(tensor_lab::metric_jet(g, q, 0, differ));
    out.lie_defect = std::max(out.lie_defect, tensor_lab::norm_sym(l, gv, dim));
  }
  return out;
}

CaseFit fit_case(const std::string& id, const BasisSpec& spec, const Differ& differ, std::vector<Point> points) {
  const catalog::CatalogCase& c = catalog::get(id);
  CaseFit out;
  out.case_id = id;
  out.basis = default_basis(c, spec);
  const auto pts = points.empty() ? c.chart.grid() : std::move(points);
  out.system = assemble(c.g, out.basis, pts, differ, c.A.value_or(0.0));
  out.result = solve(out.system);
  const VectorField fitted = flow(out.basis, out.result.coefficients);
  if (c.A && out.result.A) out.a_error = std::abs(*out.result.A - *c.A);
  if (c.E) {
    const VectorField ref = *c.E;
    const VectorField diff([fitted, ref](const JetPoint& x) { return fitted(x) - ref(x); }, c.chart.dim);
    out.result.killing_component = killing_decomposition(c.g, diff, c.killing, pts, differ);
    out.result.killing_component.against_reference = true;
    out.lie_difference = out.result.killing_component.lie_defect;
  } else {
    out.result.killing_component = killing_decomposition(c.g, fitted, c.killing, pts, differ);
  }
  return out;
}

ScanResult scan_A(const LinearSystem& system, double lo, double hi, int steps) {
  if (system.include_A) throw DomainError("scan_A needs a system without the A column");
  if (steps < 2) throw DomainError("scan_A needs at least two steps");
  const Eigen::Map<const RowMatrix> M(system.matrix.data(), system.rows, system.cols);
  const Eigen::Map<const Eigen::VectorXd> b0(system.rhs.data(), system.rows);
  const Eigen::Map<const Eigen::VectorXd> gcol(system.metric_column.data(), system.rows);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(M), Eigen::ComputeThinU | Eigen::ComputeThinV);
  set_cutoff(svd, system);
  ScanResult best{std::numeric_limits<double>::infinity(), lo};
  const double scale = std::sqrt(static_cast<double>(std::max(system.points, 1)));
  for (int k = 0; k < steps; ++k) {
    const double A = lo + (hi - lo) * k / (steps - 1);
    // rhs was built for fixed_A; shift to A.
    const Eigen::VectorXd b = b0 - (A - system.fixed_A) * gcol;
    const Eigen::VectorXd x = svd.solve(b);
    const double r = (M * x - b).norm() / scale;
    if (r < best.min_rms) best = {r, A};
  }
  return best;
}

FalsifyReport falsify(const std::string& case_id, const BasisSpec& spec, AMode mode, const Differ& differ,
                      std::vector<Point> points) {
  FalsifyReport rep;
  rep.case_id = case_id;
  rep.mode = mode;
  rep.floor = case_id == "sl2" ? kSl2Floor : 0.0;
  const catalog::CatalogCase& c = catalog::get(case_id);
  const auto pts = points.empty() ? c.chart.grid() : std::move(points);
  BasisSpec s = spec;
  if (mode == AMode::joint) {
    s.include_A = true;
    const CaseFit fit = fit_case(case_id, s, differ, pts);
    rep.basis_size = static_cast<int>(fit.basis.fields.size());
    rep.min_rms = fit.result.min_rms_residual;
    rep.A = fit.result.A.value_or(0.0);
  } else {
    s.include_A = false;
    const FlowBasis basis = default_basis(c, s);
    rep.basis_size = static_cast<int>(basis.fields.size());
    const ScanResult scan = scan_A(assemble(c.g, basis, pts, differ));
    rep.min_rms = scan.min_rms;
    rep.A = scan.A;
  }
  BasisSpec cal = spec;
  cal.include_A = true;
  for (const char* id : {"nil", "sol"}) rep.calibration.emplace_back(id, fit_case(id, cal, differ).result.min_rms_residual);
  FlowBasis killing;
  killing.include_A = false;
  for (const auto& k : c.killing) {
    killing.labels.push_back(k.name);
    killing.fields.push_back(k.field);
  }
  if (!killing.fields.empty()) rep.killing_scan = scan_A(assemble(c.g, killing, pts, differ));
  bool calibrated = true;
  for (const auto& [id, r] : rep.calibration) calibrated = calibrated && r < rep.calibration_bound;
  rep.pass = calibrated && rep.min_rms > rep.floor &&
             (killing.fields.empty() || rep.killing_scan.min_rms > rep.killing_bound);
  return rep;
}

}  // namespace ricsol::fitter
