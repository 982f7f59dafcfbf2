#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricsol/catalog.hpp"
#include "ricsol/field.hpp"

// Least-squares search for (E, A) with −2Ric = L_E g + 2A g.
namespace ricsol::fitter {

using catalog::Labelled;

struct FlowBasis {
  std::vector<std::string> labels;
  std::vector<VectorField> fields;
  bool include_A = true;

  int columns() const { return static_cast<int>(fields.size()) + (include_A ? 1 : 0); }
};

// Graded monomials in the chart coordinates, degree ≤ `degree`.
std::vector<Labelled<ScalarField>> monomials(int degree, const std::vector<std::string>& names, int dim = 3);
// s·∂_i for every scalar s and i < dim.
FlowBasis make_basis(const std::vector<Labelled<ScalarField>>& scalars, int dim = 3, bool include_A = true);

struct BasisSpec {
  int degree = 2;
  bool extras = true;
  bool include_A = true;
};

// Monomials, then the case extras. A scalar already in the span of earlier ones on the case grid is dropped.
FlowBasis default_basis(const catalog::CatalogCase& c, const BasisSpec& spec = {});

struct LinearSystem {
  int rows = 0;
  int cols = 0;
  int points = 0;
  int components = 0;                // rows per point
  std::vector<double> matrix;         // row-major rows × cols
  std::vector<double> rhs;            // −2Ric (− 2A g for a fixed A)
  std::vector<double> metric_column;  // 2g in the same frame
  std::vector<std::string> labels;
  bool include_A = true;
  double fixed_A = 0.0;
  int basis_rank = 0;  // rank of the field values on the samples
  bool rank_deficient = false;
};

// Rows ordered by (point, component); components are in a g-orthonormal frame with √2 on off-diagonal pairs.
// Throws DomainError for a basis with no columns.
LinearSystem assemble(const MetricField& g, const FlowBasis& basis, const std::vector<Point>& points,
                      const Differ& differ = {}, double fixed_A = 0.0);

struct KillingComponent {
  std::vector<std::string> names;
  std::vector<double> coefficients;
  double remainder_rms = 0.0;  // g-norm of the part outside the Killing span
  double lie_defect = 0.0;     // max ‖L_D g‖_g of the decomposed field D
  bool against_reference = false;
};

struct FitResult {
  std::vector<double> coefficients;
  std::optional<double> A;
  double min_rms_residual = 0.0;
  int rank = 0;
  std::vector<double> singular_values;
  std::vector<std::vector<double>> null_space;  // full coefficient vectors, A last
  KillingComponent killing_component;
};

inline constexpr double kNullThreshold = 1e-10;

// Minimum-norm least squares by SVD. σ ≤ 1e-10·max(σ_max, ‖2g column‖) is treated as zero.
FitResult solve(const LinearSystem& system);
// rms over the samples of the residual with coefficients x (A last when included).
double rms(const LinearSystem& system, const std::vector<double>& x);

VectorField flow(const FlowBasis& basis, const std::vector<double>& coefficients);

// E ≈ Σ c_k K_k in the g-norm on the samples.
KillingComponent killing_decomposition(const MetricField& g, const VectorField& e,
                                       const std::vector<Labelled<VectorField>>& killing,
                                       const std::vector<Point>& points, const Differ& differ = {});

struct CaseFit {
  std::string case_id;
  FlowBasis basis;
  LinearSystem system;
  FitResult result;
  std::optional<double> a_error;         // |A_fit − A_case|
  std::optional<double> lie_difference;  // max ‖L_{E_fit − E_case} g‖_g
};

// Samples default to the case grid.
CaseFit fit_case(const std::string& id, const BasisSpec& spec = {}, const Differ& differ = {},
                 std::vector<Point> points = {});

enum class AMode { joint, grid };

struct ScanResult {
  double min_rms = 0.0;
  double A = 0.0;
};

// A fixed on a uniform grid over [lo, hi]; system must be assembled without the A column.
ScanResult scan_A(const LinearSystem& system, double lo = -5.0, double hi = 5.0, int steps = 201);

struct FalsifyReport {
  std::string case_id;
  AMode mode = AMode::joint;
  int basis_size = 0;
  double min_rms = 0.0;
  double A = 0.0;
  std::vector<std::pair<std::string, double>> calibration;
  double calibration_bound = 1e-6;
  double floor = 0.0;
  ScanResult killing_scan;
  double killing_bound = 0.3;
  bool evidence_not_proof = true;
  bool pass = false;
};

// sl2 min-rms with the default basis measured 0.2516 (A ≈ 2.187); frozen regression bound.
inline constexpr double kSl2Floor = 0.25;

// Calibration cases nil and sol are fitted under the same BasisSpec.
FalsifyReport falsify(const std::string& case_id, const BasisSpec& spec = {}, AMode mode = AMode::joint,
                      const Differ& differ = {}, std::vector<Point> points = {});

}  // namespace ricsol::fitter
