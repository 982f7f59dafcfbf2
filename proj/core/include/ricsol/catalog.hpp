#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ricsol/field.hpp"
#include "ricsol/semiconformal.hpp"

namespace ricsol::catalog {

struct Named {
  std::string name;
  double value = 0.0;
  std::string source;  // "reference", "computed" or "exact"
};

template <class F>
struct Labelled {
  std::string name;
  F field;
};

struct CatalogCase {
  std::string id;
  std::string title;
  std::string anchor;
  Chart chart;
  MetricField g;
  std::optional<semiconformal::SubmersionSetup> fibration;
  std::optional<VectorField> E;
  std::optional<double> A;
  std::optional<ScalarField> f;  // vertical part θ(E) when known in closed form
  std::vector<Labelled<VectorField>> killing;
  std::vector<Labelled<ScalarField>> extra_scalars;
  std::vector<Named> expected;
  std::vector<Point> designated;  // points used by point-wise checks
  bool gradient = false;          // E is a gradient field

  double expected_value(const std::string& name) const;
};

inline constexpr std::uint64_t kSeed = 0x51CC1;

const std::vector<std::string>& ids();
// Throws std::out_of_range for an unknown id.
const CatalogCase& get(const std::string& id);

struct SlFields {
  ScalarField alpha, beta, f;
};

// Equations (i)–(vi) for X = αY₁ + βY₂, Y₁ = x₂∂₁ − ∂₃, Y₂ = x₂∂₂, with a = A + ½.
std::array<double, 6> sl2_system_residual(const SlFields& s, double a, const Point& p, const Differ& differ = {});

}  // namespace ricsol::catalog
