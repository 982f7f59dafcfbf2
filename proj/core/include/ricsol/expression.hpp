#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ricsol/jet.hpp"

namespace ricsol {

// Complex number with Jet real and imaginary parts.
struct CJet {
  Jet re, im;
};

CJet operator+(const CJet& a, const CJet& b);
CJet operator-(const CJet& a, const CJet& b);
CJet operator*(const CJet& a, const CJet& b);
CJet operator/(const CJet& a, const CJet& b);
CJet operator-(const CJet& a);
CJet exp(const CJet& z);
CJet log(const CJet& z);  // principal branch
CJet sin(const CJet& z);
CJet cos(const CJet& z);
CJet conj(const CJet& z);
Jet abs2(const CJet& z);

// Arithmetic expression: + − * / ^, unary minus, functions exp log sin cos tan sqrt sinh cosh tanh
// atan abs pow(a, b), constants pi, e and (complex evaluation only) i.
class Expression {
 public:
  Expression() = default;
  // Throws ParseError on syntax errors or unknown identifiers.
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);

  const std::string& text() const { return text_; }
  const std::vector<std::string>& variables() const { return vars_; }
  bool valid() const { return static_cast<bool>(root_); }
  // True if the expression mentions the variable.
  bool uses(const std::string& name) const;

  double eval(std::span<const double> x) const;
  Jet eval(std::span<const Jet> x) const;
  std::complex<double> eval(std::span<const std::complex<double>> x) const;
  CJet eval(std::span<const CJet> x) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  std::vector<std::string> vars_;
};

}  // namespace ricsol
