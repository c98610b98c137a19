#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sbvp/bessel_operator.hpp"
#include "sbvp/symbol_analysis.hpp"

namespace sbvp {

// Normal-form data of a stationary model metric (-dx^2 + gamma(x)) / x^2 near the boundary,
// gamma(x) = gamma0 + x^2 gamma1 + O(x^3), e(x) = x^2 e0 + O(x^3). Coordinates on the
// boundary are (t, y_1, ..., y_{n-1}); matrices are n x n in that order.
struct ModelMetric {
  int n = 2;
  std::function<RMat(const std::vector<double>& y)> gamma0;
  std::function<RMat(const std::vector<double>& y)> gamma1;  // optional
  std::function<double(const std::vector<double>& y)> e0;

  static ModelMetric static_product(int n);  // dt^2 - |dy|^2, e0 = 0
  static ModelMetric constant(const RMat& gamma0, double e0 = 0.0, const RMat& gamma1 = RMat());
};

struct KGReduction {
  Order nu;
  double mass = 0.0;
  BesselOperator op;  // pencil in lambda at the requested tangential mode
  bool bf_satisfied = false;
  std::vector<int> q;
  std::vector<std::string> warnings;
};

double nu_from_mass(double mass, int n);
double mass_from_nu(double nu, int n);

// Reduction at the boundary point y and tangential mode q (coefficients taken from that point).
KGReduction reduce(const ModelMetric& metric, double mass, const std::vector<int>& q = {},
                   const std::vector<double>& y = {});

// Tangential symbol -gamma0^{-1}((-lambda, eta), (-lambda, eta)) at a boundary point.
BoundarySymbol kg_boundary_symbol(const ModelMetric& metric, const std::vector<double>& y);

struct EllipticityVerdict {
  bool elliptic = false;
  bool parameter_elliptic = false;
  int elliptic_failure = -1;             // offending sample index
  int parameter_failure = -1;
  bool elliptic_cross_checked = true;    // symbol roots agree with the timelike test
  bool parameter_cross_checked = true;
  std::vector<std::vector<double>> samples;
};

EllipticityVerdict ellipticity_verdicts(const KGReduction& red, const ModelMetric& metric, int samples);

}  // namespace sbvp
