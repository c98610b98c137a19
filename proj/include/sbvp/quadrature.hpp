#pragma once

#include <vector>

#include "sbvp/common.hpp"

namespace sbvp {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rules on [-1, 1].
QuadRule gauss_legendre(int n);
// Weight (1 - t)^alpha (1 + t)^beta.
QuadRule gauss_jacobi(int n, double alpha, double beta);

// Rule for \int_0^L x^e g(x) dx; the returned weights already contain x^e.
const QuadRule& power_weight_rule(int n, double e, double L);

enum class DensityHint { GaussJacobi, GradedMesh };

struct GridElement {
  int first = 0;
  int count = 0;
  double a = 0.0;
  double b = 0.0;
};

struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double x_max = 1.0;
  DensityHint density_hint = DensityHint::GradedMesh;
  std::vector<GridElement> elements;

  int size() const { return static_cast<int>(nodes.size()); }
};

struct GradedOptions {
  int points_per_element = 16;
  int uniform_elements = -1;  // default: a quarter of the elements
  double ratio = 0.1;         // geometric ratio of the layers next to x = 0
  double first_exponent = 0.0;  // innermost element uses Gauss-Jacobi for x^first_exponent
};

// Composite Gauss-Legendre grid: geometric layers toward x = 0 followed by
// uniform elements. Node count is rounded to a multiple of the element size.
RadialGrid graded_grid(double x_max, int n_nodes, const GradedOptions& opt = {});

// Explicit element breaks, each carrying the same number of Gauss points.
RadialGrid composite_grid(const std::vector<double>& breaks, int points_per_element);

// Gauss-Jacobi nodes for the weight x^exponent; plain dx weights are w_i x_i^{-exponent}.
RadialGrid gauss_jacobi_grid(double x_max, int n_nodes, double exponent);

}  // namespace sbvp
