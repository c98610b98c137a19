#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbvp/bessel_operator.hpp"
#include "sbvp/galerkin.hpp"
#include "sbvp/symbol_analysis.hpp"

namespace sbvp {

enum class ModeSource { LinearEVP, QuadraticPencil };

struct ModeSet {
  Order nu;
  std::vector<int> q;
  ModeSource source = ModeSource::LinearEVP;
  std::vector<Complex> eigenvalues;      // sorted by |lambda|
  std::vector<double> residuals;         // backward error of each eigenpair
  std::vector<GridFunction> eigenvectors;  // leading modes only (see PencilOptions::functions)
  CMat cauchy_data;                      // column k: (y_k, lambda_k y_k) in orthonormal coordinates
  int dof = 0;                           // dimension of the discrete trial space
};

struct DirichletEntry {
  std::vector<int> q;
  int n = 0;
  double closed_form = 0.0;  // 1 + |q|^2 + j_{nu,n}^2
  double discrete = 0.0;
  double rel_error = 0.0;
};

struct DirichletSpectrum {
  Order nu;
  std::vector<DirichletEntry> entries;
  double max_rel_error = 0.0;
};

// Delta_nu + 1 on (0, 1) with Dirichlet conditions, tangential modes q = 0..q_max.
DirichletSpectrum dirichlet_spectrum(const Order& nu, int q_max, int n_max, int dof = 256);

// Eigenvalues 1/m of the mass matrix in the H^1-orthonormal Dirichlet subspace, ascending.
std::vector<double> dirichlet_eigenvalues(const Order& nu, int dof);

struct PencilOptions {
  int dof = 64;
  int functions = 16;  // eigenvectors synthesized as grid functions
  GridPtr grid;
};

// Quadratic pencil P(lambda) = P2 + lambda P1 + lambda^2 P0 from op.pencil, with a single boundary row
// T(lambda) = T1 + lambda T0 when 0 < nu < 1.
ModeSet pencil_modes(const BesselOperator& op, const std::optional<BoundaryOperator>& bc, const std::vector<int>& q,
                     const PencilOptions& opt = {});

struct CompletenessReport {
  int ambient_dim = 0;
  int numerical_rank = 0;
  double smallest_retained_singular_value = 0.0;
  bool verdict = false;
  std::string note;
};

CompletenessReport completeness_check(const ModeSet& modes, int dof);

ModeSet truncate(const ModeSet& modes, int count);

struct SingularValueReport {
  std::vector<double> s;
  double fitted_exponent = 0.0;
  double constant = 0.0;
  int fit_first = 0, fit_last = 0;  // 1-based index range of the fit
};

SingularValueReport embedding_singular_values(const Order& nu, int dof);

std::string to_json(const ModeSet& m, const std::optional<CompletenessReport>& c = std::nullopt);

}  // namespace sbvp
