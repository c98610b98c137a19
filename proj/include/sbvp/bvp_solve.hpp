#pragma once

#include <optional>
#include <vector>

#include "sbvp/bessel_operator.hpp"
#include "sbvp/galerkin.hpp"
#include "sbvp/symbol_analysis.hpp"

namespace sbvp {

enum class FarEnd { DirichletAtOne, Decay };

struct BVProblem {
  BesselOperator op;
  std::optional<BoundaryOperator> bc0;  // required iff 0 < nu < 1
  FarEnd bc1 = FarEnd::DirichletAtOne;
  std::optional<GridFunction> rhs;      // absent means f = 0
  std::vector<Complex> boundary_data;   // one entry per row of bc0; missing rows are 0
  std::vector<int> q;                   // tangential mode
  Complex lambda = 0.0;
  double x_max = 0.0;                   // 0: 1 for DirichletAtOne, 40 / decay rate on the half-line
  int dof = 256;
  GridPtr grid;                         // output grid; default graded grid on (0, x_max]
  bool check_truncation = false;        // half-line only: re-solve on twice the interval
};

struct Solution {
  GridFunction u;
  TraceData traces;
  CVec aux;                   // auxiliary boundary unknowns
  double residual_norm = 0.0; // dual-norm residual, relative to |f| when f != 0
  double condition_estimate = 0.0;
  double truncation_error = 0.0;
  galerkin::Space space;
  CVec coeffs;
};

// Zeroth-order coefficient a(0) + A(q) + lambda p1(0) + lambda^2 p0(0) seen by the boundary model.
Complex boundary_potential(const BesselOperator& op, const std::vector<int>& q, Complex lambda);

// det of [T-(q) + T+(q) gamma_+(decaying mode) | C]; zero means the pair is not regular.
Complex regularity_det(const Order& nu, const BoundaryOperator& bc, Complex potential,
                       const std::vector<int>& q, Complex lambda);

Solution solve_1d(const BVProblem& prob);

// (Delta_nu + |q|^2 + a) u = f, Dirichlet at both ends (gamma_- at x = 0 when nu < 1).
Solution solve_dirichlet_laplacian(const Order& nu, Complex a, const GridFunction& f, int dof = 256);

struct SeparableSolution {
  std::vector<Solution> modes;            // one per rhs mode, same order
  std::vector<std::vector<int>> probe_q;  // modes probed for the condition profile
  std::vector<double> probe_condition;
  double condition_spread = 0.0;          // max / min over all condition estimates
  bool uniform = false;                   // spread below 10
};

// rhs: one GridFunction per tangential mode, fourier_index set on each.
SeparableSolution solve_separable(const BesselOperator& op, const std::optional<BoundaryOperator>& bc0,
                                  const std::vector<GridFunction>& rhs_modes, int q_max, int dof = 256);

enum class LiftSide { AtZero, AtOne };

// Solution of (Delta_nu + 1 + |q|^2) v = 0 on (0, 1) with gamma_- v = phi, v(1) = 0 (AtZero)
// or gamma_- v = 0, v(1) = phi (AtOne).
GridFunction poisson_lift(const Order& nu, LiftSide side, const std::vector<int>& q, Complex phi, GridPtr grid);

struct ResolventRow {
  double radius = 0.0;
  Complex lambda;
  double ratio = 0.0;  // [[u]]_{H^2} / [[f]]_{H^0}
  bool singular = false;
};

struct ResolventOptions {
  int dof = 128;
  unsigned seed = 1;
  int rays = 3;  // angles sampled per sector interval
};

// P(lambda) u = f for random smooth f at |lambda| = each radius, worst ratio over the sampled rays.
std::vector<ResolventRow> resolvent_sweep(const BesselOperator& op, const std::optional<BoundaryOperator>& bc,
                                          const Sector& sector, const std::vector<double>& radii,
                                          const ResolventOptions& opt = {});

// Same ratio at one lambda (throws SingularSystem when P(lambda) is not invertible).
double resolvent_ratio(const BesselOperator& op, const std::optional<BoundaryOperator>& bc, Complex lambda,
                       const GridFunction& f, int dof);

// Uniformly bounded and non-increasing within 10% after the first non-singular radius.
bool resolvent_decay_ok(const std::vector<ResolventRow>& rows, double slack = 0.1);

}  // namespace sbvp
