#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbvp/twisted_core.hpp"

namespace sbvp {

// a2(eta, lambda): value of the principal tangential symbol at one boundary point.
struct BoundarySymbol {
  std::function<Complex(const std::vector<double>&, Complex)> a2;
  int dim_eta = 1;
  bool has_lambda = false;

  Complex operator()(const std::vector<double>& eta, Complex lambda) const { return a2(eta, lambda); }

  static BoundarySymbol laplace(int dim);  // |eta|^2
  static BoundarySymbol wave(int dim);     // |eta|^2 - lambda^2
  BoundarySymbol conj() const;
};

bool is_homogeneous(const BoundarySymbol& sym, const std::vector<double>& eta, Complex lambda, double t);

struct EllipticRoots {
  bool elliptic = false;
  Complex xi_plus;   // Im < 0: the decaying root
  Complex xi_minus;  // = -xi_plus
};

EllipticRoots elliptic_roots(const BoundarySymbol& sym, const std::vector<double>& eta, Complex lambda);

// Symbol data of a first-order tangential operator: constant + sum_i a_i d/dy_i + c_lambda * lambda.
struct TangentialSymbol {
  Complex constant = 0.0;
  std::vector<Complex> field;  // coefficients of d/dy_i, symbol i a_i eta_i
  Complex lambda = 0.0;

  int order() const;  // 1, 0, or -1 when identically zero
  Complex principal(int k, const std::vector<double>& eta, Complex lam) const;
  double magnitude(int k, const std::vector<double>& eta, Complex lam) const;
  Complex value(const std::vector<double>& eta, Complex lam) const;  // full symbol
  bool depends_on_lambda() const { return lambda != Complex(0.0); }
};

struct BoundaryRow {
  TangentialSymbol t_minus;
  TangentialSymbol t_plus;
  std::optional<double> nu_order;  // chosen automatically when absent
};

struct BoundaryOperator {
  std::vector<BoundaryRow> rows{BoundaryRow{}};
  CMat C;  // (J+1) x J symbol values; empty for J = 0

  int aux() const { return static_cast<int>(C.cols()); }

  static BoundaryOperator dirichlet();
  static BoundaryOperator neumann();
  static BoundaryOperator robin(Complex beta);  // gamma_+ + beta gamma_-
  static BoundaryOperator oblique(std::vector<Complex> field, Complex t_plus = 0.0);
  static BoundaryOperator lambda_robin(Complex c = 1.0);  // gamma_+ + c lambda gamma_-
};

// Smallest admissible nu-order and the principal-part degrees it selects.
struct NuOrder {
  double mu = 0.0;
  int k_minus = 0;
  int k_plus = 0;
};
NuOrder select_nu_order(const Order& nu, const BoundaryRow& row);

struct ModeSolution {
  Complex xi;
  GridFunction profile;
  TraceData traces;
};

// Normalizing constant 2^{1-nu} / Gamma(nu) of the decaying solution.
double mode_normalization(double nu);
Complex mode_gamma_plus(double nu, Complex xi);
ModeSolution mode_solution(const Order& nu, Complex xi, GridPtr grid);
// Default half-line grid for a given root: x_max = 40 / Re(i xi).
GridPtr half_line_grid(const Order& nu, Complex xi, int nodes = 256);

struct LopatinskiiValue {
  Complex det;
  double scale = 0.0;
  bool elliptic = true;
  bool pass = false;
  double weight = 0.0;  // homogeneity degree of det in (eta, lambda)
};

LopatinskiiValue lopatinskii_det(const Order& nu, const BoundarySymbol& sym, const BoundaryOperator& bc,
                                 const std::vector<double>& eta, Complex lambda);

// Angular sector for lambda as a union of closed intervals [a, b] of arguments; a ray when a == b.
struct Sector {
  std::vector<std::pair<double, double>> intervals;
  static Sector imaginary_axis();
  static Sector around(double center, double half_width);
};

struct LopatinskiiSample {
  std::vector<double> eta;
  Complex lambda;
  Complex det;
  bool elliptic = true;
  bool pass = false;
};

struct LopatinskiiReport {
  std::vector<LopatinskiiSample> samples;
  double min_abs_det = 0.0;
  bool all_pass = true;
  int first_failure = -1;
};

LopatinskiiReport lopatinskii_sweep(const Order& nu, const BoundarySymbol& sym, const BoundaryOperator& bc,
                                    int sphere_samples, const std::optional<Sector>& sector = std::nullopt,
                                    bool fail_fast = false);

std::string to_json(const LopatinskiiReport& r);

}  // namespace sbvp
