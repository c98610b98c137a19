#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sbvp/common.hpp"
#include "sbvp/quadrature.hpp"

namespace sbvp {

enum class Regime { SubCritical, Critical, SuperCritical };

struct Order {
  double nu = 0.5;
  Regime regime = Regime::SubCritical;

  static Order make(double nu);
  bool subcritical() const { return regime == Regime::SubCritical; }
};

// Value and first four x-derivatives.
using Jet = std::array<Complex, 5>;
using JetFn = std::function<Jet(double)>;

// One summand x^power * F(x) of a function near the singular end.
struct PowerTerm {
  double power = 0.0;
  std::vector<Jet> jets;  // F and its derivatives at the grid nodes
  Jet at_zero{};          // F and its derivatives at x = 0
  bool has_zero = false;
  int valid_order = 4;    // highest derivative still meaningful in `jets`
  JetFn gen;              // evaluates F anywhere, if known
};

enum class Rep { Plain, FnuPair };

using GridPtr = std::shared_ptr<const RadialGrid>;

struct GridFunction {
  GridPtr grid;
  std::vector<Complex> values;
  std::vector<int> fourier_index;
  Rep rep = Rep::Plain;
  double nu = 0.0;                 // exponent tag of the F_nu representation
  std::vector<PowerTerm> terms;    // empty for sampled data

  int size() const { return static_cast<int>(values.size()); }
  bool analytic() const { return !terms.empty(); }
  bool evaluable() const;
  Complex eval(double x) const;    // requires generators on every term
  double q_squared() const;
};

struct TraceData {
  Complex gamma_minus = 0.0;
  Complex gamma_plus = 0.0;
  bool has_plus = true;
  double residual = 0.0;
};

GridPtr make_grid(RadialGrid g);

// Construction.
GridFunction sampled(GridPtr grid, std::vector<Complex> values);
GridFunction from_jet(GridPtr grid, JetFn u);  // u itself, no singular factor
GridFunction from_function(GridPtr grid, std::function<Complex(double)> u);
GridFunction fnu_pair(GridPtr grid, double nu, JetFn minus, JetFn plus);
GridFunction power_sum(GridPtr grid, double nu, std::vector<std::pair<double, JetFn>> terms);
GridFunction zero_function(GridPtr grid);

// Jet helpers for factors.
JetFn constant_jet(Complex c);
JetFn poly_jet(std::vector<Complex> coeffs);       // sum c_k x^k
JetFn even_poly_jet(std::vector<Complex> coeffs);  // sum c_k x^{2k}
JetFn product_jet(JetFn f, JetFn g);
JetFn scaled_argument_jet(JetFn f, double tau);    // F(tau x)

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(Complex s, const GridFunction& a);
GridFunction multiply(const GridFunction& a, std::function<Jet(double)> m);

GridFunction resample(const GridFunction& u, GridPtr grid);
GridFunction dilate(const GridFunction& u, double tau);  // x -> u(tau x)
GridFunction with_fourier_index(GridFunction u, std::vector<int> q);

// Differential operators.
GridFunction d_nu(const GridFunction& u, const Order& nu);
GridFunction d_nu_star(const GridFunction& u, const Order& nu);
GridFunction d_x(const GridFunction& u);
GridFunction bessel_laplacian(const GridFunction& u, const Order& nu);  // d_nu_star(d_nu(u))

Complex inner(const GridFunction& u, const GridFunction& v);
double norm_l2(const GridFunction& u);
double twisted_norm(const GridFunction& u, int s, const Order& nu);

TraceData traces(const GridFunction& u, const Order& nu);

struct HardyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};
HardyResult hardy_check(const GridFunction& u, const Order& nu);

// CSV with header x,value_re,value_im.
void write_csv(const GridFunction& u, std::ostream& os);
void write_csv(const GridFunction& u, const std::string& path);
GridFunction read_csv(const std::string& path);

// Estimated error of the last Plain differentiation (0 for analytic input).
struct DiffDiagnostics {
  double error_estimate = 0.0;
};
GridFunction d_nu_checked(const GridFunction& u, const Order& nu, DiffDiagnostics* diag);

}  // namespace sbvp
