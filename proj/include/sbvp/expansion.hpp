#pragma once

#include <optional>
#include <string>
#include <utility>

#include "sbvp/bvp_solve.hpp"

namespace sbvp {

struct IndicialData {
  Order nu;
  std::pair<double, double> roots;  // (-1/2 + nu, -1/2 - nu)
  bool resonant = false;            // 2 nu an odd integer >= 3

  double polynomial(double s) const { return (s + 0.5 + nu.nu) * (s + 0.5 - nu.nu); }
};

IndicialData indicial(const Order& nu);

struct FitOptions {
  std::optional<double> x_lo, x_hi;  // default: grid node 3 and 0.1 x_max
  int tail_terms = 2;                // x^2, x^4, ... corrections per branch
  bool integer_tail = false;         // x, x^2, ..., x^{2 tail_terms} instead, for factors that are not even
};

struct ExpansionFit {
  Complex g_minus = 0.0;
  Complex g_plus = 0.0;
  Complex g_log = 0.0;
  bool has_log = false;
  double fit_residual = 0.0;
  double condition = 0.0;
  std::pair<double, double> window;
};

// Least-squares fit of u against x^{1/2-nu}{1, x^2, ...} and x^{1/2+nu}{1, x^2, ...},
// plus x^{1/2+nu} log x when 2 nu is resonant.
ExpansionFit fit_expansion(const GridFunction& u, const Order& nu, const FitOptions& opt = {});

// max(|g_- - gamma_- u|, |2 nu g_+ - gamma_+ u|).
double expansion_consistency(const Solution& sol, const Order& nu, const FitOptions& opt = {});

std::string to_json(const ExpansionFit& f);

}  // namespace sbvp
