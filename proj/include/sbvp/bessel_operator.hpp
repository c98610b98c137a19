#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sbvp/twisted_core.hpp"

namespace sbvp {

// Radial coefficient c(x): a polynomial in x unless a general jet function is given.
struct Coefficient {
  std::vector<Complex> poly;
  JetFn fn;

  static Coefficient zero() { return {}; }
  static Coefficient constant(Complex c) { return Coefficient{{c}, {}}; }
  static Coefficient linear(Complex slope) { return Coefficient{{0.0, slope}, {}}; }
  static Coefficient polynomial(std::vector<Complex> c) { return Coefficient{std::move(c), {}}; }
  static Coefficient function(JetFn f) { return Coefficient{{}, std::move(f)}; }

  Jet jet(double x) const;
  Complex operator()(double x) const { return jet(x)[0]; }
  bool is_zero() const;
  bool is_polynomial() const { return !fn; }
  Coefficient conj() const;
  Coefficient plus(Complex c) const;
};

// P(lambda) = P2 + lambda * first(x) + lambda^2 * second(x).
struct PencilCoeffs {
  Coefficient first;
  Coefficient second = Coefficient::constant(1.0);
};

// |D_nu|^2 + b(x) D_nu + a(x) + A(q), D_nu = -i d_nu. In adjoint form the
// first-order term acts as D_nu^*(b .) instead.
struct BesselOperator {
  Order nu;
  Coefficient a;
  Coefficient b;
  std::function<Complex(const std::vector<int>&)> fourier_symbol;
  std::optional<PencilCoeffs> pencil;
  bool adjoint_form = false;

  Complex symbol_at(const std::vector<int>& q) const;
  BesselOperator adjoint() const;
  void validate() const;  // b(0) = 0
};

GridFunction apply(const BesselOperator& P, const GridFunction& u, Complex lambda = 0.0);

// |<Pu, v> - <u, P* v> - (gamma_+ u conj(gamma_- v) - gamma_- u conj(gamma_+ v))|.
double green_defect(const BesselOperator& P, const GridFunction& u, const GridFunction& v);

}  // namespace sbvp
