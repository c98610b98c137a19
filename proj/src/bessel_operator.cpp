#include "sbvp/bessel_operator.hpp"

#include <cmath>

namespace sbvp {

Jet Coefficient::jet(double x) const {
  if (fn) return fn(x);
  Jet j{};
  for (int d = 0; d < 5; ++d) {
    Complex s = 0.0;
    for (int k = static_cast<int>(poly.size()) - 1; k >= d; --k) {
      double f = 1.0;
      for (int m = 0; m < d; ++m) f *= (k - m);
      s = s * x + f * poly[k];
    }
    j[d] = s;
  }
  return j;
}

bool Coefficient::is_zero() const {
  if (fn) return false;
  for (const auto& c : poly)
    if (c != Complex(0.0)) return false;
  return true;
}

Coefficient Coefficient::conj() const {
  Coefficient r;
  for (const auto& c : poly) r.poly.push_back(std::conj(c));
  if (fn) {
    JetFn f = fn;
    r.fn = [f](double x) {
      Jet j = f(x);
      for (auto& c : j) c = std::conj(c);
      return j;
    };
  }
  return r;
}

Coefficient Coefficient::plus(Complex c) const {
  Coefficient r = *this;
  if (fn) {
    JetFn f = fn;
    r.fn = [f, c](double x) {
      Jet j = f(x);
      j[0] += c;
      return j;
    };
  } else {
    if (r.poly.empty()) r.poly.push_back(0.0);
    r.poly[0] += c;
  }
  return r;
}

Complex BesselOperator::symbol_at(const std::vector<int>& q) const {
  return fourier_symbol ? fourier_symbol(q) : Complex(0.0);
}

BesselOperator BesselOperator::adjoint() const {
  BesselOperator r;
  r.nu = nu;
  r.a = a.conj();
  r.b = b.conj();
  if (fourier_symbol) {
    auto f = fourier_symbol;
    r.fourier_symbol = [f](const std::vector<int>& q) { return std::conj(f(q)); };
  }
  if (pencil) r.pencil = PencilCoeffs{pencil->first.conj(), pencil->second.conj()};
  r.adjoint_form = !adjoint_form;
  return r;
}

void BesselOperator::validate() const {
  const double b0 = std::abs(b(0.0));
  if (b0 > 1e-14 * (1.0 + std::abs(b(1.0)))) {
    throw Error(ErrorKind::Domain, "first-order coefficient must vanish at x = 0");
  }
}

GridFunction apply(const BesselOperator& P, const GridFunction& u, Complex lambda) {
  const Order& nu = P.nu;
  GridFunction r = bessel_laplacian(u, nu);
  if (!P.b.is_zero()) {
    const Coefficient b = P.b;
    if (!P.adjoint_form) {
      r = r + Complex(0.0, -1.0) * multiply(d_nu(u, nu), [b](double x) { return b.jet(x); });
    } else {
      r = r + Complex(0.0, 1.0) * d_nu_star(multiply(u, [b](double x) { return b.jet(x); }), nu);
    }
  }
  Coefficient a = P.a.plus(P.symbol_at(u.fourier_index));
  if (P.pencil && lambda != Complex(0.0)) {
    const Coefficient p1 = P.pencil->first, p0 = P.pencil->second;
    const Coefficient base = a;
    a = Coefficient::function([base, p1, p0, lambda](double x) {
      Jet j = base.jet(x);
      const Jet j1 = p1.jet(x), j0 = p0.jet(x);
      for (int k = 0; k < 5; ++k) j[k] += lambda * j1[k] + lambda * lambda * j0[k];
      return j;
    });
  }
  if (!a.is_zero()) r = r + multiply(u, [a](double x) { return a.jet(x); });
  r.fourier_index = u.fourier_index;
  return r;
}

double green_defect(const BesselOperator& P, const GridFunction& u, const GridFunction& v) {
  const Complex lhs = inner(apply(P, u), v) - inner(u, apply(P.adjoint(), v));
  Complex boundary = 0.0;
  if (P.nu.subcritical()) {
    const TraceData tu = traces(u, P.nu), tv = traces(v, P.nu);
    boundary = tu.gamma_plus * std::conj(tv.gamma_minus) - tu.gamma_minus * std::conj(tv.gamma_plus);
  }
  return std::abs(lhs - boundary);
}

}  // namespace sbvp
