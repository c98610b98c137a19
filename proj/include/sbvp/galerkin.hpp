#pragma once

#include <vector>

#include "sbvp/bessel_operator.hpp"

namespace sbvp::galerkin {

// Trial functions u = x^{1/2-nu} x^{pi} Q(x) on (0, L), Q vanishing at L:
//   polynomial family  Q_k = (1 - x/L) P_k^{(0,beta)}(2x/L - 1), pi = k0,
//   one enrichment     Q = (1 - x/L), pi = 2 nu.
// Below nu = 1 the polynomial family starts at pi = 0 and carries gamma_-.
struct Space {
  Order nu;
  double L = 1.0;
  int n_poly = 0;
  bool enrich = true;
  int k0 = 0;
  double beta = 0.0;

  int size() const { return n_poly + (enrich ? 1 : 0); }
  double pi(int i) const { return i < n_poly ? double(k0) : 2.0 * nu.nu; }
  double term_power(int i) const { return 0.5 - nu.nu + pi(i); }
};

Space make_space(const Order& nu, double L, int dof);
// Same family with extra polynomials; the first size() functions coincide.
Space extend(const Space& s, int extra_poly);

struct Forms {
  RMat S;       // <d_nu phi_j, d_nu phi_i>
  RMat M;       // <phi_j, phi_i>
  CMat A;       // <(a + A(q)) phi_j, phi_i>
  CMat B;       // first-order term <b D_nu phi_j, phi_i> (or its adjoint form)
  CMat P1, P0;  // pencil coefficients
  CVec gm;      // gamma_- of each basis function
};

Forms assemble(const Space& s, const BesselOperator& P, const std::vector<int>& q);

// Restriction of all forms to the first n functions of a (possibly extended) space.
Forms leading_block(const Forms& f, const Space& full, const Space& sub);

// <f, phi_i>.
CVec load(const Space& s, const GridFunction& f);

// Orthonormal coordinates for the Hermitian positive semidefinite Gram matrix G:
// returns T with T^H G T = I after dropping directions below rel_tol * max eigenvalue.
CMat orthonormalize(const CMat& G, double rel_tol);

GridFunction synthesize(const Space& s, const CVec& coeffs, GridPtr grid, std::vector<int> q = {});

// Basis-function values of the factor Q at x (no x^{pi} power).
void factor_values(const Space& s, double x, std::vector<double>& q, std::vector<double>& dq);

}  // namespace sbvp::galerkin
