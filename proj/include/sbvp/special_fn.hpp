#pragma once

#include <array>
#include <vector>

#include "sbvp/common.hpp"

namespace sbvp {

struct BesselEval {
  double order = 0.0;
  Complex argument;
  Complex value;
  Complex derivative;
};

struct BesselZeroTable {
  double order = 0.0;
  std::vector<double> zeros;
};

// Modified Bessel function of the second kind, principal branch (Re z > 0).
BesselEval bessel_K(double nu, Complex z);
Complex eval_K(double nu, Complex z);

// Modified Bessel function of the first kind, principal branch of (z/2)^nu.
BesselEval bessel_I(double nu, Complex z);
Complex eval_I(double nu, Complex z);

// Bessel functions of the first and second kind for real x > 0.
double eval_J(double nu, double x);
double eval_J_derivative(double nu, double x);
double eval_Y(double nu, double x);

BesselZeroTable bessel_zeros(double nu, int count);

double gamma_fn(double x);
double recip_gamma(double x);

// Derivative jets of x^{-mu} Z_mu(c x) for Z in {J, I, K}. Entry k is the k-th
// x-derivative. These families are smooth in x^2 and are the building blocks of
// the exact factors used throughout.
enum class BesselKind { J, I, K };
std::array<Complex, 5> scaled_bessel_jet(BesselKind kind, double mu, Complex c, double x);

// Same for x^{mu} Z_mu(c x).
std::array<Complex, 5> raised_bessel_jet(BesselKind kind, double mu, Complex c, double x);

}  // namespace sbvp
