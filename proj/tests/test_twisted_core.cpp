#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sbvp/bessel_operator.hpp"
#include "sbvp/special_fn.hpp"
#include "sbvp/symbol_analysis.hpp"

using namespace sbvp;

namespace {

GridPtr unit_grid(double nu, int nodes = 256, double L = 1.0) {
  GradedOptions o;
  if (nu < 1.0) o.first_exponent = 1.0 - 2.0 * nu;
  return make_grid(graded_grid(L, nodes, o));
}

double max_abs(const GridFunction& u) {
  double m = 0.0;
  for (Complex v : u.values) m = std::max(m, std::abs(v));
  return m;
}

// Polynomial factors vanishing at x = 1, so both ends are clean.
JetFn random_factor(std::mt19937& rng, int terms = 3) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Complex> c;
  for (int k = 0; k < terms; ++k) c.emplace_back(U(rng), U(rng));
  return product_jet(even_poly_jet(c), even_poly_jet({1.0, -1.0}));
}

}  // namespace

TEST_CASE("d_nu on monomials") {
  for (double nu : {0.25, 0.4, 0.75, 1.5}) {
    const Order o = Order::make(nu);
    auto g = unit_grid(nu);
    const auto minus = power_sum(g, nu, {{0.5 - nu, constant_jet(1.0)}});
    CHECK(max_abs(d_nu(minus, o)) < 1e-12);
    const auto plus = power_sum(g, nu, {{0.5 + nu, constant_jet(1.0)}});
    const auto d = d_nu(plus, o);
    double err = 0.0;
    for (int i = 0; i < g->size(); ++i)
      err = std::max(err, std::abs(d.values[i] - 2.0 * nu * std::pow(g->nodes[i], nu - 0.5)) /
                              std::max(1.0, std::pow(g->nodes[i], nu - 0.5)));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("d_nu against a symbolic derivative") {
  const double nu = 0.4;
  const Order o = Order::make(nu);
  auto g = unit_grid(nu);
  const JetFn ex = [](double x) {
    const double e = std::exp(-x);
    return Jet{e, -e, e, -e, e};
  };
  const auto u = power_sum(g, nu, {{0.5 + nu, ex}});
  const auto d = d_nu(u, o);
  for (int i = 0; i < g->size(); ++i) {
    const double x = g->nodes[i];
    const double exact = (2 * nu * std::pow(x, nu - 0.5) - std::pow(x, nu + 0.5)) * std::exp(-x);
    CHECK(std::abs(d.values[i] - exact) < 1e-9 * std::max(1.0, std::fabs(exact)));
  }
}

TEST_CASE("d_nu_star on monomials") {
  for (double nu : {0.3, 0.75}) {
    const Order o = Order::make(nu);
    auto g = unit_grid(nu);
    const auto a = d_nu_star(power_sum(g, nu, {{0.5 - nu, constant_jet(1.0)}}), o);
    const auto b = d_nu_star(power_sum(g, nu, {{0.5 + nu, constant_jet(1.0)}}), o);
    for (int i = 0; i < g->size(); i += 5) {
      const double x = g->nodes[i];
      const double ea = -(1 - 2 * nu) * std::pow(x, -nu - 0.5);
      const double eb = -std::pow(x, nu - 0.5);
      CHECK(std::abs(a.values[i] - ea) < 1e-10 * std::fabs(ea));
      CHECK(std::abs(b.values[i] - eb) < 1e-10 * std::fabs(eb));
    }
  }
}

TEST_CASE("formal adjoint without boundary terms") {
  std::mt19937 rng(3);
  for (double nu : {0.3, 0.75, 1.5}) {
    const Order o = Order::make(nu);
    auto g = unit_grid(nu);
    // x^2 (1 - x^2) q(x): vanishes to second order at both ends.
    for (int k = 0; k < 5; ++k) {
      const auto u = from_jet(g, product_jet(poly_jet({0.0, 0.0, 1.0}), random_factor(rng)));
      const auto v = from_jet(g, product_jet(poly_jet({0.0, 0.0, 1.0}), random_factor(rng)));
      CHECK(std::abs(inner(d_nu(u, o), v) - inner(u, d_nu_star(v, o))) < 1e-8);
    }
  }
}

TEST_CASE("factorization reproduces the singular operator") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double nu : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    const Order o = Order::make(nu);
    auto g = unit_grid(nu);
    const double cm0 = U(rng), cm1 = U(rng), cp0 = U(rng), cp1 = U(rng);
    const auto u = fnu_pair(g, nu, even_poly_jet({cm0, cm1}), even_poly_jet({cp0, cp1}));
    const auto L = bessel_laplacian(u, o);
    // Each summand c x^p: (-p(p-1) + nu^2 - 1/4) c x^{p-2}.
    const std::vector<std::pair<double, double>> terms{
        {0.5 - nu, cm0}, {2.5 - nu, cm1}, {0.5 + nu, cp0}, {2.5 + nu, cp1}};
    for (int i = 0; i < g->size(); i += 3) {
      const double x = g->nodes[i];
      double exact = 0.0, size = 0.0;
      for (auto [p, c] : terms) {
        const double t = (-p * (p - 1) + nu * nu - 0.25) * c * std::pow(x, p - 2);
        exact += t;
        size += std::fabs(t) + std::fabs(c * std::pow(x, p - 2));
      }
      CHECK(std::abs(L.values[i] - exact) < 1e-8 * size);
    }
  }
}

TEST_CASE("twisted norms") {
  const double nu = 0.6;
  const Order o = Order::make(nu);
  auto g = unit_grid(nu);
  CHECK(twisted_norm(zero_function(g), 0, o) == 0.0);

  // u = x^{1/2+nu} x^2 (1-x)^2 with q = (2): compare with Gauss-Legendre on the symbolic integrand.
  const auto u = with_fourier_index(power_sum(g, nu, {{2.5 + nu, poly_jet({1.0, -2.0, 1.0})}}), {2});
  const double n1 = twisted_norm(u, 1, o);
  const QuadRule r = gauss_legendre(80);
  double uu = 0.0, du = 0.0;
  for (size_t k = 0; k < r.nodes.size(); ++k) {
    const double x = 0.5 * (r.nodes[k] + 1), w = 0.5 * r.weights[k];
    const double p = 2.5 + nu;
    const double val = std::pow(x, p) * (1 - x) * (1 - x);
    // d_nu = d_x + (nu - 1/2)/x.
    const double der = p * std::pow(x, p - 1) * (1 - x) * (1 - x) - 2 * std::pow(x, p) * (1 - x) + (nu - 0.5) * val / x;
    uu += w * val * val;
    du += w * der * der;
  }
  CHECK(std::fabs(n1 * n1 - (uu + du + 4 * uu)) < 1e-8 * (uu + du + 4 * uu));
}

TEST_CASE("Fourier norm identity under dilation") {
  const double nu = 0.7;
  const Order o = Order::make(nu);
  auto g = unit_grid(nu, 512, 40.0);
  const JetFn gauss = [](double x) {
    const double e = std::exp(-x * x);
    return Jet{e, -2 * x * e, (4 * x * x - 2) * e, (12 * x - 8 * x * x * x) * e,
               (16 * x * x * x * x - 48 * x * x + 12) * e};
  };
  const auto base = power_sum(g, nu, {{0.5 + nu, gauss}});
  double total = 0.0, dilated = 0.0;
  for (std::vector<int> q : {std::vector<int>{1, 0}, std::vector<int>{2, 2}}) {
    const auto u = with_fourier_index(base, q);
    total += std::pow(twisted_norm(u, 1, o), 2);
    const double bracket = std::sqrt(1.0 + q[0] * q[0] + q[1] * q[1]);
    const auto v = with_fourier_index(dilate(base, 1.0 / bracket), {0, 0});
    dilated += bracket * std::pow(twisted_norm(v, 1, o), 2);
  }
  CHECK(std::fabs(total - dilated) < 1e-8 * total);
}

TEST_CASE("traces of exact members") {
  for (double nu : {0.25, 0.5, 0.75}) {
    const Order o = Order::make(nu);
    auto g = unit_grid(nu);
    const auto a = traces(power_sum(g, nu, {{0.5 - nu, constant_jet(1.0)}}), o);
    CHECK(std::abs(a.gamma_minus - 1.0) < 1e-14);
    CHECK(std::abs(a.gamma_plus) < 1e-14);
    const auto b = traces(power_sum(g, nu, {{0.5 + nu, constant_jet(1.0)}}), o);
    CHECK(std::abs(b.gamma_minus) < 1e-14);
    CHECK(std::abs(b.gamma_plus - 2 * nu) < 1e-14);

    const Complex xi(0.0, -1.0);
    const auto m = mode_solution(o, xi, half_line_grid(o, xi));
    const auto t = traces(m.profile, o);
    const double expected = -2 * nu * std::tgamma(1 - nu) / std::tgamma(1 + nu) * std::pow(2.0, -2 * nu);
    CHECK(std::abs(t.gamma_minus - 1.0) < 1e-10);
    CHECK(std::abs(t.gamma_plus - expected) < 1e-10);
  }
}

TEST_CASE("sampled traces use the extrapolation fit") {
  const double nu = 0.3;
  const Order o = Order::make(nu);
  auto g = unit_grid(nu);
  const auto exact = fnu_pair(g, nu, even_poly_jet({2.0, 1.0}), even_poly_jet({3.0, -1.0}));
  const auto t = traces(sampled(g, exact.values), o);
  CHECK(std::abs(t.gamma_minus - 2.0) < 1e-6);
  CHECK(std::abs(t.gamma_plus - 6 * nu) < 1e-5);
}

TEST_CASE("Green identity on random pairs") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double nu : {0.25, 0.5, 0.75}) {
    const Order o = Order::make(nu);
    auto g = unit_grid(nu);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const auto u = fnu_pair(g, nu, random_factor(rng), random_factor(rng));
      const auto v = fnu_pair(g, nu, random_factor(rng), random_factor(rng));
      BesselOperator P;
      P.nu = o;
      P.a = Coefficient::constant(Complex(1.0 + U(rng), U(rng)));
      P.b = Coefficient::linear(Complex(U(rng), U(rng)));
      worst = std::max(worst, green_defect(P, u, v));
    }
    CHECK(worst < 1e-7);
  }
  for (double nu : {1.0, 1.5}) {
    const Order o = Order::make(nu);
    auto g = unit_grid(nu);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      // x^2 vanishing at the singular end plays the role of compact support.
      const auto u = power_sum(g, nu, {{2.5 + nu, random_factor(rng)}});
      const auto v = power_sum(g, nu, {{2.5 + nu, random_factor(rng)}});
      BesselOperator P;
      P.nu = o;
      P.a = Coefficient::constant(1.0);
      P.b = Coefficient::linear(Complex(U(rng), U(rng)));
      worst = std::max(worst, green_defect(P, u, v));
    }
    CHECK(worst < 1e-7);
  }
  auto g = unit_grid(0.5);
  BesselOperator P;
  P.nu = Order::make(0.5);
  CHECK(green_defect(P, zero_function(g), zero_function(g)) == 0.0);
}

TEST_CASE("Hardy inequality") {
  auto g = unit_grid(0.3);
  const auto z = hardy_check(zero_function(g), Order::make(0.3));
  CHECK(z.lhs == 0.0);
  CHECK(z.pass);
  const auto a = hardy_check(from_jet(g, poly_jet({0, 0, 1, -2, 1})), Order::make(0.3));
  CHECK(a.pass);
  CHECK(a.lhs > 0.0);
  const JetFn s = [](double x) {
    const double p = kPi;
    const double sn = std::sin(p * x), cs = std::cos(p * x);
    return Jet{x * sn, sn + p * x * cs, 2 * p * cs - p * p * x * sn, -3 * p * p * sn - p * p * p * x * cs,
               -4 * p * p * p * cs + p * p * p * p * x * sn};
  };
  CHECK(hardy_check(from_jet(g, s), Order::make(0.7)).pass);

  std::mt19937 rng(17);
  for (double nu : {0.2, 0.45, 0.7, 1.5}) {
    auto gn = unit_grid(nu);
    int passed = 0;
    for (int k = 0; k < 100; ++k) {
      const auto u = from_jet(gn, product_jet(poly_jet({0.0, 0.0, 1.0}), random_factor(rng, 4)));
      passed += hardy_check(u, Order::make(nu)).pass;
    }
    CHECK(passed == 100);
  }
}

TEST_CASE("plain differentiation diagnostics and CSV round trip") {
  const double nu = 0.75;
  const Order o = Order::make(nu);
  auto g = unit_grid(nu);
  const JetFn wave = [](double x) {
    const double c = std::cos(3 * x), s = std::sin(3 * x);
    return Jet{s, 3 * c, -9 * s, -27 * c, 81 * s};
  };
  const auto smooth = power_sum(g, nu, {{0.5 - nu, wave}});
  DiffDiagnostics diag;
  const auto d = d_nu_checked(sampled(g, smooth.values), o, &diag);
  const auto de = d_nu(smooth, o);
  double err = 0.0;
  for (int i = 0; i < g->size(); ++i) err = std::max(err, std::abs(d.values[i] - de.values[i]));
  CHECK(err < 1e-6);
  CHECK(diag.error_estimate < 1e-6);

  // x^{2 nu} after untwisting is not resolved by the polynomial stencil at the first element.
  const auto exact = power_sum(g, nu, {{0.5 + nu, poly_jet({1.0, -2.0, 1.0})}});
  CHECK_THROWS_AS(d_nu_checked(sampled(g, exact.values), o, &diag), Error);

  std::stringstream ss;
  write_csv(exact, ss);
  const std::string path = "twisted_core_roundtrip.csv";
  write_csv(exact, path);
  const auto back = read_csv(path);
  REQUIRE(back.size() == exact.size());
  for (int i = 0; i < back.size(); ++i) CHECK(back.values[i] == exact.values[i]);
  std::remove(path.c_str());
}
