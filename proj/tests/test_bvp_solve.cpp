#include <doctest.h>

#include <cmath>

#include "sbvp/bvp_solve.hpp"
#include "sbvp/special_fn.hpp"
#include "sbvp/spectral_modes.hpp"

using namespace sbvp;

namespace {

GridPtr unit_grid(const Order& nu, int nodes = 256) {
  GradedOptions o;
  if (nu.subcritical()) o.first_exponent = 1.0 - 2.0 * nu.nu;
  return make_grid(graded_grid(1.0, nodes, o));
}

BesselOperator shifted_laplacian(const Order& nu, Complex a = 1.0) {
  BesselOperator P;
  P.nu = nu;
  P.a = Coefficient::constant(a);
  P.fourier_symbol = [](const std::vector<int>& q) {
    double s = 0.0;
    for (int k : q) s += double(k) * k;
    return Complex(s);
  };
  return P;
}

std::optional<BoundaryOperator> dirichlet_if_needed(const Order& nu) {
  if (nu.subcritical()) return BoundaryOperator::dirichlet();
  return std::nullopt;
}

// sqrt(x) J_nu(j x) = x^{1/2+nu} [x^{-nu} J_nu(j x)].
GridFunction eigenfunction(const Order& nu, GridPtr g, double j) {
  const double n = nu.nu;
  return power_sum(g, n, {{0.5 + n, [n, j](double x) {
                              auto a = scaled_bessel_jet(BesselKind::J, n, j, x);
                              return Jet{a[0], a[1], a[2], a[3], a[4]};
                            }}});
}

GridFunction manufactured(const Order& nu, GridPtr g) {
  return power_sum(g, nu.nu, {{0.5 + nu.nu, poly_jet({1.0, -2.0, 1.0})}});
}

}  // namespace

TEST_CASE("half-line Dirichlet data reproduces the decaying mode") {
  for (double nuv : {0.5, 0.75}) {
    const Order nu = Order::make(nuv);
    const Complex xi(0.0, -1.0);
    const GridPtr g = half_line_grid(nu, xi);
    const auto m = mode_solution(nu, xi, g);
    BVProblem p;
    p.op = shifted_laplacian(nu);
    p.bc0 = BoundaryOperator::dirichlet();
    p.bc1 = FarEnd::Decay;
    p.boundary_data = {1.0};
    p.grid = g;
    p.check_truncation = true;
    const Solution s = solve_1d(p);
    CHECK(twisted_norm(s.u - m.profile, 1, nu) < 1e-7);
    CHECK(std::abs(s.traces.gamma_minus - 1.0) < 1e-10);
    CHECK(std::abs(s.traces.gamma_plus - m.traces.gamma_plus) < 1e-7);
    CHECK(s.truncation_error < 1e-6);
  }
}

TEST_CASE("manufactured solutions converge") {
  for (double nuv : {0.25, 0.75, 1.0, 1.5}) {
    const Order nu = Order::make(nuv);
    const GridPtr g = unit_grid(nu);
    const BesselOperator P = shifted_laplacian(nu);
    const auto exact = manufactured(nu, g);
    const auto f = apply(P, exact);
    BVProblem p;
    p.op = P;
    p.bc0 = dirichlet_if_needed(nu);
    p.rhs = f;
    p.grid = g;
    std::vector<double> err;
    for (int dof : {64, 128, 256}) {
      p.dof = dof;
      const Solution s = solve_1d(p);
      err.push_back(twisted_norm(s.u - exact, 1, nu));
      if (dof == 256) CHECK(s.residual_norm < 1e-6);
    }
    CHECK(err.back() < 1e-6);
    // Exact for half-integer-spaced exponents, algebraic otherwise.
    if (err[0] > 1e-12) CHECK(std::log2(err[1] / err[2]) > 2.0);
  }
}

TEST_CASE("homogeneous problems have the zero solution") {
  for (double nuv : {0.3, 0.75, 1.5}) {
    const Order nu = Order::make(nuv);
    BVProblem p;
    p.op = shifted_laplacian(nu);
    p.bc0 = dirichlet_if_needed(nu);
    p.grid = unit_grid(nu);
    p.dof = 64;
    const Solution s = solve_1d(p);
    CHECK(norm_l2(s.u) < 1e-10);
  }
}

TEST_CASE("Dirichlet Laplacian solves") {
  for (double nuv : {0.3, 0.75, 1.5}) {
    const Order nu = Order::make(nuv);
    const GridPtr g = unit_grid(nu);
    const double j = bessel_zeros(nuv, 1).zeros[0];
    const auto f = eigenfunction(nu, g, j);
    const Solution s = solve_dirichlet_laplacian(nu, 1.0, f, 128);
    CHECK(twisted_norm(s.u - (1.0 / (1.0 + j * j)) * f, 1, nu) < 1e-7);

    const Solution z = solve_dirichlet_laplacian(nu, 1.0, zero_function(g), 64);
    CHECK(norm_l2(z.u) < 1e-12);

    const auto r = power_sum(g, nuv, {{0.5 + nuv, even_poly_jet({0.3, Complex(0.1, -1.0), 2.0, -0.7})}});
    const Solution c = solve_dirichlet_laplacian(nu, 2.0, r, 256);
    // Low orders converge algebraically in x^{2 nu}; 1e-8 is reached from nu = 3/4 on at this size.
    CHECK(c.residual_norm < (nuv < 0.5 ? 1e-7 : 1e-8));
    const Complex form = inner(apply(shifted_laplacian(nu, 2.0), c.u), c.u);
    CHECK(form.real() > 0.0);
  }
  const Order nu = Order::make(0.5);
  const GridPtr g = unit_grid(nu);
  CHECK_THROWS_AS(solve_dirichlet_laplacian(nu, -1.0, zero_function(g)), Error);
  CHECK_THROWS_AS(solve_dirichlet_laplacian(nu, 0.0, zero_function(g)), Error);
  try {
    solve_dirichlet_laplacian(nu, -2.0, zero_function(g));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpectralParameterOnCut);
  }
}

TEST_CASE("separable solves") {
  const Order nu = Order::make(0.75);
  const GridPtr g = unit_grid(nu);
  const BesselOperator P = shifted_laplacian(nu);
  const auto bc = dirichlet_if_needed(nu);

  // A single mode decouples: the same as the one-dimensional solve.
  const auto f0 = with_fourier_index(manufactured(nu, g), {0, 0});
  BVProblem p;
  p.op = P;
  p.bc0 = bc;
  p.rhs = f0;
  p.grid = g;
  p.dof = 128;
  p.q = {0, 0};
  const Solution one = solve_1d(p);
  const SeparableSolution sep = solve_separable(P, bc, {f0}, 4, 128);
  REQUIRE(sep.modes.size() == 1);
  CHECK(norm_l2(sep.modes[0].u - one.u) < 1e-14);

  // Eigenfunction at q = (1, 0): eigenvalue 1 + 1 + j^2.
  const double j = bessel_zeros(0.75, 1).zeros[0];
  const auto e = with_fourier_index(eigenfunction(nu, g, j), {1, 0});
  // Manufactured pair in modes (0, 2) and (3, -1).
  const auto u1 = with_fourier_index(manufactured(nu, g), {0, 2});
  const auto u2 = with_fourier_index(power_sum(g, 0.75, {{1.25, poly_jet({Complex(0, 2), 0.0, Complex(0, -2)})}}),
                                     {3, -1});
  const SeparableSolution s = solve_separable(P, bc, {e, apply(P, u1), apply(P, u2)}, 8, 256);
  CHECK(twisted_norm(s.modes[0].u - (1.0 / (2.0 + j * j)) * e, 1, nu) < 1e-7);
  CHECK(twisted_norm(s.modes[1].u - u1, 1, nu) < 1e-7);
  CHECK(twisted_norm(s.modes[2].u - u2, 1, nu) < 1e-7);
}

TEST_CASE("condition estimates are uniform across tangential modes") {
  for (double nuv : {0.3, 0.75, 1.5}) {
    const Order nu = Order::make(nuv);
    const SeparableSolution s = solve_separable(shifted_laplacian(nu), dirichlet_if_needed(nu), {}, 64, 128);
    CHECK(s.probe_q.size() >= 7);
    CHECK(s.uniform);
    CHECK(s.condition_spread < 10.0);
  }
}

TEST_CASE("Poisson lifts") {
  for (double nuv : {0.3, 0.5, 0.75}) {
    const Order nu = Order::make(nuv);
    const GridPtr g = unit_grid(nu);
    for (int k : {0, 1, 3, 16}) {
      const std::vector<int> q{k, k / 2};
      if (k * k + (k / 2) * (k / 2) > 256) continue;
      BesselOperator P = shifted_laplacian(nu);
      for (LiftSide side : {LiftSide::AtZero, LiftSide::AtOne}) {
        const Complex phi(1.5, -0.5);
        const auto v = poisson_lift(nu, side, q, phi, g);
        const auto r = apply(P, v);
        double worst = 0.0;
        for (int i = 0; i < g->size(); ++i)
          worst = std::max(worst, std::abs(r.values[i]) / std::max(1.0, std::abs(v.values[i])));
        CHECK(worst < 1e-8);
        const auto t = traces(v, nu);
        if (side == LiftSide::AtZero) {
          CHECK(std::abs(t.gamma_minus - phi) < 1e-10);
          CHECK(std::abs(v.eval(1.0)) < 1e-9);
        } else {
          CHECK(std::abs(t.gamma_minus) < 1e-10);
          CHECK(std::abs(v.eval(1.0) - phi) < 1e-9);
        }
      }
    }
  }
  // nu = 1/2, q = 0: sinh(x) / sinh(1).
  const Order half = Order::make(0.5);
  const GridPtr g = unit_grid(half);
  const auto v = poisson_lift(half, LiftSide::AtOne, {0}, 1.0, g);
  for (int i = 0; i < g->size(); i += 9)
    CHECK(std::abs(v.values[i] - std::sinh(g->nodes[i]) / std::sinh(1.0)) < 1e-13);
  CHECK_THROWS_AS(poisson_lift(Order::make(1.5), LiftSide::AtZero, {0}, 1.0, g), Error);
  CHECK_THROWS_AS(poisson_lift(half, LiftSide::AtOne, {600}, 1.0, g), Error);
}

TEST_CASE("regularity determinant") {
  const Order nu = Order::make(0.3);
  CHECK(std::abs(regularity_det(nu, BoundaryOperator::dirichlet(), 1.0, {0}, 0.0)) > 0.5);
  // gamma_+ + beta gamma_- with beta = -gamma_+(mode) annihilates the decaying solution.
  const Complex gp = mode_gamma_plus(0.3, Complex(0.0, -1.0));
  CHECK(std::abs(regularity_det(nu, BoundaryOperator::robin(-gp), 1.0, {0}, 0.0)) < 1e-12);
  BVProblem p;
  p.op = shifted_laplacian(nu);
  p.bc0 = BoundaryOperator::robin(-gp);
  p.bc1 = FarEnd::Decay;
  CHECK_THROWS_AS(solve_1d(p), Error);
}

TEST_CASE("resolvent sweep") {
  const Order nu = Order::make(0.75);
  BesselOperator P = shifted_laplacian(nu, 0.0);
  P.pencil = PencilCoeffs{};
  const auto rows = resolvent_sweep(P, BoundaryOperator::dirichlet(), Sector::around(0.0, kPi / 4), {4, 8, 16, 32});
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK_FALSE(r.singular);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio < 10.0);
  }
  CHECK(resolvent_decay_ok(rows));

  // lambda = i j at a discrete eigenvalue of the same space.
  const int dof = 64;
  const double mu = dirichlet_eigenvalues(nu, dof)[0] - 1.0;
  ResolventOptions opt;
  opt.dof = dof;
  opt.rays = 1;
  const auto sing = resolvent_sweep(P, BoundaryOperator::dirichlet(), Sector{{{kPi / 2, kPi / 2}}},
                                    {std::sqrt(mu)}, opt);
  CHECK(sing[0].singular);

  // lambda = 0 is the plain solve.
  const GridPtr g = unit_grid(nu);
  const auto f = manufactured(nu, g);
  BVProblem a;
  a.op = P;
  a.bc0 = BoundaryOperator::dirichlet();
  a.rhs = f;
  a.grid = g;
  a.dof = 64;
  BVProblem b = a;
  b.op.pencil.reset();
  CHECK(norm_l2(solve_1d(a).u - solve_1d(b).u) < 1e-14);
}
