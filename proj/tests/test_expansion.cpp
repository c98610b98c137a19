#include <doctest.h>

#include <cmath>

#include "sbvp/expansion.hpp"
#include "sbvp/json_util.hpp"
#include "sbvp/symbol_analysis.hpp"

using namespace sbvp;

namespace {

GridPtr unit_grid(double nu, int nodes = 256) {
  GradedOptions o;
  if (nu < 1.0) o.first_exponent = 1.0 - 2.0 * std::min(nu, 0.49);
  return make_grid(graded_grid(1.0, nodes, o));
}

GridFunction sample(GridPtr g, std::function<Complex(double)> f) {
  std::vector<Complex> v(g->size());
  for (int i = 0; i < g->size(); ++i) v[i] = f(g->nodes[i]);
  return sampled(g, v);
}

}  // namespace

TEST_CASE("indicial roots and resonance") {
  for (double nu : {0.2, 0.5, 0.75, 1.5, 2.5}) {
    const auto d = indicial(Order::make(nu));
    CHECK(d.polynomial(d.roots.first) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.polynomial(d.roots.second) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.roots.first - d.roots.second == doctest::Approx(2 * nu));
  }
  CHECK_FALSE(indicial(Order::make(0.5)).resonant);
  CHECK_FALSE(indicial(Order::make(1.0)).resonant);
  CHECK(indicial(Order::make(1.5)).resonant);
  CHECK(indicial(Order::make(2.5)).resonant);
  CHECK(indicial(Order::make(1.5 + 1e-9)).resonant);
  CHECK_FALSE(indicial(Order::make(1.5 + 1e-7)).resonant);
}

TEST_CASE("exact recovery on the power basis") {
  for (double nu : {0.3, 0.75, 1.25}) {
    const GridPtr g = unit_grid(nu);
    const Complex a(2.0, -0.5), b(3.0, 1.0);
    const auto u = sample(g, [=](double x) {
      return a * std::pow(x, 0.5 - nu) * (1.0 + 0.4 * x * x) + b * std::pow(x, 0.5 + nu) * (1.0 - 0.2 * x * x);
    });
    const ExpansionFit f = fit_expansion(u, Order::make(nu));
    CHECK(std::abs(f.g_minus - a) < 1e-10);
    CHECK(std::abs(f.g_plus - b) < 1e-10);
    CHECK_FALSE(f.has_log);
    CHECK(f.fit_residual < 1e-12);
  }
}

TEST_CASE("decaying mode coefficients") {
  for (double nu : {0.25, 0.75}) {
    const Order o = Order::make(nu);
    const Complex xi(0.0, -1.0);
    const auto m = mode_solution(o, xi, half_line_grid(o, xi));
    FitOptions opt;
    opt.x_hi = 0.05;
    const ExpansionFit f = fit_expansion(m.profile, o, opt);
    CHECK(std::abs(f.g_minus - m.traces.gamma_minus) < 1e-7);
    CHECK(std::abs(2.0 * nu * f.g_plus - m.traces.gamma_plus) < 1e-7);

    // The window can move without changing the answer.
    for (double hi : {0.03, 0.08}) {
      opt.x_hi = hi;
      const ExpansionFit h = fit_expansion(m.profile, o, opt);
      CHECK(std::abs(h.g_minus - f.g_minus) < 1e-6);
      CHECK(std::abs(h.g_plus - f.g_plus) < 1e-6);
    }
  }
}

TEST_CASE("resonant logarithm") {
  const double nu = 1.5;
  const GridPtr g = unit_grid(nu);
  const auto u = sample(g, [](double x) {
    return (1.0 + 0.3 * x * x) / x + 5.0 * x * x + 0.7 * x * x * std::log(x) + 0.2 * std::pow(x, 4);
  });
  FitOptions opt;
  opt.x_hi = 0.05;
  const ExpansionFit f = fit_expansion(u, Order::make(nu), opt);
  REQUIRE(f.has_log);
  CHECK(std::abs(f.g_log - 0.7) < 1e-6);
  CHECK(std::abs(f.g_plus - 5.0) < 1e-6);
  CHECK(std::abs(f.g_minus - 1.0) < 1e-6);

  // Just off resonance the log column is gone and the fit degrades without breaking.
  for (double off : {1.5 - 1e-3, 1.5 + 1e-3}) {
    const ExpansionFit n = fit_expansion(u, Order::make(off), opt);
    CHECK_FALSE(n.has_log);
    CHECK(n.fit_residual > f.fit_residual);
    CHECK(n.fit_residual < 1e-2);
  }
}

TEST_CASE("agreement with solver traces") {
  for (double nu : {0.25, 0.75}) {
    const Order o = Order::make(nu);
    const GridPtr g = unit_grid(nu);
    BVProblem p;
    p.op.nu = o;
    p.op.a = Coefficient::constant(1.0);
    const auto exact = power_sum(g, nu, {{0.5 + nu, poly_jet({1.0, -2.0, 1.0})}});
    p.rhs = apply(p.op, exact);
    if (o.subcritical()) p.bc0 = BoundaryOperator::dirichlet();
    p.grid = g;
    p.dof = 128;
    const Solution s = solve_1d(p);
    FitOptions opt;
    opt.integer_tail = true;
    opt.tail_terms = 1;
    opt.x_hi = 0.05;
    CHECK(expansion_consistency(s, o, opt) < 1e-6);

    BVProblem z = p;
    z.rhs.reset();
    CHECK(expansion_consistency(solve_1d(z), o, opt) < 1e-12);
  }
}

TEST_CASE("ill-conditioned windows are rejected") {
  const double nu = 0.75;
  const GridPtr g = make_grid(composite_grid({0.0, 0.5, 0.51, 1.0}, 16));
  const auto u = sample(g, [=](double x) { return std::pow(x, 0.5 - nu); });
  FitOptions opt;
  opt.x_lo = 0.5;
  opt.x_hi = 0.51;
  opt.tail_terms = 3;
  CHECK_THROWS_AS(fit_expansion(u, Order::make(nu), opt), Error);
  try {
    fit_expansion(u, Order::make(nu), opt);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllConditionedFit);
  }
}

TEST_CASE("fit JSON") {
  const GridPtr g = unit_grid(0.3);
  const auto u = sample(g, [](double x) { return std::pow(x, 0.2); });
  const Json j = Json::parse(to_json(fit_expansion(u, Order::make(0.3))));
  CHECK(j["g_minus"]["re"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(j["has_log"].get<bool>());
  CHECK(j.contains("window"));
}
