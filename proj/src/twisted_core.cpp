#include "sbvp/twisted_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/LU>

namespace sbvp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSamePower = 1e-13;

Jet nan_jet() {
  Jet j;
  j.fill(Complex(kNaN, kNaN));
  return j;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Jet safe_eval(const JetFn& f, double x) {
  try {
    Jet j = f(x);
    return j;
  } catch (const Error&) {
    return nan_jet();
  }
}

PowerTerm make_term(const RadialGrid& g, double power, JetFn f) {
  PowerTerm t;
  t.power = power;
  t.jets.resize(g.size());
  for (int i = 0; i < g.size(); ++i) t.jets[i] = f(g.nodes[i]);
  t.at_zero = safe_eval(f, 0.0);
  t.has_zero = finite(t.at_zero[0]);
  t.gen = std::move(f);
  return t;
}

Rep classify(const std::vector<PowerTerm>& terms, double nu) {
  if (terms.empty()) return Rep::Plain;
  for (const auto& t : terms) {
    if (std::fabs(t.power - (0.5 - nu)) > kSamePower && std::fabs(t.power - (0.5 + nu)) > kSamePower) {
      return Rep::Plain;
    }
  }
  return Rep::FnuPair;
}

void refresh_values(GridFunction& u) {
  const auto& x = u.grid->nodes;
  u.values.assign(x.size(), 0.0);
  for (const auto& t : u.terms) {
    for (size_t i = 0; i < x.size(); ++i) u.values[i] += std::pow(x[i], t.power) * t.jets[i][0];
  }
  u.rep = classify(u.terms, u.nu);
}

void merge_terms(std::vector<PowerTerm>& terms) {
  std::vector<PowerTerm> out;
  for (auto& t : terms) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const PowerTerm& o) { return std::fabs(o.power - t.power) < kSamePower; });
    if (it == out.end()) {
      out.push_back(std::move(t));
      continue;
    }
    for (size_t i = 0; i < it->jets.size(); ++i) {
      for (int k = 0; k < 5; ++k) it->jets[i][k] += t.jets[i][k];
    }
    for (int k = 0; k < 5; ++k) it->at_zero[k] += t.at_zero[k];
    it->has_zero = it->has_zero && t.has_zero;
    it->valid_order = std::min(it->valid_order, t.valid_order);
    if (it->gen && t.gen) {
      JetFn f = it->gen, g = t.gen;
      it->gen = [f, g](double x) {
        Jet a = f(x), b = g(x);
        for (int k = 0; k < 5; ++k) a[k] += b[k];
        return a;
      };
    } else {
      it->gen = nullptr;
    }
  }
  terms.swap(out);
}

void check_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid != b.grid && (a.grid->nodes != b.grid->nodes)) {
    throw Error(ErrorKind::Domain, "grid functions live on different grids");
  }
}

// x^p F -> x^{p-1} H with H = sign * (c F + x F'), so H^{(k)} = sign * ((c + k) F^{(k)} + x F^{(k+1)}).
// When c vanishes the power is kept and H = sign * F'. Node jets are filled by the caller.
Jet first_order_jet(const Jet& F, double x, double c, double sign, bool keep) {
  Jet H = nan_jet();
  for (int k = 0; k < 4; ++k) H[k] = keep ? sign * F[k + 1] : sign * ((c + k) * F[k] + x * F[k + 1]);
  return H;
}

PowerTerm first_order_term(const PowerTerm& t, double c, double sign) {
  PowerTerm r;
  const bool keep = std::fabs(c) < 1e-14;
  r.power = keep ? t.power : t.power - 1.0;
  r.valid_order = t.valid_order - 1;
  Jet z = nan_jet();
  for (int k = 0; k < 4; ++k) z[k] = keep ? sign * t.at_zero[k + 1] : sign * (c + k) * t.at_zero[k];
  r.at_zero = z;
  r.has_zero = t.has_zero && finite(z[0]);
  if (t.gen) {
    JetFn g = t.gen;
    r.gen = [g, c, sign, keep](double x) { return first_order_jet(g(x), x, c, sign, keep); };
  }
  return r;
}

enum class FirstOrder { DNu, DNuStar, DX };

GridFunction apply_first_order(const GridFunction& u, double nu, FirstOrder kind, DiffDiagnostics* diag);

// Legendre values and derivatives at t for degrees 0..m-1.
void legendre_table(double t, int m, double* p, double* dp) {
  p[0] = 1.0;
  dp[0] = 0.0;
  if (m > 1) {
    p[1] = t;
    dp[1] = 1.0;
  }
  for (int k = 1; k + 1 < m; ++k) {
    p[k + 1] = ((2.0 * k + 1.0) * t * p[k] - k * p[k - 1]) / (k + 1.0);
    dp[k + 1] = dp[k - 1] + (2.0 * k + 1.0) * p[k];
  }
}

// Legendre coefficients of the interpolant of f on one element.
CVec element_coefficients(const RadialGrid& g, const GridElement& el, const Complex* f) {
  const int m = el.count;
  RMat V(m, m);
  std::vector<double> p(m), dp(m);
  for (int i = 0; i < m; ++i) {
    const double t = (2.0 * g.nodes[el.first + i] - el.a - el.b) / (el.b - el.a);
    legendre_table(t, m, p.data(), dp.data());
    for (int k = 0; k < m; ++k) V(i, k) = p[k];
  }
  CVec rhs(m);
  for (int i = 0; i < m; ++i) rhs(i) = f[i];
  return V.cast<Complex>().partialPivLu().solve(rhs);
}

// Derivative of the element interpolant at its nodes, plus the same with the two
// highest coefficients dropped (error proxy).
void element_derivative(const RadialGrid& g, const GridElement& el, const Complex* f, Complex* df,
                        Complex* df_trunc) {
  const int m = el.count;
  const CVec c = element_coefficients(g, el, f);
  std::vector<double> p(m), dp(m);
  const double scale = 2.0 / (el.b - el.a);
  for (int i = 0; i < m; ++i) {
    const double t = (2.0 * g.nodes[el.first + i] - el.a - el.b) / (el.b - el.a);
    legendre_table(t, m, p.data(), dp.data());
    Complex s = 0.0, st = 0.0;
    for (int k = 0; k < m; ++k) {
      s += c(k) * dp[k];
      if (k < m - 2) st += c(k) * dp[k];
    }
    df[i] = s * scale;
    df_trunc[i] = st * scale;
  }
}

std::vector<Complex> sampled_derivative(const RadialGrid& g, const std::vector<Complex>& f, double* rel_err) {
  std::vector<Complex> df(f.size()), dft(f.size());
  for (const auto& el : g.elements) {
    element_derivative(g, el, f.data() + el.first, df.data() + el.first, dft.data() + el.first);
  }
  if (rel_err) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
      num += g.weights[i] * std::norm(df[i] - dft[i]);
      den += g.weights[i] * std::norm(df[i]);
    }
    *rel_err = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  return df;
}

GridFunction apply_first_order(const GridFunction& u, double nu, FirstOrder kind, DiffDiagnostics* diag) {
  double alpha = 0.0, sign = 1.0;
  switch (kind) {
    case FirstOrder::DNu: alpha = nu - 0.5; break;
    case FirstOrder::DNuStar: alpha = 0.5 - nu; sign = -1.0; break;
    case FirstOrder::DX: alpha = 0.0; break;
  }
  GridFunction r;
  r.grid = u.grid;
  r.fourier_index = u.fourier_index;
  r.nu = u.nu;
  const auto& x = u.grid->nodes;
  if (u.analytic()) {
    if (diag) diag->error_estimate = 0.0;
    for (const auto& t : u.terms) {
      if (t.valid_order < 1) throw Error(ErrorKind::Domain, "derivative order exhausted");
      const double c = t.power + alpha;
      PowerTerm nt = first_order_term(t, c, sign);
      const bool keep = std::fabs(c) < 1e-14;
      nt.jets.resize(x.size());
      for (size_t i = 0; i < x.size(); ++i) nt.jets[i] = first_order_jet(t.jets[i], x[i], c, sign, keep);
      r.terms.push_back(std::move(nt));
    }
    merge_terms(r.terms);
    refresh_values(r);
    return r;
  }
  // Sampled data: differentiate x^{alpha} u elementwise, then undo the weight.
  std::vector<Complex> w(x.size());
  for (size_t i = 0; i < x.size(); ++i) w[i] = std::pow(x[i], alpha) * u.values[i];
  double err = 0.0;
  const auto dw = sampled_derivative(*u.grid, w, &err);
  if (diag) diag->error_estimate = err;
  if (err > tolerances().stencil_error) {
    std::ostringstream os;
    os << "estimated relative derivative error " << err << " exceeds " << tolerances().stencil_error;
    throw Error(ErrorKind::GridTooCoarse, os.str());
  }
  r.values.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) r.values[i] = sign * std::pow(x[i], -alpha) * dw[i];
  r.rep = Rep::Plain;
  return r;
}

}  // namespace

Order Order::make(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorKind::BFViolated, "order nu must be real and positive");
  Order o;
  o.nu = nu;
  if (std::fabs(nu - 1.0) < tolerances().integer_order) {
    o.regime = Regime::Critical;
  } else if (nu < 1.0) {
    o.regime = Regime::SubCritical;
  } else {
    o.regime = Regime::SuperCritical;
  }
  return o;
}

bool GridFunction::evaluable() const {
  if (!analytic()) return true;
  return std::all_of(terms.begin(), terms.end(), [](const PowerTerm& t) { return bool(t.gen); });
}

Complex GridFunction::eval(double x) const {
  if (analytic()) {
    Complex s = 0.0;
    for (const auto& t : terms) {
      if (!t.gen) throw Error(ErrorKind::Domain, "term has no generator");
      s += std::pow(x, t.power) * t.gen(x)[0];
    }
    return s;
  }
  const RadialGrid& g = *grid;
  for (const auto& el : g.elements) {
    if (x < el.a || x > el.b) continue;
    const CVec c = element_coefficients(g, el, values.data() + el.first);
    std::vector<double> p(el.count), dp(el.count);
    legendre_table((2.0 * x - el.a - el.b) / (el.b - el.a), el.count, p.data(), dp.data());
    Complex s = 0.0;
    for (int k = 0; k < el.count; ++k) s += c(k) * p[k];
    return s;
  }
  throw Error(ErrorKind::Domain, "evaluation point outside the grid");
}

double GridFunction::q_squared() const {
  double s = 0.0;
  for (int q : fourier_index) s += double(q) * q;
  return s;
}

GridPtr make_grid(RadialGrid g) { return std::make_shared<const RadialGrid>(std::move(g)); }

GridFunction sampled(GridPtr grid, std::vector<Complex> values) {
  if (static_cast<int>(values.size()) != grid->size()) throw Error(ErrorKind::Domain, "sample count mismatch");
  GridFunction u;
  u.grid = std::move(grid);
  u.values = std::move(values);
  return u;
}

GridFunction power_sum(GridPtr grid, double nu, std::vector<std::pair<double, JetFn>> terms) {
  GridFunction u;
  u.grid = std::move(grid);
  u.nu = nu;
  for (auto& [p, f] : terms) u.terms.push_back(make_term(*u.grid, p, std::move(f)));
  merge_terms(u.terms);
  refresh_values(u);
  return u;
}

GridFunction from_jet(GridPtr grid, JetFn f) { return power_sum(std::move(grid), 0.0, {{0.0, std::move(f)}}); }

GridFunction from_function(GridPtr grid, std::function<Complex(double)> f) {
  std::vector<Complex> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->nodes[i]);
  return sampled(std::move(grid), std::move(v));
}

GridFunction fnu_pair(GridPtr grid, double nu, JetFn minus, JetFn plus) {
  std::vector<std::pair<double, JetFn>> t;
  if (minus) t.emplace_back(0.5 - nu, std::move(minus));
  if (plus) t.emplace_back(0.5 + nu, std::move(plus));
  GridFunction u = power_sum(std::move(grid), nu, std::move(t));
  return u;
}

GridFunction zero_function(GridPtr grid) {
  const int n = grid->size();
  return sampled(std::move(grid), std::vector<Complex>(n, 0.0));
}

JetFn constant_jet(Complex c) {
  return [c](double) {
    Jet j{};
    j[0] = c;
    return j;
  };
}

JetFn poly_jet(std::vector<Complex> c) {
  return [c](double x) {
    Jet j{};
    for (int d = 0; d < 5; ++d) {
      Complex s = 0.0;
      for (int k = static_cast<int>(c.size()) - 1; k >= d; --k) {
        double f = 1.0;
        for (int m = 0; m < d; ++m) f *= (k - m);
        s = s * x + f * c[k];
      }
      j[d] = s;
    }
    return j;
  };
}

JetFn even_poly_jet(std::vector<Complex> c) {
  std::vector<Complex> full(2 * c.size(), 0.0);
  for (size_t k = 0; k < c.size(); ++k) full[2 * k] = c[k];
  return poly_jet(std::move(full));
}

JetFn product_jet(JetFn f, JetFn g) {
  return [f, g](double x) {
    const Jet a = f(x), b = g(x);
    static constexpr double binom[5][5] = {
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
    Jet r{};
    for (int k = 0; k < 5; ++k) {
      for (int j = 0; j <= k; ++j) r[k] += binom[k][j] * a[j] * b[k - j];
    }
    return r;
  };
}

JetFn scaled_argument_jet(JetFn f, double tau) {
  return [f, tau](double x) {
    Jet j = f(tau * x);
    double s = 1.0;
    for (int k = 0; k < 5; ++k) {
      j[k] *= s;
      s *= tau;
    }
    return j;
  };
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  check_same_grid(a, b);
  GridFunction r;
  r.grid = a.grid;
  r.fourier_index = a.fourier_index.empty() ? b.fourier_index : a.fourier_index;
  r.nu = a.analytic() ? a.nu : b.nu;
  if (a.analytic() && b.analytic()) {
    r.terms = a.terms;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    merge_terms(r.terms);
    refresh_values(r);
    return r;
  }
  r.values.resize(a.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) r.values[i] = a.values[i] + b.values[i];
  return r;
}

GridFunction operator*(Complex s, const GridFunction& a) {
  GridFunction r = a;
  for (auto& v : r.values) v *= s;
  for (auto& t : r.terms) {
    for (auto& j : t.jets)
      for (auto& c : j) c *= s;
    for (auto& c : t.at_zero) c *= s;
    if (t.gen) {
      JetFn g = t.gen;
      t.gen = [g, s](double x) {
        Jet j = g(x);
        for (auto& c : j) c *= s;
        return j;
      };
    }
  }
  return r;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) { return a + Complex(-1.0) * b; }

GridFunction multiply(const GridFunction& a, std::function<Jet(double)> m) {
  GridFunction r = a;
  const auto& x = a.grid->nodes;
  if (!a.analytic()) {
    for (size_t i = 0; i < x.size(); ++i) r.values[i] *= m(x[i])[0];
    return r;
  }
  static constexpr double binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  auto prod = [](const Jet& f, const Jet& g) {
    Jet out{};
    for (int k = 0; k < 5; ++k)
      for (int j = 0; j <= k; ++j) out[k] += binom[k][j] * f[j] * g[k - j];
    return out;
  };
  std::vector<Jet> mj(x.size());
  for (size_t i = 0; i < x.size(); ++i) mj[i] = m(x[i]);
  const Jet m0 = safe_eval(m, 0.0);
  for (auto& t : r.terms) {
    for (size_t i = 0; i < x.size(); ++i) t.jets[i] = prod(t.jets[i], mj[i]);
    t.at_zero = prod(t.at_zero, m0);
    t.has_zero = t.has_zero && finite(t.at_zero[0]);
    if (t.gen) {
      JetFn g = t.gen;
      t.gen = [g, m, prod](double y) { return prod(g(y), m(y)); };
    }
  }
  refresh_values(r);
  return r;
}

GridFunction resample(const GridFunction& u, GridPtr grid) {
  GridFunction r;
  if (u.analytic() && u.evaluable()) {
    std::vector<std::pair<double, JetFn>> t;
    for (const auto& term : u.terms) t.emplace_back(term.power, term.gen);
    r = power_sum(std::move(grid), u.nu, std::move(t));
  } else {
    std::vector<Complex> v(grid->size());
    for (int i = 0; i < grid->size(); ++i) v[i] = u.eval(grid->nodes[i]);
    r = sampled(std::move(grid), std::move(v));
  }
  r.fourier_index = u.fourier_index;
  return r;
}

GridFunction dilate(const GridFunction& u, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::Domain, "dilation factor must be positive");
  RadialGrid g = *u.grid;
  for (auto& x : g.nodes) x /= tau;
  for (auto& w : g.weights) w /= tau;
  for (auto& el : g.elements) {
    el.a /= tau;
    el.b /= tau;
  }
  g.x_max /= tau;
  GridFunction r = u;
  r.grid = make_grid(std::move(g));
  for (auto& t : r.terms) {
    const double pf = std::pow(tau, t.power);
    auto rescale = [pf, tau](Jet j) {
      double s = pf;
      for (int k = 0; k < 5; ++k) {
        j[k] *= s;
        s *= tau;
      }
      return j;
    };
    for (auto& j : t.jets) j = rescale(j);
    t.at_zero = rescale(t.at_zero);
    if (t.gen) {
      JetFn f = t.gen;
      t.gen = [f, tau, rescale](double x) { return rescale(f(tau * x)); };
    }
  }
  return r;
}

GridFunction with_fourier_index(GridFunction u, std::vector<int> q) {
  u.fourier_index = std::move(q);
  return u;
}

GridFunction d_nu(const GridFunction& u, const Order& nu) {
  return apply_first_order(u, nu.nu, FirstOrder::DNu, nullptr);
}

GridFunction d_nu_checked(const GridFunction& u, const Order& nu, DiffDiagnostics* diag) {
  return apply_first_order(u, nu.nu, FirstOrder::DNu, diag);
}

GridFunction d_nu_star(const GridFunction& u, const Order& nu) {
  return apply_first_order(u, nu.nu, FirstOrder::DNuStar, nullptr);
}

GridFunction d_x(const GridFunction& u) { return apply_first_order(u, 0.0, FirstOrder::DX, nullptr); }

GridFunction bessel_laplacian(const GridFunction& u, const Order& nu) { return d_nu_star(d_nu(u, nu), nu); }

Complex inner(const GridFunction& u, const GridFunction& v) {
  check_same_grid(u, v);
  const auto& w = u.grid->weights;
  Complex s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * u.values[i] * std::conj(v.values[i]);
  return s;
}

double norm_l2(const GridFunction& u) { return std::sqrt(std::max(0.0, inner(u, u).real())); }

double twisted_norm(const GridFunction& u, int s, const Order& nu) {
  if (s < 0 || s > 2) throw Error(ErrorKind::Domain, "twisted_norm order must be 0, 1 or 2");
  const double l0 = std::pow(norm_l2(u), 2);
  if (s == 0) return std::sqrt(l0);
  const double jq = 1.0 + u.q_squared();
  const GridFunction du = d_nu(u, nu);
  const double l1 = std::pow(norm_l2(du), 2);
  if (s == 1) return std::sqrt(l1 + jq * l0);
  const double l2 = std::pow(norm_l2(d_nu_star(du, nu)), 2);
  return std::sqrt(l2 + jq * l1 + jq * jq * l0);
}

TraceData traces(const GridFunction& u, const Order& nu) {
  TraceData td;
  const double n = nu.nu;
  td.has_plus = nu.subcritical();
  if (u.analytic()) {
    // Collect the expansion of x^{nu-1/2} u = sum a_e x^e from the Taylor jets at zero.
    struct Coef {
      double e;
      Complex a;
    };
    std::vector<Coef> coefs;
    double scale = 0.0;
    for (const auto& t : u.terms) {
      if (!t.has_zero) throw Error(ErrorKind::Domain, "trace needs the factor at x = 0");
      double fact = 1.0;
      for (int k = 0; k <= std::min(4, t.valid_order); ++k) {
        if (k > 0) fact *= k;
        const Complex a = t.at_zero[k] / fact;
        if (!finite(a)) break;
        coefs.push_back({t.power + n - 0.5 + k, a});
        scale = std::max(scale, std::abs(a));
      }
    }
    const double small = 1e-12 * std::max(scale, 1e-300);
    for (const auto& c : coefs) {
      if (std::abs(c.a) <= small) continue;
      if (c.e < -kSamePower) throw Error(ErrorKind::Domain, "gamma_minus does not exist for this function");
      if (std::fabs(c.e) <= kSamePower) td.gamma_minus += c.a;
      if (td.has_plus) {
        if (std::fabs(c.e - 2.0 * n) <= kSamePower) {
          td.gamma_plus += 2.0 * n * c.a;
        } else if (c.e > kSamePower && c.e < 2.0 * n - kSamePower) {
          td.has_plus = false;
        }
      }
    }
    if (!td.has_plus) td.gamma_plus = 0.0;
    return td;
  }
  // Innermost nodes above a small floor: below it x^{2 nu} is lost in rounding.
  const auto& x = u.grid->nodes;
  const double floor = 1e-4 * u.grid->x_max;
  int start = 0;
  while (start < u.size() && x[start] < floor) ++start;
  start = std::max(0, std::min(start, u.size() - tolerances().trace_fit_nodes));
  const int m = std::min(tolerances().trace_fit_nodes, u.size() - start);
  if (m < 3) throw Error(ErrorKind::TraceFit, "too few nodes for trace extrapolation");
  CMat A(m, 2);
  CVec rhs(m);
  double vmax = 0.0;
  for (int i = 0; i < m; ++i) {
    A(i, 0) = 1.0;
    const int j = start + i;
    A(i, 1) = std::pow(x[j], 2.0 * n);
    rhs(i) = std::pow(x[j], n - 0.5) * u.values[j];
    vmax = std::max(vmax, std::abs(rhs(i)));
  }
  const CVec c = A.colPivHouseholderQr().solve(rhs);
  const double res = (A * c - rhs).norm() / std::sqrt(double(m));
  td.residual = vmax > 0.0 ? res / vmax : res;
  if (td.residual > tolerances().trace_fit_residual) {
    std::ostringstream os;
    os << "trace fit residual " << td.residual << " exceeds " << tolerances().trace_fit_residual;
    throw Error(ErrorKind::TraceFit, os.str());
  }
  td.gamma_minus = c(0);
  td.gamma_plus = td.has_plus ? 2.0 * n * c(1) : 0.0;
  return td;
}

HardyResult hardy_check(const GridFunction& u, const Order& nu) {
  HardyResult h;
  const double dx = std::pow(norm_l2(d_x(u)), 2);
  h.lhs = nu.nu < 0.5 ? 4.0 * nu.nu * nu.nu * dx : dx;
  h.rhs = std::pow(norm_l2(d_nu(u, nu)), 2);
  h.pass = h.lhs <= h.rhs * (1.0 + 1e-10) + 1e-300;
  return h;
}

void write_csv(const GridFunction& u, std::ostream& os) {
  os << "x,value_re,value_im\n" << std::setprecision(17);
  for (int i = 0; i < u.size(); ++i) {
    os << u.grid->nodes[i] << ',' << u.values[i].real() << ',' << u.values[i].imag() << '\n';
  }
}

void write_csv(const GridFunction& u, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path);
  write_csv(u, f);
}

GridFunction read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot read " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("x,value_re,value_im", 0) != 0) {
    throw Error(ErrorKind::Config, "missing CSV header in " + path);
  }
  std::vector<double> x;
  std::vector<Complex> v;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double a, re, im;
    if (!(is >> a >> re >> im)) throw Error(ErrorKind::Config, "malformed CSV row: " + line);
    if (!x.empty() && !(a > x.back())) throw Error(ErrorKind::Config, "CSV nodes must increase");
    x.push_back(a);
    v.emplace_back(re, im);
  }
  if (x.empty() || !(x.front() > 0.0)) throw Error(ErrorKind::Config, "CSV needs positive nodes");
  RadialGrid g;
  g.nodes = x;
  g.x_max = x.back();
  g.weights.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double lo = i == 0 ? 0.0 : 0.5 * (x[i - 1] + x[i]);
    const double hi = i + 1 == x.size() ? x[i] : 0.5 * (x[i] + x[i + 1]);
    g.weights[i] = hi - lo;
  }
  // Short elements keep the interpolation well conditioned on arbitrary nodes.
  const int n = static_cast<int>(x.size());
  for (int first = 0; first < n; first += 12) {
    GridElement el;
    el.first = first;
    el.count = std::min(12, n - first);
    if (n - (first + el.count) < 4) el.count = n - first;
    el.a = first == 0 ? 0.0 : 0.5 * (x[first - 1] + x[first]);
    const int last = first + el.count - 1;
    el.b = last + 1 == n ? x[last] : 0.5 * (x[last] + x[last + 1]);
    g.elements.push_back(el);
    first += el.count - 12;
  }
  return sampled(make_grid(std::move(g)), std::move(v));
}

}  // namespace sbvp
