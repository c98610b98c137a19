#include "sbvp/symbol_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sbvp/json_util.hpp"
#include "sbvp/special_fn.hpp"

namespace sbvp {

namespace {

constexpr double kGolden = 0.6180339887498948482;

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// C^4 step: 1 on [0, c], 0 beyond 2c.
Jet cutoff_jet(double x, double c) {
  Jet j{};
  if (x <= c) {
    j[0] = 1.0;
    return j;
  }
  if (x >= 2.0 * c) return j;
  // S(s) = s^5 (126 - 420 s + 540 s^2 - 315 s^3 + 70 s^4), chi = 1 - S((x - c)/c).
  static const double coef[10] = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
  const double s = (x - c) / c;
  double scale = 1.0;
  for (int d = 0; d < 5; ++d) {
    double v = 0.0;
    for (int k = 9; k >= d; --k) {
      double f = 1.0;
      for (int m = 0; m < d; ++m) f *= (k - m);
      v = v * s + f * coef[k];
    }
    j[d] = (d == 0 ? 1.0 - v : -v) * scale;
    scale /= c;
  }
  return j;
}

Jet jet_product(const Jet& a, const Jet& b) {
  static constexpr double binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  Jet r{};
  for (int k = 0; k < 5; ++k)
    for (int j = 0; j <= k; ++j) r[k] += binom[k][j] * a[j] * b[k - j];
  return r;
}

// Jet of sum_k c_k x^{2k}.
Jet even_series_jet(const std::vector<Complex>& c, double x) {
  Jet j{};
  for (int d = 0; d < 5; ++d) {
    Complex s = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
      const int p = 2 * k;
      if (p < d) continue;
      double f = 1.0;
      for (int m = 0; m < d; ++m) f *= (p - m);
      s += f * c[k] * std::pow(x, p - d);
    }
    j[d] = s;
  }
  return j;
}

std::vector<std::vector<double>> sphere_points(int m, int n) {
  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> p(m);
    if (m == 1) {
      p[0] = (k % 2 == 0) ? 1.0 : -1.0;
    } else if (m == 2) {
      const double a = 2.0 * kPi * k / n;
      p = {std::cos(a), std::sin(a)};
    } else if (m == 3) {
      const double z = 1.0 - (2.0 * k + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = 2.0 * kPi * k * kGolden;
      p = {r * std::cos(a), r * std::sin(a), z};
    } else {
      // Kronecker sequence pushed through Box-Muller, then normalized.
      static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
      double s = 0.0;
      for (int i = 0; i < m; i += 2) {
        const double u1 = std::fmod((k + 0.5) * std::sqrt(primes[i % 16]), 1.0);
        const double u2 = std::fmod((k + 0.5) * std::sqrt(primes[(i + 1) % 16]), 1.0);
        const double rr = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
        p[i] = rr * std::cos(2.0 * kPi * u2);
        if (i + 1 < m) p[i + 1] = rr * std::sin(2.0 * kPi * u2);
      }
      for (double v : p) s += v * v;
      s = std::sqrt(s);
      for (double& v : p) v /= s;
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

BoundarySymbol BoundarySymbol::laplace(int dim) {
  BoundarySymbol s;
  s.dim_eta = dim;
  s.a2 = [](const std::vector<double>& eta, Complex) { return Complex(norm2(eta)); };
  return s;
}

BoundarySymbol BoundarySymbol::wave(int dim) {
  BoundarySymbol s;
  s.dim_eta = dim;
  s.has_lambda = true;
  s.a2 = [](const std::vector<double>& eta, Complex lam) { return norm2(eta) - lam * lam; };
  return s;
}

BoundarySymbol BoundarySymbol::conj() const {
  BoundarySymbol s = *this;
  auto f = a2;
  s.a2 = [f](const std::vector<double>& eta, Complex lam) { return std::conj(f(eta, std::conj(lam))); };
  return s;
}

bool is_homogeneous(const BoundarySymbol& sym, const std::vector<double>& eta, Complex lambda, double t) {
  std::vector<double> te(eta);
  for (double& v : te) v *= t;
  const Complex a = sym(eta, lambda), b = sym(te, t * lambda);
  return std::abs(b - t * t * a) <= tolerances().homogeneity * std::max(1.0, std::abs(t * t * a));
}

EllipticRoots elliptic_roots(const BoundarySymbol& sym, const std::vector<double>& eta, Complex lambda) {
  if (norm2(eta) == 0.0 && lambda == Complex(0.0)) {
    throw Error(ErrorKind::Domain, "elliptic_roots needs (eta, lambda) != 0");
  }
  EllipticRoots r;
  Complex xi = std::sqrt(-sym(eta, lambda));
  if (xi.imag() > 0.0) xi = -xi;
  r.xi_plus = xi;
  r.xi_minus = -xi;
  r.elliptic = std::abs(xi.imag()) >= tolerances().elliptic_imag * std::abs(xi) && std::abs(xi) > 0.0;
  return r;
}

int TangentialSymbol::order() const {
  if (lambda != Complex(0.0)) return 1;
  for (const auto& a : field)
    if (a != Complex(0.0)) return 1;
  return constant != Complex(0.0) ? 0 : -1;
}

Complex TangentialSymbol::principal(int k, const std::vector<double>& eta, Complex lam) const {
  const int o = order();
  if (o < 0 || k > o) return 0.0;
  if (k < o) throw Error(ErrorKind::Domain, "principal part below the operator order");
  if (o == 0) return constant;
  Complex s = lambda * lam;
  for (size_t i = 0; i < field.size() && i < eta.size(); ++i) s += Complex(0.0, 1.0) * field[i] * eta[i];
  return s;
}

double TangentialSymbol::magnitude(int k, const std::vector<double>& eta, Complex lam) const {
  const int o = order();
  if (o < 0 || k > o) return 0.0;
  if (o == 0) return std::abs(constant);
  double s = std::abs(lambda) * std::abs(lam);
  for (size_t i = 0; i < field.size() && i < eta.size(); ++i) s += std::abs(field[i]) * std::fabs(eta[i]);
  return s;
}

Complex TangentialSymbol::value(const std::vector<double>& eta, Complex lam) const {
  Complex s = constant + lambda * lam;
  for (size_t i = 0; i < field.size() && i < eta.size(); ++i) s += Complex(0.0, 1.0) * field[i] * eta[i];
  return s;
}

BoundaryOperator BoundaryOperator::dirichlet() {
  BoundaryOperator b;
  b.rows[0].t_minus.constant = 1.0;
  return b;
}

BoundaryOperator BoundaryOperator::neumann() {
  BoundaryOperator b;
  b.rows[0].t_plus.constant = 1.0;
  return b;
}

BoundaryOperator BoundaryOperator::robin(Complex beta) {
  BoundaryOperator b;
  b.rows[0].t_plus.constant = 1.0;
  b.rows[0].t_minus.constant = beta;
  return b;
}

BoundaryOperator BoundaryOperator::oblique(std::vector<Complex> field, Complex t_plus) {
  BoundaryOperator b;
  b.rows[0].t_minus.field = std::move(field);
  b.rows[0].t_plus.constant = t_plus;
  return b;
}

BoundaryOperator BoundaryOperator::lambda_robin(Complex c) {
  BoundaryOperator b;
  b.rows[0].t_plus.constant = 1.0;
  b.rows[0].t_minus.lambda = c;
  return b;
}

NuOrder select_nu_order(const Order& nu, const BoundaryRow& row) {
  const double n = nu.nu;
  const int om = row.t_minus.order(), op = row.t_plus.order();
  auto admissible = [&](double mu) {
    const bool a = om < 0 || om - n <= mu - 1.0 + 1e-12;
    const bool b = op < 0 || op + n <= mu - 1.0 + 1e-12;
    return a && b;
  };
  std::vector<double> cand{1.0 - n, 2.0 - n, 1.0 + n};
  double mu = std::numeric_limits<double>::quiet_NaN();
  if (row.nu_order) {
    mu = *row.nu_order;
    const bool listed = std::any_of(cand.begin(), cand.end(), [&](double c) { return std::fabs(c - mu) < 1e-12; });
    if (!listed || !admissible(mu)) throw Error(ErrorKind::Domain, "boundary row violates its declared nu-order");
  } else {
    std::sort(cand.begin(), cand.end());
    for (double c : cand) {
      if (admissible(c)) {
        mu = c;
        break;
      }
    }
    if (std::isnan(mu)) throw Error(ErrorKind::Domain, "no admissible nu-order for boundary row");
  }
  NuOrder r;
  r.mu = mu;
  r.k_minus = static_cast<int>(std::ceil(mu - 1.0 + n - 1e-9));
  r.k_plus = static_cast<int>(std::ceil(mu - 1.0 - n - 1e-9));
  return r;
}

double mode_normalization(double nu) { return std::pow(2.0, 1.0 - nu) * recip_gamma(nu); }

Complex mode_gamma_plus(double nu, Complex xi) {
  const Complex z = Complex(0.0, 1.0) * xi;
  return -2.0 * nu * gamma_fn(1.0 - nu) * recip_gamma(1.0 + nu) * std::pow(0.5 * z, 2.0 * nu);
}

GridPtr half_line_grid(const Order& nu, Complex xi, int nodes) {
  const Complex z = Complex(0.0, 1.0) * xi;
  if (!(z.real() > 0.0)) throw Error(ErrorKind::Branch, "root must satisfy Im xi < 0");
  GradedOptions opt;
  if (nu.subcritical()) opt.first_exponent = 1.0 - 2.0 * nu.nu;
  return make_grid(graded_grid(40.0 / z.real(), nodes, opt));
}

ModeSolution mode_solution(const Order& order, Complex xi, GridPtr grid) {
  if (!(xi.imag() < 0.0)) throw Error(ErrorKind::Branch, "mode_solution needs Im xi < 0");
  const double nu = order.nu;
  const Complex z = Complex(0.0, 1.0) * xi;
  const Complex Cz = mode_normalization(nu) * std::pow(z, nu);
  ModeSolution m;
  m.xi = xi;
  if (!order.subcritical()) {
    // x^{1/2 - nu} times the bounded factor C z^nu x^nu K_nu(z x), equal to 1 at x = 0.
    JetFn F = [Cz, nu, z](double x) {
      if (x == 0.0) {
        Jet j;
        j.fill(Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
        j[0] = 1.0;
        return j;
      }
      Jet r = raised_bessel_jet(BesselKind::K, nu, z, x);
      for (auto& c : r) c *= Cz;
      return r;
    };
    m.profile = power_sum(grid, nu, {{0.5 - nu, F}});
    m.traces.gamma_minus = 1.0;
    m.traces.has_plus = false;
    return m;
  }
  // Near zero: u = x^{1/2-nu} A + x^{1/2+nu} B with even power series A, B (A(0) = 1).
  const double g1 = gamma_fn(1.0 - nu);
  const int n_series = 40;
  std::vector<Complex> a(n_series), b(n_series);
  const Complex w = 0.25 * z * z;
  Complex wk = 1.0;
  const Complex zb = -g1 * std::pow(0.5 * z, 2.0 * nu);
  double kfact = 1.0;
  for (int k = 0; k < n_series; ++k) {
    if (k > 0) kfact *= k;
    a[k] = g1 * wk * recip_gamma(k + 1.0 - nu) / kfact;
    b[k] = zb * wk * recip_gamma(k + 1.0 + nu) / kfact;
    wk *= w;
  }
  const double xc = 1.0 / std::abs(z);
  JetFn minus = [a, xc](double x) {
    return x < 2.0 * xc ? jet_product(cutoff_jet(x, xc), even_series_jet(a, x)) : Jet{};
  };
  JetFn plus = [b, xc, Cz, nu, z](double x) {
    const Jet chi = cutoff_jet(x, xc);
    Jet r = x < 2.0 * xc ? jet_product(chi, even_series_jet(b, x)) : Jet{};
    if (x > xc) {
      Jet one_minus = chi;
      for (auto& c : one_minus) c = -c;
      one_minus[0] += 1.0;
      Jet k = scaled_bessel_jet(BesselKind::K, nu, z, x);
      for (auto& c : k) c *= Cz;
      const Jet t = jet_product(one_minus, k);
      for (int i = 0; i < 5; ++i) r[i] += t[i];
    }
    return r;
  };
  m.profile = fnu_pair(grid, nu, minus, plus);
  m.traces.gamma_minus = 1.0;
  m.traces.gamma_plus = mode_gamma_plus(nu, xi);
  return m;
}

LopatinskiiValue lopatinskii_det(const Order& nu, const BoundarySymbol& sym, const BoundaryOperator& bc,
                                 const std::vector<double>& eta, Complex lambda) {
  if (!nu.subcritical()) throw Error(ErrorKind::Domain, "boundary conditions only exist for 0 < nu < 1");
  const int J = bc.aux();
  if (static_cast<int>(bc.rows.size()) != J + 1 || (J > 0 && bc.C.rows() != J + 1)) {
    throw Error(ErrorKind::Domain, "boundary operator needs J + 1 rows for J auxiliary unknowns");
  }
  LopatinskiiValue out;
  const EllipticRoots roots = elliptic_roots(sym, eta, lambda);
  out.elliptic = roots.elliptic;
  if (!roots.elliptic) return out;
  const Complex gp = mode_gamma_plus(nu.nu, roots.xi_plus);
  CMat M(J + 1, J + 1);
  double scale = 1.0;
  for (int r = 0; r <= J; ++r) {
    const BoundaryRow& row = bc.rows[r];
    const NuOrder no = select_nu_order(nu, row);
    M(r, 0) = row.t_minus.principal(no.k_minus, eta, lambda) + row.t_plus.principal(no.k_plus, eta, lambda) * gp;
    double rs = row.t_minus.magnitude(no.k_minus, eta, lambda) + row.t_plus.magnitude(no.k_plus, eta, lambda) * std::abs(gp);
    for (int j = 0; j < J; ++j) {
      M(r, j + 1) = bc.C(r, j);
      rs += std::abs(bc.C(r, j));
    }
    scale *= rs;
    if (r == 0) {
      const bool minus_on = row.t_minus.magnitude(no.k_minus, eta, lambda) > 0.0;
      out.weight = minus_on ? no.k_minus : no.k_plus + 2.0 * nu.nu;
    }
  }
  out.det = J == 0 ? M(0, 0) : M.determinant();
  out.scale = scale;
  out.pass = scale > 0.0 && std::abs(out.det) > tolerances().lopatinskii_rel * scale;
  return out;
}

Sector Sector::imaginary_axis() { return Sector{{{kPi / 2, kPi / 2}, {-kPi / 2, -kPi / 2}}}; }

Sector Sector::around(double center, double half_width) {
  return Sector{{{center - half_width, center + half_width}}};
}

LopatinskiiReport lopatinskii_sweep(const Order& nu, const BoundarySymbol& sym, const BoundaryOperator& bc,
                                    int sphere_samples, const std::optional<Sector>& sector, bool fail_fast) {
  if (sphere_samples < 8) throw Error(ErrorKind::Domain, "lopatinskii_sweep needs at least 8 samples");
  const int d = sym.dim_eta;
  const bool joint = sym.has_lambda || sector.has_value();
  LopatinskiiReport rep;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::vector<double>, Complex>> pts;
  if (!joint) {
    for (auto& p : sphere_points(d, sphere_samples)) pts.emplace_back(p, 0.0);
  } else {
    const Sector sec = sector.value_or(Sector{{{-kPi, kPi}}});
    auto angle = [&](int k) {
      const auto& iv = sec.intervals[k % sec.intervals.size()];
      const double f = std::fmod(k * kGolden, 1.0);
      return iv.first + f * (iv.second - iv.first);
    };
    // First sample at the pure-lambda pole, the rest on the upper hemisphere of S^d.
    pts.emplace_back(std::vector<double>(d, 0.0), std::polar(1.0, angle(0)));
    auto hemi = sphere_points(d + 1, sphere_samples - 1);
    for (int k = 0; k < sphere_samples - 1; ++k) {
      auto& p = hemi[k];
      const double r = std::fabs(p[d]);
      std::vector<double> eta(p.begin(), p.begin() + d);
      pts.emplace_back(eta, std::polar(r, angle(k + 1)));
    }
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    LopatinskiiSample s;
    s.eta = pts[i].first;
    s.lambda = pts[i].second;
    const LopatinskiiValue v = lopatinskii_det(nu, sym, bc, s.eta, s.lambda);
    s.det = v.det;
    s.elliptic = v.elliptic;
    s.pass = v.elliptic && v.pass;
    rep.min_abs_det = std::min(rep.min_abs_det, v.elliptic ? std::abs(v.det) : 0.0);
    if (!s.pass) {
      rep.all_pass = false;
      if (rep.first_failure < 0) rep.first_failure = static_cast<int>(i);
    }
    rep.samples.push_back(std::move(s));
    if (fail_fast && !rep.all_pass) break;
  }
  return rep;
}

std::string to_json(const LopatinskiiReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back(Json{{"eta", s.eta},
                           {"lambda", complex_json(s.lambda)},
                           {"det_re", s.det.real()},
                           {"det_im", s.det.imag()},
                           {"elliptic", s.elliptic},
                           {"pass", s.pass}});
  }
  Json j{{"samples", samples}, {"summary", {{"min_abs_det", r.min_abs_det}, {"all_pass", r.all_pass}}}};
  return dump17(j);
}

}  // namespace sbvp
