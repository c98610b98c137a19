#include "sbvp/bvp_solve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/LU>

#include "sbvp/quadrature.hpp"
#include "sbvp/special_fn.hpp"

namespace sbvp {

namespace {

std::vector<double> as_eta(const std::vector<int>& q) { return std::vector<double>(q.begin(), q.end()); }

double q_sq(const std::vector<int>& q) {
  double s = 0.0;
  for (int k : q) s += double(k) * k;
  return s;
}

// Largest singular value of A and of A^{-1} by a few power iterations.
double condition_estimate(const CMat& A, const Eigen::PartialPivLU<CMat>& lu) {
  const int n = static_cast<int>(A.rows());
  CVec v = CVec::Ones(n) / std::sqrt(double(n));
  for (int i = 0; i < n; ++i) v(i) *= 1.0 + 0.1 * std::sin(1.0 + i);  // avoid symmetric starts
  v.normalize();
  double big = 0.0;
  for (int it = 0; it < 30; ++it) {
    CVec w = A.adjoint() * (A * v);
    big = std::sqrt(w.norm());
    if (w.norm() == 0.0) break;
    v = w.normalized();
  }
  const CMat Ah = A.adjoint();
  Eigen::PartialPivLU<CMat> luh(Ah);
  CVec u = CVec::Ones(n).normalized();
  double small_inv = 0.0;
  for (int it = 0; it < 30; ++it) {
    CVec w = lu.solve(luh.solve(u));
    const double nw = w.norm();
    if (!std::isfinite(nw)) return std::numeric_limits<double>::infinity();
    small_inv = std::sqrt(nw);
    if (nw == 0.0) break;
    u = w / nw;
  }
  return big * small_inv;
}

struct Discrete {
  galerkin::Space s, se;
  galerkin::Forms fe, f;
  CMat T, Te;
  CMat A;            // square system in orthonormal coordinates
  int r = 0, J = 0;  // trial coordinates, auxiliary unknowns
  bool sub = false;
  double trace_scale = 1.0;
  std::vector<double> row_scale;  // boundary row normalizations
  Complex lambda;
};

CMat operator_matrix(const galerkin::Forms& f, Complex lambda) {
  CMat K = f.S.cast<Complex>() + f.A + f.B;
  if (lambda != Complex(0.0)) K += lambda * f.P1 + lambda * lambda * f.P0;
  return K;
}

double default_length(const BVProblem& p) {
  if (p.x_max > 0.0) return p.x_max;
  if (p.bc1 == FarEnd::DirichletAtOne) return 1.0;
  const Complex pot = boundary_potential(p.op, p.q, p.lambda);
  const Complex k = std::sqrt(pot);
  if (!(k.real() > 0.0)) throw Error(ErrorKind::Domain, "half-line problem has no decaying solutions");
  return 40.0 / k.real();
}

Discrete discretize(const BVProblem& p, double L, int dof) {
  const Order& nu = p.op.nu;
  Discrete d;
  d.sub = nu.subcritical();
  if (d.sub && !p.bc0) throw Error(ErrorKind::Domain, "0 < nu < 1 needs a boundary condition at x = 0");
  if (!d.sub && p.bc0) throw Error(ErrorKind::Domain, "no boundary condition is imposed at x = 0 when nu >= 1");
  d.lambda = p.lambda;
  d.s = galerkin::make_space(nu, L, dof);
  d.se = galerkin::extend(d.s, std::max(16, dof / 2));
  d.fe = galerkin::assemble(d.se, p.op, p.q);
  d.f = galerkin::leading_block(d.fe, d.se, d.s);
  const double w = 1.0 + q_sq(p.q);
  const auto& tol = tolerances();
  d.T = galerkin::orthonormalize((d.f.S + w * d.f.M).cast<Complex>(), tol.basis_prune);
  d.Te = galerkin::orthonormalize((d.fe.S + w * d.fe.M).cast<Complex>(), tol.basis_prune);
  d.r = static_cast<int>(d.T.cols());
  const CMat K = d.T.adjoint() * operator_matrix(d.f, p.lambda) * d.T;
  if (!d.sub) {
    d.A = K;
    return d;
  }
  const BoundaryOperator& bc = *p.bc0;
  d.J = bc.aux();
  if (static_cast<int>(bc.rows.size()) != d.J + 1)
    throw Error(ErrorKind::Domain, "boundary operator needs aux() + 1 rows");
  // gamma_- in orthonormal coordinates, normalized to a unit functional.
  const CVec h = d.T.adjoint() * d.f.gm;
  d.trace_scale = h.norm();
  const CVec hn = h / d.trace_scale;
  const int n = d.r + 1 + d.J;
  d.A = CMat::Zero(n, n);
  d.A.topLeftCorner(d.r, d.r) = K;
  d.A.block(0, d.r, d.r, 1) = hn;
  const auto eta = as_eta(p.q);
  for (int k = 0; k <= d.J; ++k) {
    const Complex tm = bc.rows[k].t_minus.value(eta, p.lambda);
    const Complex tp = bc.rows[k].t_plus.value(eta, p.lambda);
    CVec row = CVec::Zero(n);
    row.head(d.r) = tm * d.trace_scale * hn.conjugate();
    row(d.r) = tp / d.trace_scale;
    for (int j = 0; j < d.J; ++j) row(d.r + 1 + j) = bc.C(k, j);
    const double sc = row.cwiseAbs().maxCoeff();
    if (sc == 0.0) throw Error(ErrorKind::RegularityViolated, "boundary row " + std::to_string(k) + " vanishes");
    d.row_scale.push_back(sc);
    d.A.row(d.r + k) = row.transpose() / sc;
  }
  return d;
}

CVec rhs_vector(const BVProblem& p, const Discrete& d, CVec* load_ext) {
  CVec fe = CVec::Zero(d.se.size());
  if (p.rhs) fe = galerkin::load(d.se, *p.rhs);
  if (load_ext) *load_ext = fe;
  CVec f(d.s.size());
  for (int k = 0; k < d.s.n_poly; ++k) f(k) = fe(k);
  if (d.s.enrich) f(d.s.n_poly) = fe(d.se.n_poly);
  CVec b = CVec::Zero(d.A.rows());
  b.head(d.r) = d.T.adjoint() * f;
  if (d.sub) {
    for (int k = 0; k <= d.J; ++k) {
      const Complex g = k < static_cast<int>(p.boundary_data.size()) ? p.boundary_data[k] : Complex(0.0);
      b(d.r + k) = g / d.row_scale[k];
    }
  }
  return b;
}

CVec extend_coeffs(const Discrete& d, const CVec& c) {
  CVec ce = CVec::Zero(d.se.size());
  ce.head(d.s.n_poly) = c.head(d.s.n_poly);
  if (d.s.enrich) ce(d.se.n_poly) = c(d.s.n_poly);
  return ce;
}

RadialGrid default_grid(const Order& nu, double L, int nodes) {
  GradedOptions opt;
  if (nu.subcritical()) opt.first_exponent = 1.0 - 2.0 * nu.nu;
  return graded_grid(L, nodes, opt);
}

Solution solve_once(const BVProblem& p, double L, int dof, GridPtr grid) {
  Discrete d = discretize(p, L, dof);
  CVec load_ext;
  const CVec b = rhs_vector(p, d, &load_ext);
  Eigen::PartialPivLU<CMat> lu(d.A);
  Solution sol;
  sol.condition_estimate = condition_estimate(d.A, lu);
  if (!std::isfinite(sol.condition_estimate) || sol.condition_estimate * tolerances().singular_rcond > 1.0) {
    throw Error(ErrorKind::SingularSystem,
                "discrete system is numerically singular (condition " + std::to_string(sol.condition_estimate) + ")");
  }
  const CVec z = lu.solve(b);
  const CVec c = d.T * z.head(d.r);
  Complex phi_plus = 0.0;
  if (d.sub) {
    phi_plus = z(d.r) / d.trace_scale;
    sol.aux = z.tail(d.J);
  }
  sol.space = d.s;
  sol.coeffs = c;
  sol.u = galerkin::synthesize(d.s, c, grid, p.q);
  if (d.sub) {
    Complex g = 0.0;
    for (int k = 0; k < d.s.n_poly; ++k) g += d.f.gm(k) * c(k);
    sol.traces.gamma_minus = g;
  }
  sol.traces.gamma_plus = phi_plus;
  sol.traces.has_plus = d.sub;

  // Residual functional on the extended test space, measured in its dual norm.
  const CVec ce = extend_coeffs(d, c);
  CVec res = load_ext - operator_matrix(d.fe, p.lambda) * ce;
  if (d.sub) res -= phi_plus * d.fe.gm;
  const double rn = (d.Te.adjoint() * res).norm();
  const double fn = (d.Te.adjoint() * load_ext).norm();
  sol.residual_norm = fn > 0.0 ? rn / fn : rn;
  return sol;
}

}  // namespace

Complex boundary_potential(const BesselOperator& op, const std::vector<int>& q, Complex lambda) {
  Complex v = op.a(0.0) + op.symbol_at(q);
  if (op.pencil) v += lambda * op.pencil->first(0.0) + lambda * lambda * op.pencil->second(0.0);
  return v;
}

Complex regularity_det(const Order& nu, const BoundaryOperator& bc, Complex potential, const std::vector<int>& q,
                       Complex lambda) {
  const Complex z = std::sqrt(potential);
  if (!(z.real() > 0.0)) throw Error(ErrorKind::Domain, "boundary model has no decaying solution");
  const Complex xi = Complex(0.0, -1.0) * z;
  const Complex gp = mode_gamma_plus(nu.nu, xi);
  const int J = bc.aux();
  const auto eta = as_eta(q);
  CMat M(J + 1, J + 1);
  for (int k = 0; k <= J; ++k) {
    M(k, 0) = bc.rows[k].t_minus.value(eta, lambda) + bc.rows[k].t_plus.value(eta, lambda) * gp;
    for (int j = 0; j < J; ++j) M(k, 1 + j) = bc.C(k, j);
    const double sc = M.row(k).cwiseAbs().maxCoeff();
    if (sc > 0.0) M.row(k) /= sc;
  }
  return M.determinant();
}

Solution solve_1d(const BVProblem& prob) {
  prob.op.validate();
  const Order& nu = prob.op.nu;
  if (nu.subcritical() && prob.bc0) {
    const Complex pot = boundary_potential(prob.op, prob.q, prob.lambda);
    const Complex z = std::sqrt(pot);
    if (z.real() > 0.0 && std::abs(z) > 1e-12) {
      const Complex det = regularity_det(nu, *prob.bc0, pot, prob.q, prob.lambda);
      if (std::abs(det) < tolerances().lopatinskii_rel) {
        throw Error(ErrorKind::RegularityViolated,
                    "boundary condition is not regular for mode q of size " + std::to_string(prob.q.size()) +
                        " at potential " + std::to_string(pot.real()) + (pot.imag() >= 0 ? "+" : "") +
                        std::to_string(pot.imag()) + "i (|det| = " + std::to_string(std::abs(det)) + ")");
      }
    }
  }
  const double L = default_length(prob);
  GridPtr grid = prob.grid;
  if (!grid && prob.rhs) grid = prob.rhs->grid;
  if (!grid || std::fabs(grid->x_max - L) > 1e-12 * L) grid = make_grid(default_grid(nu, L, 256));
  Solution sol = solve_once(prob, L, prob.dof, grid);
  if (prob.check_truncation && prob.bc1 == FarEnd::Decay) {
    BVProblem wide = prob;
    wide.x_max = 2.0 * L;
    wide.grid = nullptr;
    const Solution s2 = solve_once(wide, 2.0 * L, prob.dof + prob.dof / 2, grid);
    double diff = 0.0, ref = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
      if (grid->nodes[i] > 0.5 * L) break;
      diff = std::max(diff, std::abs(sol.u.values[i] - s2.u.values[i]));
      ref = std::max(ref, std::abs(sol.u.values[i]));
    }
    sol.truncation_error = ref > 0.0 ? diff / ref : diff;
  }
  return sol;
}

Solution solve_dirichlet_laplacian(const Order& nu, Complex a, const GridFunction& f, int dof) {
  const double tol = tolerances().on_cut;
  if (std::fabs(a.imag()) <= tol * std::max(1.0, std::abs(a)) && a.real() <= tol) {
    throw Error(ErrorKind::SpectralParameterOnCut, "spectral parameter lies on (-inf, 0]");
  }
  BVProblem p;
  p.op.nu = nu;
  p.op.a = Coefficient::constant(a);
  p.op.fourier_symbol = [](const std::vector<int>& q) { return Complex(q_sq(q)); };
  if (nu.subcritical()) p.bc0 = BoundaryOperator::dirichlet();
  p.rhs = f;
  p.q = f.fourier_index;
  p.dof = dof;
  p.grid = f.grid;
  p.x_max = f.grid->x_max;
  return solve_1d(p);
}

SeparableSolution solve_separable(const BesselOperator& op, const std::optional<BoundaryOperator>& bc0,
                                  const std::vector<GridFunction>& rhs_modes, int q_max, int dof) {
  SeparableSolution out;
  size_t dim = 1;
  for (const auto& f : rhs_modes) {
    BVProblem p;
    p.op = op;
    p.bc0 = bc0;
    p.rhs = f;
    p.q = f.fourier_index;
    p.dof = dof;
    p.grid = f.grid;
    p.x_max = f.grid->x_max;
    out.modes.push_back(solve_1d(p));
    if (!f.fourier_index.empty()) dim = f.fourier_index.size();
  }
  std::vector<int> ks{0};
  for (int k = 1; k < q_max; k *= 2) ks.push_back(k);
  if (q_max > 0) ks.push_back(q_max);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k : ks) {
    std::vector<int> q(dim, 0);
    q[0] = k;
    BVProblem p;
    p.op = op;
    p.bc0 = bc0;
    p.q = q;
    p.dof = dof;
    p.x_max = 1.0;
    const Solution s = solve_1d(p);
    out.probe_q.push_back(q);
    out.probe_condition.push_back(s.condition_estimate);
    lo = std::min(lo, s.condition_estimate);
    hi = std::max(hi, s.condition_estimate);
  }
  for (const auto& s : out.modes) {
    lo = std::min(lo, s.condition_estimate);
    hi = std::max(hi, s.condition_estimate);
  }
  out.condition_spread = hi / lo;
  out.uniform = out.condition_spread < 10.0;
  return out;
}

GridFunction poisson_lift(const Order& nu, LiftSide side, const std::vector<int>& q, Complex phi, GridPtr grid) {
  if (side == LiftSide::AtZero && !nu.subcritical())
    throw Error(ErrorKind::Domain, "the lift from x = 0 needs 0 < nu < 1");
  const double kappa = std::sqrt(1.0 + q_sq(q));
  if (kappa > 500.0) throw Error(ErrorKind::Overflow, "I_nu(<q>) overflows for this mode");
  const double n = nu.nu;
  const Complex inv_i1 = 1.0 / eval_I(n, kappa);
  // sqrt(x) I_nu(kappa x) / I_nu(kappa) = x^{1/2+nu} [x^{-nu} I_nu(kappa x)] / I_nu(kappa)
  auto interior = [n, kappa, inv_i1](Complex scale) -> JetFn {
    return [n, kappa, inv_i1, scale](double x) {
      auto j = scaled_bessel_jet(BesselKind::I, n, kappa, x);
      Jet out;
      for (int k = 0; k < 5; ++k) out[k] = scale * inv_i1 * j[k];
      return out;
    };
  };
  GridFunction v;
  if (side == LiftSide::AtOne) {
    v = power_sum(grid, n, {{0.5 + n, interior(phi)}});
  } else {
    const ModeSolution m = mode_solution(nu, Complex(0.0, -kappa), grid);
    const Complex at_one = m.profile.eval(1.0);
    v = phi * m.profile - power_sum(grid, n, {{0.5 + n, interior(phi * at_one)}});
  }
  v.fourier_index = q;
  return v;
}

namespace {

GridFunction random_rhs(const Order& nu, GridPtr grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Complex> c(6);
  for (auto& v : c) v = Complex(U(rng), U(rng));
  return power_sum(grid, nu.nu, {{0.5 + nu.nu, poly_jet(c)}});
}

GridFunction lower_order(const BesselOperator& op, const GridFunction& u, Complex lambda) {
  const Order& nu = op.nu;
  Coefficient a = op.a.plus(op.symbol_at(u.fourier_index));
  GridFunction r = multiply(u, [a](double x) { return a.jet(x); });
  if (op.pencil) {
    const Coefficient p1 = op.pencil->first, p0 = op.pencil->second;
    r = r + lambda * multiply(u, [p1](double x) { return p1.jet(x); });
    r = r + (lambda * lambda) * multiply(u, [p0](double x) { return p0.jet(x); });
  }
  if (!op.b.is_zero()) {
    const Coefficient b = op.b;
    if (!op.adjoint_form)
      r = r + Complex(0.0, -1.0) * multiply(d_nu(u, nu), [b](double x) { return b.jet(x); });
    else
      r = r + Complex(0.0, 1.0) * d_nu_star(multiply(u, [b](double x) { return b.jet(x); }), nu);
  }
  return r;
}

}  // namespace

double resolvent_ratio(const BesselOperator& op, const std::optional<BoundaryOperator>& bc, Complex lambda,
                       const GridFunction& f, int dof) {
  BVProblem p;
  p.op = op;
  p.bc0 = bc;
  p.rhs = f;
  p.q = f.fourier_index;
  p.lambda = lambda;
  p.dof = dof;
  p.grid = f.grid;
  p.x_max = f.grid->x_max;
  const Solution s = solve_1d(p);
  const Order& nu = op.nu;
  const double l2 = std::abs(lambda);
  const double u0 = norm_l2(s.u);
  const double u1 = twisted_norm(s.u, 1, nu);
  // |D_nu|^2 u taken from the equation itself: f minus the lower-order terms.
  const double lap = norm_l2(f - lower_order(op, s.u, lambda));
  const double u2sq = lap * lap + (1.0 + s.u.q_squared()) * u1 * u1;
  const double num = std::sqrt(std::pow(l2, 4) * u0 * u0 + l2 * l2 * u1 * u1 + u2sq);
  return num / norm_l2(f);
}

std::vector<ResolventRow> resolvent_sweep(const BesselOperator& op, const std::optional<BoundaryOperator>& bc,
                                          const Sector& sector, const std::vector<double>& radii,
                                          const ResolventOptions& opt) {
  GridPtr grid = make_grid(default_grid(op.nu, 1.0, 256));
  const GridFunction f = random_rhs(op.nu, grid, opt.seed);
  std::vector<double> angles;
  for (const auto& [a, b] : sector.intervals) {
    if (a == b || opt.rays <= 1) {
      angles.push_back(0.5 * (a + b));
      continue;
    }
    for (int k = 0; k < opt.rays; ++k) angles.push_back(a + (b - a) * k / (opt.rays - 1));
  }
  std::vector<ResolventRow> rows;
  for (double R : radii) {
    ResolventRow row;
    row.radius = R;
    for (double th : angles) {
      const Complex lam = std::polar(R, th);
      try {
        const double q = resolvent_ratio(op, bc, lam, f, opt.dof);
        if (q > row.ratio) {
          row.ratio = q;
          row.lambda = lam;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularSystem && e.kind() != ErrorKind::RegularityViolated) throw;
        row.singular = true;
        row.lambda = lam;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

bool resolvent_decay_ok(const std::vector<ResolventRow>& rows, double slack) {
  size_t k = 0;
  while (k < rows.size() && rows[k].singular) ++k;
  if (k == rows.size()) return false;
  for (size_t i = k + 1; i < rows.size(); ++i) {
    if (rows[i].singular || !std::isfinite(rows[i].ratio)) return false;
    if (rows[i].ratio > (1.0 + slack) * rows[i - 1].ratio) return false;
  }
  return true;
}

}  // namespace sbvp
