#include "sbvp/spectral_modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "sbvp/json_util.hpp"
#include "sbvp/quadrature.hpp"
#include "sbvp/special_fn.hpp"

namespace sbvp {

namespace {

double q_sq(const std::vector<int>& q) {
  double s = 0.0;
  for (int k : q) s += double(k) * k;
  return s;
}

// Orthonormal basis of {y : h^H y = 0}.
CMat complement(const CVec& h) {
  Eigen::HouseholderQR<CMat> qr(h);
  const CMat Q = qr.householderQ() * CMat::Identity(h.size(), h.size());
  return Q.rightCols(h.size() - 1);
}

GridPtr unit_grid(const Order& nu) {
  GradedOptions opt;
  if (nu.subcritical()) opt.first_exponent = 1.0 - 2.0 * nu.nu;
  return make_grid(graded_grid(1.0, 256, opt));
}

struct Reduced {
  galerkin::Space s;
  galerkin::Forms f;
  CMat basis;  // raw coefficients of the reduced orthonormal coordinates
};

// H^1_q-orthonormal coordinates, restricted to gamma_- = 0 when that constraint applies.
Reduced reduce(const BesselOperator& op, const std::vector<int>& q, int dof, bool dirichlet) {
  Reduced r;
  r.s = galerkin::make_space(op.nu, 1.0, dof);
  r.f = galerkin::assemble(r.s, op, q);
  const double w = 1.0 + q_sq(q);
  CMat T = galerkin::orthonormalize((r.f.S + w * r.f.M).cast<Complex>(), tolerances().basis_prune);
  if (dirichlet && op.nu.subcritical()) {
    const CVec h = T.adjoint() * r.f.gm;
    T = T * complement(h / h.norm());
  }
  r.basis = T;
  return r;
}

bool mode_less(Complex a, Complex b) {
  const double tol = tolerances().degenerate * std::max(1.0, std::abs(a));
  if (std::fabs(std::abs(a) - std::abs(b)) > tol) return std::abs(a) < std::abs(b);
  if (std::fabs(a.imag() - b.imag()) > tol) return a.imag() < b.imag();
  return a.real() < b.real();
}

}  // namespace

std::vector<double> dirichlet_eigenvalues(const Order& nu, int dof) {
  BesselOperator op;
  op.nu = nu;
  op.a = Coefficient::constant(1.0);
  const Reduced r = reduce(op, {}, dof, true);
  const CMat Mr = r.basis.adjoint() * r.f.M.cast<Complex>() * r.basis;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (Mr + Mr.adjoint()), Eigen::EigenvaluesOnly);
  std::vector<double> mu;
  for (int i = static_cast<int>(es.eigenvalues().size()) - 1; i >= 0; --i) {
    const double m = es.eigenvalues()(i);
    if (m > 0.0) mu.push_back(1.0 / m);
  }
  return mu;
}

DirichletSpectrum dirichlet_spectrum(const Order& nu, int q_max, int n_max, int dof) {
  DirichletSpectrum out;
  out.nu = nu;
  const auto zeros = bessel_zeros(nu.nu, n_max).zeros;
  const auto discrete = dirichlet_eigenvalues(nu, dof);
  if (static_cast<int>(discrete.size()) < n_max) throw Error(ErrorKind::Domain, "too few discrete eigenvalues");
  for (int k = 0; k <= q_max; ++k) {
    for (int n = 1; n <= n_max; ++n) {
      DirichletEntry e;
      e.q = {k};
      e.n = n;
      e.closed_form = 1.0 + double(k) * k + zeros[n - 1] * zeros[n - 1];
      e.discrete = discrete[n - 1] + double(k) * k;
      e.rel_error = std::fabs(e.discrete - e.closed_form) / e.closed_form;
      out.max_rel_error = std::max(out.max_rel_error, e.rel_error);
      out.entries.push_back(e);
    }
  }
  return out;
}

ModeSet pencil_modes(const BesselOperator& op, const std::optional<BoundaryOperator>& bc, const std::vector<int>& q,
                     const PencilOptions& opt) {
  if (!op.pencil) throw Error(ErrorKind::Domain, "operator has no spectral parameter");
  const Order& nu = op.nu;
  const bool sub = nu.subcritical();
  if (sub && !bc) throw Error(ErrorKind::Domain, "0 < nu < 1 needs a boundary condition at x = 0");
  if (!sub && bc) throw Error(ErrorKind::Domain, "no boundary condition is imposed at x = 0 when nu >= 1");

  // Boundary row T(lambda) = t_minus(lambda) gamma_- + t_plus(lambda) gamma_+.
  bool essential = false;
  Complex fold0 = 0.0, fold1 = 0.0;  // gamma_+ = -(fold0 + lambda fold1) gamma_-
  if (sub) {
    if (bc->aux() != 0 || bc->rows.size() != 1)
      throw Error(ErrorKind::Domain, "pencil boundary conditions take a single row without auxiliary unknowns");
    const std::vector<double> eta(q.begin(), q.end());
    const auto& row = bc->rows[0];
    const Complex c0 = row.t_minus.value(eta, 0.0), c1 = row.t_minus.lambda;
    const Complex d0 = row.t_plus.value(eta, 0.0), d1 = row.t_plus.lambda;
    if (d1 != Complex(0.0)) throw Error(ErrorKind::Domain, "lambda-dependent gamma_+ coefficient is not supported");
    if (d0 == Complex(0.0)) {
      if (c1 != Complex(0.0)) throw Error(ErrorKind::Domain, "lambda-dependent Dirichlet row is not supported");
      if (c0 == Complex(0.0)) throw Error(ErrorKind::RegularityViolated, "boundary row vanishes");
      essential = true;
    } else {
      fold0 = c0 / d0;
      fold1 = c1 / d0;
    }
  }

  const Reduced r = reduce(op, q, opt.dof, essential);
  const CMat& Z = r.basis;
  const int n = static_cast<int>(Z.cols());
  CMat K0 = r.f.S.cast<Complex>() + r.f.A + r.f.B;
  CMat K1 = r.f.P1;
  CMat K2 = r.f.P0;
  if (sub && !essential) {
    const CMat gg = r.f.gm * r.f.gm.transpose();
    K0 -= fold0 * gg;
    K1 -= fold1 * gg;
  }
  K0 = Z.adjoint() * K0 * Z;
  K1 = Z.adjoint() * K1 * Z;
  K2 = Z.adjoint() * K2 * Z;

  Eigen::PartialPivLU<CMat> lu2(K2);
  {
    Eigen::JacobiSVD<CMat> sv(K2);
    const auto& s = sv.singularValues();
    if (s(s.size() - 1) <= tolerances().singular_rcond * s(0))
      throw Error(ErrorKind::LinearizationSingular, "leading pencil coefficient is numerically singular");
  }
  CMat C = CMat::Zero(2 * n, 2 * n);
  C.topRightCorner(n, n) = CMat::Identity(n, n);
  C.bottomLeftCorner(n, n) = -lu2.solve(K0);
  C.bottomRightCorner(n, n) = -lu2.solve(K1);
  Eigen::ComplexEigenSolver<CMat> es(C);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "companion eigensolver failed");

  std::vector<int> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  const CVec& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&ev](int a, int b) { return mode_less(ev(a), ev(b)); });

  ModeSet m;
  m.nu = nu;
  m.q = q;
  m.source = ModeSource::QuadraticPencil;
  m.dof = n;
  m.cauchy_data.resize(2 * n, 2 * n);
  const double n0 = K0.norm(), n1 = K1.norm(), n2 = K2.norm();
  GridPtr grid = opt.grid ? opt.grid : unit_grid(nu);
  for (int k = 0; k < 2 * n; ++k) {
    const Complex lam = ev(order[k]);
    CVec z = es.eigenvectors().col(order[k]);
    // (y, lambda y): take y from whichever half carries it more accurately.
    CVec y = std::abs(lam) > 1.0 ? CVec(z.tail(n) / lam) : CVec(z.head(n));
    y.normalize();
    const CVec res = K0 * y + lam * (K1 * y) + lam * lam * (K2 * y);
    const double scale = n0 + std::abs(lam) * n1 + std::norm(lam) * n2;
    m.eigenvalues.push_back(lam);
    m.residuals.push_back(res.norm() / scale);
    m.cauchy_data.col(k).head(n) = y;
    m.cauchy_data.col(k).tail(n) = lam * y;
    if (k < opt.functions) m.eigenvectors.push_back(galerkin::synthesize(r.s, Z * y, grid, q));
  }
  return m;
}

ModeSet truncate(const ModeSet& modes, int count) {
  ModeSet t = modes;
  count = std::min<int>(count, static_cast<int>(modes.eigenvalues.size()));
  t.eigenvalues.resize(count);
  t.residuals.resize(count);
  if (static_cast<int>(t.eigenvectors.size()) > count) t.eigenvectors.resize(count);
  t.cauchy_data = modes.cauchy_data.leftCols(count);
  return t;
}

CompletenessReport completeness_check(const ModeSet& modes, int dof) {
  if (modes.eigenvalues.empty()) throw Error(ErrorKind::IncompleteModeInput, "no modes supplied");
  CompletenessReport r;
  r.ambient_dim = 2 * dof;
  CMat D = modes.cauchy_data;
  for (int k = 0; k < D.cols(); ++k) D.col(k).normalize();
  Eigen::JacobiSVD<CMat> sv(D);
  const auto& s = sv.singularValues();
  const double cut = tolerances().rank_rel * s(0);
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > cut) {
      ++r.numerical_rank;
      r.smallest_retained_singular_value = s(i);
    }
  }
  r.verdict = r.numerical_rank == r.ambient_dim;
  r.note =
      "rank surrogate: stacked Cauchy data (u, lambda u) of the discrete pencil against 2 x dof; "
      "infinite-dimensional two-fold completeness is not tested";
  return r;
}

SingularValueReport embedding_singular_values(const Order& nu, int dof) {
  SingularValueReport r;
  for (double mu : dirichlet_eigenvalues(nu, dof)) r.s.push_back(1.0 / std::sqrt(mu));
  // Fit over the well-resolved middle of the spectrum.
  r.fit_first = std::max(2, dof / 8);
  r.fit_last = std::max(r.fit_first + 2, dof / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int j = r.fit_first; j <= r.fit_last && j <= static_cast<int>(r.s.size()); ++j, ++m) {
    const double x = std::log(double(j)), y = std::log(r.s[j - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  r.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  r.constant = std::exp((sy - r.fitted_exponent * sx) / m);
  return r;
}

std::string to_json(const ModeSet& m, const std::optional<CompletenessReport>& c) {
  Json j;
  j["nu"] = m.nu.nu;
  j["q"] = m.q;
  j["source"] = m.source == ModeSource::LinearEVP ? "linear" : "quadratic_pencil";
  j["dof"] = m.dof;
  Json ev = Json::array();
  for (size_t k = 0; k < m.eigenvalues.size(); ++k) {
    ev.push_back({{"re", m.eigenvalues[k].real()}, {"im", m.eigenvalues[k].imag()}, {"residual", m.residuals[k]}});
  }
  j["eigenvalues"] = ev;
  if (c) {
    j["completeness"] = {{"ambient_dim", c->ambient_dim},
                         {"numerical_rank", c->numerical_rank},
                         {"smallest_retained_singular_value", c->smallest_retained_singular_value},
                         {"verdict", c->verdict},
                         {"note", c->note}};
  }
  return dump17(j);
}

}  // namespace sbvp
