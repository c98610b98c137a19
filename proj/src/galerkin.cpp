#include "sbvp/galerkin.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sbvp/quadrature.hpp"

namespace sbvp::galerkin {

namespace {

// Jacobi P_n^{(a,b)}(t) for n = 0..count-1.
void jacobi_sequence(int count, double a, double b, double t, double* out) {
  if (count <= 0) return;
  out[0] = 1.0;
  if (count == 1) return;
  out[1] = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;
  for (int n = 2; n < count; ++n) {
    const double s = 2.0 * n + a + b;
    const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (a * a - b * b);
    const double c3 = (s - 2.0) * (s - 1.0) * s;
    const double c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    out[n] = ((c2 + c3 * t) * out[n - 1] - c4 * out[n - 2]) / c1;
  }
}

// d^m/dt^m of the normalized P_k^{(0,beta)} at t, m = 0..mmax, k = 0..K-1; layout [m * K + k].
void jacobi_derivatives(int K, double beta, double t, int mmax, std::vector<double>& out) {
  out.assign(static_cast<size_t>((mmax + 1) * K), 0.0);
  std::vector<double> seq(K);
  for (int m = 0; m <= mmax; ++m) {
    if (K - m <= 0) break;
    jacobi_sequence(K - m, m, beta + m, t, seq.data());
    for (int k = m; k < K; ++k) {
      double f = 1.0 / std::sqrt(std::pow(2.0, beta + 1.0) / (2.0 * k + beta + 1.0));
      for (int j = 1; j <= m; ++j) f *= 0.5 * (k + beta + j);
      out[m * K + k] = f * seq[k - m];
    }
  }
}

// Q_i^{(m)}(x) for every basis function, m = 0..mmax; layout [m][i].
std::vector<std::vector<double>> factor_jets(const Space& s, double x, int mmax) {
  const int N = s.size();
  std::vector<std::vector<double>> q(mmax + 1, std::vector<double>(N, 0.0));
  const double L = s.L, t = 2.0 * x / L - 1.0, one_minus = 1.0 - x / L;
  std::vector<double> P;
  jacobi_derivatives(s.n_poly, s.beta, t, mmax, P);
  const int K = s.n_poly;
  double tm = 1.0;  // (2/L)^m
  for (int m = 0; m <= mmax; ++m) {
    for (int k = 0; k < K; ++k) {
      double v = one_minus * P[m * K + k] * tm;
      if (m > 0) v -= m / L * P[(m - 1) * K + k] * tm / (2.0 / L);
      q[m][k] = v;
    }
    tm *= 2.0 / L;
  }
  if (s.enrich) {
    q[0][K] = one_minus;
    if (mmax >= 1) q[1][K] = -1.0 / L;
  }
  return q;
}

enum class Part { Value, Derivative };

struct NodeTable {
  std::vector<double> x, w;
  RMat Q, D;  // nodes x functions
};

// Values of Q and of the derivative factor D, where (x^pi Q)' = x^{rho} D.
NodeTable tabulate(const Space& s, const QuadRule& r) {
  NodeTable t;
  t.x = r.nodes;
  t.w = r.weights;
  const int n = static_cast<int>(r.nodes.size()), N = s.size();
  t.Q.resize(n, N);
  t.D.resize(n, N);
  std::vector<double> q, dq;
  for (int i = 0; i < n; ++i) {
    factor_values(s, r.nodes[i], q, dq);
    for (int j = 0; j < N; ++j) {
      const double pi = s.pi(j);
      t.Q(i, j) = q[j];
      t.D(i, j) = pi > 0.0 ? pi * q[j] + r.nodes[i] * dq[j] : dq[j];
    }
  }
  return t;
}

double rho(const Space& s, int i) {
  const double pi = s.pi(i);
  return pi > 0.0 ? pi - 1.0 : 0.0;
}

int coefficient_degree(const Coefficient& c) {
  if (!c.is_polynomial()) return 48;
  return static_cast<int>(c.poly.size());
}

// Class index: 0 polynomial family, 1 enrichment.
std::vector<int> members(const Space& s, int cls) {
  std::vector<int> idx;
  for (int i = 0; i < s.size(); ++i)
    if ((i < s.n_poly ? 0 : 1) == cls) idx.push_back(i);
  return idx;
}

}  // namespace

void factor_values(const Space& s, double x, std::vector<double>& q, std::vector<double>& dq) {
  auto j = factor_jets(s, x, 1);
  q = std::move(j[0]);
  dq = std::move(j[1]);
}

Space make_space(const Order& nu, double L, int dof) {
  if (dof < 4) throw Error(ErrorKind::Domain, "Galerkin space needs at least 4 functions");
  Space s;
  s.nu = nu;
  s.L = L;
  s.k0 = nu.subcritical() ? 0 : static_cast<int>(std::floor(nu.nu)) + 1;
  s.beta = 1.0 - 2.0 * nu.nu + 2.0 * s.k0;
  // x^{2 nu} already lies in the polynomial family when 2 nu - k0 is a whole number.
  const double gap = 2.0 * nu.nu - s.k0;
  s.enrich = !(gap >= -1e-12 && std::fabs(gap - std::round(gap)) < 1e-12);
  s.n_poly = s.enrich ? dof - 1 : dof;
  return s;
}

Space extend(const Space& s, int extra_poly) {
  Space r = s;
  r.n_poly += extra_poly;
  return r;
}

Forms assemble(const Space& s, const BesselOperator& P, const std::vector<int>& q) {
  const int N = s.size();
  const double nu = s.nu.nu;
  Forms f;
  f.S = RMat::Zero(N, N);
  f.M = RMat::Zero(N, N);
  f.A = CMat::Zero(N, N);
  f.B = CMat::Zero(N, N);
  f.P1 = CMat::Zero(N, N);
  f.P0 = CMat::Zero(N, N);
  f.gm = CVec::Zero(N);
  const Complex symbol = P.symbol_at(q);
  const bool has_b = !P.b.is_zero();
  const bool has_pencil = P.pencil.has_value();
  int extra = std::max(coefficient_degree(P.a), coefficient_degree(P.b));
  if (has_pencil) extra = std::max({extra, coefficient_degree(P.pencil->first), coefficient_degree(P.pencil->second)});
  const int nq = N + 8 + extra;

  for (int ci = 0; ci < 2; ++ci) {
    const auto I = members(s, ci);
    if (I.empty()) continue;
    for (int cj = 0; cj < 2; ++cj) {
      const auto Jm = members(s, cj);
      if (Jm.empty()) continue;
      const int i0 = I.front(), j0 = Jm.front();
      auto block = [&](double e, Part pi_part, Part pj_part, const std::function<Complex(double)>& c) {
        const QuadRule& r = power_weight_rule(nq, e, s.L);
        const NodeTable t = tabulate(s, r);
        const RMat& Vi = pi_part == Part::Value ? t.Q : t.D;
        const RMat& Vj = pj_part == Part::Value ? t.Q : t.D;
        CVec wc(r.nodes.size());
        for (size_t n = 0; n < r.nodes.size(); ++n) wc(n) = r.weights[n] * (c ? c(r.nodes[n]) : Complex(1.0));
        CMat out(I.size(), Jm.size());
        const CMat WVj = wc.asDiagonal() * Vj.middleCols(j0, Jm.size()).cast<Complex>();
        out = Vi.middleCols(i0, I.size()).transpose().cast<Complex>() * WVj;
        return out;
      };
      const double base = 1.0 - 2.0 * nu;
      const double e_stiff = base + rho(s, i0) + rho(s, j0);
      const double e_mass = base + s.pi(i0) + s.pi(j0);
      f.S.block(i0, j0, I.size(), Jm.size()) = block(e_stiff, Part::Derivative, Part::Derivative, nullptr).real();
      f.M.block(i0, j0, I.size(), Jm.size()) = block(e_mass, Part::Value, Part::Value, nullptr).real();
      const Coefficient a = P.a;
      f.A.block(i0, j0, I.size(), Jm.size()) =
          block(e_mass, Part::Value, Part::Value, [&a, symbol](double x) { return a(x) + symbol; });
      if (has_b) {
        const Coefficient b = P.b;
        if (!P.adjoint_form) {
          // <b D_nu phi_j, phi_i> = -i int b (d_nu phi_j) phi_i
          f.B.block(i0, j0, I.size(), Jm.size()) =
              Complex(0.0, -1.0) * block(base + rho(s, j0) + s.pi(i0), Part::Value, Part::Derivative,
                                         [&b](double x) { return b(x); });
        } else {
          // <D_nu^*(b phi_j), phi_i> = i int b phi_j (d_nu phi_i)
          f.B.block(i0, j0, I.size(), Jm.size()) =
              Complex(0.0, 1.0) * block(base + s.pi(j0) + rho(s, i0), Part::Derivative, Part::Value,
                                        [&b](double x) { return b(x); });
        }
      }
      if (has_pencil) {
        const Coefficient p1 = P.pencil->first, p0 = P.pencil->second;
        f.P1.block(i0, j0, I.size(), Jm.size()) =
            block(e_mass, Part::Value, Part::Value, [&p1](double x) { return p1(x); });
        f.P0.block(i0, j0, I.size(), Jm.size()) =
            block(e_mass, Part::Value, Part::Value, [&p0](double x) { return p0(x); });
      }
    }
  }
  if (s.k0 == 0) {
    std::vector<double> qv, dq;
    factor_values(s, 0.0, qv, dq);
    for (int i = 0; i < s.n_poly; ++i) f.gm(i) = qv[i];
  }
  return f;
}

Forms leading_block(const Forms& f, const Space& full, const Space& sub) {
  // Sub-space indices: first sub.n_poly polynomials, then the enrichment.
  std::vector<int> idx;
  for (int k = 0; k < sub.n_poly; ++k) idx.push_back(k);
  if (sub.enrich) idx.push_back(full.n_poly);
  const int n = static_cast<int>(idx.size());
  auto pick = [&](const auto& M) {
    using Mat = std::decay_t<decltype(M)>;
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = M(idx[i], idx[j]);
    return out;
  };
  Forms r;
  r.S = pick(f.S);
  r.M = pick(f.M);
  r.A = pick(f.A);
  r.B = pick(f.B);
  r.P1 = pick(f.P1);
  r.P0 = pick(f.P0);
  r.gm.resize(n);
  for (int i = 0; i < n; ++i) r.gm(i) = f.gm(idx[i]);
  return r;
}

CVec load(const Space& s, const GridFunction& f) {
  const int N = s.size();
  CVec out = CVec::Zero(N);
  const double nu = s.nu.nu;
  if (f.analytic() && f.evaluable()) {
    const int nq = N + 40;
    for (const auto& term : f.terms) {
      for (int cls = 0; cls < 2; ++cls) {
        const auto I = members(s, cls);
        if (I.empty()) continue;
        const double e = term.power + 0.5 - nu + s.pi(I.front());
        if (e <= -1.0) throw Error(ErrorKind::Domain, "right-hand side too singular at x = 0");
        const QuadRule& r = power_weight_rule(nq, e, s.L);
        std::vector<double> q, dq;
        for (size_t n = 0; n < r.nodes.size(); ++n) {
          const Complex F = term.gen(r.nodes[n])[0] * r.weights[n];
          factor_values(s, r.nodes[n], q, dq);
          for (int i : I) out(i) += F * q[i];
        }
      }
    }
    return out;
  }
  const RadialGrid& g = *f.grid;
  const int E = static_cast<int>(g.elements.size());
  for (const auto& el : g.elements) {
    const int m = el.count + N / std::max(1, E) + 8;
    const QuadRule gl = gauss_legendre(m);
    std::vector<double> q, dq;
    for (int n = 0; n < m; ++n) {
      const double x = el.a + 0.5 * (el.b - el.a) * (gl.nodes[n] + 1.0);
      const double w = 0.5 * (el.b - el.a) * gl.weights[n];
      const Complex fx = f.eval(x) * w;
      factor_values(s, x, q, dq);
      for (int i = 0; i < N; ++i) out(i) += fx * std::pow(x, s.term_power(i)) * q[i];
    }
  }
  return out;
}

CMat orthonormalize(const CMat& G, double rel_tol) {
  const int n = static_cast<int>(G.rows());
  RVec d(n);
  for (int i = 0; i < n; ++i) d(i) = 1.0 / std::sqrt(std::max(G(i, i).real(), 1e-300));
  const CMat Gs = d.asDiagonal() * G * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<CMat> es(Gs);
  const RVec& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (ev(i) > rel_tol * top) keep.push_back(i);
  CMat T(n, keep.size());
  for (size_t k = 0; k < keep.size(); ++k) {
    T.col(k) = d.asDiagonal() * es.eigenvectors().col(keep[k]) / std::sqrt(ev(keep[k]));
  }
  return T;
}

GridFunction synthesize(const Space& s, const CVec& c, GridPtr grid, std::vector<int> q) {
  const double nu = s.nu.nu;
  std::vector<std::pair<double, JetFn>> terms;
  const Space sp = s;
  const CVec coeffs = c;
  terms.emplace_back(s.term_power(0), [sp, coeffs](double x) {
    const auto j = factor_jets(sp, x, 4);
    Jet out{};
    for (int m = 0; m < 5; ++m)
      for (int k = 0; k < sp.n_poly; ++k) out[m] += coeffs(k) * j[m][k];
    return out;
  });
  if (s.enrich) {
    const Complex ce = c(s.n_poly);
    const double L = s.L;
    terms.emplace_back(0.5 + nu, [ce, L](double x) {
      Jet out{};
      out[0] = ce * (1.0 - x / L);
      out[1] = -ce / L;
      return out;
    });
  }
  GridFunction u = power_sum(std::move(grid), nu, std::move(terms));
  u.fourier_index = std::move(q);
  return u;
}

}  // namespace sbvp::galerkin
