#include "sbvp/kg_model.hpp"

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sbvp {

namespace {

void check_lorentzian(const RMat& g, int sample) {
  if (g.rows() != g.cols()) throw Error(ErrorKind::Signature, "gamma0 must be square");
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  int pos = 0, neg = 0;
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > 1e-12 * scale) ++pos;
    else if (v < -1e-12 * scale) ++neg;
  }
  if (pos != 1 || neg != g.rows() - 1) {
    throw Error(ErrorKind::Signature, "gamma0 is not Lorentzian at sample " + std::to_string(sample));
  }
}

// -G((-lambda, eta), (-lambda, eta)) for a symmetric inverse metric G.
Complex quadratic(const RMat& G, const std::vector<double>& eta, Complex lambda) {
  Complex v = G(0, 0) * lambda * lambda;
  for (size_t i = 0; i < eta.size(); ++i) {
    v -= 2.0 * lambda * G(0, i + 1) * eta[i];
    for (size_t j = 0; j < eta.size(); ++j) v += G(i + 1, j + 1) * eta[i] * eta[j];
  }
  return -v;
}

std::vector<double> kronecker_point(int k, int dim) {
  std::vector<double> y(dim);
  for (int d = 0; d < dim; ++d) {
    const double alpha = std::fmod(std::sqrt(2.0 + 3.0 * d), 1.0);
    y[d] = 2.0 * kPi * std::fmod(k * alpha, 1.0);
  }
  return y;
}

std::vector<std::vector<double>> unit_directions(int dim) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    out.push_back(e);
    e[i] = -1.0;
    out.push_back(e);
  }
  if (dim >= 2) {
    for (int k = 0; k < 8; ++k) {
      std::vector<double> e(dim, 0.0);
      double nrm = 0.0;
      for (int i = 0; i < dim; ++i) {
        e[i] = std::cos(2.399963 * k + 1.3 * i);
        nrm += e[i] * e[i];
      }
      for (double& v : e) v /= std::sqrt(nrm);
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace

ModelMetric ModelMetric::static_product(int n) {
  RMat g = -RMat::Identity(n, n);
  g(0, 0) = 1.0;
  return constant(g);
}

ModelMetric ModelMetric::constant(const RMat& gamma0, double e0, const RMat& gamma1) {
  ModelMetric m;
  m.n = static_cast<int>(gamma0.rows());
  m.gamma0 = [gamma0](const std::vector<double>&) { return gamma0; };
  if (gamma1.size() > 0) m.gamma1 = [gamma1](const std::vector<double>&) { return gamma1; };
  m.e0 = [e0](const std::vector<double>&) { return e0; };
  return m;
}

double nu_from_mass(double mass, int n) {
  const double s = mass + 0.25 * n * n;
  if (!(s > 0.0)) throw Error(ErrorKind::BFViolated, "mass + n^2/4 must be positive");
  return std::sqrt(s);
}

double mass_from_nu(double nu, int n) { return nu * nu - 0.25 * n * n; }

KGReduction reduce(const ModelMetric& metric, double mass, const std::vector<int>& q, const std::vector<double>& y) {
  KGReduction r;
  r.mass = mass;
  r.nu = Order::make(nu_from_mass(mass, metric.n));
  r.bf_satisfied = true;
  r.q = q.empty() ? std::vector<int>(metric.n - 1, 0) : q;
  if (static_cast<int>(r.q.size()) != metric.n - 1)
    throw Error(ErrorKind::Domain, "tangential mode must have n - 1 components");
  const std::vector<double> at = y.empty() ? std::vector<double>(metric.n - 1, 0.0) : y;
  const RMat g0 = metric.gamma0(at);
  check_lorentzian(g0, 0);
  const RMat G = g0.inverse();
  RMat H = RMat::Zero(metric.n, metric.n);
  if (metric.gamma1) {
    const RMat g1 = metric.gamma1(at);
    H = -G * g1 * G;
    const double rel = std::fabs(metric.e0(at) - (G * g1).trace());
    if (rel > tolerances().determinant_relation) {
      r.warnings.push_back("e0 differs from tr(gamma0^{-1} gamma1) by " + std::to_string(rel));
    }
  }
  const double e0 = metric.e0 ? metric.e0(at) : 0.0;
  const double nu = r.nu.nu;
  const std::vector<double> eta(r.q.begin(), r.q.end());

  // Split -gamma(x)^{-1}((-lambda, q), (-lambda, q)) into powers of lambda; x^2 terms from gamma1.
  auto parts = [&eta](const RMat& M) {
    double c0 = 0.0, c1 = 0.0;
    for (size_t i = 0; i < eta.size(); ++i) {
      c1 += 2.0 * M(0, i + 1) * eta[i];
      for (size_t j = 0; j < eta.size(); ++j) c0 -= M(i + 1, j + 1) * eta[i] * eta[j];
    }
    return std::array<double, 3>{c0, c1, -M(0, 0)};
  };
  const auto lead = parts(G);
  const auto corr = parts(H);

  BesselOperator& op = r.op;
  op.nu = r.nu;
  op.a = Coefficient::polynomial({-e0 * (nu - 0.5), 0.0, corr[0]});
  op.b = e0 != 0.0 ? Coefficient::linear(Complex(0.0, e0)) : Coefficient::zero();
  const RMat Gyy = G.bottomRightCorner(metric.n - 1, metric.n - 1);
  op.fourier_symbol = [Gyy](const std::vector<int>& k) {
    double v = 0.0;
    for (int i = 0; i < Gyy.rows(); ++i)
      for (int j = 0; j < Gyy.cols(); ++j) v -= Gyy(i, j) * k[i] * k[j];
    return Complex(v);
  };
  PencilCoeffs pc;
  pc.first = Coefficient::polynomial({lead[1], 0.0, corr[1]});
  pc.second = Coefficient::polynomial({lead[2], 0.0, corr[2]});
  op.pencil = pc;
  return r;
}

BoundarySymbol kg_boundary_symbol(const ModelMetric& metric, const std::vector<double>& y) {
  const RMat G = metric.gamma0(y).inverse();
  BoundarySymbol s;
  s.dim_eta = metric.n - 1;
  s.has_lambda = true;
  s.a2 = [G](const std::vector<double>& eta, Complex lambda) { return quadratic(G, eta, lambda); };
  return s;
}

EllipticityVerdict ellipticity_verdicts(const KGReduction& red, const ModelMetric& metric, int samples) {
  if (static_cast<int>(red.q.size()) != metric.n - 1)
    throw Error(ErrorKind::Domain, "reduction and metric disagree on the boundary dimension");
  if (samples < 8) throw Error(ErrorKind::Domain, "at least 8 boundary samples are required");
  EllipticityVerdict v;
  v.elliptic = v.parameter_elliptic = true;
  const int dim = metric.n - 1;
  const auto dirs = unit_directions(dim);
  for (int k = 0; k < samples; ++k) {
    const auto y = kronecker_point(k, dim);
    v.samples.push_back(y);
    const RMat g0 = metric.gamma0(y);
    check_lorentzian(g0, k);
    const RMat G = g0.inverse();
    const bool dt_timelike_vector = g0(0, 0) > 0.0;  // gamma0(d_t, d_t) > 0
    const bool dt_timelike_covector = G(0, 0) > 0.0;  // gamma0^{-1}(dt, dt) > 0
    if (!dt_timelike_vector && v.elliptic) {
      v.elliptic = false;
      v.elliptic_failure = k;
    }
    if (!dt_timelike_covector && v.parameter_elliptic) {
      v.parameter_elliptic = false;
      v.parameter_failure = k;
    }
    const BoundarySymbol sym = kg_boundary_symbol(metric, y);
    if (dt_timelike_vector) {
      for (const auto& e : dirs)
        if (!elliptic_roots(sym, e, 0.0).elliptic) v.elliptic_cross_checked = false;
    }
    if (dt_timelike_covector) {
      // lambda on the imaginary axis, away from 0; lambda = 0 is the non-parameter case.
      for (double s : {0.25, 0.6, 0.9, 1.0}) {
        for (double sign : {1.0, -1.0}) {
          const Complex lam(0.0, sign * s);
          const double r = std::sqrt(std::max(0.0, 1.0 - s * s));
          if (r == 0.0) {
            if (!elliptic_roots(sym, std::vector<double>(dim, 0.0), lam).elliptic) v.parameter_cross_checked = false;
            continue;
          }
          for (const auto& e : dirs) {
            std::vector<double> eta(e);
            for (double& c : eta) c *= r;
            if (!elliptic_roots(sym, eta, lam).elliptic) v.parameter_cross_checked = false;
          }
        }
      }
    }
  }
  return v;
}

}  // namespace sbvp
