#include "sbvp/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace sbvp {

namespace {

QuadRule golub_welsch(const RVec& diag, const RVec& off, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::SelfAdjointEigenSolver<RMat> es;
  RVec sub = off;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

}  // namespace

QuadRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::Domain, "gauss_legendre needs n >= 1");
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton on the Legendre recurrence; more accurate than Golub-Welsch weights.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

QuadRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1 || alpha <= -1.0 || beta <= -1.0) throw Error(ErrorKind::Domain, "gauss_jacobi parameters");
  RVec diag(n), off(std::max(0, n - 1));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(b2);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  return golub_welsch(diag, off, mu0);
}

const QuadRule& power_weight_rule(int n, double e, double L) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mtx;
  static std::map<Key, std::unique_ptr<QuadRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  const Key key{n, e, L};
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  const QuadRule base = (e == 0.0) ? gauss_legendre(n) : gauss_jacobi(n, 0.0, e);
  auto r = std::make_unique<QuadRule>();
  r->nodes.resize(n);
  r->weights.resize(n);
  const double scale = std::pow(0.5 * L, e + 1.0);
  for (int i = 0; i < n; ++i) {
    r->nodes[i] = 0.5 * L * (base.nodes[i] + 1.0);
    r->weights[i] = scale * base.weights[i];
  }
  auto& ref = *r;
  cache.emplace(key, std::move(r));
  return ref;
}

RadialGrid composite_grid(const std::vector<double>& breaks, int points_per_element) {
  if (breaks.size() < 2 || points_per_element < 1) throw Error(ErrorKind::Domain, "composite_grid");
  const QuadRule gl = gauss_legendre(points_per_element);
  RadialGrid g;
  g.density_hint = DensityHint::GradedMesh;
  g.x_max = breaks.back();
  for (size_t e = 0; e + 1 < breaks.size(); ++e) {
    const double a = breaks[e], b = breaks[e + 1];
    if (!(b > a)) throw Error(ErrorKind::Domain, "composite_grid breaks must increase");
    GridElement el;
    el.first = g.size();
    el.count = points_per_element;
    el.a = a;
    el.b = b;
    for (int i = 0; i < points_per_element; ++i) {
      g.nodes.push_back(a + 0.5 * (b - a) * (gl.nodes[i] + 1.0));
      g.weights.push_back(0.5 * (b - a) * gl.weights[i]);
    }
    g.elements.push_back(el);
  }
  return g;
}

RadialGrid graded_grid(double x_max, int n_nodes, const GradedOptions& opt) {
  if (!(x_max > 0.0)) throw Error(ErrorKind::Domain, "graded_grid needs x_max > 0");
  const int p = std::max(2, std::min(opt.points_per_element, n_nodes));
  const int E = std::max(1, n_nodes / p);
  const int n_uni = opt.uniform_elements > 0 ? std::min(opt.uniform_elements, E)
                                             : std::max(1, E / 4);
  const int n_geo = E - n_uni;
  std::vector<double> breaks;
  const double xg = (n_geo > 0) ? x_max / (n_uni + 1) : 0.0;
  breaks.push_back(0.0);
  for (int k = n_geo - 1; k >= 1; --k) breaks.push_back(xg * std::pow(opt.ratio, k));
  if (n_geo > 0) breaks.push_back(xg);
  for (int k = 1; k <= n_uni; ++k) breaks.push_back(xg + (x_max - xg) * k / n_uni);
  RadialGrid g = composite_grid(breaks, p);
  if (opt.first_exponent != 0.0) {
    const double h = breaks[1];
    const QuadRule& r = power_weight_rule(p, opt.first_exponent, h);
    for (int i = 0; i < p; ++i) {
      g.nodes[i] = r.nodes[i];
      g.weights[i] = r.weights[i] * std::pow(r.nodes[i], -opt.first_exponent);
    }
  }
  return g;
}

RadialGrid gauss_jacobi_grid(double x_max, int n_nodes, double exponent) {
  const QuadRule& r = power_weight_rule(n_nodes, exponent, x_max);
  RadialGrid g;
  g.density_hint = DensityHint::GaussJacobi;
  g.x_max = x_max;
  g.nodes = r.nodes;
  g.weights.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) g.weights[i] = r.weights[i] * std::pow(r.nodes[i], -exponent);
  GridElement el;
  el.first = 0;
  el.count = n_nodes;
  el.a = 0.0;
  el.b = x_max;
  g.elements.push_back(el);
  return g;
}

}  // namespace sbvp
