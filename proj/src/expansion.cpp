#include "sbvp/expansion.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "sbvp/json_util.hpp"

namespace sbvp {

IndicialData indicial(const Order& nu) {
  IndicialData d;
  d.nu = nu;
  d.roots = {-0.5 + nu.nu, -0.5 - nu.nu};
  const double two = 2.0 * nu.nu;
  const double odd = 2.0 * std::round((two - 1.0) / 2.0) + 1.0;
  d.resonant = odd >= 3.0 && std::fabs(two - odd) < tolerances().resonance;
  return d;
}

ExpansionFit fit_expansion(const GridFunction& u, const Order& nu, const FitOptions& opt) {
  const RadialGrid& g = *u.grid;
  if (g.size() < 4) throw Error(ErrorKind::Domain, "grid too small for an expansion fit");
  ExpansionFit out;
  const double lo = opt.x_lo.value_or(g.nodes[3]);
  const double hi = opt.x_hi.value_or(0.1 * g.x_max);
  out.window = {lo, hi};
  std::vector<int> idx;
  for (int i = 0; i < g.size(); ++i)
    if (g.nodes[i] >= lo && g.nodes[i] <= hi) idx.push_back(i);
  if (idx.size() < 12) throw Error(ErrorKind::Domain, "fit window holds fewer than 12 nodes");

  const double n = nu.nu;
  const bool resonant = indicial(nu).resonant;
  // Regressor exponents: plus branch first so coinciding minus-branch tails are dropped.
  std::vector<double> plus, minus;
  const int step = opt.integer_tail ? 1 : 2;
  const int terms = opt.integer_tail ? 2 * opt.tail_terms : opt.tail_terms;
  for (int k = 0; k <= terms; ++k) plus.push_back(0.5 + n + step * k);
  for (int k = 0; k <= terms; ++k) {
    const double e = 0.5 - n + step * k;
    bool dup = false;
    for (double p : plus) dup = dup || std::fabs(p - e) < 1e-8;
    if (!dup) minus.push_back(e);
  }
  const int cols = static_cast<int>(minus.size() + plus.size()) + (resonant ? 1 : 0);
  const int rows = static_cast<int>(idx.size());
  CMat A(rows, cols);
  CVec b(rows);
  for (int r = 0; r < rows; ++r) {
    const double x = g.nodes[idx[r]];
    // Log measure, and relative to the size x^{1/2 - nu} of the leading term.
    const double w = std::sqrt(g.weights[idx[r]] / x) * std::pow(x, n - 0.5);
    int c = 0;
    for (double e : minus) A(r, c++) = w * std::pow(x, e);
    for (double e : plus) A(r, c++) = w * std::pow(x, e);
    if (resonant) A(r, c++) = w * std::pow(x, 0.5 + n) * std::log(x);
    b(r) = w * u.values[idx[r]];
  }
  RVec scale(cols);
  for (int c = 0; c < cols; ++c) {
    scale(c) = A.col(c).norm();
    A.col(c) /= scale(c);
  }
  Eigen::JacobiSVD<CMat> sv(A);
  const auto& s = sv.singularValues();
  out.condition = std::pow(s(0) / s(s.size() - 1), 2);
  if (!(out.condition <= tolerances().fit_condition)) {
    throw Error(ErrorKind::IllConditionedFit,
                "expansion basis Gram condition " + std::to_string(out.condition) + " exceeds the limit");
  }
  const auto qr = A.colPivHouseholderQr();
  CVec coef = qr.solve(b);
  coef += qr.solve(CVec(b - A * coef));
  const double bn = b.norm();
  out.fit_residual = bn > 0.0 ? (A * coef - b).norm() / bn : (A * coef - b).norm();
  out.g_minus = coef(0) / scale(0);
  out.g_plus = coef(static_cast<int>(minus.size())) / scale(static_cast<int>(minus.size()));
  if (resonant) {
    out.has_log = true;
    out.g_log = coef(cols - 1) / scale(cols - 1);
  }
  return out;
}

double expansion_consistency(const Solution& sol, const Order& nu, const FitOptions& opt) {
  const ExpansionFit f = fit_expansion(sol.u, nu, opt);
  double d = std::abs(f.g_minus - sol.traces.gamma_minus);
  if (sol.traces.has_plus) d = std::max(d, std::abs(2.0 * nu.nu * f.g_plus - sol.traces.gamma_plus));
  return d;
}

std::string to_json(const ExpansionFit& f) {
  Json j;
  j["g_minus"] = complex_json(f.g_minus);
  j["g_plus"] = complex_json(f.g_plus);
  j["g_log"] = complex_json(f.g_log);
  j["has_log"] = f.has_log;
  j["residual"] = f.fit_residual;
  j["condition"] = f.condition;
  j["window"] = {f.window.first, f.window.second};
  return dump17(j);
}

}  // namespace sbvp
