#include "sbvp/special_fn.hpp"

#include <cmath>
#include <limits>

namespace sbvp {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Overflow: return "OverflowError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Branch: return "BranchError";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::TraceFit: return "TraceFitError";
    case ErrorKind::RegularityViolated: return "RegularityViolated";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SpectralParameterOnCut: return "SpectralParameterOnCut";
    case ErrorKind::LinearizationSingular: return "LinearizationSingular";
    case ErrorKind::IncompleteModeInput: return "IncompleteModeInput";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::BFViolated: return "BFViolated";
    case ErrorKind::Signature: return "SignatureError";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Error";
}

namespace {
Tolerances& tolerance_store() {
  static Tolerances t;
  return t;
}
}  // namespace

const Tolerances& tolerances() { return tolerance_store(); }

void set_tolerances(const Tolerances& t) { tolerance_store() = t; }

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIt = 200000;

// Taylor coefficients of 1/Gamma(1+x) at x = 0.
constexpr double kRecipGamma[] = {
    1.00000000000000000000e+00,  5.77215664901532865549e-01,  -6.55878071520253902449e-01,
    -4.20026350340952370210e-02, 1.66538611382291479313e-01,  -4.21977345555443333902e-02,
    -9.62197152787697303211e-03, 7.21894324666309990246e-03,  -1.16516759185906516871e-03,
    -2.15241674114950975192e-04, 1.28050282388116195512e-04,  -2.01348547807882386862e-05,
    -1.25049348214267063072e-06, 1.13302723198169592860e-06,  -2.05633841697760707339e-07,
    6.11609510448141608721e-09,  5.00200764446922294544e-09,  -1.18127457048702004406e-09,
    1.04342671169110053979e-10,  7.78226343990507081432e-12,  -3.69680561864220597869e-12,
    5.10037028745447575372e-13,  -2.05832605356650663575e-14, -5.34812253942301782029e-15,
    1.22677862823826084089e-15,  -1.18125930169745883374e-16, 1.18669225475160037462e-18,
    1.41238065531803185733e-18,  -2.29874568443537021993e-19, 1.71440632192733742815e-20,
};

// Temme's auxiliary gamma combinations for |mu| <= 1/2.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  double even = 0.0, odd = 0.0;
  constexpr int n = sizeof(kRecipGamma) / sizeof(double);
  double p = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k % 2 == 0) {
      even += kRecipGamma[k] * p;
    } else {
      odd += kRecipGamma[k] * p / (mu == 0.0 ? 1.0 : mu);
    }
    p *= mu;
  }
  // odd currently holds sum_{k odd} c_k mu^{k-1}; at mu == 0 only c_1 survives.
  if (mu == 0.0) odd = kRecipGamma[1];
  TemmeGammas g;
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  g.gam1 = -odd;
  g.gam2 = even;
  return g;
}

void check_finite(Complex v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorKind::Overflow, what);
  }
}

struct IK {
  Complex I, Ip, K, Kp;
};

// Steed/Temme evaluation of I and K for Re x > 0. I comes from the Wronskian.
IK bessik(double xnu, Complex x) {
  const int nl = static_cast<int>(xnu + 0.5);
  const double xmu = xnu - nl;
  const double xmu2 = xmu * xmu;
  const Complex xi = 1.0 / x;
  const Complex xi2 = 2.0 * xi;

  Complex h = xnu * xi;
  if (std::abs(h) < kTiny) h = kTiny;
  Complex b = xi2 * xnu, d = 0.0, c = h;
  int i = 1;
  for (; i <= kMaxIt; ++i) {
    b += xi2;
    Complex den = b + d;
    if (std::abs(den) < kTiny) den = kTiny;
    d = 1.0 / den;
    c = b + 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    const Complex del = c * d;
    h = del * h;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i > kMaxIt) throw Error(ErrorKind::NonConvergence, "bessel_I continued fraction");

  Complex ril = 1.0, ripl = h, ril1 = ril, rip1 = ripl;
  Complex fact = xnu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const Complex ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
  }
  const Complex f = ripl / ril;

  Complex rkmu, rk1;
  if (std::abs(x) < 2.0) {
    const Complex x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fct = (std::fabs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    Complex dd = -std::log(x2);
    Complex e = xmu * dd;
    Complex fact2;
    if (std::abs(e) < 1e-4) {
      fact2 = 1.0 + e * e / 6.0 + e * e * e * e / 120.0;
    } else {
      fact2 = std::sinh(e) / e;
    }
    const TemmeGammas g = temme_gammas(xmu);
    Complex ff = fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * dd);
    Complex sum = ff;
    e = std::exp(e);
    Complex p = 0.5 * e / g.gampl;
    Complex q = 0.5 / (e * g.gammi);
    Complex cc = 1.0;
    dd = x2 * x2;
    Complex sum1 = p;
    for (i = 1; i <= kMaxIt; ++i) {
      const double di = i;
      ff = (di * ff + p + q) / (di * di - xmu2);
      cc *= dd / di;
      p /= (di - xmu);
      q /= (di + xmu);
      const Complex del = cc * ff;
      sum += del;
      sum1 += cc * (p - di * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIt) throw Error(ErrorKind::NonConvergence, "bessel_K series");
    rkmu = sum;
    rk1 = sum1 * xi2;
  } else {
    Complex bb = 2.0 * (1.0 + x);
    Complex dd = 1.0 / bb;
    Complex hh = dd, delh = dd;
    Complex q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    Complex q = a1, cc = a1;
    double a = -a1;
    Complex s = 1.0 + q * delh;
    for (i = 1; i <= kMaxIt; ++i) {
      a -= 2 * i;
      cc = -a * cc / (i + 1.0);
      const Complex qnew = (q1 - bb * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += cc * qnew;
      bb += 2.0;
      dd = 1.0 / (bb + a * dd);
      delh = (bb * dd - 1.0) * delh;
      hh += delh;
      const Complex dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (i > kMaxIt) throw Error(ErrorKind::NonConvergence, "bessel_K continued fraction");
    hh = a1 * hh;
    rkmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
  }
  const Complex rkmup = xmu * xi * rkmu - rk1;
  const Complex rimu = xi / (f * rkmu - rkmup);
  IK out;
  out.I = rimu * ril1 / ril;
  out.Ip = rimu * rip1 / ril;
  for (i = 1; i <= nl; ++i) {
    const Complex rktemp = (xmu + i) * xi2 * rk1 + rkmu;
    rkmu = rk1;
    rk1 = rktemp;
  }
  out.K = rkmu;
  out.Kp = xnu * xi * rkmu - rk1;
  return out;
}

// Hankel-type large-argument sums: sum_k (sign)^k a_k(nu) / z^k.
Complex hankel_sum(double nu, Complex z, double sign) {
  const double mu = 4.0 * nu * nu;
  Complex term = 1.0, sum = 1.0;
  double prev = 1e300;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu - odd * odd) / (8.0 * k) / z;
    const double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    prev = mag;
    if (mag < kEps * std::abs(sum)) break;
  }
  return sum;
}

bool use_asymptotic(double nu, Complex z) {
  const double r = std::abs(z);
  return r >= 20.0 && r > nu * nu;
}

Complex K_asymptotic(double nu, Complex z) {
  return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * hankel_sum(nu, z, 1.0);
}

Complex I_asymptotic(double nu, Complex z) {
  const Complex pref = 1.0 / std::sqrt(2.0 * kPi * z);
  Complex v = pref * std::exp(z) * hankel_sum(nu, z, -1.0);
  if (z.real() < 20.0) {
    const Complex I(0.0, 1.0);
    const double s = z.imag() >= 0.0 ? 1.0 : -1.0;
    v += s * I * std::exp(s * I * nu * kPi) * pref * std::exp(-z) * hankel_sum(nu, z, 1.0);
  }
  return v;
}

Complex I_series(double nu, Complex z) {
  if (z == Complex(0.0)) return nu == 0.0 ? 1.0 : 0.0;
  const Complex q = 0.25 * z * z;
  Complex t = recip_gamma(nu + 1.0);
  Complex sum = t;
  for (int k = 1; k < 500; ++k) {
    t *= q / (k * (k + nu));
    sum += t;
    if (std::abs(t) < 1e-17 * std::abs(sum) && k > std::abs(z)) break;
  }
  return std::exp(nu * std::log(0.5 * z)) * sum;
}

Complex K_value(double nu, Complex z) {
  if (use_asymptotic(nu, z)) return K_asymptotic(nu, z);
  return bessik(nu, z).K;
}

// I for Re z >= 0 (principal branch).
Complex I_value_right(double nu, Complex z) {
  if (std::abs(z) <= 8.0) return I_series(nu, z);
  if (z.real() > 700.0) throw Error(ErrorKind::Overflow, "bessel_I: Re z too large");
  if (use_asymptotic(nu, z)) return I_asymptotic(nu, z);
  if (z.real() == 0.0) {
    const double y = z.imag();
    const Complex I(0.0, 1.0);
    const double s = y > 0.0 ? 1.0 : -1.0;
    return std::exp(s * I * kPi * nu / 2.0) * eval_J(nu, std::fabs(y));
  }
  return bessik(nu, z).I;
}

Complex I_value(double nu, Complex z) {
  if (std::abs(z) <= 8.0) return I_series(nu, z);
  if (z.real() >= 0.0) return I_value_right(nu, z);
  const Complex I(0.0, 1.0);
  const double s = z.imag() >= 0.0 ? 1.0 : -1.0;
  return std::exp(s * I * kPi * nu) * I_value_right(nu, -z);
}

struct JY {
  double J, Jp, Y, Yp;
};

// Steed's method for J and Y, real x > 0.
JY bessjy(double xnu, double x) {
  const double XMIN = 2.0;
  const int nl = (x < XMIN ? static_cast<int>(xnu + 0.5) : std::max(0, static_cast<int>(xnu - x + 1.5)));
  const double xmu = xnu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / kPi;
  int isign = 1;
  double h = xnu * xi;
  if (h < kTiny) h = kTiny;
  double b = xi2 * xnu, d = 0.0, c = h;
  int i = 0;
  for (; i < kMaxIt; ++i) {
    b += xi2;
    d = b - d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h = del * h;
    if (d < 0.0) isign = -isign;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  if (i >= kMaxIt) throw Error(ErrorKind::NonConvergence, "bessel_J continued fraction");
  double rjl = isign * 1.0, rjpl = h * rjl;
  const double rjl1 = rjl, rjp1 = rjpl;
  double fact = xnu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;
  double rjmu, rymu, rymup, ry1;
  if (x < XMIN) {
    const double x2 = 0.5 * x, pimu = kPi * xmu;
    const double fct = (std::fabs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu));
    d = -std::log(x2);
    double e = xmu * d;
    const double fact2 = (std::fabs(e) < 1e-4 ? 1.0 + e * e / 6.0 : std::sinh(e) / e);
    const TemmeGammas g = temme_gammas(xmu);
    double ff = 2.0 / kPi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    e = std::exp(e);
    double p = e / (g.gampl * kPi);
    double q = 1.0 / (e * kPi * g.gammi);
    const double pimu2 = 0.5 * pimu;
    const double fact3 = (std::fabs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2);
    const double r = kPi * pimu2 * fact3 * fact3;
    c = 1.0;
    d = -x2 * x2;
    double sum = ff + r * q, sum1 = p;
    for (i = 1; i <= kMaxIt; ++i) {
      ff = (i * ff + p + q) / (i * i - xmu2);
      c *= (d / i);
      p /= (i - xmu);
      q /= (i + xmu);
      const double del = c * (ff + r * q);
      sum += del;
      const double del1 = c * p - i * del;
      sum1 += del1;
      if (std::fabs(del) < (1.0 + std::fabs(sum)) * kEps) break;
    }
    if (i > kMaxIt) throw Error(ErrorKind::NonConvergence, "bessel_Y series");
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = xmu * xi * rymu - ry1;
    rjmu = w / (rymup - f * rymu);
  } else {
    double a = 0.25 - xmu2, p = -0.5 * xi, q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct, ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den, di = -bi / den;
    double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for (i = 1; i < kMaxIt; ++i) {
      a += 2 * i;
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::fabs(dr) + std::fabs(di) < kTiny) dr = kTiny;
      fct = a / (cr * cr + ci * ci);
      cr = br + cr * fct;
      ci = bi - ci * fct;
      if (std::fabs(cr) + std::fabs(ci) < kTiny) cr = kTiny;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::fabs(dlr - 1.0) + std::fabs(dli) < kEps) break;
    }
    if (i >= kMaxIt) throw Error(ErrorKind::NonConvergence, "bessel_J continued fraction 2");
    const double gam = (p - f) / q;
    rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = xmu * xi * rymu - rymup;
  }
  const double fct = rjmu / rjl;
  JY out;
  out.J = rjl1 * fct;
  out.Jp = rjp1 * fct;
  for (i = 1; i <= nl; ++i) {
    const double rytemp = (xmu + i) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
  }
  out.Y = rymu;
  out.Yp = xnu * xi * rymu - ry1;
  return out;
}

double J_asymptotic(double nu, double x, double* deriv) {
  // Hankel expansion with P and Q sums.
  const double mu = 4.0 * nu * nu;
  double P = 1.0, Q = 0.0, term = 1.0, prev = 1e300;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::fabs(term);
    if (mag > prev) break;
    prev = mag;
    const int r = k % 4;
    if (r == 1) Q += term;
    else if (r == 2) P -= term;
    else if (r == 3) Q -= term;
    else P += term;
    if (mag < kEps) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double pref = std::sqrt(2.0 / (kPi * x));
  if (deriv) *deriv = std::numeric_limits<double>::quiet_NaN();
  return pref * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace

double gamma_fn(double x) { return std::tgamma(x); }

double recip_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  if (std::fabs(x - 1.0) <= 0.5) {
    const double t = x - 1.0;
    double s = 0.0, p = 1.0;
    for (double c : kRecipGamma) {
      s += c * p;
      p *= t;
    }
    return s;
  }
  return 1.0 / std::tgamma(x);
}

BesselEval bessel_K(double nu, Complex z) {
  if (nu < 0.0) nu = -nu;
  if (!(z.real() > 0.0)) throw Error(ErrorKind::Domain, "bessel_K requires Re z > 0");
  BesselEval e;
  e.order = nu;
  e.argument = z;
  if (use_asymptotic(nu + 1.0, z)) {
    e.value = K_asymptotic(nu, z);
    e.derivative = -K_asymptotic(nu + 1.0, z) + nu / z * e.value;
  } else {
    const IK r = bessik(nu, z);
    e.value = r.K;
    e.derivative = r.Kp;
  }
  check_finite(e.value, "bessel_K value not representable");
  check_finite(e.derivative, "bessel_K derivative not representable");
  return e;
}

Complex eval_K(double nu, Complex z) {
  if (nu < 0.0) nu = -nu;
  if (!(z.real() > 0.0)) throw Error(ErrorKind::Domain, "bessel_K requires Re z > 0");
  const Complex v = K_value(nu, z);
  check_finite(v, "bessel_K value not representable");
  return v;
}

BesselEval bessel_I(double nu, Complex z) {
  if (nu < 0.0) throw Error(ErrorKind::Domain, "bessel_I requires nu >= 0");
  BesselEval e;
  e.order = nu;
  e.argument = z;
  e.value = I_value(nu, z);
  if (z == Complex(0.0)) {
    if (nu > 0.0 && nu < 1.0) throw Error(ErrorKind::Domain, "bessel_I derivative singular at 0");
    e.derivative = (nu == 1.0) ? 0.5 : 0.0;
  } else {
    e.derivative = I_value(nu + 1.0, z) + nu / z * e.value;
  }
  check_finite(e.value, "bessel_I value not representable");
  check_finite(e.derivative, "bessel_I derivative not representable");
  return e;
}

Complex eval_I(double nu, Complex z) {
  if (nu < 0.0) throw Error(ErrorKind::Domain, "bessel_I requires nu >= 0");
  const Complex v = I_value(nu, z);
  check_finite(v, "bessel_I value not representable");
  return v;
}

double eval_J(double nu, double x) {
  if (nu < 0.0 || !(x > 0.0)) throw Error(ErrorKind::Domain, "bessel_J requires nu >= 0, x > 0");
  if (x >= 25.0 && x > 2.0 * nu * nu) return J_asymptotic(nu, x, nullptr);
  return bessjy(nu, x).J;
}

double eval_J_derivative(double nu, double x) {
  if (nu < 0.0 || !(x > 0.0)) throw Error(ErrorKind::Domain, "bessel_J requires nu >= 0, x > 0");
  return -eval_J(nu + 1.0, x) + nu / x * eval_J(nu, x);
}

double eval_Y(double nu, double x) {
  if (nu < 0.0 || !(x > 0.0)) throw Error(ErrorKind::Domain, "bessel_Y requires nu >= 0, x > 0");
  return bessjy(nu, x).Y;
}

BesselZeroTable bessel_zeros(double nu, int count) {
  if (nu < 0.0 || count < 1) throw Error(ErrorKind::Domain, "bessel_zeros requires nu >= 0, count >= 1");
  const double tol = tolerances().zero_residual;
  BesselZeroTable table;
  table.order = nu;
  auto newton = [&](double x0, double* out) {
    double x = x0;
    for (int it = 0; it < 60; ++it) {
      const double J = eval_J(nu, x);
      if (std::fabs(J) < tol) {
        *out = x;
        return true;
      }
      const double dJ = eval_J_derivative(nu, x);
      const double step = J / dJ;
      x -= step;
      if (!(x > 0.0) || !std::isfinite(x)) return false;
      if (std::fabs(step) < 1e-15 * x) {
        *out = x;
        return std::fabs(eval_J(nu, x)) < 10.0 * tol;
      }
    }
    return false;
  };
  double prev = 0.0;
  for (int n = 1; n <= count; ++n) {
    const double beta = (n + 0.5 * nu - 0.25) * kPi;
    const double guess = beta - (4.0 * nu * nu - 1.0) / (8.0 * beta);
    double z = 0.0;
    bool ok = newton(guess, &z) && z > prev + 1.0;
    if (!ok) {
      // Bracket the next sign change after the previous zero and restart Newton.
      double a = (n == 1) ? std::max(1e-3, nu) : prev + 1e-3;
      double fa = eval_J(nu, a);
      double bnd = a;
      bool found = false;
      for (int s = 0; s < 100000 && !found; ++s) {
        bnd = a + 0.05;
        const double fb = eval_J(nu, bnd);
        if (fa == 0.0 || fa * fb < 0.0) {
          found = true;
          break;
        }
        a = bnd;
        fa = fb;
      }
      if (!found) throw Error(ErrorKind::NonConvergence, "bessel_zeros: no sign change found");
      double lo = a, hi = bnd;
      for (int s = 0; s < 60; ++s) {
        const double mid = 0.5 * (lo + hi);
        if (eval_J(nu, lo) * eval_J(nu, mid) <= 0.0) hi = mid;
        else lo = mid;
      }
      ok = newton(0.5 * (lo + hi), &z) && z > prev;
      if (!ok) {
        z = 0.5 * (lo + hi);
        if (std::fabs(eval_J(nu, z)) >= 10.0 * tol) {
          throw Error(ErrorKind::NonConvergence, "bessel_zeros: Newton budget exhausted");
        }
      }
    }
    table.zeros.push_back(z);
    prev = z;
  }
  return table;
}

namespace {

Complex bessel_family(BesselKind kind, double mu, Complex arg) {
  switch (kind) {
    case BesselKind::J: return eval_J(mu, arg.real());
    case BesselKind::I: return eval_I(mu, arg);
    case BesselKind::K: return eval_K(mu, arg);
  }
  return 0.0;
}

struct JetTerm {
  Complex coef;
  int power;
  int shift;
};

// x^{-mu} Z_mu(c x) for Z in {J, I} near x = 0: sum_k s^k (c/2)^{mu+2k} x^{2k} / (k! Gamma(mu+k+1)).
std::array<Complex, 5> scaled_series_jet(BesselKind kind, double mu, Complex c, double x) {
  const double s = kind == BesselKind::J ? -1.0 : 1.0;
  const Complex h = c / 2.0;
  Complex coef = std::pow(h, mu) * recip_gamma(mu + 1.0);
  std::array<Complex, 5> jet{};
  for (int k = 0; k < 25; ++k) {
    const int p = 2 * k;
    // d^d/dx^d x^p = p!/(p-d)! x^{p-d}
    double falling = 1.0;
    for (int d = 0; d < 5 && d <= p; ++d) {
      jet[d] += coef * falling * std::pow(x, p - d);
      falling *= p - d;
    }
    coef *= s * h * h / (double(k + 1) * (mu + k + 1.0));
  }
  return jet;
}

std::array<Complex, 5> power_bessel_jet(BesselKind kind, double mu, Complex c, double x, int dir) {
  if (dir < 0 && kind != BesselKind::K && std::abs(c * x) <= 1.0) return scaled_series_jet(kind, mu, c, x);
  // f_m(x) = x^{dir*m} Z_m(c x); f_m' = sigma c x f_{m - dir}.
  double sigma;
  if (dir < 0) sigma = (kind == BesselKind::I) ? 1.0 : -1.0;
  else sigma = (kind == BesselKind::K) ? -1.0 : 1.0;
  std::vector<JetTerm> terms{{1.0, 0, 0}};
  std::array<Complex, 5> jet{};
  std::vector<Complex> cache;
  auto family = [&](int k) {
    while (static_cast<int>(cache.size()) <= k) {
      const int j = static_cast<int>(cache.size());
      const double order = mu - dir * j;
      if (order < 0.0 && kind != BesselKind::K) {
        throw Error(ErrorKind::Domain, "negative order in raised Bessel jet");
      }
      cache.push_back(std::pow(x, dir * order) * bessel_family(kind, std::fabs(order), c * x));
    }
    return cache[k];
  };
  for (int d = 0; d < 5; ++d) {
    Complex v = 0.0;
    for (const auto& t : terms) v += t.coef * std::pow(x, t.power) * family(t.shift);
    jet[d] = v;
    std::vector<JetTerm> next;
    for (const auto& t : terms) {
      if (t.power != 0) next.push_back({t.coef * double(t.power), t.power - 1, t.shift});
      next.push_back({t.coef * sigma * c, t.power + 1, t.shift + 1});
    }
    terms.swap(next);
  }
  return jet;
}

}  // namespace

std::array<Complex, 5> scaled_bessel_jet(BesselKind kind, double mu, Complex c, double x) {
  return power_bessel_jet(kind, mu, c, x, -1);
}

std::array<Complex, 5> raised_bessel_jet(BesselKind kind, double mu, Complex c, double x) {
  return power_bessel_jet(kind, mu, c, x, +1);
}

}  // namespace sbvp
