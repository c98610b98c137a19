#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sbvp {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class ErrorKind {
  Domain,
  Overflow,
  NonConvergence,
  Branch,
  GridTooCoarse,
  TraceFit,
  RegularityViolated,
  SingularSystem,
  SpectralParameterOnCut,
  LinearizationSingular,
  IncompleteModeInput,
  IllConditionedFit,
  BFViolated,
  Signature,
  Config,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Every numeric threshold used by the library lives here.
struct Tolerances {
  double integer_order = 1e-8;        // distance to an integer that selects the limit form
  double zero_residual = 1e-13;       // |J_nu| at a refined zero
  double trace_fit_residual = 1e-6;   // Plain-trace extrapolation
  int trace_fit_nodes = 8;
  double stencil_error = 1e-6;        // Plain differentiation diagnostic
  double elliptic_imag = 1e-12;       // |Im xi| / |xi| below this means a real root
  double lopatinskii_rel = 1e-10;     // |det| against the product of row scales
  double homogeneity = 1e-10;
  double singular_rcond = 1e-13;      // reciprocal condition treated as singular
  double basis_prune = 1e-13;         // relative eigenvalue cutoff of the basis Gram matrix
  double rank_rel = 1e-8;             // completeness rank threshold
  double degenerate = 1e-6;           // eigenvalue grouping
  double pencil_residual = 1e-7;
  double fit_condition = 1e10;
  double resonance = 1e-8;
  double on_cut = 1e-12;
  double determinant_relation = 1e-6; // e0 vs log det gamma consistency warning
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& t);

}  // namespace sbvp
