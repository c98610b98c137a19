#include "sbvp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "sbvp/bvp_solve.hpp"
#include "sbvp/expansion.hpp"
#include "sbvp/kg_model.hpp"
#include "sbvp/spectral_modes.hpp"

namespace sbvp::cli {

namespace fs = std::filesystem;

namespace {

struct ToleranceField {
  const char* key;
  double Tolerances::*real = nullptr;
  int Tolerances::*integer = nullptr;
};

const std::vector<ToleranceField>& tolerance_fields() {
  static const std::vector<ToleranceField> f{
      {"integer_order", &Tolerances::integer_order},
      {"zero_residual", &Tolerances::zero_residual},
      {"trace_fit_residual", &Tolerances::trace_fit_residual},
      {"trace_fit_nodes", nullptr, &Tolerances::trace_fit_nodes},
      {"stencil_error", &Tolerances::stencil_error},
      {"elliptic_imag", &Tolerances::elliptic_imag},
      {"lopatinskii_rel", &Tolerances::lopatinskii_rel},
      {"homogeneity", &Tolerances::homogeneity},
      {"singular_rcond", &Tolerances::singular_rcond},
      {"basis_prune", &Tolerances::basis_prune},
      {"rank_rel", &Tolerances::rank_rel},
      {"degenerate", &Tolerances::degenerate},
      {"pencil_residual", &Tolerances::pencil_residual},
      {"fit_condition", &Tolerances::fit_condition},
      {"resonance", &Tolerances::resonance},
      {"on_cut", &Tolerances::on_cut},
      {"determinant_relation", &Tolerances::determinant_relation},
  };
  return f;
}

// Restores the library tolerances when a run ends.
struct ToleranceScope {
  Tolerances saved = tolerances();
  ~ToleranceScope() { set_tolerances(saved); }
};

void apply_tolerances(const Config& cfg) {
  Tolerances t = tolerances();
  for (const auto& f : tolerance_fields()) {
    if (!cfg.has("tolerances", f.key)) continue;
    if (f.real) t.*f.real = cfg.get_double("tolerances", f.key, t.*f.real);
    else t.*f.integer = cfg.get_int("tolerances", f.key, t.*f.integer);
  }
  set_tolerances(t);
}

Coefficient coefficient(const std::vector<Complex>& c) {
  for (Complex v : c)
    if (v != Complex(0.0)) return Coefficient::polynomial(c);
  return Coefficient::zero();
}

std::function<Complex(const std::vector<int>&)> laplace_symbol() {
  return [](const std::vector<int>& q) {
    double s = 0.0;
    for (int k : q) s += static_cast<double>(k) * k;
    return Complex(s);
  };
}

Order read_nu(const Config& cfg) {
  const double nu = cfg.get_double("operator", "nu", 0.5);
  if (!(nu > 0.0)) throw Error(ErrorKind::Config, "[operator] nu must be positive");
  return Order::make(nu);
}

BesselOperator read_operator(const Config& cfg, bool want_pencil) {
  BesselOperator op;
  op.nu = read_nu(cfg);
  op.a = coefficient(cfg.get_complex_list("operator", "a", {0.0}));
  op.b = coefficient(cfg.get_complex_list("operator", "b", {0.0}));
  op.adjoint_form = cfg.get_bool("operator", "adjoint", false);
  op.fourier_symbol = laplace_symbol();
  if (want_pencil || cfg.has("operator", "pencil_first") || cfg.has("operator", "pencil_second")) {
    PencilCoeffs pc;
    pc.first = coefficient(cfg.get_complex_list("operator", "pencil_first", {0.0}));
    pc.second = coefficient(cfg.get_complex_list("operator", "pencil_second", {1.0}));
    op.pencil = pc;
  }
  op.validate();
  return op;
}

std::vector<int> read_q(const Config& cfg, const std::string& section = "operator") {
  return cfg.get_int_list(section, "q", {0});
}

std::optional<BoundaryOperator> read_boundary(const Config& cfg, const Order& nu) {
  const std::string type = cfg.get_string("boundary", "type", nu.subcritical() ? "dirichlet" : "none");
  if (type == "none") return std::nullopt;
  if (type == "dirichlet") return BoundaryOperator::dirichlet();
  if (type == "neumann") return BoundaryOperator::neumann();
  if (type == "robin") return BoundaryOperator::robin(cfg.get_complex("boundary", "beta", 0.0));
  if (type == "oblique") {
    return BoundaryOperator::oblique(cfg.get_complex_list("boundary", "field", {1.0}),
                                     cfg.get_complex("boundary", "t_plus", 0.0));
  }
  if (type == "lambda_robin") return BoundaryOperator::lambda_robin(cfg.get_complex("boundary", "c", 1.0));
  throw Error(ErrorKind::Config, "[boundary] unknown type '" + type + "'");
}

std::optional<Sector> read_sector(const Config& cfg, const std::string& fallback) {
  const std::string kind = cfg.get_string("sweep", "sector", fallback);
  if (kind == "none") return std::nullopt;
  if (kind == "imaginary_axis") return Sector::imaginary_axis();
  if (kind == "around") {
    return Sector::around(cfg.get_double("sweep", "sector_center", 0.0),
                          cfg.get_double("sweep", "sector_half_width", kPi / 4));
  }
  throw Error(ErrorKind::Config, "[sweep] unknown sector '" + kind + "'");
}

GridPtr radial_grid(const Order& nu, double L, int nodes) {
  GradedOptions opt;
  if (nu.subcritical()) opt.first_exponent = 1.0 - 2.0 * nu.nu;
  return make_grid(graded_grid(L, nodes, opt));
}

Json traces_json(const TraceData& t) {
  return Json{{"gamma_minus", complex_json(t.gamma_minus)},
              {"gamma_plus", complex_json(t.gamma_plus)},
              {"has_plus", t.has_plus}};
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// A finished command: the JSON summary, and the CSV body when the command has a tabular form.
struct Artifact {
  Json summary;
  std::string csv;
};

Artifact cmd_solve(const Config& cfg) {
  BVProblem p;
  p.op = read_operator(cfg, cfg.has("operator", "lambda"));
  const Order nu = p.op.nu;
  p.q = read_q(cfg);
  p.lambda = cfg.get_complex("operator", "lambda", 0.0);
  p.bc0 = read_boundary(cfg, nu);
  p.boundary_data = cfg.get_complex_list("boundary", "data", {});
  const std::string far = cfg.get_string("boundary", "far_end", "dirichlet");
  if (far == "dirichlet") p.bc1 = FarEnd::DirichletAtOne;
  else if (far == "decay") p.bc1 = FarEnd::Decay;
  else throw Error(ErrorKind::Config, "[boundary] far_end must be dirichlet or decay");
  p.dof = cfg.get_int("grid", "dof", 256);
  const int nodes = cfg.get_int("grid", "nodes", 256);
  p.x_max = cfg.get_double("grid", "x_max", 0.0);
  p.check_truncation = p.bc1 == FarEnd::Decay && cfg.get_bool("grid", "check_truncation", false);
  double L = p.x_max;
  if (L <= 0.0) {
    if (p.bc1 == FarEnd::DirichletAtOne) {
      L = 1.0;
    } else {
      const Complex k = std::sqrt(boundary_potential(p.op, p.q, p.lambda));
      if (!(k.real() > 0.0)) throw Error(ErrorKind::Domain, "half-line problem has no decaying solutions");
      L = 40.0 / k.real();
    }
  }
  p.grid = radial_grid(nu, L, nodes);

  const std::string kind = cfg.get_string("rhs", "type", "none");
  std::optional<GridFunction> exact;
  if (kind == "manufactured" || kind == "polynomial") {
    const auto c = cfg.get_complex_list("rhs", "coeffs", {1.0, -2.0, 1.0});
    GridFunction g = with_fourier_index(power_sum(p.grid, nu.nu, {{0.5 + nu.nu, poly_jet(c)}}), p.q);
    if (kind == "manufactured") {
      exact = g;
      p.rhs = apply(p.op, g, p.lambda);
    } else {
      p.rhs = g;
    }
  } else if (kind != "none") {
    throw Error(ErrorKind::Config, "[rhs] type must be none, manufactured or polynomial");
  }

  const Solution s = solve_1d(p);
  Artifact a;
  Json& j = a.summary;
  j["nu"] = nu.nu;
  j["dof"] = p.dof;
  j["nodes"] = p.grid->size();
  j["x_max"] = p.grid->x_max;
  j["residual"] = s.residual_norm;
  j["condition"] = s.condition_estimate;
  j["traces"] = traces_json(s.traces);
  Json aux = Json::array();
  for (Eigen::Index k = 0; k < s.aux.size(); ++k) aux.push_back(complex_json(s.aux(k)));
  j["aux"] = aux;
  if (p.check_truncation) j["truncation_error"] = s.truncation_error;
  if (exact) j["error_h1"] = twisted_norm(s.u - *exact, 1, nu);
  std::ostringstream os;
  write_csv(s.u, os);
  a.csv = os.str();
  return a;
}

Artifact cmd_modes(const Config& cfg) {
  const std::string kind = cfg.get_string("modes", "kind", "dirichlet");
  const int dof = cfg.get_int("modes", "dof", kind == "dirichlet" ? 256 : 64);
  Artifact a;
  std::ostringstream csv;
  if (kind == "dirichlet") {
    const Order nu = read_nu(cfg);
    const DirichletSpectrum sp =
        dirichlet_spectrum(nu, cfg.get_int("modes", "q_max", 0), cfg.get_int("modes", "n_max", 10), dof);
    Json ev = Json::array();
    csv << "q,n,value,closed_form,rel_error\n";
    for (const auto& e : sp.entries) {
      ev.push_back(Json{{"q", e.q}, {"n", e.n}, {"value", e.discrete}, {"closed_form", e.closed_form},
                        {"rel_error", e.rel_error}});
      csv << (e.q.empty() ? 0 : e.q[0]) << ',' << e.n << ',' << csv_number(e.discrete) << ','
          << csv_number(e.closed_form) << ',' << csv_number(e.rel_error) << '\n';
    }
    a.summary = Json{{"nu", nu.nu}, {"kind", kind}, {"dof", dof}, {"eigenvalues", ev},
                     {"max_rel_error", sp.max_rel_error}};
  } else if (kind == "pencil") {
    const BesselOperator op = read_operator(cfg, true);
    const auto bc = read_boundary(cfg, op.nu);
    PencilOptions opt;
    opt.dof = dof;
    opt.functions = 0;
    ModeSet m = pencil_modes(op, bc, read_q(cfg), opt);
    const int keep = cfg.get_int("modes", "keep", 0);
    if (keep > 0) m = truncate(m, keep);
    std::optional<CompletenessReport> rep;
    if (cfg.get_bool("modes", "completeness", true)) rep = completeness_check(m, m.dof);
    a.summary = Json::parse(to_json(m, rep));
    csv << "re,im,residual\n";
    for (size_t k = 0; k < m.eigenvalues.size(); ++k)
      csv << csv_number(m.eigenvalues[k].real()) << ',' << csv_number(m.eigenvalues[k].imag()) << ','
          << csv_number(m.residuals[k]) << '\n';
  } else if (kind == "embedding") {
    const Order nu = read_nu(cfg);
    const SingularValueReport r = embedding_singular_values(nu, dof);
    a.summary = Json{{"nu", nu.nu}, {"kind", kind}, {"dof", dof}, {"singular_values", r.s},
                     {"fitted_exponent", r.fitted_exponent}, {"constant", r.constant},
                     {"fit_range", {r.fit_first, r.fit_last}}};
    csv << "j,singular_value\n";
    for (size_t k = 0; k < r.s.size(); ++k) csv << k + 1 << ',' << csv_number(r.s[k]) << '\n';
  } else {
    throw Error(ErrorKind::Config, "[modes] kind must be dirichlet, pencil or embedding");
  }
  a.csv = csv.str();
  return a;
}

Artifact cmd_lopatinskii(const Config& cfg) {
  const Order nu = read_nu(cfg);
  const int dim = cfg.get_int("operator", "dim", 1);
  if (dim < 1) throw Error(ErrorKind::Config, "[operator] dim must be at least 1");
  const std::string symbol = cfg.get_string("operator", "symbol", "laplace");
  BoundarySymbol sym;
  if (symbol == "laplace") sym = BoundarySymbol::laplace(dim);
  else if (symbol == "wave") sym = BoundarySymbol::wave(dim);
  else throw Error(ErrorKind::Config, "[operator] symbol must be laplace or wave");
  const auto bc = read_boundary(cfg, nu);
  if (!bc) throw Error(ErrorKind::Config, "[boundary] type is required for lopatinskii");
  const auto sector = read_sector(cfg, sym.has_lambda ? "imaginary_axis" : "none");
  const LopatinskiiReport r =
      lopatinskii_sweep(nu, sym, *bc, cfg.get_int("sweep", "sphere_samples", 64), sector);
  Artifact a;
  a.summary = Json::parse(to_json(r));
  std::ostringstream csv;
  csv << "index,lambda_re,lambda_im,det_re,det_im,elliptic,pass";
  for (int d = 0; d < dim; ++d) csv << ",eta" << d;
  csv << '\n';
  for (size_t k = 0; k < r.samples.size(); ++k) {
    const auto& s = r.samples[k];
    csv << k << ',' << csv_number(s.lambda.real()) << ',' << csv_number(s.lambda.imag()) << ','
        << csv_number(s.det.real()) << ',' << csv_number(s.det.imag()) << ',' << s.elliptic << ',' << s.pass;
    for (double e : s.eta) csv << ',' << csv_number(e);
    csv << '\n';
  }
  a.csv = csv.str();
  return a;
}

Artifact cmd_expand(const Config& cfg, const fs::path& base) {
  const Order nu = read_nu(cfg);
  FitOptions opt;
  if (cfg.has("expand", "x_lo")) opt.x_lo = cfg.get_double("expand", "x_lo", 0.0);
  if (cfg.has("expand", "x_hi")) opt.x_hi = cfg.get_double("expand", "x_hi", 0.0);
  opt.tail_terms = cfg.get_int("expand", "tail_terms", 2);
  opt.integer_tail = cfg.get_bool("expand", "integer_tail", false);
  const std::string source = cfg.get_string("expand", "source", "mode");
  GridFunction u;
  std::optional<TraceData> reference;
  if (source == "mode") {
    const Complex xi = cfg.get_complex("expand", "xi", Complex(0.0, -1.0));
    const ModeSolution m = mode_solution(nu, xi, half_line_grid(nu, xi, cfg.get_int("grid", "nodes", 256)));
    u = m.profile;
    reference = m.traces;
  } else if (source == "csv") {
    fs::path in = cfg.require_string("expand", "input");
    if (in.is_relative()) in = base / in;
    u = read_csv(in.string());
  } else {
    throw Error(ErrorKind::Config, "[expand] source must be mode or csv");
  }
  const ExpansionFit f = fit_expansion(u, nu, opt);
  Artifact a;
  a.summary = Json::parse(to_json(f));
  a.summary["nu"] = nu.nu;
  a.summary["resonant"] = indicial(nu).resonant;
  if (reference) {
    a.summary["reference"] = traces_json(*reference);
    a.summary["trace_error"] = std::max(std::abs(f.g_minus - reference->gamma_minus),
                                        std::abs(2.0 * nu.nu * f.g_plus - reference->gamma_plus));
  }
  std::ostringstream csv;
  csv << "g_minus_re,g_minus_im,g_plus_re,g_plus_im,g_log_re,g_log_im,residual,condition\n"
      << csv_number(f.g_minus.real()) << ',' << csv_number(f.g_minus.imag()) << ','
      << csv_number(f.g_plus.real()) << ',' << csv_number(f.g_plus.imag()) << ',' << csv_number(f.g_log.real())
      << ',' << csv_number(f.g_log.imag()) << ',' << csv_number(f.fit_residual) << ','
      << csv_number(f.condition) << '\n';
  a.csv = csv.str();
  return a;
}

Artifact cmd_sweep(const Config& cfg, unsigned seed) {
  const BesselOperator op = read_operator(cfg, true);
  const auto bc = read_boundary(cfg, op.nu);
  const auto sector = read_sector(cfg, "around");
  if (!sector) throw Error(ErrorKind::Config, "[sweep] a sector is required for the resolvent sweep");
  ResolventOptions opt;
  opt.dof = cfg.get_int("sweep", "dof", 128);
  opt.rays = cfg.get_int("sweep", "rays", 3);
  opt.seed = seed;
  const auto radii = cfg.get_list("sweep", "radii", {4.0, 8.0, 16.0, 32.0});
  const auto rows = resolvent_sweep(op, bc, *sector, radii, opt);
  Artifact a;
  Json r = Json::array();
  std::ostringstream csv;
  csv << "radius,lambda_re,lambda_im,ratio,singular\n";
  for (const auto& row : rows) {
    r.push_back(Json{{"radius", row.radius}, {"lambda", complex_json(row.lambda)}, {"ratio", row.ratio},
                     {"singular", row.singular}});
    csv << csv_number(row.radius) << ',' << csv_number(row.lambda.real()) << ','
        << csv_number(row.lambda.imag()) << ',' << csv_number(row.ratio) << ',' << row.singular << '\n';
  }
  a.summary = Json{{"nu", op.nu.nu}, {"rows", r}, {"decay_ok", resolvent_decay_ok(rows)}};
  a.csv = csv.str();
  return a;
}

Artifact cmd_kg(const Config& cfg) {
  const int n = cfg.get_int("metric", "n", 2);
  if (n < 2) throw Error(ErrorKind::Config, "[metric] n must be at least 2");
  RMat def = -RMat::Identity(n, n);
  def(0, 0) = 1.0;
  const RMat g0 = cfg.get_matrix("metric", "gamma0", def);
  if (g0.rows() != n || g0.cols() != n) throw Error(ErrorKind::Config, "[metric] gamma0 must be n x n");
  RMat g1;
  if (cfg.has("metric", "gamma1")) {
    g1 = cfg.get_matrix("metric", "gamma1", RMat());
    if (g1.rows() != n || g1.cols() != n) throw Error(ErrorKind::Config, "[metric] gamma1 must be n x n");
  }
  const ModelMetric metric = ModelMetric::constant(g0, cfg.get_double("metric", "e0", 0.0), g1);
  const double mass = cfg.get_double("metric", "mass", 0.0);
  const KGReduction red = reduce(metric, mass, cfg.get_int_list("metric", "q", std::vector<int>(n - 1, 0)));
  const EllipticityVerdict v = ellipticity_verdicts(red, metric, cfg.get_int("metric", "samples", 16));
  Artifact a;
  Json& j = a.summary;
  j["nu"] = red.nu.nu;
  j["mass"] = red.mass;
  j["bf_satisfied"] = red.bf_satisfied;
  j["q"] = red.q;
  j["warnings"] = red.warnings;
  j["elliptic"] = v.elliptic;
  j["parameter_elliptic"] = v.parameter_elliptic;
  j["elliptic_failure"] = v.elliptic_failure;
  j["parameter_failure"] = v.parameter_failure;
  j["elliptic_cross_checked"] = v.elliptic_cross_checked;
  j["parameter_cross_checked"] = v.parameter_cross_checked;
  j["samples"] = v.samples;
  std::ostringstream csv;
  if (cfg.has_section("modes")) {
    PencilOptions opt;
    opt.dof = cfg.get_int("modes", "dof", 64);
    opt.functions = 0;
    const auto bc = read_boundary(cfg, red.nu);
    const ModeSet m = pencil_modes(red.op, bc, red.q, opt);
    j["modes"] = Json::parse(to_json(m));
    csv << "re,im,residual\n";
    for (size_t k = 0; k < m.eigenvalues.size(); ++k)
      csv << csv_number(m.eigenvalues[k].real()) << ',' << csv_number(m.eigenvalues[k].imag()) << ','
          << csv_number(m.residuals[k]) << '\n';
  } else {
    csv << "sample,elliptic_fail,parameter_fail\n";
    for (size_t k = 0; k < v.samples.size(); ++k)
      csv << k << ',' << (static_cast<int>(k) == v.elliptic_failure) << ','
          << (static_cast<int>(k) == v.parameter_failure) << '\n';
  }
  a.csv = csv.str();
  return a;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Config, "cannot write '" + path.string() + "'");
  os << body;
  if (!os) throw Error(ErrorKind::Config, "failed writing '" + path.string() + "'");
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Modes: return "modes";
    case Command::Lopatinskii: return "lopatinskii";
    case Command::Expand: return "expand";
    case Command::Sweep: return "sweep";
    case Command::Kg: return "kg";
  }
  return "?";
}

const Config::Schema& schema() {
  static const Config::Schema s = [] {
    Config::Schema m{
        {"run", {"seed"}},
        {"operator", {"nu", "a", "b", "q", "lambda", "adjoint", "pencil_first", "pencil_second", "symbol", "dim"}},
        {"boundary", {"type", "beta", "field", "t_plus", "c", "data", "far_end"}},
        {"grid", {"nodes", "dof", "x_max", "check_truncation"}},
        {"rhs", {"type", "coeffs"}},
        {"sweep", {"sphere_samples", "sector", "sector_center", "sector_half_width", "radii", "rays", "dof"}},
        {"modes", {"kind", "dof", "n_max", "q_max", "keep", "completeness"}},
        {"expand", {"source", "xi", "input", "x_lo", "x_hi", "tail_terms", "integer_tail"}},
        {"metric", {"n", "mass", "gamma0", "gamma1", "e0", "q", "samples"}},
    };
    for (const auto& f : tolerance_fields()) m["tolerances"].insert(f.key);
    return m;
  }();
  return s;
}

int run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  ToleranceScope scope;
  const std::string name = command_name(rc.command);
  Config cfg;
  unsigned seed = 0;
  fs::path stem_path;
  try {
    cfg = Config::load(rc.config_path);
    cfg.validate(schema());
    apply_tolerances(cfg);
    seed = rc.seed ? *rc.seed : static_cast<unsigned>(cfg.get_int("run", "seed", 1));
    stem_path = fs::path(rc.output_dir) / (name + "_" + fs::path(rc.config_path).stem().string());
    fs::create_directories(rc.output_dir);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "ConfigError: " << e.what() << '\n';
    return 1;
  }

  Artifact a;
  try {
    const fs::path base = fs::path(rc.config_path).parent_path();
    switch (rc.command) {
      case Command::Solve: a = cmd_solve(cfg); break;
      case Command::Modes: a = cmd_modes(cfg); break;
      case Command::Lopatinskii: a = cmd_lopatinskii(cfg); break;
      case Command::Expand: a = cmd_expand(cfg, base); break;
      case Command::Sweep: a = cmd_sweep(cfg, seed); break;
      case Command::Kg: a = cmd_kg(cfg); break;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? 1 : 2;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }

  Json meta;
  meta["command"] = name;
  meta["config"] = rc.config_path;
  meta["format"] = rc.format == Format::Json ? "json" : "csv";
  meta["seed"] = seed;
  meta["resolved"] = cfg.resolved();
  Json tol;
  const Tolerances& t = tolerances();
  for (const auto& f : tolerance_fields()) {
    if (f.real) tol[f.key] = t.*f.real;
    else tol[f.key] = t.*f.integer;
  }
  meta["tolerances"] = tol;

  const std::string ext = rc.format == Format::Json ? ".json" : ".csv";
  const fs::path main_path = stem_path.string() + ext;
  try {
    write_file(main_path, rc.format == Format::Json ? dump17(a.summary) + "\n" : a.csv);
    write_file(stem_path.string() + ".meta.json", dump17(meta) + "\n");
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  }
  if (!rc.quiet) out << main_path.string() << '\n';
  return 0;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular Bessel boundary value problems"};
  app.require_subcommand(1, 1);
  RunConfig rc;
  std::string format = "json";
  long long seed = -1;
  const std::vector<std::pair<Command, const char*>> commands{
      {Command::Solve, "Solve a one-dimensional boundary value problem"},
      {Command::Modes, "Dirichlet spectrum, pencil modes or embedding singular values"},
      {Command::Lopatinskii, "Boundary condition check over sphere samples"},
      {Command::Expand, "Fit the boundary expansion of a profile"},
      {Command::Sweep, "Resolvent bound along a spectral sector"},
      {Command::Kg, "Klein-Gordon reduction and ellipticity verdicts"},
  };
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(command_name(cmd), help);
    sub->add_option("--config", rc.config_path, "Config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", rc.output_dir, "Output directory");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "Random seed")->check(CLI::NonNegativeNumber);
    sub->add_flag("--quiet", rc.quiet, "Print nothing on success");
    const Command c = cmd;
    sub->callback([&rc, c] { rc.command = c; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ConfigError: " << e.what() << '\n';
    return 1;
  }
  rc.format = format == "csv" ? Format::Csv : Format::Json;
  if (seed >= 0) rc.seed = static_cast<unsigned>(seed);
  return run(rc, out, err);
}

}  // namespace sbvp::cli
