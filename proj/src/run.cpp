#include "qsine/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "qsine/acceptance.hpp"
#include "qsine/approx.hpp"
#include "qsine/basis.hpp"
#include "qsine/evolution.hpp"
#include "qsine/galerkin.hpp"
#include "qsine/poisson.hpp"
#include "qsine/schauder.hpp"

namespace qsine {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<ParamSpec>>& param_table() {
  static const std::map<std::string, std::vector<ParamSpec>> table = {
      {"basis",
       {{"q", "2", "basis exponent"},
        {"N", "10", "number of modes"},
        {"J", "0", "grid intervals (0: resolution rule)"},
        {"n_quad", "200000", "quadrature panels for the inverse integral"}}},
      {"tau",
       {{"q", "2", "basis exponent"},
        {"jmax", "40", "largest tau index"},
        {"N", "0", "size of the T_inv dump (0: min(jmax, 40))"},
        {"J", "0", "grid intervals (0: max(1000, 20 jmax))"},
        {"n_quad", "200000", "quadrature panels for the inverse integral"}}},
      {"approx-sweep",
       {{"g", "gb", "source: ga gb gc gd sin one random"},
        {"N", "40", "number of modes"},
        {"J", "0", "grid intervals (0: resolution rule)"},
        {"q_grid", "default", "q values: default, list a,b,c or range lo:step:hi"},
        {"orth", "1", "also compute Gram-Schmidt residuals (0/1)"},
        {"s", "2", "random source: Sobolev exponent"},
        {"modes", "1024", "random source: number of sine modes"},
        {"delta", "0.01", "random source: extra decay"},
        {"n_quad", "200000", "quadrature panels for the inverse integral"}}},
      {"rate-table",
       {{"g", "gb,gc,gd,sin", "sources (list)"},
        {"q", "1.8,2,3,5,10", "basis exponents (list)"},
        {"N", "5:5:100", "mode counts (list or range)"},
        {"n_quad", "200000", "quadrature panels for the inverse integral"}}},
      {"poisson-exact",
       {{"p", "2", "p-Laplacian exponent"},
        {"g", "gb", "source"},
        {"J", "4000", "grid intervals"}}},
      {"poisson-solve",
       {{"p", "2", "p-Laplacian exponent"},
        {"q", "2", "basis exponent"},
        {"N", "40", "number of modes"},
        {"g", "gb", "source"},
        {"J", "0", "grid intervals (0: resolution rule)"},
        {"pairing", "primal", "primal, dual or petrov"},
        {"tol", "1e-10", "Newton tolerance on max|F|"},
        {"max_iter", "50", "Newton iteration limit per stage"},
        {"bandwidth", "0", "Jacobian bandwidth (0: full)"},
        {"n_quad", "200000", "quadrature panels for the inverse integral"}}},
      {"solver-sweep",
       {{"p", "2", "p-Laplacian exponent"},
        {"g", "gb", "source"},
        {"N", "40", "number of modes"},
        {"J", "0", "grid intervals (0: resolution rule)"},
        {"q_grid", "1.05:0.05:10", "q values: default, list or range"},
        {"reference", "exact", "exact, or two-sine (q = 2 with 2N modes)"},
        {"pairing", "primal", "primal, dual or petrov"},
        {"tol", "1e-10", "Newton tolerance on max|F|"},
        {"max_iter", "50", "Newton iteration limit per stage"},
        {"n_quad", "200000", "quadrature panels for the inverse integral"}}},
      {"evolve",
       {{"p", "2", "p-Laplacian exponent"},
        {"q", "2", "basis exponent"},
        {"N", "40", "number of modes"},
        {"J", "0", "grid intervals (0: resolution rule)"},
        {"g", "gb", "source"},
        {"dt", "0.01", "time step"},
        {"T", "1", "final time"},
        {"nu", "0", "noise intensity"},
        {"noise", "white", "white or sobolev (used when nu > 0)"},
        {"s", "1", "sobolev noise exponent"},
        {"delta", "0.01", "sobolev noise extra decay"},
        {"M", "0", "noise modes (0: 4N)"},
        {"snapshots", "", "snapshot times (default: 11 equally spaced)"},
        {"realizations", "1", "number of noise realizations"},
        {"pairing", "petrov", "petrov, primal or dual"},
        {"reference", "exact", "error reference: exact or none"},
        {"stride", "1", "write every stride-th grid node"},
        {"n_quad", "200000", "quadrature panels for the inverse integral"}}},
      {"verify", {{"suite", "all", "criterion suite"}}},
  };
  return table;
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return format_real(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "1" : "0"; }
  static std::string cell(std::size_t n) { return std::to_string(n); }
  static std::string cell(int n) { return std::to_string(n); }

  std::ofstream out_;
};

struct Context {
  const RunConfig& config;
  Params& params;
  std::ostream& log;
  std::vector<std::string> outputs;
  json results = json::object();
  bool numerical_failure = false;
  std::string failure;

  std::filesystem::path file(const std::string& name) {
    outputs.push_back(name);
    return config.output_dir / name;
  }
  std::uint64_t seed(const char* why) const {
    if (!config.seed) throw UsageError(std::string("an explicit --seed is required ") + why);
    return *config.seed;
  }
};

// Below 12/11 the basis property is unproven; such q run, with a warning.
void warn_small_q(Context& c, const std::vector<double>& qs) {
  std::vector<double> low;
  for (double q : qs) {
    if (q > 1.0 && !QParam(q).riesz_guaranteed()) low.push_back(q);
  }
  if (low.empty()) return;
  c.log << "warning: basis property unproven for q < 12/11 (" << low.size() << " value(s))\n";
  c.results["warnings"].push_back("q below 12/11: " + std::to_string(low.size()) + " value(s)");
}

std::size_t grid_or_rule(std::size_t J, std::size_t N) {
  return J > 0 ? J : resolution_intervals(N);
}

SpectralSpace space_for(double q, std::size_t N, std::size_t J, std::size_t n_quad) {
  return q == 2.0 ? two_sine_space(N, J) : build_space(q, N, J, n_quad);
}

std::vector<double> q_grid_from(const std::string& text) {
  return text == "default" ? default_q_grid() : parse_real_list(text);
}

NewtonOptions newton_from(Params& p) {
  NewtonOptions o;
  o.tol = p.real("tol");
  if (!(o.tol > 0.0)) throw UsageError("tol must be positive");
  o.max_iter = p.count("max_iter");
  return o;
}

void cmd_basis(Context& c) {
  const double q = c.params.real("q");
  warn_small_q(c, {q});
  const std::size_t N = c.params.count("N");
  const std::size_t J = grid_or_rule(c.params.count("J"), N);
  const SpectralSpace space = build_space(q, N, J, c.params.count("n_quad"));
  Csv csv(c.file("basis.csv"), {"n", "x", "f", "df", "dual", "ddual"});
  double pyth = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    const auto& f = space.basis.f[n - 1];
    const auto& df = space.basis.df[n - 1];
    const auto& d = space.dual.f[n - 1];
    const auto& dd = space.dual.df[n - 1];
    for (std::size_t j = 0; j <= J; ++j) csv.row(n, f.x(j), f[j], df[j], d[j], dd[j]);
    pyth = std::max(pyth, pythagorean_residual(space.basis, n));
  }
  c.results["pi_q"] = pi_q(q);
  c.results["pythagorean_residual"] = pyth;
  c.results["biorthogonality_error"] = biorthogonality_error(space);
}

void cmd_tau(Context& c) {
  const double q = c.params.real("q");
  warn_small_q(c, {q});
  const std::size_t jmax = c.params.count("jmax");
  if (jmax < 1) throw UsageError("jmax must be positive");
  std::size_t N = c.params.count("N");
  if (N == 0) N = std::min<std::size_t>(jmax, 40);
  if (N > jmax) throw UsageError("N must not exceed jmax");
  std::size_t J = c.params.count("J");
  if (J == 0) J = std::max<std::size_t>(1000, 20 * jmax);
  const auto [f1, df1] = build_f1(q, c.params.count("n_quad"), J);
  const TauVector tau = compute_tau(f1, jmax, q);
  {
    Csv csv(c.file("tau.csv"), {"q", "j", "tau"});
    for (std::size_t j = 1; j <= jmax; ++j) csv.row(q, j, tau(j));
  }
  const SchauderMatrix S = assemble_T(tau, N);
  Csv csv(c.file("tinv.csv"), {"q", "n", "k", "value"});
  for (std::size_t n = 1; n <= N; ++n) {
    for (std::size_t k = 1; k <= N; ++k) {
      const double v = S.T_inv(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(k - 1));
      if (v != 0.0) csv.row(q, n, k, v);
    }
  }
  c.results["tau_1"] = tau(1);
  if (jmax >= 30) {
    c.results["regularity_estimate"] = estimate_regularity(tau, std::max<std::size_t>(3, jmax / 10), jmax);
  }
}

GridFunction source_from(Context& c, const std::string& name, std::size_t J) {
  if (name == "random") {
    return random_hs(c.params.real("s"), c.params.count("modes"), c.params.real("delta"),
                     c.seed("for a random source"), J);
  }
  return benchmark_source(name, J);
}

void cmd_approx_sweep(Context& c) {
  const std::string g_name = c.params.text("g");
  const std::size_t N = c.params.count("N");
  const std::size_t J = grid_or_rule(c.params.count("J"), N);
  const std::vector<double> qs = q_grid_from(c.params.text("q_grid"));
  warn_small_q(c, qs);
  const bool orth = c.params.flag("orth");
  const std::size_t n_quad = c.params.count("n_quad");
  const GridFunction g = source_from(c, g_name, J);
  std::vector<ResidualPoint> points;
  json failures = json::array();
  for (double q : qs) {
    try {
      points.push_back(residuals_at(g, build_space(q, N, J, n_quad), orth));
    } catch (const std::exception& e) {
      failures.push_back({{"q", q}, {"error", e.what()}});
    }
  }
  if (points.empty()) throw Degeneracy("every q point failed");
  Csv csv(c.file("sweep.csv"),
          {"q", "residual_primal", "residual_dual", "residual_orth_primal", "residual_orth_dual"});
  for (const auto& pt : points) {
    csv.row(pt.q, pt.primal, pt.dual, pt.orthogonalized_primal, pt.orthogonalized_dual);
  }
  Csv best(c.file("qopt.csv"), {"mode", "q_opt", "residual"});
  auto emit = [&](const char* mode, auto member) {
    std::vector<double> r;
    for (const auto& pt : points) r.push_back(std::isfinite(pt.*member) ? pt.*member : INFINITY);
    const std::size_t i = argmin_first(r);
    best.row(mode, points[i].q, r[i]);
    c.results["q_opt"][mode] = points[i].q;
  };
  emit("primal", &ResidualPoint::primal);
  emit("dual", &ResidualPoint::dual);
  if (orth) {
    emit("orth-primal", &ResidualPoint::orthogonalized_primal);
    emit("orth-dual", &ResidualPoint::orthogonalized_dual);
  }
  c.results["failures"] = failures;
}

void cmd_rate_table(Context& c) {
  const std::vector<std::string> sources = c.params.texts("g");
  const std::vector<double> qs = c.params.reals("q");
  const std::vector<std::size_t> Ns = c.params.counts("N");
  const std::size_t n_quad = c.params.count("n_quad");
  if (Ns.size() < 2) throw UsageError("rate-table needs at least two values of N");
  Csv rates(c.file("rates.csv"), {"g", "q", "N", "residual"});
  Csv fits(c.file("fits.csv"), {"g", "q", "slope"});
  for (const auto& g : sources) {
    for (double q : qs) {
      const RateFit fit = rate_in_N([&](std::size_t J) { return benchmark_source(g, J); }, q, Ns,
                                    n_quad);
      for (std::size_t i = 0; i < Ns.size(); ++i) rates.row(g, q, Ns[i], fit.residuals[i]);
      fits.row(g, q, fit.slope);
      c.results["slopes"][g][format_real(q)] =
          std::isfinite(fit.slope) ? json(fit.slope) : json(nullptr);
      c.log << g << " q=" << format_real(q) << " slope=" << format_real(fit.slope) << '\n';
    }
  }
}

void cmd_poisson_exact(Context& c) {
  const double p = c.params.real("p");
  const std::size_t J = c.params.count("J");
  const GridFunction g = benchmark_source(c.params.text("g"), J);
  const ExactSolution sol = exact_solution({p, g});
  Csv csv(c.file("solution.csv"), {"x", "u"});
  for (std::size_t j = 0; j <= J; ++j) csv.row(sol.u.x(j), sol.u[j]);
  c.results["gamma0"] = sol.gamma0;
  c.results["closure_defect"] = sol.closure_defect;
}

void cmd_poisson_solve(Context& c) {
  const double p = c.params.real("p");
  const double q = c.params.real("q");
  warn_small_q(c, {q});
  const std::size_t N = c.params.count("N");
  const std::size_t J = grid_or_rule(c.params.count("J"), N);
  const GridFunction g = benchmark_source(c.params.text("g"), J);
  const Pairing pairing = parse_pairing(c.params.text("pairing"));
  const NewtonOptions options = newton_from(c.params);
  const std::size_t bandwidth = c.params.count("bandwidth");
  const SpectralSpace space = space_for(q, N, J, c.params.count("n_quad"));
  GalerkinSystem sys = make_system(p, space, g, pairing);
  sys.bandwidth = bandwidth;
  const auto t0 = std::chrono::steady_clock::now();
  const SolveReport report = solve_ppoisson(sys, options);
  const double solve_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const GridFunction u = reconstruct(report.coeffs, sys);
  const GridFunction exact = exact_solution({p, g}).u;
  Csv csv(c.file("solution.csv"), {"x", "u", "u_exact"});
  for (std::size_t j = 0; j <= J; ++j) csv.row(u.x(j), u[j], exact[j]);
  {
    Csv coeffs(c.file("coeffs.csv"), {"n", "c"});
    for (std::size_t n = 1; n <= N; ++n) coeffs.row(n, report.coeffs[static_cast<Eigen::Index>(n - 1)]);
  }
  c.results["converged"] = report.converged;
  c.results["iterations"] = report.iterations;
  c.results["residual_norm"] = report.residual_norm;
  c.results["eps_reg"] = report.eps_reg;
  c.results["l2_error"] = l2_distance(u, exact);
  c.results["solve_seconds"] = solve_s;
  if (!report.converged) {
    c.numerical_failure = true;
    c.failure = "Newton solve did not converge: " + report.message;
  }
}

void cmd_solver_sweep(Context& c) {
  const double p = c.params.real("p");
  const std::size_t N = c.params.count("N");
  const std::size_t J = grid_or_rule(c.params.count("J"), N);
  const GridFunction g = benchmark_source(c.params.text("g"), J);
  const std::vector<double> qs = q_grid_from(c.params.text("q_grid"));
  warn_small_q(c, qs);
  const std::string ref = c.params.text("reference");
  const Pairing pairing = parse_pairing(c.params.text("pairing"));
  const NewtonOptions options = newton_from(c.params);
  const std::size_t n_quad = c.params.count("n_quad");
  GridFunction reference;
  if (ref == "exact") {
    reference = exact_solution({p, g}).u;
  } else if (ref == "two-sine") {
    const ReferenceSolution rs = reference_solution(p, g, N, options);
    if (!rs.report.converged) throw Degeneracy("reference solve did not converge");
    reference = rs.galerkin;
    c.results["reference_gap_to_exact"] = rs.l2_gap;
  } else {
    throw UsageError("reference must be exact or two-sine");
  }
  const SolverSweepResult r =
      solver_qopt_sweep_against(p, g, N, qs, reference, pairing, options, n_quad);
  Csv csv(c.file("sweep.csv"), {"q", "l2_error", "iterations", "converged"});
  std::vector<double> errs;
  for (const auto& pt : r.points) {
    csv.row(pt.q, pt.l2_error, pt.iterations, pt.converged);
    errs.push_back(pt.l2_error);
  }
  c.results["q_opt"] = r.q_opt;
  json minima = json::array();
  for (std::size_t i : local_minima(errs)) minima.push_back(r.points[i].q);
  c.results["local_minima"] = minima;
  json failures = json::array();
  for (const auto& [q, msg] : r.failures) failures.push_back({{"q", q}, {"error", msg}});
  c.results["failures"] = failures;
}

void cmd_evolve(Context& c) {
  EvolutionConfig cfg;
  cfg.p = c.params.real("p");
  cfg.q = c.params.real("q");
  warn_small_q(c, {cfg.q});
  cfg.N = c.params.count("N");
  cfg.J = grid_or_rule(c.params.count("J"), cfg.N);
  cfg.source = c.params.text("g");
  cfg.dt = c.params.real("dt");
  cfg.T = c.params.real("T");
  cfg.nu = c.params.real("nu");
  cfg.noise.kind = parse_noise_kind(c.params.text("noise"));
  cfg.noise.s = c.params.real("s");
  cfg.noise.delta = c.params.real("delta");
  cfg.noise.M = c.params.count("M");
  if (cfg.noise.M == 0) cfg.noise.M = 4 * cfg.N;
  cfg.pairing = parse_pairing(c.params.text("pairing"));
  cfg.n_quad = c.params.count("n_quad");
  const std::string snaps = c.params.text("snapshots");
  if (snaps.empty()) {
    for (int i = 0; i <= 10; ++i) cfg.snapshot_times.push_back(cfg.T * i / 10.0);
  } else {
    cfg.snapshot_times = parse_real_list(snaps);
  }
  const std::size_t R = c.params.count("realizations");
  const std::string ref = c.params.text("reference");
  const std::size_t stride = std::max<std::size_t>(1, c.params.count("stride"));
  if (R == 0) throw UsageError("realizations must be positive");
  if (ref != "exact" && ref != "none") throw UsageError("reference must be exact or none");
  const bool noisy = cfg.nu > 0.0 && cfg.noise.kind != NoiseKind::none;
  if (noisy) cfg.seed = c.seed("when nu > 0");
  cfg.validate();

  const SpectralSpace space = space_for(cfg.q, cfg.N, cfg.J, cfg.n_quad);
  const GridFunction g = benchmark_source(cfg.source, cfg.J);
  const EvolutionOperator op = make_operator(cfg.p, space, g, cfg.pairing, noisy ? cfg.noise.M : 0);
  std::optional<GridFunction> reference;
  if (ref == "exact") reference = exact_solution({cfg.p, g}).u;

  Csv traj_csv(c.file("trajectory.csv"), {"t", "x", "u"});
  Csv err_csv(c.file("errors.csv"), {"t", "l2_error", "realization"});
  std::size_t failures = 0;
  std::size_t iterations = 0;
  for (std::size_t r = 0; r < (noisy ? R : 1); ++r) {
    const Trajectory tr = evolve(cfg, op, reference, noisy ? realization_seed(cfg.seed, r) : 0);
    iterations += tr.newton_iterations;
    if (tr.failed) {
      ++failures;
      c.log << "realization " << r << ": " << tr.message << '\n';
    }
    if (r == 0) {
      for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        const GridFunction& u = tr.snapshots[i];
        for (std::size_t j = 0; j <= cfg.J; j += stride) traj_csv.row(tr.times[i], u.x(j), u[j]);
      }
      c.results["final_time"] = tr.step_times.back();
      if (!tr.error_series.empty()) c.results["final_l2_error"] = tr.error_series.back();
    }
    for (std::size_t k = 0; k < tr.error_series.size(); ++k) {
      err_csv.row(tr.step_times[k], tr.error_series[k], r);
    }
  }
  c.results["newton_iterations"] = iterations;
  c.results["failed_realizations"] = failures;
  if (failures > 0) {
    c.numerical_failure = true;
    c.failure = std::to_string(failures) + " trajectory(ies) stopped on a failed step";
  }
}

void cmd_verify(Context& c) {
  const std::string suite = c.params.text("suite");
  const std::vector<int> ids = suite_criteria(suite);
  AcceptanceContext ctx;
  ctx.scratch_dir = c.config.output_dir / "verify_scratch";
  if (suite == "stability" || suite == "all") ctx.audit_csv = c.file("stability.csv");
  Csv csv(c.file("verify.csv"), {"id", "name", "pass", "measured"});
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, ctx);
    print_result(c.log, r);
    c.log.flush();
    std::string measured = r.measured;
    std::replace(measured.begin(), measured.end(), ',', ';');
    csv.row(r.id, r.name, r.pass, measured);
    c.results["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                                     {"measured", r.measured}, {"info", r.info},
                                     {"seconds", r.seconds}});
    all = all && r.pass;
  }
  std::filesystem::remove_all(ctx.scratch_dir);
  c.results["all_passed"] = all;
}

void write_manifest(const RunConfig& config, const Params* params, const RunResult& result,
                    const json& results, double wall) {
  json m;
  m["command"] = config.command;
  json p = json::object();
  if (params) {
    for (const auto& [k, v] : params->resolved()) p[k] = v;
  } else {
    for (const auto& [k, v] : config.params) p[k] = v;
  }
  m["params"] = p;
  m["seed"] = config.seed ? json(*config.seed) : json(nullptr);
  m["outputs"] = result.outputs;
  m["wall_time_s"] = wall;
  m["exit_code"] = result.exit_code;
  m["status"] = result.exit_code == exit_ok ? "ok" : "error";
  if (!result.error.empty()) m["error"] = {{"message", result.error}};
  m["results"] = results;
  std::ofstream out(config.output_dir / "manifest.json", std::ios::binary);
  out << m.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "basis", "tau", "approx-sweep", "rate-table", "poisson-exact",
      "poisson-solve", "solver-sweep", "evolve", "verify"};
  return names;
}

const std::vector<ParamSpec>& command_params(const std::string& command) {
  const auto& table = param_table();
  const auto it = table.find(command);
  if (it == table.end()) throw UsageError("unknown command '" + command + "'");
  return it->second;
}

std::vector<ParamSpec> all_params() {
  std::map<std::string, ParamSpec> merged;
  for (const auto& name : command_names()) {
    for (const auto& spec : command_params(name)) {
      auto [it, inserted] = merged.emplace(spec.key, spec);
      if (!inserted) it->second.fallback.clear();  // defaults differ per command
    }
  }
  std::vector<ParamSpec> out;
  for (auto& [k, v] : merged) out.push_back(v);
  return out;
}

Params::Params(std::string command, std::map<std::string, std::string> values)
    : command_(std::move(command)), values_(std::move(values)) {}

const std::string& Params::raw(const std::string& key) {
  read_.insert(key);
  if (const auto it = values_.find(key); it != values_.end()) return resolved_[key] = it->second;
  for (const auto& spec : command_params(command_)) {
    if (spec.key == key) return resolved_[key] = spec.fallback;
  }
  throw std::logic_error("parameter '" + key + "' is not declared for " + command_);
}

std::string Params::text(const std::string& key) { return raw(key); }

double Params::real(const std::string& key) {
  const std::string& s = raw(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw UsageError("parameter " + key + " expects a real number, got '" + s + "'");
  }
  return v;
}

std::size_t Params::count(const std::string& key) {
  const std::string& s = raw(key);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s[0] != '-') v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw UsageError("parameter " + key + " expects a non-negative integer, got '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

bool Params::flag(const std::string& key) {
  const std::string& s = raw(key);
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw UsageError("parameter " + key + " expects 0 or 1, got '" + s + "'");
}

std::vector<double> Params::reals(const std::string& key) {
  try {
    return parse_real_list(raw(key));
  } catch (const UsageError& e) {
    throw UsageError("parameter " + key + ": " + e.what());
  }
}

std::vector<std::size_t> Params::counts(const std::string& key) {
  std::vector<std::size_t> out;
  for (double v : reals(key)) {
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw UsageError("parameter " + key + " expects positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<std::string> Params::texts(const std::string& key) {
  std::vector<std::string> out;
  std::stringstream ss(raw(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("parameter " + key + " expects a non-empty list");
  return out;
}

void Params::reject_unused() const {
  for (const auto& [k, v] : values_) {
    if (!read_.count(k)) throw UsageError("parameter '" + k + "' is not used by " + command_);
  }
}

std::vector<double> parse_real_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw UsageError("malformed number '" + s + "' in '" + text + "'");
    }
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw UsageError("range must be lo:step:hi, got '" + text + "'");
    const double lo = number(parts[0]), step = number(parts[1]), hi = number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw UsageError("empty or invalid range '" + text + "'");
    const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) {
      // Round to the step's decimal grid so 1.05:0.05:10 yields 2.15, not 2.1500000000000004.
      const double v = lo + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(number(item));
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunResult run(const RunConfig& config, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  std::optional<Params> params;
  json results = json::object();
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  try {
    if (ec) throw std::runtime_error("cannot create output directory: " + ec.message());
    command_params(config.command);
    params.emplace(config.command, config.params);
    Context ctx{config, *params, log, {}, json::object(), false, {}};
    if (config.command == "basis") cmd_basis(ctx);
    else if (config.command == "tau") cmd_tau(ctx);
    else if (config.command == "approx-sweep") cmd_approx_sweep(ctx);
    else if (config.command == "rate-table") cmd_rate_table(ctx);
    else if (config.command == "poisson-exact") cmd_poisson_exact(ctx);
    else if (config.command == "poisson-solve") cmd_poisson_solve(ctx);
    else if (config.command == "solver-sweep") cmd_solver_sweep(ctx);
    else if (config.command == "evolve") cmd_evolve(ctx);
    else if (config.command == "verify") cmd_verify(ctx);
    params->reject_unused();
    result.outputs = ctx.outputs;
    results = ctx.results;
    if (ctx.numerical_failure) {
      result.exit_code = exit_numerical;
      result.error = ctx.failure;
    } else if (config.command == "verify" && !results.value("all_passed", false)) {
      result.exit_code = exit_failed_check;
      result.error = "one or more criteria failed";
    }
  } catch (const UsageError& e) {
    result.exit_code = exit_usage;
    result.error = e.what();
  } catch (const InvalidInput& e) {
    result.exit_code = exit_usage;
    result.error = e.what();
  } catch (const std::exception& e) {
    result.exit_code = exit_numerical;
    result.error = e.what();
  }
  if (result.exit_code == exit_usage || result.exit_code == exit_numerical) {
    if (!result.error.empty()) log << "error: " << result.error << '\n';
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!ec) write_manifest(config, params ? &*params : nullptr, result, results, wall);
  return result;
}

}  // namespace qsine
