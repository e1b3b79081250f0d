#include "qvi/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qvi/csv.hpp"

namespace qvi {

namespace {

GridFunction build_parameter(const ProblemInstance& inst, const Config& cfg,
                             const std::string& key, bool require_nonneg) {
  GridFunction p = inst.zero_parameter();
  std::string file_key = "parameter." + key + "_file";
  if (cfg.has(file_key)) {
    auto vals = read_column_file(cfg.get_string(file_key));
    if (vals.size() != p.size())
      throw ConfigError(file_key + ": expected " + std::to_string(p.size()) +
                        " values, got " + std::to_string(vals.size()));
    p.values = vals;
  } else {
    double c = cfg.get_double("parameter." + key);
    for (double& x : p.values) x = c;
  }
  if (require_nonneg && min_value(p) < 0.0)
    throw ConfigError(key + " must be nonnegative");
  return p;
}

std::vector<double> state_coordinates(const ProblemInstance& inst) {
  if (auto* s = dynamic_cast<const ScalarProblem*>(&inst)) {
    (void)s;
    return {0.0};
  }
  if (auto* imp = dynamic_cast<const ImpulseProblem*>(&inst)) {
    std::vector<double> x(imp->op().domain.n_interior);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = imp->op().domain.x(static_cast<int>(i));
    return x;
  }
  if (auto* par = dynamic_cast<const ParabolicProblem*>(&inst)) {
    const auto& g = par->grid();
    const int m = g.space_nodes();
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(g.n_steps) * m);
    for (int k = 1; k <= g.n_steps; ++k)
      for (int i = 0; i < m; ++i) x.push_back(i * g.space.h());
    return x;
  }
  throw std::logic_error("state_coordinates: unknown instance kind");
}

}  // namespace

Experiment load_experiment(const Config& cfg) {
  Experiment ex;
  std::string kind = cfg.get_string("problem.kind");

  Tolerances tol;
  tol.tol_order = cfg.get_double("tolerances.tol_order", tol.tol_order);
  tol.tol_fixed_point = cfg.get_double("tolerances.tol_fixed_point", 1e-6);
  tol.tol_inner = cfg.get_double("tolerances.tol_inner", tol.tol_inner);
  tol.max_outer = cfg.get_int("tolerances.max_outer", tol.max_outer);
  tol.max_inner = cfg.get_int("tolerances.max_inner", tol.max_inner);

  if (kind == "scalar") {
    std::string v = cfg.get_string("problem.variant");
    ScalarPhiVariant variant;
    if (v == "A") variant = ScalarPhiVariant::A;
    else if (v == "B") variant = ScalarPhiVariant::B;
    else if (v == "C") variant = ScalarPhiVariant::C;
    else throw ConfigError("problem.variant must be A, B or C");
    ex.inst = std::make_shared<ScalarProblem>(variant);
  } else if (kind == "impulse") {
    int n = cfg.get_int("problem.n", 64);
    double length = cfg.get_double("problem.length", 1.0);
    double kappa = cfg.get_double("problem.kappa", 1.0);
    if (kappa < 0.0) throw ConfigError("kappa must be >= 0");
    double f_gamma = cfg.get_double("problem.f_gamma", 0.0);
    Domain1D dom(n, length);
    ImpulseConfig ic;
    ic.kappa = kappa;
    if (cfg.has("problem.c0_file"))
      ic.c0 = read_column_file(cfg.get_string("problem.c0_file"));
    else
      ic.c0.assign(n, 0.0);
    Nonlinearity f = f_gamma > 0.0 ? Nonlinearity::relu(f_gamma) : Nonlinearity::zero();
    ex.inst = std::make_shared<ImpulseProblem>(EllipticOperator(dom, f), ic, tol);
  } else if (kind == "parabolic") {
    int n = cfg.get_int("problem.n", 32);
    double length = cfg.get_double("problem.length", 1.0);
    int n_steps = cfg.get_int("problem.n_steps", 64);
    double T = cfg.get_double("problem.T", 1.0);
    double psi_const = cfg.get_double("problem.psi_const", 0.1);
    if (psi_const < 0.0) throw ConfigError("psi_const must be >= 0");
    double eps = cfg.get_double("problem.eps", 0.0);
    if (eps < 0.0) throw ConfigError("eps must be >= 0");
    SpaceTimeGrid grid(Domain1D(n, length), n_steps, T);
    GridFunction psi = neumann_grid_function(grid, psi_const);
    ex.inst = std::make_shared<ParabolicProblem>(grid, psi, HeatNonlinearity{eps}, tol);
  } else {
    throw ConfigError("problem.kind must be scalar, impulse or parabolic");
  }

  ex.x_state = state_coordinates(*ex.inst);
  ex.u = build_parameter(*ex.inst, cfg, "u", true);
  if (cfg.has("parameter.v") || cfg.has("parameter.v_file"))
    ex.v = build_parameter(*ex.inst, cfg, "v", true);
  if (cfg.has("parameter.h") || cfg.has("parameter.h_file"))
    ex.h = build_parameter(*ex.inst, cfg, "h", false);

  if (cfg.has("run.q")) ex.q_list = cfg.get_double_list("run.q");
  for (double q : ex.q_list)
    if (!(q >= 1.0) && q != kInf) throw ConfigError("run.q entries must be >= 1 or inf");
  ex.rho = cfg.get_double("run.rho", 0.0);
  ex.schedule.tau0 = cfg.get_double("run.tau0", ex.schedule.tau0);
  ex.schedule.ratio = cfg.get_double("run.ratio", ex.schedule.ratio);
  ex.schedule.count = cfg.get_int("run.count", ex.schedule.count);
  ex.schedule.validate();
  ex.slack = cfg.get_double("run.slack", ex.slack);
  ex.tol_check = cfg.get_double("run.tol_check", ex.tol_check);
  ex.hadamard_count = cfg.get_int("run.hadamard_count", ex.hadamard_count);
  if (cfg.has("run.sweep_u")) ex.sweep_u = cfg.get_double_list("run.sweep_u");
  return ex;
}

namespace {

namespace fs = std::filesystem;

class Summary {
 public:
  explicit Summary(const fs::path& dir) : path_(dir / "summary.txt") {}

  void note(const std::string& line) { lines_.push_back(line); }

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    all_ok_ = all_ok_ && ok;
    std::string line = "check " + name + ": " + (ok ? "PASS" : "FAIL");
    if (!detail.empty()) line += " (" + detail + ")";
    lines_.push_back(line);
  }

  bool all_ok() const { return all_ok_; }

  void write() const {
    std::ofstream out(path_, std::ios::binary);
    for (const auto& l : lines_) out << l << "\n";
    out << "result: " << (all_ok_ ? "PASS" : "FAIL") << "\n";
  }

 private:
  fs::path path_;
  std::vector<std::string> lines_;
  bool all_ok_ = true;
};

void write_trace(const fs::path& path, const std::vector<TraceRow>& trace) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(trace.size());
  for (const auto& r : trace)
    rows.push_back({std::to_string(r.k), format_double(r.residual),
                    format_double(r.min_violation), format_double(r.max_violation)});
  write_csv(path.string(), {"k", "residual", "min_violation", "max_violation"}, rows);
}

int cmd_solve(const Experiment& ex, const fs::path& out) {
  Summary summary(out);
  auto m = solve_minimal(*ex.inst, ex.u);
  auto M = solve_maximal(*ex.inst, ex.u);
  write_solution_csv((out / "solution_min.csv").string(), m.value, ex.x_state);
  write_solution_csv((out / "solution_max.csv").string(), M.value, ex.x_state);
  write_trace(out / "trace.csv", M.trace);

  summary.check("converged_min", m.converged);
  summary.check("converged_max", M.converged);
  summary.check("nonnegative_min", min_value(m.value) >= -ex.slack);
  summary.check("order_min_max", le(m.value, M.value, ex.slack));
  summary.check("below_unconstrained",
                le(M.value, ex.inst->solve_unconstrained(ex.u), ex.slack));
  double trace_breach = 0.0;
  for (const auto& r : M.trace) trace_breach = std::max(trace_breach, r.max_violation);
  summary.check("trace_monotone", trace_breach <= 10.0 * ex.inst->tol().tol_inner,
                "max descent breach " + format_double(trace_breach));
  double res_max = max_abs_diff(ex.inst->apply_T(M.value, ex.u), M.value);
  summary.note("fixed_point_residual_max = " + format_double(res_max));
  summary.check("fixed_point_max",
                res_max <= ex.inst->tol().tol_fixed_point + 10.0 * ex.inst->tol().tol_inner);
  summary.write();
  return summary.all_ok() ? 0 : 1;
}

int cmd_lipschitz(const Experiment& ex, const fs::path& out) {
  Summary summary(out);
  if (!ex.v) throw ConfigError("lipschitz: parameter.v is required");
  if (!(ex.rho > 0.0)) throw ConfigError("lipschitz: run.rho must be positive");
  std::vector<std::vector<std::string>> rows;
  for (double q : ex.q_list) {
    auto r = lipschitz_certificate(*ex.inst, ex.u, *ex.v, q, ex.rho, ex.slack);
    rows.push_back({format_double(r.q), format_double(r.rho),
                    format_double(r.lhs_min), format_double(r.bound_min),
                    format_double(r.lhs_max), format_double(r.bound_max),
                    r.satisfied ? "1" : "0"});
    summary.check("lipschitz_q_" + format_double(q), r.satisfied);
  }
  write_csv((out / "lipschitz.csv").string(),
            {"q", "rho", "lhs_min", "bound_min", "lhs_max", "bound_max", "satisfied"},
            rows);
  summary.write();
  return summary.all_ok() ? 0 : 1;
}

int cmd_derivative(const Experiment& ex, const fs::path& out) {
  Summary summary(out);
  if (!ex.h) throw ConfigError("derivative: parameter.h is required");
  auto est = directional_derivative(*ex.inst, ex.u, *ex.h, ex.schedule);
  double q = ex.q_list.front();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n < est.quotients.size(); ++n) {
    double viol = 0.0;
    if (n > 0) {
      const auto& a = est.quotients[n - 1];
      const auto& b = est.quotients[n];
      for (std::size_t i = 0; i < a.size(); ++i)
        viol = std::max(viol, a.values[i] - b.values[i]);
    }
    rows.push_back({format_double(est.taus[n]), format_double(norm(est.quotients[n], q)),
                    format_double(viol)});
  }
  write_csv((out / "quotients.csv").string(),
            {"tau", "quotient_norm", "monotonicity_violation"}, rows);
  write_solution_csv((out / "derivative.csv").string(), est.derivative, ex.x_state);
  summary.note("cauchy_residual = " + format_double(est.cauchy_residual));
  summary.check("quotient_monotone", est.monotonicity_residual <= ex.slack,
                "residual " + format_double(est.monotonicity_residual));
  summary.write();
  return summary.all_ok() ? 0 : 1;
}

int cmd_hadamard(const Experiment& ex, const fs::path& out) {
  Summary summary(out);
  if (!ex.h) throw ConfigError("hadamard: parameter.h is required");
  std::vector<std::pair<double, GridFunction>> perturbations;
  double tau = ex.schedule.tau0;
  for (int n = 1; n <= ex.hadamard_count; ++n, tau *= ex.schedule.ratio) {
    GridFunction hn = *ex.h;
    for (std::size_t i = 0; i < hn.size(); ++i)
      hn.values[i] += (i % 2 == 0 ? 1.0 : -1.0) / n;
    perturbations.emplace_back(tau, std::move(hn));
  }
  auto rep = hadamard_check(*ex.inst, ex.u, *ex.h, perturbations, ex.q_list.front(),
                            ex.schedule);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n < rep.errors.size(); ++n)
    rows.push_back({std::to_string(n + 1), format_double(rep.errors[n])});
  write_csv((out / "hadamard.csv").string(), {"n", "hadamard_error"}, rows);
  double floor = 10.0 * ex.inst->tol().tol_inner;
  bool decreasing = true;
  for (std::size_t n = 1; n < rep.errors.size(); ++n)
    decreasing = decreasing && rep.errors[n] <= rep.errors[n - 1] + floor;
  summary.check("hadamard_errors_decreasing", decreasing);
  summary.write();
  return summary.all_ok() ? 0 : 1;
}

int cmd_linearized(const Experiment& ex, const fs::path& out) {
  Summary summary(out);
  if (!ex.h) throw ConfigError("linearized: parameter.h is required");
  auto rep = characterization_check(*ex.inst, ex.u, *ex.h, ex.q_list.front(),
                                    ex.schedule, ex.tol_check);
  write_solution_csv((out / "linearized.csv").string(), rep.linearized, ex.x_state);
  summary.note("mismatch = " + format_double(rep.mismatch));
  summary.note("fixed_point_residual = " + format_double(rep.fixed_point_residual));
  summary.check("characterization", rep.mismatch <= ex.tol_check);
  summary.check("derivative_is_fixed_point", rep.fixed_point_residual <= ex.tol_check);
  summary.write();
  return summary.all_ok() ? 0 : 1;
}

int cmd_sweep(const Experiment& ex, const fs::path& out) {
  Summary summary(out);
  if (ex.sweep_u.empty()) throw ConfigError("sweep: run.sweep_u is required");
  std::vector<std::vector<std::string>> rows;
  double prev_norm = -kInf;
  bool monotone = true;
  for (double c : ex.sweep_u) {
    if (c < 0.0) throw ConfigError("sweep_u entries must be nonnegative");
    GridFunction u = ex.inst->zero_parameter();
    for (double& x : u.values) x = c;
    auto m = solve_minimal(*ex.inst, u);
    auto M = solve_maximal(*ex.inst, u);
    double nM = norm(M.value, kInf);
    rows.push_back({format_double(c), format_double(nM),
                    format_double(norm(m.value, kInf)),
                    std::to_string(std::max(m.iterations, M.iterations))});
    monotone = monotone && nM >= prev_norm - ex.slack;
    prev_norm = nM;
  }
  write_csv((out / "sweep.csv").string(),
            {"u", "norm_M_inf", "norm_m_inf", "outer_iterations"}, rows);
  summary.check("sweep_M_monotone_in_u", monotone);
  summary.write();
  return summary.all_ok() ? 0 : 1;
}

}  // namespace

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir) {
  try {
    auto cfg = Config::parse_file(config_path);
    auto ex = load_experiment(cfg);
    fs::path out(out_dir);
    fs::create_directories(out);
    if (command == "solve") return cmd_solve(ex, out);
    if (command == "lipschitz") return cmd_lipschitz(ex, out);
    if (command == "derivative") return cmd_derivative(ex, out);
    if (command == "hadamard") return cmd_hadamard(ex, out);
    if (command == "linearized") return cmd_linearized(ex, out);
    if (command == "sweep") return cmd_sweep(ex, out);
    std::cerr << "unknown command: " << command << "\n";
    return 2;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << " (residual "
              << e.last_residual << ")\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qvi
