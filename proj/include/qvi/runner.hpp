#pragma once

#include <memory>
#include <string>

#include "qvi/config.hpp"
#include "qvi/engine.hpp"
#include "qvi/sensitivity.hpp"

namespace qvi {

// A fully validated experiment: the problem instance plus everything the
// commands need from the config.
struct Experiment {
  std::shared_ptr<ProblemInstance> inst;
  std::vector<double> x_state;  // spatial coordinate per flattened state node
  GridFunction u;
  std::optional<GridFunction> v;  // perturbed parameter (lipschitz)
  std::optional<GridFunction> h;  // direction (derivative family)
  std::vector<double> q_list{kInf};
  double rho = 0.0;
  TauSchedule schedule;
  double slack = 1e-8;           // pass/fail slack for order checks
  double tol_check = 1e-8;       // cross-oracle tolerance (linearized)
  int hadamard_count = 8;
  std::vector<double> sweep_u;
};

Experiment load_experiment(const Config& cfg);

// Exit codes: 0 all checks passed, 1 check failure, 2 configuration
// error, 3 solver non-convergence.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir);

}  // namespace qvi
