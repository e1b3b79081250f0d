#include <string>

#include "CLI11.hpp"
#include "qvi/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for obstacle-type fixed-point problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string chosen;
  for (const char* name :
       {"solve", "lipschitz", "derivative", "hadamard", "linearized", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return qvi::run_command(chosen, config_path, out_dir);
}
