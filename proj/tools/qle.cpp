#include "qle/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"qle: quasi-local energy relative to a static reference"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "qle-out";
  long long seed = -1;
  bool timings = false;

  const std::vector<std::string> commands = {
      "energy",         "first-variation", "second-variation", "optimize",
      "reilly-check",   "dirichlet",       "stability",        "identity-suite",
      "sweep",          "verify-all"};
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_flag("--timings", timings, "include wall-clock timings in reports");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  qle::RunOptions opt;
  opt.command = command;
  opt.config_path = config_path;
  opt.out_dir = out_dir;
  opt.seed_override = seed;
  opt.timings = timings;
  return qle::run_command(opt, std::cout);
}
