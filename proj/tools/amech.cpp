#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "amech/commands.hpp"

namespace {

/// AMECH_FD_H overrides the default finite-difference step.
bool apply_fd_step_env() {
  const char* raw = std::getenv("AMECH_FD_H");
  if (raw == nullptr || *raw == '\0') return true;
  try {
    std::size_t used = 0;
    const double h = std::stod(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    amech::set_default_fd_step(h);
  } catch (const std::exception&) {
    std::cerr << "error: AMECH_FD_H must be a positive number, got '" << raw << "'\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie algebroid mechanics: structure validation, simulation and cross-checks"};
  app.require_subcommand(1);

  amech::CommandOptions opt;
  double tol = 0.0;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", opt.model, "builtin:<name>, a builtin name, or a model JSON file");
    sub->add_option("--points", opt.points, "number of sample points")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "tolerance override")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "seed for random sample points");
    sub->add_option("--out", opt.out, "output file");
  };

  CLI::App* validate = app.add_subcommand("validate", "check the structure equations of a chart");
  add_common(validate);
  validate->get_option("--model")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a scenario and write CSV plus a JSON sidecar");
  add_common(simulate);
  simulate->add_option("--config", opt.config, "scenario TOML file")->required();
  simulate->get_option("--out")->required();

  std::string check_name;
  CLI::App* check = app.add_subcommand("check", "run a cross-check at sampled points");
  add_common(check);
  check->get_option("--model")->required();
  check->add_option("name", check_name, "involution | triple | legendre | sl-eq-sh | hp-lp | poisson")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : amech::kBadInput;
  }
  if (!apply_fd_step_env()) return amech::kBadInput;

  for (CLI::App* sub : {validate, simulate, check}) {
    if (sub->count("--tol")) opt.tol = tol;
    if (sub->count("--seed")) opt.seed = seed;
  }
  if (check->parsed() && !check->count("--points")) opt.points = 100;

  return amech::run_guarded(
      [&] {
        if (validate->parsed()) return amech::cmd_validate(opt, std::cout);
        if (simulate->parsed()) return amech::cmd_simulate(opt, std::cout);
        return amech::cmd_check(check_name, opt, std::cout);
      },
      std::cerr);
}
