// gfch: solve, validate and converge from a flat key = value config file.

#include <CLI11.hpp>

#include <iostream>

#include "gfch/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fractional Boussinesq / CH-type long-wave solver and validation harness"};
  app.require_subcommand(1, 1);

  gfch::RunOptions opt;
  std::uint64_t seed = 0;
  std::string out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "random seed (overrides seed)");
    sub->add_option("--threads", opt.threads, "worker threads for parameter sweeps")->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "integrate one model and write snapshots");
  CLI::App* validate = app.add_subcommand("validate", "hierarchy, reduction-chain and conservation checks");
  CLI::App* converge = app.add_subcommand("converge", "Boussinesq vs reduced-model convergence study");
  for (CLI::App* sub : {solve, validate, converge}) add_common(sub);
  validate->add_option("--mutate", opt.mutate, "corrupt one coefficient (test mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gfch::exit_code::kConfigError;
  }

  auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  CLI::App* active = app.get_subcommands().front();
  if (given(active, "--out")) opt.out_dir = out_dir;
  if (given(active, "--seed")) opt.seed = seed;

  const gfch::Command cmd = active == solve      ? gfch::Command::Solve
                            : active == validate ? gfch::Command::Validate
                                                 : gfch::Command::Converge;
  return gfch::run_command(cmd, opt, std::cout, std::cerr);
}
