// taildep: residual dependence indices of elliptical distributions.
//
//   taildep simulate|estimate|alpha|oracle|verify --config <path>
//           [--out <path>] [--seed <u64>] [--kn <int>]
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/config, 3 runtime.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "taildep/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"residual dependence indices of elliptical distributions"};
  app.require_subcommand(1);

  std::string config_path;
  taildep::cli::Overrides ov;
  std::string out_path;
  std::uint64_t seed = 0;
  int kn = 0;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* copt = sub->add_option("--config", config_path, "JSON config file");
    if (config_required) copt->required();
    sub->add_option("--out", out_path, "output path (overrides config)");
    sub->add_option("--seed", seed, "seed (overrides config)");
    sub->add_option("--kn", kn, "upper order statistics count (overrides config)");
  };

  add_common(app.add_subcommand("simulate", "draw elliptical samples to CSV"), true);
  add_common(app.add_subcommand("estimate", "tail report from a CSV sample"), true);
  add_common(app.add_subcommand("alpha", "quadratic-program indices for a correlation matrix"), true);
  add_common(app.add_subcommand("oracle", "joint-survival tables and slope fits"), true);
  add_common(app.add_subcommand("verify", "run the acceptance battery"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : taildep::cli::kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) ov.out = out_path;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--kn")) ov.kn = kn;

  return taildep::cli::run_command(sub->get_name(), config_path, ov, std::cout, std::cerr);
}
