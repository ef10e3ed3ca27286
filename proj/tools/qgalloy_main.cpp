#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "qgalloy/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"random Schroedinger operators of alloy type on metric graphs"};
  app.require_subcommand(1);

  qgalloy::RunOptions options;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("-c,--config", options.config_path, "experiment config (INI)")->required();
  run->add_option("-o,--output", options.output_dir, "output directory");
  run->add_option("--set", sets, "override as section.key=value (repeatable)");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the configured seed");
  CLI::Option* threads_opt = run->add_option("--threads", threads, "worker threads");

  CLI::App* validate = app.add_subcommand("validate", "dry-run the config checks");
  validate->add_option("-c,--config", options.config_path, "experiment config (INI)")
      ->required();
  validate->add_option("--set", sets, "override as section.key=value (repeatable)");

  CLI::App* oracle = app.add_subcommand("oracle", "print a closed-form spectrum");
  std::string fixture;
  double length = 1.0;
  double upto = 50.0;
  int arms = 3;
  oracle->add_option("--fixture", fixture, "interval, loop or star")->required();
  oracle->add_option("--length", length, "edge or arm length");
  oracle->add_option("--arms", arms, "star arm count");
  oracle->add_option("--upto", upto, "energy ceiling");

  CLI11_PARSE(app, argc, argv);

  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "qgalloy: --set expects section.key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    options.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed_opt->count() > 0) options.seed = seed;
  if (threads_opt->count() > 0) options.threads = threads;

  if (run->parsed()) return qgalloy::run_experiment(options);
  if (validate->parsed()) return qgalloy::validate_config(options);
  return qgalloy::print_oracle(fixture, length, arms, upto);
}
