#include <CLI11.hpp>

#include <iostream>

#include "lakes/harness/acceptance.hpp"
#include "lakes/harness/runner.hpp"

using namespace lakes;
using namespace lakes::harness;

int main(int argc, char** argv) {
  CLI::App app{"lakes: hemidiabatic sweeps, counterdiabatic drives and pulse sequences"};
  app.require_subcommand(1);

  std::string config_path, outdir, experiment, tier = "ci";
  std::vector<std::string> overrides;
  int threads = 0;

  auto* run = app.add_subcommand("run", "run an experiment from a key = value config file");
  run->add_option("config", config_path, "config file (omit to use --set experiment=...)");
  run->add_option("--set,-s", overrides, "key=value override, repeatable");
  run->add_option("--out,-o", outdir, "output root (overrides outdir)");
  run->add_option("--threads,-j", threads, "worker threads (default: LAKES_THREADS or hardware)");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks feasible at a tier");
  verify->add_option("--tier,-t", tier, "ci or full");
  verify->add_option("--threads,-j", threads, "worker threads");

  auto* defaults = app.add_subcommand("defaults", "print the default config of an experiment");
  defaults->add_option("experiment", experiment)->required();

  auto* hash = app.add_subcommand("hash", "print the resolved config and its hash");
  hash->add_option("config", config_path)->required();
  hash->add_option("--set,-s", overrides, "key=value override, repeatable");

  CLI11_PARSE(app, argc, argv);

  try {
    auto load = [&] {
      Config c = config_path.empty() ? Config{} : Config::load(config_path);
      for (const auto& o : overrides) c.apply_override(o);
      if (!outdir.empty()) c.set("outdir", outdir);
      if (threads > 0) c.set("threads", std::to_string(threads));
      return c;
    };
    if (*run) {
      const RunSummary s = run_experiment(load(), std::cerr);
      std::cout << s.directory << "\n";
      if (s.failed > 0) {
        std::cerr << s.failed << " of " << s.points << " scan points failed (see manifest.json)\n";
        return kExitFailure;
      }
      return kExitOk;
    }
    if (*verify) {
      const Tier t = parse_tier(tier);
      const auto results = run_acceptance(t, resolve_threads(threads), std::cout);
      for (const auto& r : results)
        if (!r.pass) return kExitVerify;
      return kExitOk;
    }
    if (*defaults) {
      Config c;
      for (const auto& [k, v] : experiment_defaults(experiment)) c.set(k, v);
      std::cout << c.serialize();
      return kExitOk;
    }
    if (*hash) {
      const Config c = resolve_config(load());
      std::cout << c.serialize() << "# hash " << c.hash() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
