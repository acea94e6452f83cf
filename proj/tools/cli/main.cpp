#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "circreg/error.hpp"

using namespace circreg::cli;

int main(int argc, char** argv) {
  CLI::App app{"circreg: subcritical random-cluster experiments on circuit regularity"};
  app.footer(csv_schemas());
  app.require_subcommand(1);

  std::string config_path;
  RunContext ctx;
  std::vector<std::string> overrides;

  using Runner = int (*)(const RunContext&);
  const std::map<std::string, std::pair<std::string, Runner>> commands{
      {"sample", {"unconditioned connectivity, decay and mixing statistics", run_sample}},
      {"wulff", {"correlation lengths, Wulff shape and shape constants", run_wulff}},
      {"condition", {"area-conditioned chain with regeneration statistics and tails", run_condition}},
      {"surgery-check", {"invariance suite for the configuration surgeries", run_surgery_check}},
      {"oracle", {"sampler checks against exact enumeration", run_oracle}},
      {"geom-test", {"geometry property suites", run_geom_test}},
  };
  std::map<CLI::App*, Runner> runners;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "flat key=value configuration file");
    sub->add_option("--seed", ctx.seed, "master seed")->capture_default_str();
    sub->add_option("--out-dir", ctx.out_dir, "directory for CSVs and manifest.json")->capture_default_str();
    sub->add_option("--chains", ctx.chains, "independent chains (overrides the config)");
    sub->add_option("--max-edges-enumerate", ctx.max_edges_enumerate, "refuse exact enumeration above this many edges")
        ->capture_default_str();
    sub->add_option("--set", overrides, "extra key=value settings, applied after the file")->type_name("KEY=VALUE");
    sub->add_flag("--strict", ctx.strict, "exit with status 4 when a check fails");
    runners[sub] = entry.second;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) ctx.config = Config::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--set expects KEY=VALUE, got '" + kv + "'");
      ctx.config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    std::filesystem::create_directories(ctx.out_dir);
    for (const auto& [sub, run] : runners)
      if (sub->parsed()) return run(ctx);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const circreg::Error& e) {
    std::cerr << "error (" << circreg::to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == circreg::ErrorKind::TooLarge ? kExitRefused : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
