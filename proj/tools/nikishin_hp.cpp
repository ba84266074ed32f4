// nikishin_hp: batch runner for Hermite-Pade experiments on Nikishin systems.
//
//   nikishin_hp run <config.json> [--output-dir DIR] [--precision-bits P]
//                   [--check NAME]... [--no-cache]
//
// Exit status: 0 when every requested check passes, 1 when a check fails or
// the computation breaks down, 2 for unreadable or invalid configurations.
// Errors are reported on stderr as one JSON object.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nikishin/experiment.hpp"

namespace {

int report(const nikishin::Error& e) {
  std::cerr << nikishin::experiment::error_record(e) << '\n';
  return nikishin::experiment::exit_code_for(e);
}

}  // namespace

int main(int argc, char** argv) {
  namespace ex = nikishin::experiment;
  CLI::App app{"Hermite-Pade approximants of Nikishin systems: experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<long> precision_bits;
  std::vector<std::string> checks;
  bool no_cache = false;

  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", config_path, "experiment configuration (JSON)")->required();
  run->add_option("--output-dir", output_dir, "directory for reports and the moment cache (overrides config)");
  run->add_option("--precision-bits", precision_bits, "working precision in bits (overrides config)");
  run->add_option("--check", checks, "check to run; repeatable, replaces the configured list")
      ->check(CLI::IsMember(ex::known_checks()));
  run->add_flag("--no-cache", no_cache, "neither read nor write moments.cache.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    ex::ExperimentConfig cfg = ex::load_config(config_path);
    ex::RunOptions opt;
    opt.output_dir = output_dir;
    opt.precision_bits = precision_bits;
    opt.checks = checks;
    opt.use_cache = !no_cache;
    auto sum = ex::run_experiment(cfg, opt);
    for (const auto& g : sum.gates) std::cerr << (g.pass ? "pass " : "FAIL ") << g.name << '\n';
    std::cerr << "reports written to " << sum.output_dir.string() << '\n';
    return sum.exit_code;
  } catch (const nikishin::Error& e) {
    return report(e);
  } catch (const std::invalid_argument& e) {
    return report(nikishin::Error(nikishin::ErrorKind::kValidation, e.what()));
  } catch (const std::exception& e) {
    return report(nikishin::Error(nikishin::ErrorKind::kNumerics, e.what()));
  }
}
