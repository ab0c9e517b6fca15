#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rbdo/errors.hpp"
#include "rbdo/harness.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutputEnv = "RBDO_OUTPUT_DIR";

fs::path output_dir(const std::string& flag, const rbdo::RunConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return "rbdo_out";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reliability-based design optimization with the directional bat algorithm"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out;
  app.add_option("--seed", seed, "Base seed (overrides the config)");
  app.add_option("--jobs", jobs, "Trials run concurrently")->check(CLI::PositiveNumber);
  app.add_option("--out", out, std::string("Output directory (default: config, then $") + kOutputEnv + ", then rbdo_out)");

  auto* run_cmd = app.add_subcommand("run", "Run a multi-trial experiment");
  std::string run_config;
  run_cmd->add_option("config", run_config, "JSON config file")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Reliability report for one design");
  std::string verify_config, design_file;
  verify_cmd->add_option("config", verify_config, "JSON config file")->required();
  verify_cmd->add_option("--design", design_file, "CSV file with the design vector")->required();

  app.add_subcommand("list-benchmarks", "List benchmark ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-benchmarks")) {
      for (const auto& id : rbdo::problems::benchmark_ids())
        std::cout << id << "  " << rbdo::problems::benchmark_description(id) << '\n';
      return 0;
    }

    if (app.got_subcommand(run_cmd)) {
      auto cfg = rbdo::load_run_config(run_config);
      if (seed) cfg.base_seed = *seed;
      const auto dir = output_dir(out, cfg);
      const auto result = rbdo::run_experiment(cfg, jobs);
      rbdo::write_artifacts(result, dir);
      std::cout << rbdo::summary_csv(result);
      std::cerr << "artifacts written to " << dir.string() << '\n';
      return 0;
    }

    if (app.got_subcommand(verify_cmd)) {
      auto cfg = rbdo::load_run_config(verify_config);
      if (seed) cfg.base_seed = *seed;
      const auto problem = cfg.make_problem();
      const auto y = rbdo::read_design_csv(design_file);
      const auto rows = rbdo::verify_design(problem, y, cfg.verification, cfg.base_seed);
      const auto text = rbdo::verification_csv(rows);
      const auto dir = output_dir(out, cfg);
      fs::create_directories(dir);
      std::ofstream(dir / "verification.csv", std::ios::binary) << text;
      std::cout << text;
      return 0;
    }
  } catch (const rbdo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
