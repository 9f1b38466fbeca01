// polyshannon <command> --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]
//
// Exit codes: 0 all checks passed, 1 a check failed or the computation aborted,
// 2 usage, configuration or parse error.

#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "polyshannon/commands.hpp"
#include "polyshannon/errors.hpp"

int main(int argc, char** argv) {
  using namespace polyshannon;
  CLI::App app{"Shannon-type sampling for polysplines and polyharmonic functions"};
  std::string command, config_path, out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("command", command, "kernel1d | zeros | decay | reconstruct-sphere | reconstruct-strip | verify")
      ->required()
      ->check(CLI::IsMember(ExperimentConfig::modes()));
  app.add_option("--config", config_path, "experiment configuration (key = value or JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "overrides the configured seed");
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CommandContext ctx;
  ctx.out_dir = out_dir;
  ctx.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  if (*seed_opt) ctx.seed = seed;
  ctx.log = &std::cerr;

  ExperimentConfig config;
  try {
    config = ExperimentConfig::load(config_path);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const int rc = run_command(command, config, ctx);
    std::cout << command << ": " << (rc == 0 ? "all checks passed" : "check failures, see report") << '\n';
    return rc;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const RestrictionError& e) {
    std::cerr << "unsupported configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
