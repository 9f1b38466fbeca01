#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polyshannon/config.hpp"
#include "polyshannon/report.hpp"

namespace polyshannon {

struct CommandContext {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::ostream* log = nullptr;        // progress lines; null for silence
};

/// Spectra used by the invariant suites: classical {0 ×2p} for p = 1..4, strip vectors
/// k = 0..8 and radial vectors k = 0..16 (n = 3), both for p = 1, 2.
std::vector<SpectrumVector> test_battery();

RunReport cmd_kernel1d(const ExperimentConfig& config, const CommandContext& ctx);
RunReport cmd_zeros(const ExperimentConfig& config, const CommandContext& ctx);
RunReport cmd_decay(const ExperimentConfig& config, const CommandContext& ctx);
RunReport cmd_reconstruct_sphere(const ExperimentConfig& config, const CommandContext& ctx);
RunReport cmd_reconstruct_strip(const ExperimentConfig& config, const CommandContext& ctx);
RunReport cmd_verify(const ExperimentConfig& config, const CommandContext& ctx);

/// Dispatches, writes `<command>_report.{csv,json}` into the output directory and returns
/// 0 when every check passed, 1 otherwise. Configuration errors propagate as exceptions.
int run_command(const std::string& command, const ExperimentConfig& config, const CommandContext& ctx);

}  // namespace polyshannon
