#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polyshannon/shannon1d.hpp"
#include "polyshannon/spectrum.hpp"

namespace polyshannon {

/// Experiment configuration. Unset optionals take command-specific defaults; the keys that
/// were defaulted are listed in the run report header.
struct ExperimentConfig {
  std::optional<std::string> mode;
  std::optional<std::string> family;      // classical | radial | strip | custom
  std::optional<std::vector<double>> lambda;
  std::optional<int> k, n, p;
  std::optional<double> cutoff;
  std::optional<int> grid_points;
  std::optional<double> half_width;
  std::optional<int> max_degree;
  std::optional<int> j_min, j_max;
  std::optional<int> queries;
  std::optional<int> k_max;
  std::optional<int> torus_dim;
  std::optional<std::vector<int>> degrees;    // per-K sweep
  std::optional<std::vector<int>> j_ranges;   // truncated half-ranges for the tail sweep
  std::optional<std::string> field;           // field file instead of the synthetic generator
  std::optional<std::uint64_t> seed;
  std::optional<std::string> cache_dir;
  std::optional<bool> timing;

  static constexpr std::uint64_t default_seed = 20240601;
  static const std::vector<std::string>& modes();

  /// Flat "key = value" text, or JSON when the first non-blank character is '{'.
  /// Throws ParseError (with byte offset) on syntax errors, unknown keys and bad values.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Sorted "key = value" lines of the keys that are set.
  std::string canonical() const;
  /// FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;

  FrequencyGrid grid() const;
  double kernel_half_width() const { return half_width.value_or(30.0); }
  std::uint64_t effective_seed() const { return seed.value_or(default_seed); }

  /// Λ from family/lambda/k/n/p. Defaults to the classical cubic case {0 ×4}.
  SpectrumVector spectrum() const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex16(std::uint64_t v);

}  // namespace polyshannon
