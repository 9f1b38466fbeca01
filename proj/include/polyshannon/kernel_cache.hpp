#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>

#include "polyshannon/shannon1d.hpp"

namespace polyshannon {

/// On-disk kernel store: one file per (Λ, grid) pair,
/// `<dir>/kernel_<Λ-hash>_<grid-hash>.pskt`, hashes being 64-bit FNV-1a in hex.
class KernelCache {
 public:
  explicit KernelCache(std::filesystem::path dir);

  std::filesystem::path path_for(const SpectrumVector& lambda, const FrequencyGrid& grid, double half_width) const;
  /// Loads the stored kernel when present and consistent, otherwise synthesizes and stores it.
  std::shared_ptr<const KernelTable> get(const SpectrumVector& lambda, const FrequencyGrid& grid, double half_width);

  int hits() const { return hits_; }
  int misses() const { return misses_; }

 private:
  std::filesystem::path dir_;
  std::atomic<int> hits_{0};
  std::atomic<int> misses_{0};
};

std::string spectrum_hash(const SpectrumVector& lambda);
std::string grid_hash(const FrequencyGrid& grid, double half_width);

}  // namespace polyshannon
