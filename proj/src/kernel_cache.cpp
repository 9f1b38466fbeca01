#include "polyshannon/kernel_cache.hpp"

#include <bit>
#include <fstream>

#include "polyshannon/config.hpp"
#include "polyshannon/errors.hpp"

namespace polyshannon {

std::string spectrum_hash(const SpectrumVector& lambda) {
  std::string bytes;
  for (const auto& e : lambda.entries()) {
    bytes += std::to_string(std::bit_cast<std::uint64_t>(e.frequency)) + ':' + std::to_string(e.multiplicity) + ';';
  }
  return hex16(fnv1a(bytes));
}

std::string grid_hash(const FrequencyGrid& grid, double half_width) {
  const std::string bytes = std::to_string(std::bit_cast<std::uint64_t>(grid.cutoff)) + ':' +
                            std::to_string(grid.samples) + ':' + std::to_string(std::bit_cast<std::uint64_t>(half_width));
  return hex16(fnv1a(bytes));
}

KernelCache::KernelCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::filesystem::path KernelCache::path_for(const SpectrumVector& lambda, const FrequencyGrid& grid,
                                            double half_width) const {
  return dir_ / ("kernel_" + spectrum_hash(lambda) + "_" + grid_hash(grid, half_width) + ".pskt");
}

std::shared_ptr<const KernelTable> KernelCache::get(const SpectrumVector& lambda, const FrequencyGrid& grid,
                                                    double half_width) {
  const auto path = path_for(lambda, grid, half_width);
  if (std::filesystem::exists(path)) {
    try {
      auto kernel = std::make_shared<const KernelTable>(KernelTable::load(path));
      const auto& meta = kernel->metadata();
      if (kernel->spectrum() == lambda && meta.grid == grid && meta.half_width == half_width) {
        ++hits_;
        return kernel;
      }
    } catch (const ParseError&) {
      // Corrupt entry: fall through and rebuild it.
    }
  }
  ++misses_;
  auto kernel = std::make_shared<const KernelTable>(synthesize_kernel(lambda, grid, half_width));
  // Write to a private name first so concurrent readers never see a partial file.
  const auto tmp = path.string() + ".tmp" + std::to_string(std::hash<const void*>{}(kernel.get()));
  kernel->save(tmp);
  std::filesystem::rename(tmp, path);
  return kernel;
}

}  // namespace polyshannon
