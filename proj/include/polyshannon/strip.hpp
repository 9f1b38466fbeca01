#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "polyshannon/shannon1d.hpp"

namespace polyshannon {

using Mode = std::vector<int>;

/// All κ ∈ ℤ^d with |κ|² ≤ K², in lexicographic order.
class TorusModeSet {
 public:
  TorusModeSet(int dimension, int max_norm);

  int dimension() const { return dim_; }
  int max_norm() const { return max_norm_; }
  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<Mode>& modes() const { return modes_; }
  /// Index of κ, or −1 when absent.
  long index_of(const Mode& kappa) const;
  static long norm_squared(const Mode& kappa);
  /// Power of two ≥ 2K + 2 points per torus direction.
  int grid_size() const;

 private:
  int dim_, max_norm_;
  std::vector<Mode> modes_;
  std::map<Mode, std::size_t> index_;
};

/// Per-κ samples f_κ(j) on the hyperplanes t = j, j ∈ [j_min, j_max].
class StripField {
 public:
  StripField() = default;
  StripField(int dimension, int p, int max_norm, int j_min, int j_max, std::string generator = {});

  int dimension() const { return modes_ ? modes_->dimension() : 0; }
  int p() const { return p_; }
  int max_norm() const { return modes_ ? modes_->max_norm() : 0; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int planes() const { return j_max_ - j_min_ + 1; }
  const TorusModeSet& modes() const { return *modes_; }
  const std::string& generator() const { return generator_; }

  std::complex<double>& sample(std::size_t mode, int j);
  std::complex<double> sample(std::size_t mode, int j) const;
  const std::vector<std::complex<double>>& data() const { return data_; }

  /// max |f_{−κ}(j) − conj f_κ(j)|.
  double conjugate_asymmetry() const;

  /// Text: "format strip-field 1" header then "κ_1 .. κ_d  re im re im ..." per mode.
  void write_text(std::ostream& os) const;
  /// Binary, little-endian: "PSSF" u32 version=1 | i32 d, p, K, j_min, j_max |
  /// u32 len, generator | u64 count, f64 (re, im) pairs, mode-major then j ascending.
  void write_binary(std::ostream& os) const;
  static StripField read(std::istream& is);
  void save(const std::filesystem::path& path, bool binary) const;
  static StripField load(const std::filesystem::path& path);

  bool operator==(const StripField& other) const;

 private:
  std::shared_ptr<const TorusModeSet> modes_;
  int p_ = 1, j_min_ = 0, j_max_ = 0;
  std::string generator_;
  std::vector<std::complex<double>> data_;
};

/// Kernel for the symmetric spectrum {±k, each ×p}; k may be irrational.
KernelTable strip_kernel(double k, int p, const FrequencyGrid& grid = {}, double half_width = 30.0);

/// Strip kernels keyed on the integer |κ|², shared between all κ of equal length.
class StripKernelCache {
 public:
  StripKernelCache(int p, FrequencyGrid grid = {}, double half_width = 30.0) : p_(p), grid_(grid), half_width_(half_width) {}

  std::shared_ptr<const KernelTable> get(long norm_squared);
  int p() const { return p_; }
  std::size_t size() const;
  /// Pre-builds all kernels needed for `modes`, using up to `threads` workers.
  void warm(const TorusModeSet& modes, int threads = 1);

 private:
  int p_;
  FrequencyGrid grid_;
  double half_width_;
  mutable std::mutex mutex_;
  std::map<long, std::shared_ptr<const KernelTable>> kernels_;
};

/// Discrete Fourier analysis of one hyperplane given on the uniform torus grid
/// (grid_size()^d points, row-major, y_i = 2π·index/G).
std::vector<std::complex<double>> analyze_torus(const TorusModeSet& modes, const std::vector<double>& values);
/// Σ_κ f_κ e^{i⟨κ, y⟩}.
std::complex<double> synthesize_torus(const TorusModeSet& modes, const std::complex<double>* coefficients,
                                      const std::vector<double>& y);

struct StripQuery {
  double t;
  std::vector<double> y;
};

struct StripReconstruction {
  std::vector<std::complex<double>> values;
  std::vector<std::string> warnings;
  double tail_bound = 0.0;
};

/// f(t, y′) = Σ_κ [Σ_j S₀^{(|κ|)}(t − j) f_κ(j)] e^{i⟨κ, y′⟩}.
StripReconstruction reconstruct_strip(StripKernelCache& cache, const StripField& field,
                                      const std::vector<StripQuery>& queries, int threads = 1);

/// Real random field with f_κ(t) = Σ_i c_{κ,i} Q̄_{|κ|}(t − i), c_{−κ} = conj c_κ, shifts
/// limited so all nonzero samples fall inside [j_min, j_max].
class SyntheticStripField {
 public:
  SyntheticStripField(int dimension, int p, int max_norm, int j_min, int j_max, std::uint64_t seed);

  std::complex<double> profile(std::size_t mode, double t) const;
  double operator()(double t, const std::vector<double>& y) const;
  StripField sample() const;
  const TorusModeSet& modes() const { return modes_; }
  /// Values on the uniform torus grid of the plane t.
  std::vector<double> plane_values(double t) const;

 private:
  TorusModeSet modes_;
  int p_, j_min_, j_max_;
  std::uint64_t seed_;
  int first_shift_;
  std::map<long, std::shared_ptr<const TBSpline>> splines_;
  std::vector<std::vector<std::complex<double>>> coefficients_;
};

}  // namespace polyshannon
