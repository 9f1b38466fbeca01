#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "polyshannon/shannon1d.hpp"
#include "polyshannon/sphere.hpp"

namespace polyshannon {

/// Truncated harmonic representation of a function sampled on the spheres r = e^j,
/// j ∈ [j_min, j_max]: one radial sample sequence per mode (k, ℓ), k ≤ K.
class PolysplineField {
 public:
  PolysplineField() = default;
  PolysplineField(int n, int p, int max_degree, int j_min, int j_max, std::string generator = {});

  int dimension() const { return n_; }
  int p() const { return p_; }
  int max_degree() const { return max_degree_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int radii() const { return j_max_ - j_min_ + 1; }
  const std::string& generator() const { return generator_; }

  double& sample(int k, int l, int j);
  double sample(int k, int l, int j) const;
  /// Row for mode (k, ℓ): samples at j = j_min..j_max.
  const double* row(int k, int l) const;
  const std::vector<double>& data() const { return data_; }

  /// Text variant: a "format polyspline-field 1" header, key lines, then one line per mode.
  void write_text(std::ostream& os) const;
  /// Binary variant, little-endian:
  ///   "PSPF" u32 version=1 | i32 n, p, K, j_min, j_max | u32 len, generator bytes |
  ///   u64 count, f64 samples (mode-major, flat mode index k²+ℓ−1, then j ascending)
  void write_binary(std::ostream& os) const;
  /// Detects the variant from the leading bytes; throws ParseError with a byte offset.
  static PolysplineField read(std::istream& is);
  void save(const std::filesystem::path& path, bool binary) const;
  static PolysplineField load(const std::filesystem::path& path);

  bool operator==(const PolysplineField&) const = default;

 private:
  int n_ = 3, p_ = 1, max_degree_ = 0, j_min_ = 0, j_max_ = 0;
  std::string generator_;
  std::vector<double> data_;
};

/// Random field whose radial profiles lie in V₀^k: profile_{k,ℓ}(v) = Σ_i a_i Q̄_k(v − i) with
/// a_i ~ U[−1, 1]. Shifts are limited so that every nonzero sample falls inside [j_min, j_max].
class SyntheticSphereField {
 public:
  SyntheticSphereField(int n, int p, int max_degree, int j_min, int j_max, std::uint64_t seed);
  /// Only mode (k, ℓ) is populated; its profile is Q̄_k(v − shift).
  static SyntheticSphereField single_mode(int n, int p, int max_degree, int j_min, int j_max, int k, int l, int shift);

  double profile(int k, int l, double v) const;
  double operator()(double r, const Direction& dir) const;
  PolysplineField sample() const;
  int max_degree() const { return max_degree_; }

 private:
  SyntheticSphereField() = default;
  int n_ = 3, p_ = 1, max_degree_ = 0, j_min_ = 0, j_max_ = 0;
  std::uint64_t seed_ = 0;
  int first_shift_ = 0;
  std::vector<std::shared_ptr<const TBSpline>> splines_;  // per degree
  std::vector<std::vector<double>> coefficients_;         // per flat mode
  std::string description_;
};

/// S̃₀^{(k)} for Λ_k = build_lambda_radial(k, n, p).
KernelTable radial_kernel(int k, int n, int p, const FrequencyGrid& grid = {}, double half_width = 30.0);

class ShannonPolysplineKernel {
 public:
  /// Builds the per-degree kernels k = 0..K, spread over `threads` workers.
  ShannonPolysplineKernel(int n, int p, int max_degree, const FrequencyGrid& grid = {}, double half_width = 30.0,
                          int threads = 1);
  /// Adopts kernels built elsewhere (e.g. loaded from a cache); kernels[k] is degree k.
  ShannonPolysplineKernel(int n, int p, std::vector<std::shared_ptr<const KernelTable>> kernels);

  int dimension() const { return n_; }
  int p() const { return p_; }
  int max_degree() const { return static_cast<int>(kernels_.size()) - 1; }
  const KernelTable& degree(int k) const { return *kernels_[static_cast<std::size_t>(k)]; }

  /// Σ_{k≤K} S̃₀^{(k)}(log r) Z_k(cos γ).
  double operator()(double r, double cos_gamma) const;

 private:
  int n_, p_;
  std::vector<std::shared_ptr<const KernelTable>> kernels_;
};

double kernel_eval(const ShannonPolysplineKernel& kernel, double r, double cos_gamma);

struct DecayRow {
  int k;
  double sup_fourier;  // max |Ŝ̃₀^{(k)}(ξ)| over the frequency grid
  double sup_time;     // max |S̃₀^{(k)}(t)| over the time table
};

std::vector<DecayRow> decay_check(int n, int p, int k_max, const FrequencyGrid& grid = {}, double half_width = 30.0,
                                  int threads = 1);

struct SphereQuery {
  double r;
  Direction direction;
};

struct SphericalReconstruction {
  std::vector<double> values;
  std::vector<std::string> warnings;  // queries too close to the data boundary
  double tail_bound = 0.0;
};

/// f(rψ) = Σ_k Σ_ℓ [Σ_j S̃₀^{(k)}(log r − j) f_{k,ℓ}(e^j)] Y_{k,ℓ}(ψ).
SphericalReconstruction reconstruct_spherical(const ShannonPolysplineKernel& kernel, const PolysplineField& field,
                                              const std::vector<SphereQuery>& queries, int threads = 1);

/// Radial mode values [Σ_j S̃₀^{(k)}(log r − j) f_{k,ℓ}(e^j)] at one radius.
ModeCoefficients reconstruct_modes(const ShannonPolysplineKernel& kernel, const PolysplineField& field, double r);

/// Uniform doubles in [0, 1) from a 64-bit engine, independent of the standard library's
/// distribution implementation so outputs are reproducible across platforms.
double unit_uniform(std::uint64_t bits);

}  // namespace polyshannon
