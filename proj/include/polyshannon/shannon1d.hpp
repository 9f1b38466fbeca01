#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "polyshannon/spectrum.hpp"
#include "polyshannon/tb_spline.hpp"

namespace polyshannon {

/// Frequency discretization for kernel synthesis: cutoff Ξ, M samples, step δξ = 2Ξ/M.
struct FrequencyGrid {
  double cutoff = 64.0 * std::numbers::pi;
  int samples = 1 << 14;

  double step() const { return 2.0 * cutoff / samples; }
  /// Time step of the matching inverse transform, π/Ξ.
  double time_step() const { return std::numbers::pi / cutoff; }
  /// Samples of 1/φ* per 2π period; the aliasing knob of the coefficient route.
  int period_samples() const;
  /// Throws std::invalid_argument unless M is a power of two ≥ 1024 and Ξ ≥ 8π.
  void validate() const;
  bool operator==(const FrequencyGrid&) const = default;
};

/// φ*(ξ) = Σ_{j=1}^{N−1} Q_N(j) e^{−iξj}.
std::complex<double> phi_star(const TBSpline& q, double xi);
std::complex<double> phi_star(const SpectrumVector& lambda, double xi);

struct NonzeroMargin {
  double margin = 0.0;           // min |φ*| with the unnormalized Q_N
  double relative = 0.0;         // margin / max_j Q_N(j)
  double argmin = 0.0;           // ξ where the minimum is attained
  bool guaranteed = false;       // symmetric with even N, or a radial vector with odd n
};

/// Radial vectors in the guaranteed class are recognized by comparing with build_lambda_radial.
bool is_guaranteed_samplable(const SpectrumVector& lambda);

/// Minimum of |φ*| over `points` equispaced ξ in [0, 2π). Throws ViolationError when a
/// guaranteed vector has relative margin below 1e-9.
NonzeroMargin nonzero_margin(const TBSpline& q, int points = 4096);
NonzeroMargin nonzero_margin(const SpectrumVector& lambda, int points = 4096);

/// Ŝ₀(ξ) = Q̂_N(ξ) / φ*(ξ).
std::complex<double> s0_hat(const TBSpline& q, double xi);
std::complex<double> s0_hat(const SpectrumVector& lambda, double xi);

struct KernelMetadata {
  FrequencyGrid grid;
  double half_width = 30.0;
  double margin = 0.0;
  double relative_margin = 0.0;
  double scale = 1.0;             // max_j Q_N(j); S₀ is built from Q_N / scale
  double tail_estimate = 0.0;     // bound on |S₀(t)| for |t| ≥ T
  double cardinal_residual = 0.0; // max_{|j|≤T} |S₀(j) − δ_{0j}|
};

/// Shannon-Walter kernel S₀ = Σ_j c_j Q̄_N(· − j) with Q̄_N = Q_N / scale and c_j the
/// Fourier coefficients of 1/φ̄*. Evaluation is exact in the spline basis; a uniform
/// tabulation at step π/Ξ is kept alongside for export.
class KernelTable {
 public:
  KernelTable(SpectrumVector lambda, KernelMetadata meta, int first_index, std::vector<double> coefficients,
              std::vector<double> values);

  const SpectrumVector& spectrum() const { return lambda_; }
  const KernelMetadata& metadata() const { return meta_; }
  double half_width() const { return meta_.half_width; }
  double step() const { return meta_.grid.time_step(); }
  int order() const { return lambda_.order(); }

  /// S₀(t); zero for |t| > T.
  double operator()(double t) const;
  /// Tabulated S₀ at t_i = −T + i·step.
  const std::vector<double>& values() const { return values_; }
  double time_at(std::size_t i) const { return -meta_.half_width + static_cast<double>(i) * step(); }
  int first_index() const { return first_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const TBSpline& basis() const { return *basis_; }

  void write(std::ostream& os) const;
  static KernelTable read(std::istream& is);
  void save(const std::filesystem::path& path) const;
  static KernelTable load(const std::filesystem::path& path);

 private:
  SpectrumVector lambda_;
  KernelMetadata meta_;
  int first_ = 0;
  std::vector<double> coefficients_;
  std::vector<double> values_;
  std::shared_ptr<const TBSpline> basis_;
};

struct SynthesisOptions {
  bool enforce_cardinal = true;  // throw SynthesisError when the residual exceeds 1e-5
};

/// Throws RestrictionError for odd N, NotSamplableError when φ* vanishes for a vector
/// outside the guaranteed families, SynthesisError on a failed cardinal check.
KernelTable synthesize_kernel(const SpectrumVector& lambda, const FrequencyGrid& grid = {}, double half_width = 30.0,
                              SynthesisOptions options = {});

/// Direct inverse DFT of Ŝ₀ samples on the grid: values at t_i = −T + i·π/Ξ.
/// Aliasing and the |ξ|^{−N} tail limit its accuracy; used as a spectral cross-check.
std::vector<double> synthesize_kernel_spectral(const SpectrumVector& lambda, const FrequencyGrid& grid = {},
                                               double half_width = 30.0);

struct Reconstruction {
  std::vector<double> values;
  double tail_bound = 0.0;
};

/// f(t) = Σ_j f(j) S₀(t − j). Throws ExtrapolationError for points farther than T from
/// every sample.
Reconstruction reconstruct_1d(const KernelTable& kernel, const std::map<int, double>& samples,
                              const std::vector<double>& points);

}  // namespace polyshannon
