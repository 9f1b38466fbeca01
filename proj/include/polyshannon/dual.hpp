#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "polyshannon/spectrum.hpp"
#include "polyshannon/tb_spline.hpp"

namespace polyshannon {

/// a(j) = ∫ Q_N(t) Q_N(t − j) dt for j = 0..N−1 (a(−j) = a(j)).
std::vector<double> gram_autocorrelation(const TBSpline& q);

/// G(ξ) = Σ_k |Q̂_N(ξ + 2πk)|² = Σ_j a(j) e^{−iξj}, from the autocorrelation.
double gram_symbol(const TBSpline& q, double xi);

/// The same symbol through the symmetrized vector: e^{−Σλ} Φ_{2N−1}[Λ̃](N; e^{iξ}).
double gram_symbol_symmetrized(const TBSpline& q_symmetrized, double sum_lambda, double xi);

struct RieszBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// min and max of G over `points` equispaced ξ in [0, 2π).
RieszBounds riesz_bounds(const TBSpline& q, int points = 1024);

/// e^{Σλ} Q̂_N(ξ) / Φ_{2N−1}[Λ̃](N; e^{iξ}).
std::complex<double> dual_phi_hat(const SpectrumVector& lambda, double xi);

/// Dual scaling function φ̃ = Σ_j d_j Q_N(· − j), with d_j the Fourier coefficients of 1/G,
/// and the reproducing kernel q(x, y) = Σ_j φ̃(x − j) Q_N(y − j).
class DualScaling {
 public:
  explicit DualScaling(const SpectrumVector& lambda, int half_window = 60, int period_samples = 1024);

  const TBSpline& basis() const { return *q_; }
  double operator()(double t) const;
  /// Truncated at |j| ≤ J; only the ≤ N terms with y − j ∈ (0, N) are nonzero.
  double q_kernel(double x, double y, int j_max = 1 << 20) const;
  int half_window() const { return half_window_; }
  /// max |d_j| over the outer five coefficients on each side.
  double coefficient_tail() const;

 private:
  std::shared_ptr<const TBSpline> q_;
  int half_window_;
  std::vector<double> d_;  // d_j for j = −W..W
};

}  // namespace polyshannon
