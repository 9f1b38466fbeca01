#pragma once

#include <complex>
#include <vector>

#include "polyshannon/spectrum.hpp"

namespace polyshannon {

/// Partial fractions of 1/L(z) turned into time-domain coefficients:
/// the causal fundamental solution is g(t) = 1_{t≥0} Σ_λ Σ_s c_{λ,s} t^s e^{λt}.
class GreenExpansion {
 public:
  struct Term {
    double frequency;
    std::vector<double> coefficients;  // c_{λ,s}, s = 0..μ−1
  };

  /// Throws ConditioningError if two distinct frequencies are closer than 1e-8.
  explicit GreenExpansion(const SpectrumVector& lambda);

  const std::vector<Term>& terms() const { return terms_; }

  double causal(double t) const;

  /// Same fundamental solution minus the U_N element Σ_{λ>0} c t^s e^{λt}: positive
  /// frequencies are carried by the anticausal side so nothing grows away from the origin.
  double stable(double t) const;

  /// g^{(m)}(0+) for the causal solution.
  double derivative_at_zero(int m) const;

 private:
  std::vector<Term> terms_;
};

GreenExpansion green_expansion(const SpectrumVector& lambda);

/// f(τ) = Σ_λ P_λ(τ) e^{λτ} on a unit segment, τ measured from the left knot.
class ExpPolynomial {
 public:
  struct Term {
    double frequency;
    std::vector<double> poly;  // ascending in τ
  };

  ExpPolynomial() = default;
  explicit ExpPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  const std::vector<Term>& terms() const { return terms_; }
  double value(double tau) const;
  double derivative(double tau, int order) const;

 private:
  std::vector<Term> terms_;
};

/// Cardinal exponential spline on integer knots j_min..j_max. Segment i covers
/// [j_min + i, j_min + i + 1] and is stored in the local basis τ^s e^{λτ}.
class PiecewiseExpSpline {
 public:
  enum class Side { left, right };

  PiecewiseExpSpline() = default;
  PiecewiseExpSpline(SpectrumVector lambda, int j_min, std::vector<ExpPolynomial> segments, bool compact_support);

  const SpectrumVector& spectrum() const { return lambda_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_min_ + static_cast<int>(segments_.size()); }
  bool compact_support() const { return compact_; }
  const std::vector<ExpPolynomial>& segments() const { return segments_; }

  /// Right-continuous evaluation; 0 outside [j_min, j_max) when compactly supported.
  double operator()(double t) const;
  /// One-sided derivative; at a knot `side` picks the adjacent segment.
  double derivative(double t, int order, Side side = Side::right) const;

 private:
  SpectrumVector lambda_;
  int j_min_ = 0;
  std::vector<ExpPolynomial> segments_;
  bool compact_ = false;
};

/// TB-spline Q_N[Λ]: the compactly supported cardinal exponential spline on [0, N]
/// with Fourier transform Π(e^{−λ_j} − e^{−iξ})/(iξ − λ_j).
class TBSpline {
 public:
  /// Coefficient-to-peak ratio beyond which the exact path is not trusted
  /// (roughly the relative error divided by machine epsilon).
  static constexpr double default_cancellation_limit = 1e8;

  explicit TBSpline(SpectrumVector lambda);

  const SpectrumVector& spectrum() const { return lambda_; }
  int order() const { return lambda_.order(); }

  std::complex<double> fourier(double xi) const;
  double operator()(double t) const { return piecewise_(t); }
  double derivative(double t, int order, PiecewiseExpSpline::Side side) const {
    return piecewise_.derivative(t, order, side);
  }

  /// Q_N(j) for j = 0..N (zero at both ends when N ≥ 2).
  const std::vector<double>& integer_values() const { return integer_values_; }
  double integer_value(int j) const;
  /// max_j Q_N(j); the normalization used before kernel synthesis.
  double scale() const { return scale_; }
  /// max over a fine grid of Q_N on [0, N].
  double peak() const { return peak_; }

  /// β_m: ascending coefficients in w of Π (e^{−λ_j} − w).
  const std::vector<double>& shift_coefficients() const { return beta_; }
  const GreenExpansion& green() const { return green_; }
  const PiecewiseExpSpline& piecewise() const { return piecewise_; }

  /// Σ|individual contributions| / peak, maximized over segments.
  double cancellation() const { return cancellation_; }
  bool trusted(double limit = default_cancellation_limit) const { return cancellation_ <= limit; }

 private:
  SpectrumVector lambda_;
  GreenExpansion green_;
  std::vector<double> beta_;
  PiecewiseExpSpline piecewise_;
  std::vector<double> integer_values_;
  double scale_ = 0.0;
  double peak_ = 0.0;
  double cancellation_ = 0.0;
};

std::complex<double> qn_hat(const SpectrumVector& lambda, double xi);

/// Throws AccuracyError when the exact expansion cancels beyond the trusted limit.
double qn_exact(const SpectrumVector& lambda, double t);

struct QnTable {
  double step = 0.0;
  int samples_per_unit = 0;
  std::vector<double> values;       // Q_N(i·step), i = 0..N·samples_per_unit
  double truncation_estimate = 0.0; // absolute bound on the neglected spectral tail
  double cutoff = 0.0;              // effective Nyquist frequency used
};

/// Inverse Fourier tabulation of Q_N with period N. The leading |ξ|^{−N} term of Q̂ is
/// removed from the spectrum and added back exactly through periodic Bernoulli polynomials.
QnTable qn_fft_tabulate(const SpectrumVector& lambda, int samples_per_unit, double xi_cutoff);

/// Φ_{N−1}(x;λ) = Σ_j λ^j Q_N(x − j), valid for every real x.
std::complex<double> phi_big(const TBSpline& q, double x, std::complex<double> z);
std::complex<double> phi_big(const SpectrumVector& lambda, double x, std::complex<double> z);

struct EFPolynomial {
  std::vector<double> coefficients;  // ascending in λ
  double interpolation_residual = 0.0;

  int degree() const;
  std::complex<double> operator()(std::complex<double> z) const;
};

/// Π_{N−1}(λ) = (−1)^{N−1} λ^{N−1} e^{Σλ_j} Φ_{N−1}(0;λ), interpolated at the (N−1)-th roots of unity.
EFPolynomial ef_polynomial(const TBSpline& q);
EFPolynomial ef_polynomial(const SpectrumVector& lambda);

struct EFZeros {
  std::vector<double> zeros;         // ascending
  double max_imaginary = 0.0;        // max |Im v| / |v| of the raw roots
  double pairing_residual = 0.0;     // max |v_j v_{N−1−j} − 1| before symmetrization (symmetric Λ)
};

/// Throws ViolationError if a zero is complex or nonnegative beyond 1e-8.
EFZeros ef_zeros(const TBSpline& q);
EFZeros ef_zeros(const SpectrumVector& lambda);

/// A_{N−1}(x;λ) = (1/2πi) ∮ e^{xz} / (L(z)(e^z − λ)) dz over a rectangle enclosing Λ.
/// Throws DomainError when a pole of 1/(e^z − λ) cannot be kept off the contour.
std::complex<double> a_eval(const SpectrumVector& lambda, double x, std::complex<double> z);

}  // namespace polyshannon
