#pragma once

#include <complex>
#include <string>
#include <vector>

namespace polyshannon {

/// Non-ordered frequency vector Λ: distinct real frequencies with multiplicities.
/// Entries are kept sorted by frequency.
class SpectrumVector {
 public:
  struct Entry {
    double frequency;
    int multiplicity;
    bool operator==(const Entry&) const = default;
  };

  SpectrumVector() = default;

  /// Values are merged when they agree within `merge_tol` (0 means exact equality).
  static SpectrumVector from_values(const std::vector<double>& values, double merge_tol = 1e-12);
  static SpectrumVector from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  int order() const { return order_; }
  bool empty() const { return entries_.empty(); }
  bool is_symmetric(double tol = 1e-12) const;

  /// All N frequencies with repetition, ascending.
  std::vector<double> expanded() const;
  double max_abs() const;
  double sum() const;
  double min_frequency() const { return entries_.front().frequency; }
  double max_frequency() const { return entries_.back().frequency; }
  int multiplicity_of(double frequency, double tol = 0.0) const;

  SpectrumVector negated() const;
  /// [Λ, −Λ], order 2N.
  SpectrumVector symmetrized() const;

  std::string describe() const;

  bool operator==(const SpectrumVector& other) const { return entries_ == other.entries_; }

 private:
  explicit SpectrumVector(std::vector<Entry> entries);
  std::vector<Entry> entries_;
  int order_ = 0;
};

/// {k+2j} ∪ {−n−k+2+2j}, j = 0..p−1, merged where values coincide.
SpectrumVector build_lambda_radial(int k, int n, int p);

/// {−k ×p, +k ×p}; k = 0 gives {0 ×2p}. k may be irrational (k = |κ| on a torus).
SpectrumVector build_lambda_strip(double k, int p);

/// Monic real polynomial, ascending coefficients.
class CharPoly {
 public:
  explicit CharPoly(std::vector<double> coefficients);
  const std::vector<double>& coefficients() const { return coefficients_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  std::complex<double> operator()(std::complex<double> z) const;
  double operator()(double x) const;
  CharPoly derivative() const;
  std::vector<std::complex<double>> roots() const;

 private:
  std::vector<double> coefficients_;
};

/// L(z) = Π (z − λ_j).
CharPoly char_poly(const SpectrumVector& lambda);

/// M_{k,p}(z) = Π_{j<p} (z − k − 2j)(z + n + k − 2 − 2j).
CharPoly m_poly(int k, int p, int n);

/// True if deg L = N and every frequency of multiplicity μ annihilates L, L′, …, L^{(μ−1)}
/// to within `tol` relative to the coefficient scale. Robust for confluent roots, where
/// eigenvalue-based root comparison only resolves to ε^{1/μ}.
bool has_root_multiset(const CharPoly& poly, const SpectrumVector& lambda, double tol = 1e-10);

/// r(λ) = Π (e^{λ_j} − λ).
std::complex<double> r_poly(const SpectrumVector& lambda, std::complex<double> z);
/// s(λ) = Π (e^{−λ_j} − λ).
std::complex<double> s_poly(const SpectrumVector& lambda, std::complex<double> z);

}  // namespace polyshannon
