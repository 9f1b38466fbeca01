#include "polyshannon/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "polyshannon/polynomial.hpp"

namespace polyshannon {

SpectrumVector::SpectrumVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.multiplicity < 1) throw std::invalid_argument("SpectrumVector: multiplicity must be >= 1");
    if (!std::isfinite(e.frequency)) throw std::invalid_argument("SpectrumVector: non-finite frequency");
    order_ += e.multiplicity;
  }
  if (order_ < 1) throw std::invalid_argument("SpectrumVector: order must be >= 1");
}

SpectrumVector SpectrumVector::from_values(const std::vector<double>& values, double merge_tol) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Entry> entries;
  for (double v : sorted) {
    if (!entries.empty() && std::abs(v - entries.back().frequency) <= merge_tol) {
      ++entries.back().multiplicity;
    } else {
      entries.push_back({v, 1});
    }
  }
  return SpectrumVector(std::move(entries));
}

SpectrumVector SpectrumVector::from_entries(std::vector<Entry> entries) {
  std::vector<double> values;
  for (const auto& e : entries) {
    if (e.multiplicity < 1) throw std::invalid_argument("SpectrumVector: multiplicity must be >= 1");
    values.insert(values.end(), static_cast<std::size_t>(e.multiplicity), e.frequency);
  }
  return from_values(values, 0.0);
}

bool SpectrumVector::is_symmetric(double tol) const {
  const auto neg = negated();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].multiplicity != neg.entries_[i].multiplicity) return false;
    if (std::abs(entries_[i].frequency - neg.entries_[i].frequency) > tol) return false;
  }
  return true;
}

std::vector<double> SpectrumVector::expanded() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(order_));
  for (const auto& e : entries_) out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.frequency);
  return out;
}

double SpectrumVector::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.frequency));
  return m;
}

double SpectrumVector::sum() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.frequency * e.multiplicity;
  return s;
}

int SpectrumVector::multiplicity_of(double frequency, double tol) const {
  for (const auto& e : entries_)
    if (std::abs(e.frequency - frequency) <= tol) return e.multiplicity;
  return 0;
}

SpectrumVector SpectrumVector::negated() const {
  std::vector<Entry> out;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) out.push_back({-it->frequency + 0.0, it->multiplicity});
  return SpectrumVector(std::move(out));
}

SpectrumVector SpectrumVector::symmetrized() const {
  std::vector<double> values = expanded();
  for (double v : expanded()) values.push_back(-v + 0.0);
  return from_values(values, 0.0);
}

std::string SpectrumVector::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << '{';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ", ";
    os << entries_[i].frequency;
    if (entries_[i].multiplicity > 1) os << " x" << entries_[i].multiplicity;
  }
  os << '}';
  return os.str();
}

SpectrumVector build_lambda_radial(int k, int n, int p) {
  if (k < 0 || n < 2 || p < 1) throw std::invalid_argument("build_lambda_radial: need k >= 0, n >= 2, p >= 1");
  std::vector<double> values;
  for (int j = 0; j < p; ++j) {
    values.push_back(k + 2 * j);
    values.push_back(-n - k + 2 + 2 * j);
  }
  return SpectrumVector::from_values(values, 0.0);
}

SpectrumVector build_lambda_strip(double k, int p) {
  if (!(k >= 0.0) || p < 1) throw std::invalid_argument("build_lambda_strip: need k >= 0, p >= 1");
  if (k == 0.0) return SpectrumVector::from_entries({{0.0, 2 * p}});
  return SpectrumVector::from_entries({{-k, p}, {k, p}});
}

CharPoly::CharPoly(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw std::invalid_argument("CharPoly: empty coefficient list");
}

std::complex<double> CharPoly::operator()(std::complex<double> z) const {
  return poly::horner(std::span<const double>(coefficients_), z);
}

double CharPoly::operator()(double x) const { return poly::horner(std::span<const double>(coefficients_), x); }

CharPoly CharPoly::derivative() const { return CharPoly(poly::derivative(coefficients_)); }

std::vector<std::complex<double>> CharPoly::roots() const { return poly::roots(coefficients_); }

CharPoly char_poly(const SpectrumVector& lambda) {
  std::vector<double> c{1.0};
  for (double l : lambda.expanded()) {
    const double factor[2] = {-l, 1.0};
    c = poly::multiply(c, factor);
  }
  return CharPoly(std::move(c));
}

CharPoly m_poly(int k, int p, int n) {
  std::vector<double> c{1.0};
  for (int j = 0; j < p; ++j) {
    const double a[2] = {-static_cast<double>(k + 2 * j), 1.0};
    const double b[2] = {static_cast<double>(n + k - 2 - 2 * j), 1.0};
    c = poly::multiply(c, a);
    c = poly::multiply(c, b);
  }
  return CharPoly(std::move(c));
}

bool has_root_multiset(const CharPoly& poly, const SpectrumVector& lambda, double tol) {
  if (poly.degree() != lambda.order()) return false;
  for (const auto& e : lambda.entries()) {
    CharPoly d = poly;
    for (int i = 0; i < e.multiplicity; ++i) {
      // Scale by Σ|c_j||λ|^j so the test is relative to the cancellation in the sum.
      double scale = 0.0, power = 1.0;
      for (double c : d.coefficients()) {
        scale += std::abs(c) * power;
        power *= std::abs(e.frequency);
      }
      if (std::abs(d(e.frequency)) > tol * std::max(scale, 1.0)) return false;
      d = d.derivative();
    }
    if (std::abs(d(e.frequency)) <= tol) return false;  // multiplicity would be larger
  }
  return true;
}

std::complex<double> r_poly(const SpectrumVector& lambda, std::complex<double> z) {
  std::complex<double> v = 1.0;
  for (double l : lambda.expanded()) v *= std::exp(l) - z;
  return v;
}

std::complex<double> s_poly(const SpectrumVector& lambda, std::complex<double> z) {
  std::complex<double> v = 1.0;
  for (double l : lambda.expanded()) v *= std::exp(-l) - z;
  return v;
}

}  // namespace polyshannon
