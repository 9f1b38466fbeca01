#include "polyshannon/dual.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polyshannon/fft.hpp"
#include "polyshannon/quadrature.hpp"

namespace polyshannon {

using cd = std::complex<double>;

std::vector<double> gram_autocorrelation(const TBSpline& q) {
  const int n = q.order();
  // Each integrand is smooth on unit segments; 24 Gauss nodes per segment are exact to
  // rounding for the frequencies in use.
  static const GaussRule rule = gauss_legendre(24);
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int seg = j; seg < n; ++seg) {
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = seg + 0.5 * (rule.nodes[i] + 1.0);
        sum += 0.5 * rule.weights[i] * q(t) * q(t - j);
      }
    }
    a[j] = sum;
  }
  return a;
}

double gram_symbol(const TBSpline& q, double xi) {
  const std::vector<double> a = gram_autocorrelation(q);
  double g = a[0];
  for (std::size_t j = 1; j < a.size(); ++j) g += 2.0 * a[j] * std::cos(xi * static_cast<double>(j));
  return g;
}

double gram_symbol_symmetrized(const TBSpline& q_symmetrized, double sum_lambda, double xi) {
  const int n2 = q_symmetrized.order();
  const int n = n2 / 2;
  cd v = 0.0;
  for (int i = 1; i < n2; ++i) v += q_symmetrized.integer_value(i) * std::exp(cd(0.0, xi * (n - i)));
  return std::exp(-sum_lambda) * v.real();
}

RieszBounds riesz_bounds(const TBSpline& q, int points) {
  const std::vector<double> a = gram_autocorrelation(q);
  RieszBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < points; ++i) {
    const double xi = 2.0 * std::numbers::pi * i / points;
    double g = a[0];
    for (std::size_t j = 1; j < a.size(); ++j) g += 2.0 * a[j] * std::cos(xi * static_cast<double>(j));
    b.lower = std::min(b.lower, g);
    b.upper = std::max(b.upper, g);
  }
  return b;
}

std::complex<double> dual_phi_hat(const SpectrumVector& lambda, double xi) {
  const TBSpline q_sym(lambda.symmetrized());
  const int n = lambda.order();
  cd phi = 0.0;
  const cd z = std::exp(cd(0.0, xi));
  for (int i = 1; i < 2 * n; ++i) phi += std::pow(z, n - i) * q_sym.integer_value(i);
  return std::exp(lambda.sum()) * qn_hat(lambda, xi) / phi;
}

DualScaling::DualScaling(const SpectrumVector& lambda, int half_window, int period_samples)
    : q_(std::make_shared<const TBSpline>(lambda)), half_window_(half_window) {
  const std::vector<double> a = gram_autocorrelation(*q_);
  fft::cvec inverse(static_cast<std::size_t>(period_samples));
  for (int m = 0; m < period_samples; ++m) {
    const double xi = 2.0 * std::numbers::pi * m / period_samples;
    double g = a[0];
    for (std::size_t j = 1; j < a.size(); ++j) g += 2.0 * a[j] * std::cos(xi * static_cast<double>(j));
    inverse[m] = 1.0 / g;
  }
  const fft::cvec c = fft::backward(std::move(inverse));
  d_.resize(static_cast<std::size_t>(2 * half_window + 1));
  for (int j = -half_window; j <= half_window; ++j) {
    const int idx = ((j % period_samples) + period_samples) % period_samples;
    d_[static_cast<std::size_t>(j + half_window)] = c[static_cast<std::size_t>(idx)].real() / period_samples;
  }
}

double DualScaling::operator()(double t) const {
  const int n = q_->order();
  const long lo = std::max<long>(static_cast<long>(std::floor(t)) - n + 1, -half_window_);
  const long hi = std::min<long>(static_cast<long>(std::ceil(t)) - 1, half_window_);
  double v = 0.0;
  for (long j = lo; j <= hi; ++j) v += d_[static_cast<std::size_t>(j + half_window_)] * (*q_)(t - static_cast<double>(j));
  return v;
}

double DualScaling::q_kernel(double x, double y, int j_max) const {
  const int n = q_->order();
  const long lo = std::max<long>(static_cast<long>(std::floor(y)) - n + 1, -j_max);
  const long hi = std::min<long>(static_cast<long>(std::ceil(y)) - 1, j_max);
  double v = 0.0;
  for (long j = lo; j <= hi; ++j) {
    const double jj = static_cast<double>(j);
    v += (*this)(x - jj) * (*q_)(y - jj);
  }
  return v;
}

double DualScaling::coefficient_tail() const {
  double m = 0.0;
  for (int i = 0; i < 5; ++i) {
    m = std::max(m, std::abs(d_[static_cast<std::size_t>(i)]));
    m = std::max(m, std::abs(d_[d_.size() - 1 - static_cast<std::size_t>(i)]));
  }
  return m;
}

}  // namespace polyshannon
