#include "polyshannon/tb_spline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polyshannon/errors.hpp"
#include "polyshannon/fft.hpp"
#include "polyshannon/polynomial.hpp"
#include "polyshannon/quadrature.hpp"

namespace polyshannon {

using cd = std::complex<double>;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

std::vector<double> shift_polynomial(const SpectrumVector& lambda) {
  std::vector<double> beta{1.0};
  for (double l : lambda.expanded()) {
    const double factor[2] = {std::exp(-l), -1.0};
    beta = poly::multiply(beta, factor);
  }
  return beta;
}

// Σ_s c_s t^s e^{λt}
double term_value(const GreenExpansion::Term& term, double t) {
  return poly::horner(std::span<const double>(term.coefficients), t) * std::exp(term.frequency * t);
}

}  // namespace

// ---------------------------------------------------------------- GreenExpansion

GreenExpansion::GreenExpansion(const SpectrumVector& lambda) {
  const auto& entries = lambda.entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].frequency - entries[i - 1].frequency < 1e-8) {
      std::ostringstream os;
      os << "green_expansion: frequencies " << entries[i - 1].frequency << " and " << entries[i].frequency
         << " are distinct but closer than 1e-8; merge them into one entry with multiplicity";
      throw ConditioningError(os.str());
    }
  }
  for (const auto& e : entries) {
    const int mu = e.multiplicity;
    // Taylor series in u of Π_{λ'≠λ} (λ − λ' + u)^{−μ'} up to u^{μ−1}.
    std::vector<double> series(static_cast<std::size_t>(mu), 0.0);
    series[0] = 1.0;
    for (const auto& other : entries) {
      if (other.frequency == e.frequency) continue;
      const double d = e.frequency - other.frequency;
      std::vector<double> factor(static_cast<std::size_t>(mu));
      double b = 1.0;  // binom(−μ', r)
      for (int r = 0; r < mu; ++r) {
        factor[r] = std::pow(d, -other.multiplicity - r) * b;
        b = b * (-other.multiplicity - r) / (r + 1);
      }
      series = poly::multiply(series, factor);
      series.resize(static_cast<std::size_t>(mu));
    }
    Term term{e.frequency, std::vector<double>(static_cast<std::size_t>(mu))};
    for (int s = 0; s < mu; ++s) term.coefficients[s] = series[mu - 1 - s] / factorial(s);
    terms_.push_back(std::move(term));
  }
}

double GreenExpansion::causal(double t) const {
  if (t < 0.0) return 0.0;
  double v = 0.0;
  for (const auto& term : terms_) v += term_value(term, t);
  return v;
}

double GreenExpansion::stable(double t) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    if (term.frequency > 0.0) {
      if (t < 0.0) v -= term_value(term, t);
    } else if (t >= 0.0) {
      v += term_value(term, t);
    }
  }
  return v;
}

double GreenExpansion::derivative_at_zero(int m) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    for (int s = 0; s < static_cast<int>(term.coefficients.size()) && s <= m; ++s) {
      // d^m/dt^m [t^s e^{λt}] at 0 = C(m,s) s! λ^{m−s}
      v += term.coefficients[s] * binomial(m, s) * factorial(s) * std::pow(term.frequency, m - s);
    }
  }
  return v;
}

GreenExpansion green_expansion(const SpectrumVector& lambda) { return GreenExpansion(lambda); }

// ---------------------------------------------------------------- ExpPolynomial

double ExpPolynomial::value(double tau) const {
  double v = 0.0;
  for (const auto& term : terms_)
    v += poly::horner(std::span<const double>(term.poly), tau) * std::exp(term.frequency * tau);
  return v;
}

double ExpPolynomial::derivative(double tau, int order) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    // (P e^{λτ})' = (P' + λP) e^{λτ}
    std::vector<double> p = term.poly;
    for (int i = 0; i < order; ++i) {
      std::vector<double> dp = poly::derivative(p);
      dp.resize(p.size(), 0.0);
      for (std::size_t s = 0; s < p.size(); ++s) dp[s] += term.frequency * p[s];
      p = std::move(dp);
    }
    v += poly::horner(std::span<const double>(p), tau) * std::exp(term.frequency * tau);
  }
  return v;
}

// ---------------------------------------------------------------- PiecewiseExpSpline

PiecewiseExpSpline::PiecewiseExpSpline(SpectrumVector lambda, int j_min, std::vector<ExpPolynomial> segments,
                                       bool compact_support)
    : lambda_(std::move(lambda)), j_min_(j_min), segments_(std::move(segments)), compact_(compact_support) {}

double PiecewiseExpSpline::operator()(double t) const {
  if (segments_.empty()) return 0.0;
  const double f = std::floor(t);
  auto j = static_cast<long>(f);
  if (j < j_min_ || j >= j_max()) {
    if (compact_) return 0.0;
    j = std::clamp<long>(j, j_min_, j_max() - 1);
  }
  // Continuous compact splines vanish at the left end; skip the rounding of the segment sum.
  if (compact_ && t == f && j == j_min_ && lambda_.order() >= 2) return 0.0;
  return segments_[static_cast<std::size_t>(j - j_min_)].value(t - static_cast<double>(j));
}

double PiecewiseExpSpline::derivative(double t, int order, Side side) const {
  if (segments_.empty()) return 0.0;
  auto j = static_cast<long>(std::floor(t));
  if (side == Side::left && t == std::floor(t)) --j;
  if (j < j_min_ || j >= j_max()) {
    if (compact_) return 0.0;
    j = std::clamp<long>(j, j_min_, j_max() - 1);
  }
  return segments_[static_cast<std::size_t>(j - j_min_)].derivative(t - static_cast<double>(j), order);
}

// ---------------------------------------------------------------- TBSpline

TBSpline::TBSpline(SpectrumVector lambda)
    : lambda_(std::move(lambda)), green_(lambda_), beta_(shift_polynomial(lambda_)) {
  const int n = lambda_.order();

  // Segment j: Q(j + τ) = Σ_m β_m g(τ + j − m). With the stable Green function a
  // nonpositive frequency contributes for m ≤ j and a positive one (negated) for m > j,
  // so every e^{λ(j−m)} factor is at most 1.
  std::vector<ExpPolynomial> segments;
  std::vector<double> abs_bound(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    std::vector<ExpPolynomial::Term> terms;
    for (const auto& g : green_.terms()) {
      const bool anticausal = g.frequency > 0.0;
      std::vector<double> acc(g.coefficients.size(), 0.0);
      const double growth = std::max(1.0, std::exp(g.frequency));
      for (int m = 0; m <= n; ++m) {
        if (anticausal ? (m <= j) : (m > j)) continue;
        const double d = j - m;
        const double weight = (anticausal ? -1.0 : 1.0) * beta_[m] * std::exp(g.frequency * d);
        const std::vector<double> shifted = poly::taylor_shift(g.coefficients, d);
        for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += weight * shifted[s];
        for (std::size_t s = 0; s < acc.size(); ++s)
          abs_bound[j] += std::abs(weight * g.coefficients[s]) * std::pow(std::abs(d) + 1.0, s) * growth;
      }
      terms.push_back({g.frequency, std::move(acc)});
    }
    segments.emplace_back(std::move(terms));
  }
  piecewise_ = PiecewiseExpSpline(lambda_, 0, std::move(segments), true);

  integer_values_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 1; j < n; ++j) integer_values_[j] = piecewise_.segments()[j].value(0.0);
  scale_ = n >= 2 ? *std::max_element(integer_values_.begin(), integer_values_.end())
                  : piecewise_.segments()[0].value(0.0);

  constexpr int per_unit = 64;
  for (int i = 1; i < n * per_unit; ++i) peak_ = std::max(peak_, std::abs(piecewise_(double(i) / per_unit)));
  peak_ = std::max(peak_, std::abs(scale_));
  cancellation_ = *std::max_element(abs_bound.begin(), abs_bound.end()) / peak_;
}

std::complex<double> TBSpline::fourier(double xi) const { return qn_hat(lambda_, xi); }

double TBSpline::integer_value(int j) const {
  if (j <= 0 || j >= order()) return 0.0;
  return integer_values_[j];
}

std::complex<double> qn_hat(const SpectrumVector& lambda, double xi) {
  cd v = 1.0;
  for (const auto& e : lambda.entries()) {
    // (e^{−λ} − e^{−iξ})/(iξ − λ) = e^{−λ}(1 − e^{−u})/u with u = iξ − λ.
    const cd u(-e.frequency, xi);
    cd factor;
    if (std::abs(u) < 1e-4) {
      factor = std::exp(-e.frequency) * (1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0 + u * u * u * u / 120.0);
    } else {
      // 1 − e^{−u} via expm1 on both components, so small |u| keeps full relative accuracy.
      const double a = -u.real(), b = -u.imag();
      const double s = std::sin(0.5 * b);
      const cd em1(std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b));
      factor = std::exp(-e.frequency) * (-em1) / u;
    }
    for (int i = 0; i < e.multiplicity; ++i) v *= factor;
  }
  return v;
}

double qn_exact(const SpectrumVector& lambda, double t) {
  TBSpline q(lambda);
  if (!q.trusted()) {
    std::ostringstream os;
    os << "qn_exact: exact expansion for " << lambda.describe() << " cancels by a factor " << q.cancellation()
       << "; use qn_fft_tabulate";
    throw AccuracyError(os.str());
  }
  return q(t);
}

// ---------------------------------------------------------------- FFT tabulation

namespace {

std::vector<double> bernoulli_numbers(int n) {
  std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
  b[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += binomial(m + 1, k) * b[k];
    b[m] = -s / (m + 1);
  }
  return b;
}

double bernoulli_poly(int n, double x, const std::vector<double>& b) {
  double v = 0.0;
  for (int k = 0; k <= n; ++k) v += binomial(n, k) * b[k] * std::pow(x, n - k);
  return v;
}

}  // namespace

QnTable qn_fft_tabulate(const SpectrumVector& lambda, int samples_per_unit, double xi_cutoff) {
  if (samples_per_unit < 16) throw std::invalid_argument("qn_fft_tabulate: samples_per_unit must be >= 16");
  const int n = lambda.order();
  const double period = n;
  int density = samples_per_unit;
  int stride = 1;
  while (std::numbers::pi * density < xi_cutoff) {
    density *= 2;
    stride *= 2;
  }
  const std::size_t m_total = static_cast<std::size_t>(n) * density;

  const std::vector<double> beta = shift_polynomial(lambda);

  fft::cvec spectrum(m_total);
  double tail_constant = 0.0;
  const auto half = static_cast<long>(m_total / 2);
  for (std::size_t i = 0; i < m_total; ++i) {
    const long m = static_cast<long>(i) < half ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(m_total);
    const double xi = 2.0 * std::numbers::pi * m / period;
    cd value = qn_hat(lambda, xi);
    if (m != 0) {
      cd b = 0.0;
      for (int j = 0; j <= n; ++j) b += beta[j] * std::exp(cd(0.0, -xi * j));
      value -= b / std::pow(cd(0.0, xi), n);
      if (std::abs(m) > half - 8) tail_constant = std::max(tail_constant, std::abs(value) * std::pow(std::abs(xi), n + 1));
    }
    spectrum[i] = value;
  }
  const fft::cvec dense = fft::backward(std::move(spectrum));

  const std::vector<double> bnum = bernoulli_numbers(n);
  const double weight = std::pow(period, n - 1) / factorial(n);

  QnTable table;
  table.samples_per_unit = samples_per_unit;
  table.step = 1.0 / samples_per_unit;
  table.cutoff = std::numbers::pi * density;
  table.truncation_estimate = tail_constant * std::pow(table.cutoff, -n) / (std::numbers::pi * n);
  const int count = n * samples_per_unit + 1;
  table.values.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::size_t idx = (static_cast<std::size_t>(i) * stride) % m_total;
    const double t = static_cast<double>(i) / samples_per_unit;
    double v = dense[idx].real() / period;
    for (int j = 0; j <= n; ++j) {
      double x = std::fmod((t - j) / period, 1.0);
      if (x < 0.0) x += 1.0;
      v -= weight * beta[j] * bernoulli_poly(n, x, bnum);
    }
    table.values[i] = v;
  }
  return table;
}

// ---------------------------------------------------------------- Euler-Frobenius

std::complex<double> phi_big(const TBSpline& q, double x, std::complex<double> z) {
  if (z == 0.0) throw DomainError("phi_big: lambda must be nonzero");
  const int n = q.order();
  const long lo = static_cast<long>(std::floor(x - n)) + 1;
  const long hi = static_cast<long>(std::ceil(x)) - 1;
  cd v = 0.0;
  for (long j = lo; j <= hi; ++j) {
    const double arg = x - static_cast<double>(j);
    if (arg <= 0.0 || arg >= n) continue;
    v += std::pow(z, static_cast<int>(j)) * q(arg);
  }
  return v;
}

std::complex<double> phi_big(const SpectrumVector& lambda, double x, std::complex<double> z) {
  TBSpline q(lambda);
  if (!q.trusted()) throw AccuracyError("phi_big: exact TB-spline expansion not trusted for " + lambda.describe());
  return phi_big(q, x, z);
}

int EFPolynomial::degree() const {
  int d = static_cast<int>(coefficients.size()) - 1;
  while (d > 0 && coefficients[d] == 0.0) --d;
  return d;
}

std::complex<double> EFPolynomial::operator()(std::complex<double> z) const {
  return poly::horner(std::span<const double>(coefficients), z);
}

namespace {

cd ef_direct(const TBSpline& q, cd z) {
  const int n = q.order();
  const double sign = (n - 1) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::pow(z, n - 1) * std::exp(q.spectrum().sum()) * phi_big(q, 0.0, z);
}

}  // namespace

EFPolynomial ef_polynomial(const TBSpline& q) {
  const int n = q.order();
  if (n < 2) throw DomainError("ef_polynomial: order must be at least 2");
  const int nodes = n - 1;
  fft::cvec values(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) values[k] = ef_direct(q, std::polar(1.0, 2.0 * std::numbers::pi * k / nodes));
  const fft::cvec coeffs = fft::forward(std::move(values));

  EFPolynomial out;
  out.coefficients.resize(static_cast<std::size_t>(nodes));
  double scale = 0.0;
  for (int d = 0; d < nodes; ++d) {
    out.coefficients[d] = coeffs[d].real() / nodes;
    scale = std::max(scale, std::abs(out.coefficients[d]));
  }
  const cd probe = std::polar(0.7, 0.3);
  out.interpolation_residual = std::abs(out(probe) - ef_direct(q, probe)) / scale;
  if (!(out.interpolation_residual <= 1e-8)) {
    std::ostringstream os;
    os << "ef_polynomial: interpolation residual " << out.interpolation_residual << " for " << q.spectrum().describe();
    throw AccuracyError(os.str());
  }
  return out;
}

EFPolynomial ef_polynomial(const SpectrumVector& lambda) {
  TBSpline q(lambda);
  if (!q.trusted()) throw AccuracyError("ef_polynomial: exact TB-spline expansion not trusted for " + lambda.describe());
  return ef_polynomial(q);
}

EFZeros ef_zeros(const TBSpline& q) {
  const EFPolynomial pi = ef_polynomial(q);
  std::vector<double> c = pi.coefficients;
  const double scale = *std::max_element(c.begin(), c.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  for (double& v : c) v /= scale;

  EFZeros out;
  const auto raw = poly::roots(c);
  for (const cd& z : raw) {
    const double rel_imag = std::abs(z.imag()) / std::abs(z);
    out.max_imaginary = std::max(out.max_imaginary, rel_imag);
    if (!(rel_imag <= 1e-8) || !(z.real() < 0.0)) {
      std::ostringstream os;
      os.precision(12);
      os << "ef_zeros: zero " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
         << "i of the Euler-Frobenius polynomial for " << q.spectrum().describe() << " is not real negative";
      throw ViolationError(os.str());
    }
    out.zeros.push_back(z.real());
  }
  std::sort(out.zeros.begin(), out.zeros.end());
  const std::size_t count = out.zeros.size();
  if (count != static_cast<std::size_t>(q.order() - 2)) {
    throw ViolationError("ef_zeros: expected N-2 zeros for " + q.spectrum().describe());
  }

  if (q.spectrum().is_symmetric()) {
    for (std::size_t i = 0; i < count / 2; ++i) {
      const double a = out.zeros[i], b = out.zeros[count - 1 - i];
      out.pairing_residual = std::max(out.pairing_residual, std::abs(a * b - 1.0));
      const double half_log = 0.5 * (std::log(-a) - std::log(-b));
      out.zeros[i] = -std::exp(half_log);
      out.zeros[count - 1 - i] = -std::exp(-half_log);
    }
    if (count % 2 == 1) {
      const double mid = out.zeros[count / 2];
      out.pairing_residual = std::max(out.pairing_residual, std::abs(mid * mid - 1.0));
      out.zeros[count / 2] = -1.0;
    }
  }
  return out;
}

EFZeros ef_zeros(const SpectrumVector& lambda) {
  TBSpline q(lambda);
  if (!q.trusted()) throw AccuracyError("ef_zeros: exact TB-spline expansion not trusted for " + lambda.describe());
  return ef_zeros(q);
}

// ---------------------------------------------------------------- contour integral

std::complex<double> a_eval(const SpectrumVector& lambda, double x, std::complex<double> z) {
  if (z == 0.0) throw DomainError("a_eval: lambda must be nonzero");
  const double left = lambda.min_frequency() - 1.0;
  const double right = lambda.max_frequency() + 1.0;
  // Poles of 1/(e^w − z) sit at log|z| + i(arg z + 2πm).
  const double pole_re = std::log(std::abs(z));
  double h = 1.0;
  if (pole_re > left - 0.1 && pole_re < right + 0.1) {
    h = std::min(std::abs(std::arg(z)), std::numbers::pi) - 0.1;
    if (h < 0.1) {
      std::ostringstream os;
      os << "a_eval: pole of 1/(e^z - lambda) at arg " << std::arg(z)
         << " is too close to the frequencies; use ef_polynomial";
      throw DomainError(os.str());
    }
  }

  static const GaussRule rule = gauss_legendre(16);
  const auto integrand = [&](cd w) {
    cd l = 1.0;
    for (double f : lambda.expanded()) l *= w - f;
    return std::exp(x * w) / (l * (std::exp(w) - z));
  };
  const auto segment = [&](cd a, cd b) {
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / 0.1)));
    cd sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const cd pa = a + (b - a) * (double(p) / panels);
      const cd pb = a + (b - a) * (double(p + 1) / panels);
      const cd mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * integrand(mid + half * rule.nodes[i]) * half;
    }
    return sum;
  };
  const cd c1(left, -h), c2(right, -h), c3(right, h), c4(left, h);
  const cd total = segment(c1, c2) + segment(c2, c3) + segment(c3, c4) + segment(c4, c1);
  return total / cd(0.0, 2.0 * std::numbers::pi);
}

}  // namespace polyshannon
