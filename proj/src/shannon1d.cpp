#include "polyshannon/shannon1d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polyshannon/binary_io.hpp"
#include "polyshannon/errors.hpp"
#include "polyshannon/fft.hpp"

namespace polyshannon {

using cd = std::complex<double>;

int FrequencyGrid::period_samples() const {
  return std::max(1, static_cast<int>(std::lround(2.0 * std::numbers::pi / step())));
}

void FrequencyGrid::validate() const {
  if (samples < 1024 || (samples & (samples - 1)) != 0) {
    throw std::invalid_argument("FrequencyGrid: sample count must be a power of two >= 1024, got " +
                                std::to_string(samples));
  }
  if (!(cutoff >= 8.0 * std::numbers::pi)) {
    throw std::invalid_argument("FrequencyGrid: cutoff must be at least 8*pi, got " + std::to_string(cutoff));
  }
}

std::complex<double> phi_star(const TBSpline& q, double xi) {
  cd v = 0.0;
  for (int j = 1; j < q.order(); ++j) v += q.integer_value(j) * std::exp(cd(0.0, -xi * j));
  return v;
}

std::complex<double> phi_star(const SpectrumVector& lambda, double xi) { return phi_star(TBSpline(lambda), xi); }

bool is_guaranteed_samplable(const SpectrumVector& lambda) {
  const int n_order = lambda.order();
  if (n_order % 2 != 0) return false;
  if (lambda.is_symmetric()) return true;
  const int p = n_order / 2;
  const int bound = static_cast<int>(std::ceil(lambda.max_abs())) + 2 * p + 4;
  for (int n = 3; n <= bound; n += 2)
    for (int k = 0; k <= bound; ++k)
      if (build_lambda_radial(k, n, p) == lambda) return true;
  return false;
}

NonzeroMargin nonzero_margin(const TBSpline& q, int points) {
  NonzeroMargin out;
  out.margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double xi = 2.0 * std::numbers::pi * i / points;
    const double m = std::abs(phi_star(q, xi));
    if (m < out.margin) {
      out.margin = m;
      out.argmin = xi;
    }
  }
  out.relative = out.margin / q.scale();
  out.guaranteed = is_guaranteed_samplable(q.spectrum());
  if (out.guaranteed && !(out.relative >= 1e-9)) {
    std::ostringstream os;
    os << "nonzero_margin: relative margin " << out.relative << " at xi = " << out.argmin << " for "
       << q.spectrum().describe() << ", which must satisfy the non-zero condition; numerical failure";
    throw ViolationError(os.str());
  }
  return out;
}

NonzeroMargin nonzero_margin(const SpectrumVector& lambda, int points) { return nonzero_margin(TBSpline(lambda), points); }

std::complex<double> s0_hat(const TBSpline& q, double xi) { return q.fourier(xi) / phi_star(q, xi); }

std::complex<double> s0_hat(const SpectrumVector& lambda, double xi) { return s0_hat(TBSpline(lambda), xi); }

// ---------------------------------------------------------------- KernelTable

KernelTable::KernelTable(SpectrumVector lambda, KernelMetadata meta, int first_index, std::vector<double> coefficients,
                         std::vector<double> values)
    : lambda_(std::move(lambda)),
      meta_(meta),
      first_(first_index),
      coefficients_(std::move(coefficients)),
      values_(std::move(values)),
      basis_(std::make_shared<const TBSpline>(lambda_)) {}

double KernelTable::operator()(double t) const {
  if (!(std::abs(t) <= meta_.half_width)) return 0.0;
  const int n = order();
  const long lo = static_cast<long>(std::floor(t)) - n + 1;
  const long hi = static_cast<long>(std::ceil(t)) - 1;
  double v = 0.0;
  for (long j = std::max<long>(lo, first_); j <= hi; ++j) {
    const auto idx = static_cast<std::size_t>(j - first_);
    if (idx >= coefficients_.size()) break;
    v += coefficients_[idx] * (*basis_)(t - static_cast<double>(j));
  }
  return v / meta_.scale;
}

namespace {
constexpr std::uint32_t kKernelFormatVersion = 1;
}

void KernelTable::write(std::ostream& os) const {
  bin::Writer w(os);
  w.magic("PSKT");
  w.u32(kKernelFormatVersion);
  w.u32(static_cast<std::uint32_t>(lambda_.entries().size()));
  for (const auto& e : lambda_.entries()) {
    w.f64(e.frequency);
    w.i32(e.multiplicity);
  }
  w.f64(meta_.grid.cutoff);
  w.u32(static_cast<std::uint32_t>(meta_.grid.samples));
  w.f64(meta_.half_width);
  w.f64(meta_.margin);
  w.f64(meta_.relative_margin);
  w.f64(meta_.scale);
  w.f64(meta_.tail_estimate);
  w.f64(meta_.cardinal_residual);
  w.i32(first_);
  w.f64s(coefficients_);
  w.f64s(values_);
}

KernelTable KernelTable::read(std::istream& is) {
  bin::Reader r(is);
  r.expect_magic("PSKT");
  const std::size_t version_at = r.offset();
  if (r.u32() != kKernelFormatVersion) throw ParseError("unsupported kernel format version", version_at);
  const std::size_t count_at = r.offset();
  const std::uint32_t count = r.u32();
  if (count == 0 || count > 4096) throw ParseError("bad spectrum entry count", count_at);
  std::vector<SpectrumVector::Entry> entries;
  for (std::uint32_t i = 0; i < count; ++i) {
    const double f = r.f64();
    const std::size_t mult_at = r.offset();
    const int mult = r.i32();
    if (mult < 1 || !std::isfinite(f)) throw ParseError("bad spectrum entry", mult_at);
    entries.push_back({f, mult});
  }
  KernelMetadata meta;
  meta.grid.cutoff = r.f64();
  meta.grid.samples = static_cast<int>(r.u32());
  meta.half_width = r.f64();
  meta.margin = r.f64();
  meta.relative_margin = r.f64();
  meta.scale = r.f64();
  meta.tail_estimate = r.f64();
  meta.cardinal_residual = r.f64();
  const int first = r.i32();
  std::vector<double> coefficients = r.f64s();
  std::vector<double> values = r.f64s();
  if (!(meta.scale > 0.0) || !(meta.half_width > 0.0)) r.fail("bad kernel metadata");
  return KernelTable(SpectrumVector::from_entries(std::move(entries)), meta, first, std::move(coefficients),
                     std::move(values));
}

void KernelTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(os);
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

KernelTable KernelTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read(is);
}

// ---------------------------------------------------------------- synthesis

namespace {

void check_synthesizable(const SpectrumVector& lambda, const TBSpline& q, const NonzeroMargin& margin) {
  if (lambda.order() % 2 != 0) {
    throw RestrictionError("kernel synthesis needs an even order N = 2p; " + lambda.describe() + " has N = " +
                           std::to_string(lambda.order()));
  }
  if (!q.trusted()) {
    std::ostringstream os;
    os << "kernel synthesis: TB-spline expansion for " << lambda.describe() << " cancels by " << q.cancellation();
    throw AccuracyError(os.str());
  }
  if (!(margin.relative >= 1e-9)) {
    std::ostringstream os;
    os << "kernel synthesis: phi* vanishes (relative margin " << margin.relative << " at xi = " << margin.argmin
       << ") for " << lambda.describe() << "; this vector is not samplable";
    throw NotSamplableError(os.str());
  }
}

}  // namespace

KernelTable synthesize_kernel(const SpectrumVector& lambda, const FrequencyGrid& grid, double half_width,
                              SynthesisOptions options) {
  if (lambda.order() % 2 != 0) {
    throw RestrictionError("kernel synthesis needs an even order N = 2p; " + lambda.describe() + " has N = " +
                           std::to_string(lambda.order()));
  }
  grid.validate();
  if (!(half_width >= 1.0)) throw std::invalid_argument("synthesize_kernel: half-width must be >= 1");
  TBSpline q(lambda);
  const NonzeroMargin margin = nonzero_margin(q);
  check_synthesizable(lambda, q, margin);

  const int n = lambda.order();
  const double scale = q.scale();
  const int period = grid.period_samples();
  fft::cvec inverse(static_cast<std::size_t>(period));
  for (int m = 0; m < period; ++m) inverse[m] = scale / phi_star(q, 2.0 * std::numbers::pi * m / period);
  const fft::cvec c = fft::backward(std::move(inverse));

  const int t_int = static_cast<int>(std::ceil(half_width));
  const int first = -t_int - n;
  std::vector<double> coefficients(static_cast<std::size_t>(2 * t_int + n + 1));
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const long j = first + static_cast<long>(i);
    const long idx = ((j % period) + period) % period;
    coefficients[i] = c[static_cast<std::size_t>(idx)].real() / period;
  }

  KernelMetadata meta;
  meta.grid = grid;
  meta.half_width = half_width;
  meta.margin = margin.margin;
  meta.relative_margin = margin.relative;
  meta.scale = scale;
  double left_edge = 0.0, right_edge = 0.0;
  for (int j = t_int - n; j <= t_int; ++j) right_edge += std::abs(coefficients[static_cast<std::size_t>(j - first)]);
  for (int j = -t_int - n; j <= -t_int; ++j) left_edge += std::abs(coefficients[static_cast<std::size_t>(j - first)]);
  meta.tail_estimate = std::max(left_edge, right_edge) * q.peak() / scale;

  KernelTable provisional(lambda, meta, first, coefficients, {});
  double residual = 0.0;
  for (int j = -static_cast<int>(std::floor(half_width)); j <= static_cast<int>(std::floor(half_width)); ++j)
    residual = std::max(residual, std::abs(provisional(j) - (j == 0 ? 1.0 : 0.0)));
  meta.cardinal_residual = residual;
  if (options.enforce_cardinal && !(residual <= 1e-5)) {
    std::ostringstream os;
    os << "kernel synthesis: cardinal residual " << residual << " for " << lambda.describe() << " with cutoff "
       << grid.cutoff << ", samples " << grid.samples << " (" << period << " samples of 1/phi* per period)";
    throw SynthesisError(os.str());
  }

  const double h = grid.time_step();
  const auto count = static_cast<std::size_t>(std::floor(2.0 * half_width / h + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = provisional(-half_width + static_cast<double>(i) * h);
  return KernelTable(lambda, meta, first, std::move(coefficients), std::move(values));
}

std::vector<double> synthesize_kernel_spectral(const SpectrumVector& lambda, const FrequencyGrid& grid,
                                               double half_width) {
  grid.validate();
  TBSpline q(lambda);
  check_synthesizable(lambda, q, nonzero_margin(q));
  const int m_total = grid.samples;
  const double dxi = grid.step();
  fft::cvec spectrum(static_cast<std::size_t>(m_total));
  for (int i = 0; i < m_total; ++i) {
    const int m = i < m_total / 2 ? i : i - m_total;
    spectrum[i] = s0_hat(q, m * dxi);
  }
  const fft::cvec dense = fft::backward(std::move(spectrum));
  const double h = grid.time_step();
  const auto half = static_cast<long>(std::floor(half_width / h + 1e-9));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long i = -half; i <= half; ++i) {
    const long idx = ((i % m_total) + m_total) % m_total;
    values.push_back(dense[static_cast<std::size_t>(idx)].real() * dxi / (2.0 * std::numbers::pi));
  }
  return values;
}

Reconstruction reconstruct_1d(const KernelTable& kernel, const std::map<int, double>& samples,
                              const std::vector<double>& points) {
  Reconstruction out;
  out.values.assign(points.size(), 0.0);
  if (samples.empty()) return out;
  const double t_half = kernel.half_width();
  const int j_lo = samples.begin()->first, j_hi = samples.rbegin()->first;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double t = points[i];
    if (t < j_lo - t_half || t > j_hi + t_half) {
      std::ostringstream os;
      os << "reconstruct_1d: point " << t << " lies beyond the kernel half-width " << t_half << " from the samples ["
         << j_lo << ", " << j_hi << "]";
      throw ExtrapolationError(os.str());
    }
    double v = 0.0, dropped = 0.0;
    for (auto it = samples.lower_bound(static_cast<int>(std::ceil(t - t_half)));
         it != samples.end() && it->first <= t + t_half; ++it) {
      if (it->second != 0.0) v += it->second * kernel(t - it->first);
    }
    for (const auto& [j, f] : samples)
      if (std::abs(t - j) > t_half) dropped += std::abs(f);
    out.values[i] = v;
    out.tail_bound = std::max(out.tail_bound, dropped * kernel.metadata().tail_estimate);
  }
  return out;
}

}  // namespace polyshannon
