#include "polyshannon/strip.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "polyshannon/binary_io.hpp"
#include "polyshannon/errors.hpp"
#include "polyshannon/fft.hpp"
#include "polyshannon/parallel.hpp"
#include "polyshannon/spherical.hpp"

namespace polyshannon {

using cd = std::complex<double>;

// ---------------------------------------------------------------- TorusModeSet

TorusModeSet::TorusModeSet(int dimension, int max_norm) : dim_(dimension), max_norm_(max_norm) {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("TorusModeSet: torus dimension must be 1..3");
  if (max_norm < 0) throw std::invalid_argument("TorusModeSet: max norm must be >= 0");
  Mode kappa(static_cast<std::size_t>(dimension), -max_norm);
  const long bound = static_cast<long>(max_norm) * max_norm;
  while (true) {
    if (norm_squared(kappa) <= bound) {
      index_[kappa] = modes_.size();
      modes_.push_back(kappa);
    }
    int i = dimension - 1;
    while (i >= 0 && kappa[i] == max_norm) kappa[i--] = -max_norm;
    if (i < 0) break;
    ++kappa[i];
  }
}

long TorusModeSet::index_of(const Mode& kappa) const {
  const auto it = index_.find(kappa);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

long TorusModeSet::norm_squared(const Mode& kappa) {
  long s = 0;
  for (int c : kappa) s += static_cast<long>(c) * c;
  return s;
}

int TorusModeSet::grid_size() const {
  int g = 1;
  while (g < 2 * max_norm_ + 2) g *= 2;
  return g;
}

// ---------------------------------------------------------------- StripField

StripField::StripField(int dimension, int p, int max_norm, int j_min, int j_max, std::string generator)
    : modes_(std::make_shared<const TorusModeSet>(dimension, max_norm)),
      p_(p),
      j_min_(j_min),
      j_max_(j_max),
      generator_(std::move(generator)) {
  if (p < 1 || j_max < j_min) throw std::invalid_argument("StripField: bad parameters");
  data_.assign(modes_->size() * static_cast<std::size_t>(planes()), cd(0.0, 0.0));
}

std::complex<double>& StripField::sample(std::size_t mode, int j) {
  return data_[mode * static_cast<std::size_t>(planes()) + static_cast<std::size_t>(j - j_min_)];
}

std::complex<double> StripField::sample(std::size_t mode, int j) const {
  return data_[mode * static_cast<std::size_t>(planes()) + static_cast<std::size_t>(j - j_min_)];
}

double StripField::conjugate_asymmetry() const {
  double worst = 0.0;
  for (std::size_t m = 0; m < modes_->size(); ++m) {
    Mode neg = (*modes_)[m];
    for (int& c : neg) c = -c;
    const auto mi = static_cast<std::size_t>(modes_->index_of(neg));
    for (int j = j_min_; j <= j_max_; ++j) worst = std::max(worst, std::abs(sample(mi, j) - std::conj(sample(m, j))));
  }
  return worst;
}

bool StripField::operator==(const StripField& other) const {
  return dimension() == other.dimension() && max_norm() == other.max_norm() && p_ == other.p_ &&
         j_min_ == other.j_min_ && j_max_ == other.j_max_ && generator_ == other.generator_ && data_ == other.data_;
}

void StripField::write_text(std::ostream& os) const {
  os << "format strip-field 1\n";
  os << "d " << dimension() << "\np " << p_ << "\nK " << max_norm() << "\nj_range " << j_min_ << ' ' << j_max_ << '\n';
  os << "generator " << (generator_.empty() ? "-" : generator_) << '\n';
  os << std::setprecision(17);
  for (std::size_t m = 0; m < modes_->size(); ++m) {
    for (std::size_t i = 0; i < (*modes_)[m].size(); ++i) os << (i ? " " : "") << (*modes_)[m][i];
    for (int j = j_min_; j <= j_max_; ++j) os << ' ' << sample(m, j).real() << ' ' << sample(m, j).imag();
    os << '\n';
  }
}

void StripField::write_binary(std::ostream& os) const {
  bin::Writer w(os);
  w.magic("PSSF");
  w.u32(1);
  w.i32(dimension());
  w.i32(p_);
  w.i32(max_norm());
  w.i32(j_min_);
  w.i32(j_max_);
  w.str(generator_);
  w.u64(data_.size());
  for (const cd& v : data_) {
    w.f64(v.real());
    w.f64(v.imag());
  }
}

namespace {

// Whitespace tokenizer with byte offsets for error messages.
struct Tokens {
  std::string text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  std::string next() {
    skip();
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ParseError("unexpected end of input", start);
    return text.substr(start, pos - start);
  }
  void expect(const std::string& w) {
    skip();
    const std::size_t at = pos;
    if (next() != w) throw ParseError("expected '" + w + "'", at);
  }
  long integer() {
    skip();
    const std::size_t at = pos;
    const std::string w = next();
    try {
      std::size_t used = 0;
      const long v = std::stol(w, &used);
      if (used == w.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("expected an integer, got '" + w + "'", at);
  }
  double real() {
    skip();
    const std::size_t at = pos;
    const std::string w = next();
    try {
      std::size_t used = 0;
      const double v = std::stod(w, &used);
      if (used == w.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("expected a number, got '" + w + "'", at);
  }
  std::string line() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] != '\n') ++pos;
    return text.substr(start, pos - start);
  }
};

}  // namespace

StripField StripField::read(std::istream& is) {
  std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (content.size() >= 4 && content.compare(0, 4, "PSSF") == 0) {
    std::istringstream bis(content);
    bin::Reader r(bis);
    r.expect_magic("PSSF");
    const std::size_t at = r.offset();
    if (r.u32() != 1) throw ParseError("unsupported strip field version", at);
    const std::size_t header_at = r.offset();
    const int d = r.i32(), p = r.i32(), k = r.i32(), j0 = r.i32(), j1 = r.i32();
    if (d < 1 || d > 3 || p < 1 || k < 0 || k > 64 || j1 < j0 || j1 - j0 > 1 << 16)
      throw ParseError("bad strip field header", header_at);
    StripField f(d, p, k, j0, j1, r.str());
    const std::size_t count_at = r.offset();
    if (r.u64() != f.data_.size()) throw ParseError("sample count does not match header", count_at);
    for (cd& v : f.data_) {
      const double re = r.f64();
      v = cd(re, r.f64());
    }
    return f;
  }
  Tokens t{std::move(content)};
  t.expect("format");
  t.expect("strip-field");
  {
    const std::size_t at = (t.skip(), t.pos);
    if (t.integer() != 1) throw ParseError("unsupported strip field version", at);
  }
  t.expect("d");
  const std::size_t d_at = (t.skip(), t.pos);
  const long d = t.integer();
  t.expect("p");
  const std::size_t p_at = (t.skip(), t.pos);
  const long p = t.integer();
  t.expect("K");
  const std::size_t k_at = (t.skip(), t.pos);
  const long k = t.integer();
  t.expect("j_range");
  const std::size_t j_at = (t.skip(), t.pos);
  const long j0 = t.integer(), j1 = t.integer();
  if (d < 1 || d > 3) throw ParseError("torus dimension must be 1..3", d_at);
  if (p < 1 || p > 64) throw ParseError("p out of range", p_at);
  if (k < 0 || k > 64) throw ParseError("K out of range", k_at);
  if (j1 < j0 || j1 - j0 > 1 << 16) throw ParseError("bad j range", j_at);
  t.expect("generator");
  std::string gen = t.line();
  if (gen == "-") gen.clear();
  StripField f(static_cast<int>(d), static_cast<int>(p), static_cast<int>(k), static_cast<int>(j0),
               static_cast<int>(j1), std::move(gen));
  for (std::size_t m = 0; m < f.modes_->size(); ++m) {
    const std::size_t at = (t.skip(), t.pos);
    Mode kappa(static_cast<std::size_t>(d));
    for (int& c : kappa) c = static_cast<int>(t.integer());
    if (kappa != (*f.modes_)[m]) throw ParseError("mode rows must be listed in lexicographic order", at);
    for (int j = f.j_min_; j <= f.j_max_; ++j) {
      const double re = t.real();
      f.sample(m, j) = cd(re, t.real());
    }
  }
  t.skip();
  if (t.pos < t.text.size()) throw ParseError("trailing content after last mode row", t.pos);
  return f;
}

void StripField::save(const std::filesystem::path& path, bool binary) const {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  binary ? write_binary(os) : write_text(os);
}

StripField StripField::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read(is);
}

// ---------------------------------------------------------------- kernels

KernelTable strip_kernel(double k, int p, const FrequencyGrid& grid, double half_width) {
  return synthesize_kernel(build_lambda_strip(k, p), grid, half_width);
}

std::shared_ptr<const KernelTable> StripKernelCache::get(long norm_squared) {
  {
    std::lock_guard lock(mutex_);
    const auto it = kernels_.find(norm_squared);
    if (it != kernels_.end()) return it->second;
  }
  // Built outside the lock; a concurrent duplicate build yields an identical table.
  auto kernel = std::make_shared<const KernelTable>(
      strip_kernel(std::sqrt(static_cast<double>(norm_squared)), p_, grid_, half_width_));
  std::lock_guard lock(mutex_);
  return kernels_.emplace(norm_squared, std::move(kernel)).first->second;
}

std::size_t StripKernelCache::size() const {
  std::lock_guard lock(mutex_);
  return kernels_.size();
}

void StripKernelCache::warm(const TorusModeSet& modes, int threads) {
  std::vector<long> norms;
  for (const Mode& m : modes.modes()) norms.push_back(TorusModeSet::norm_squared(m));
  std::sort(norms.begin(), norms.end());
  norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
  parallel_for(static_cast<int>(norms.size()), threads, [&](int i) { get(norms[static_cast<std::size_t>(i)]); });
}

// ---------------------------------------------------------------- torus transforms

std::vector<std::complex<double>> analyze_torus(const TorusModeSet& modes, const std::vector<double>& values) {
  const int g = modes.grid_size();
  const int d = modes.dimension();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(g);
  if (values.size() != total) throw std::invalid_argument("analyze_torus: expected grid_size^d values");
  fft::cvec data(values.begin(), values.end());
  const fft::cvec spectrum = fft::forward_nd(std::move(data), std::vector<int>(static_cast<std::size_t>(d), g));
  std::vector<cd> out(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    std::size_t idx = 0;
    for (int c : modes[m]) idx = idx * static_cast<std::size_t>(g) + static_cast<std::size_t>(((c % g) + g) % g);
    out[m] = spectrum[idx] / static_cast<double>(total);
  }
  return out;
}

std::complex<double> synthesize_torus(const TorusModeSet& modes, const std::complex<double>* coefficients,
                                      const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != modes.dimension()) throw std::invalid_argument("synthesize_torus: bad y dimension");
  cd s = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    double phase = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) phase += modes[m][i] * y[i];
    s += coefficients[m] * std::exp(cd(0.0, phase));
  }
  return s;
}

// ---------------------------------------------------------------- reconstruction

StripReconstruction reconstruct_strip(StripKernelCache& cache, const StripField& field,
                                      const std::vector<StripQuery>& queries, int threads) {
  if (field.p() != cache.p()) throw std::invalid_argument("reconstruct_strip: field p does not match the kernel cache");
  const TorusModeSet& modes = field.modes();
  cache.warm(modes, threads);
  std::vector<std::shared_ptr<const KernelTable>> kernels;
  for (const Mode& m : modes.modes()) kernels.push_back(cache.get(TorusModeSet::norm_squared(m)));

  StripReconstruction out;
  out.values.assign(queries.size(), cd(0.0, 0.0));
  std::vector<double> sensitivity(queries.size(), 0.0);
  parallel_for(static_cast<int>(queries.size()), threads, [&](int qi) {
    const StripQuery& q = queries[static_cast<std::size_t>(qi)];
    std::vector<cd> profile(modes.size());
    std::map<long, std::vector<double>> weights;  // per |κ|²
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const long key = TorusModeSet::norm_squared(modes[m]);
      auto it = weights.find(key);
      if (it == weights.end()) {
        std::vector<double> w(static_cast<std::size_t>(field.planes()));
        for (int j = field.j_min(); j <= field.j_max(); ++j) w[static_cast<std::size_t>(j - field.j_min())] = (*kernels[m])(q.t - j);
        it = weights.emplace(key, std::move(w)).first;
      }
      cd s = 0.0;
      for (int j = field.j_min(); j <= field.j_max(); ++j) s += it->second[static_cast<std::size_t>(j - field.j_min())] * field.sample(m, j);
      profile[m] = s;
    }
    out.values[static_cast<std::size_t>(qi)] = synthesize_torus(modes, profile.data(), q.y);
    if (q.t < field.j_min() + 2 || q.t > field.j_max() - 2) {
      double worst = 0.0;
      for (const auto& [key, unused] : weights) {
        const auto kernel = cache.get(key);
        const int reach = static_cast<int>(std::ceil(kernel->half_width()));
        double missing = 0.0;
        for (int j = static_cast<int>(std::floor(q.t)) - reach; j <= static_cast<int>(std::ceil(q.t)) + reach; ++j)
          if (j < field.j_min() || j > field.j_max()) missing += std::abs((*kernel)(q.t - j));
        worst = std::max(worst, missing);
      }
      sensitivity[static_cast<std::size_t>(qi)] = worst;
    }
  });
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double t = queries[i].t;
    if (t < field.j_min() + 2 || t > field.j_max() - 2) {
      std::ostringstream os;
      os << "query " << i << ": t = " << t << " is within 2 of the plane range [" << field.j_min() << ", "
         << field.j_max() << "]; missing-plane kernel weight " << sensitivity[i];
      out.warnings.push_back(os.str());
      out.tail_bound = std::max(out.tail_bound, sensitivity[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- synthetic field

SyntheticStripField::SyntheticStripField(int dimension, int p, int max_norm, int j_min, int j_max, std::uint64_t seed)
    : modes_(dimension, max_norm), p_(p), j_min_(j_min), j_max_(j_max), seed_(seed), first_shift_(j_min - 1) {
  const int shifts = j_max - 2 * p + 1 - first_shift_ + 1;
  if (shifts < 1) throw std::invalid_argument("SyntheticStripField: plane range too short for order 2p");
  for (const Mode& m : modes_.modes()) {
    const long key = TorusModeSet::norm_squared(m);
    if (!splines_.count(key))
      splines_[key] = std::make_shared<const TBSpline>(build_lambda_strip(std::sqrt(static_cast<double>(key)), p));
  }
  std::mt19937_64 rng(seed);
  coefficients_.resize(modes_.size());
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    Mode neg = modes_[m];
    for (int& c : neg) c = -c;
    const auto partner = static_cast<std::size_t>(modes_.index_of(neg));
    auto& row = coefficients_[m];
    row.resize(static_cast<std::size_t>(shifts));
    if (partner < m) {
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = std::conj(coefficients_[partner][i]);
    } else if (partner == m) {
      for (cd& c : row) c = cd(2.0 * unit_uniform(rng()) - 1.0, 0.0);
    } else {
      for (cd& c : row) {
        const double re = 2.0 * unit_uniform(rng()) - 1.0;
        c = cd(re, 2.0 * unit_uniform(rng()) - 1.0);
      }
    }
  }
}

std::complex<double> SyntheticStripField::profile(std::size_t mode, double t) const {
  const TBSpline& q = *splines_.at(TorusModeSet::norm_squared(modes_[mode]));
  const auto& row = coefficients_[mode];
  cd s = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * q(t - (first_shift_ + static_cast<double>(i)));
  return s / q.scale();
}

double SyntheticStripField::operator()(double t, const std::vector<double>& y) const {
  std::vector<cd> coeffs(modes_.size());
  for (std::size_t m = 0; m < modes_.size(); ++m) coeffs[m] = profile(m, t);
  return synthesize_torus(modes_, coeffs.data(), y).real();
}

StripField SyntheticStripField::sample() const {
  std::ostringstream gen;
  gen << "synthetic-strip seed=" << seed_;
  StripField f(modes_.dimension(), p_, modes_.max_norm(), j_min_, j_max_, gen.str());
  for (std::size_t m = 0; m < modes_.size(); ++m)
    for (int j = j_min_; j <= j_max_; ++j) f.sample(m, j) = profile(m, j);
  return f;
}

std::vector<double> SyntheticStripField::plane_values(double t) const {
  const int g = modes_.grid_size();
  const int d = modes_.dimension();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(g);
  std::vector<cd> coeffs(modes_.size());
  for (std::size_t m = 0; m < modes_.size(); ++m) coeffs[m] = profile(m, t);
  std::vector<double> out(total);
  std::vector<double> y(static_cast<std::size_t>(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int i = d - 1; i >= 0; --i) {
      y[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * static_cast<double>(rem % g) / g;
      rem /= g;
    }
    out[idx] = synthesize_torus(modes_, coeffs.data(), y).real();
  }
  return out;
}

}  // namespace polyshannon
