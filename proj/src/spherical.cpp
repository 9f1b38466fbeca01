#include "polyshannon/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "polyshannon/binary_io.hpp"
#include "polyshannon/errors.hpp"
#include "polyshannon/parallel.hpp"

namespace polyshannon {

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------- PolysplineField

PolysplineField::PolysplineField(int n, int p, int max_degree, int j_min, int j_max, std::string generator)
    : n_(n), p_(p), max_degree_(max_degree), j_min_(j_min), j_max_(j_max), generator_(std::move(generator)) {
  if (n != 3) throw std::invalid_argument("PolysplineField: only n = 3 harmonics are implemented");
  if (p < 1 || max_degree < 0 || j_max < j_min) throw std::invalid_argument("PolysplineField: bad parameters");
  data_.assign(static_cast<std::size_t>(mode_count(max_degree)) * static_cast<std::size_t>(radii()), 0.0);
}

double& PolysplineField::sample(int k, int l, int j) {
  return data_[static_cast<std::size_t>(mode_index(k, l)) * radii() + static_cast<std::size_t>(j - j_min_)];
}

double PolysplineField::sample(int k, int l, int j) const {
  return data_[static_cast<std::size_t>(mode_index(k, l)) * radii() + static_cast<std::size_t>(j - j_min_)];
}

const double* PolysplineField::row(int k, int l) const {
  return data_.data() + static_cast<std::size_t>(mode_index(k, l)) * radii();
}

void PolysplineField::write_text(std::ostream& os) const {
  os << "format polyspline-field 1\n";
  os << "n " << n_ << "\np " << p_ << "\nK " << max_degree_ << "\nj_range " << j_min_ << ' ' << j_max_ << '\n';
  os << "generator " << (generator_.empty() ? "-" : generator_) << '\n';
  os << std::setprecision(17);
  for (int k = 0; k <= max_degree_; ++k) {
    for (int l = 1; l <= 2 * k + 1; ++l) {
      os << k << ' ' << l;
      for (int j = j_min_; j <= j_max_; ++j) os << ' ' << sample(k, l, j);
      os << '\n';
    }
  }
}

void PolysplineField::write_binary(std::ostream& os) const {
  bin::Writer w(os);
  w.magic("PSPF");
  w.u32(1);
  w.i32(n_);
  w.i32(p_);
  w.i32(max_degree_);
  w.i32(j_min_);
  w.i32(j_max_);
  w.str(generator_);
  w.f64s(data_);
}

namespace {

// Line-oriented tokenizer that remembers the byte offset of each token.
class TextCursor {
 public:
  explicit TextCursor(std::string text) : text_(std::move(text)) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  std::size_t offset() const { return pos_; }

  std::string word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("unexpected end of input", start);
    return text_.substr(start, pos_ - start);
  }
  void expect(const std::string& w) {
    skip_space();
    const std::size_t at = pos_;
    if (word() != w) throw ParseError("expected '" + w + "'", at);
  }
  long integer() {
    skip_space();
    const std::size_t at = pos_;
    const std::string w = word();
    try {
      std::size_t used = 0;
      const long v = std::stol(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
      return v;
    } catch (const std::exception&) {
      throw ParseError("expected an integer, got '" + w + "'", at);
    }
  }
  double real() {
    skip_space();
    const std::size_t at = pos_;
    const std::string w = word();
    try {
      std::size_t used = 0;
      const double v = std::stod(w, &used);
      if (used != w.size() || !std::isfinite(v)) throw std::invalid_argument(w);
      return v;
    } catch (const std::exception&) {
      throw ParseError("expected a number, got '" + w + "'", at);
    }
  }
  std::string rest_of_line() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    return text_.substr(start, pos_ - start);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

PolysplineField PolysplineField::read(std::istream& is) {
  std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (content.size() >= 4 && content.compare(0, 4, "PSPF") == 0) {
    std::istringstream bis(content);
    bin::Reader r(bis);
    r.expect_magic("PSPF");
    const std::size_t at = r.offset();
    if (r.u32() != 1) throw ParseError("unsupported field format version", at);
    const std::size_t header_at = r.offset();
    const int n = r.i32(), p = r.i32(), k = r.i32(), j0 = r.i32(), j1 = r.i32();
    if (n != 3 || p < 1 || k < 0 || k > 256 || j1 < j0 || j1 - j0 > 1 << 16)
      throw ParseError("bad field header", header_at);
    std::string gen = r.str();
    PolysplineField f(n, p, k, j0, j1, std::move(gen));
    const std::size_t data_at = r.offset();
    std::vector<double> data = r.f64s();
    if (data.size() != f.data_.size()) throw ParseError("sample count does not match header", data_at);
    f.data_ = std::move(data);
    return f;
  }
  TextCursor c(std::move(content));
  c.expect("format");
  c.expect("polyspline-field");
  {
    const std::size_t at = c.offset();
    if (c.integer() != 1) throw ParseError("unsupported field format version", at);
  }
  c.expect("n");
  const std::size_t n_at = c.offset();
  const long n = c.integer();
  c.expect("p");
  const std::size_t p_at = c.offset();
  const long p = c.integer();
  c.expect("K");
  const std::size_t k_at = c.offset();
  const long kmax = c.integer();
  c.expect("j_range");
  const std::size_t j_at = c.offset();
  const long j0 = c.integer(), j1 = c.integer();
  if (n != 3) throw ParseError("only n = 3 is supported", n_at);
  if (p < 1 || p > 64) throw ParseError("p out of range", p_at);
  if (kmax < 0 || kmax > 256) throw ParseError("K out of range", k_at);
  if (j1 < j0 || j1 - j0 > 1 << 16) throw ParseError("bad j range", j_at);
  c.expect("generator");
  std::string gen = c.rest_of_line();
  if (gen == "-") gen.clear();
  PolysplineField f(static_cast<int>(n), static_cast<int>(p), static_cast<int>(kmax), static_cast<int>(j0),
                    static_cast<int>(j1), std::move(gen));
  for (int k = 0; k <= kmax; ++k) {
    for (int l = 1; l <= 2 * k + 1; ++l) {
      const std::size_t at = c.offset();
      if (c.integer() != k || c.integer() != l) throw ParseError("mode rows must be listed in (k, l) order", at);
      for (int j = f.j_min_; j <= f.j_max_; ++j) f.sample(k, l, j) = c.real();
    }
  }
  if (!c.at_end()) throw ParseError("trailing content after last mode row", c.offset());
  return f;
}

void PolysplineField::save(const std::filesystem::path& path, bool binary) const {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  binary ? write_binary(os) : write_text(os);
}

PolysplineField PolysplineField::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read(is);
}

// ---------------------------------------------------------------- synthetic field

SyntheticSphereField::SyntheticSphereField(int n, int p, int max_degree, int j_min, int j_max, std::uint64_t seed)
    : n_(n), p_(p), max_degree_(max_degree), j_min_(j_min), j_max_(j_max), seed_(seed) {
  const int order = 2 * p;
  first_shift_ = j_min - 1;
  const int shifts = j_max - order + 1 - first_shift_ + 1;
  if (shifts < 1) throw std::invalid_argument("SyntheticSphereField: radius range too short for order 2p");
  std::mt19937_64 rng(seed);
  for (int k = 0; k <= max_degree; ++k) splines_.push_back(std::make_shared<const TBSpline>(build_lambda_radial(k, n, p)));
  coefficients_.resize(static_cast<std::size_t>(mode_count(max_degree)));
  for (auto& row : coefficients_) {
    row.resize(static_cast<std::size_t>(shifts));
    for (double& a : row) a = 2.0 * unit_uniform(rng()) - 1.0;
  }
  std::ostringstream os;
  os << "synthetic-sphere seed=" << seed;
  description_ = os.str();
}

SyntheticSphereField SyntheticSphereField::single_mode(int n, int p, int max_degree, int j_min, int j_max, int k, int l,
                                                       int shift) {
  SyntheticSphereField f;
  f.n_ = n;
  f.p_ = p;
  f.max_degree_ = max_degree;
  f.j_min_ = j_min;
  f.j_max_ = j_max;
  f.first_shift_ = shift;
  for (int d = 0; d <= max_degree; ++d) f.splines_.push_back(std::make_shared<const TBSpline>(build_lambda_radial(d, n, p)));
  f.coefficients_.assign(static_cast<std::size_t>(mode_count(max_degree)), std::vector<double>{});
  f.coefficients_[static_cast<std::size_t>(mode_index(k, l))] = {1.0};
  std::ostringstream os;
  os << "single-mode k=" << k << " l=" << l << " shift=" << shift;
  f.description_ = os.str();
  return f;
}

double SyntheticSphereField::profile(int k, int l, double v) const {
  const TBSpline& q = *splines_[static_cast<std::size_t>(k)];
  const auto& row = coefficients_[static_cast<std::size_t>(mode_index(k, l))];
  double s = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * q(v - (first_shift_ + static_cast<double>(i)));
  return s / q.scale();
}

double SyntheticSphereField::operator()(double r, const Direction& dir) const {
  const double v = std::log(r);
  const std::vector<double> y = sph_harm_all(max_degree_, dir);
  double s = 0.0;
  for (int k = 0; k <= max_degree_; ++k)
    for (int l = 1; l <= 2 * k + 1; ++l) s += profile(k, l, v) * y[static_cast<std::size_t>(mode_index(k, l))];
  return s;
}

PolysplineField SyntheticSphereField::sample() const {
  PolysplineField f(n_, p_, max_degree_, j_min_, j_max_, description_);
  for (int k = 0; k <= max_degree_; ++k)
    for (int l = 1; l <= 2 * k + 1; ++l)
      for (int j = j_min_; j <= j_max_; ++j) f.sample(k, l, j) = profile(k, l, j);
  return f;
}

// ---------------------------------------------------------------- kernels

KernelTable radial_kernel(int k, int n, int p, const FrequencyGrid& grid, double half_width) {
  return synthesize_kernel(build_lambda_radial(k, n, p), grid, half_width);
}

ShannonPolysplineKernel::ShannonPolysplineKernel(int n, int p, int max_degree, const FrequencyGrid& grid,
                                                 double half_width, int threads)
    : n_(n), p_(p), kernels_(static_cast<std::size_t>(max_degree + 1)) {
  if (n != 3) throw std::invalid_argument("ShannonPolysplineKernel: zonal harmonics are implemented for n = 3");
  parallel_for(max_degree + 1, threads, [&](int k) {
    kernels_[static_cast<std::size_t>(k)] = std::make_shared<const KernelTable>(radial_kernel(k, n, p, grid, half_width));
  });
}

ShannonPolysplineKernel::ShannonPolysplineKernel(int n, int p, std::vector<std::shared_ptr<const KernelTable>> kernels)
    : n_(n), p_(p), kernels_(std::move(kernels)) {
  if (n != 3) throw std::invalid_argument("ShannonPolysplineKernel: zonal harmonics are implemented for n = 3");
  if (kernels_.empty()) throw std::invalid_argument("ShannonPolysplineKernel: no kernels");
  for (std::size_t k = 0; k < kernels_.size(); ++k) {
    if (!kernels_[k] || !(kernels_[k]->spectrum() == build_lambda_radial(static_cast<int>(k), n, p)))
      throw std::invalid_argument("ShannonPolysplineKernel: kernel " + std::to_string(k) + " has the wrong spectrum");
  }
}

double ShannonPolysplineKernel::operator()(double r, double cos_gamma) const {
  const double v = std::log(r);
  double s = 0.0;
  for (int k = 0; k <= max_degree(); ++k) s += degree(k)(v) * zonal(k, cos_gamma);
  return s;
}

double kernel_eval(const ShannonPolysplineKernel& kernel, double r, double cos_gamma) { return kernel(r, cos_gamma); }

std::vector<DecayRow> decay_check(int n, int p, int k_max, const FrequencyGrid& grid, double half_width, int threads) {
  std::vector<DecayRow> rows(static_cast<std::size_t>(k_max + 1));
  parallel_for(k_max + 1, threads, [&](int k) {
    const KernelTable kernel = radial_kernel(k, n, p, grid, half_width);
    DecayRow row{k, 0.0, 0.0};
    const double dxi = grid.step();
    for (int m = -grid.samples / 2; m < grid.samples / 2; ++m)
      row.sup_fourier = std::max(row.sup_fourier, std::abs(s0_hat(kernel.basis(), m * dxi)));
    for (double v : kernel.values()) row.sup_time = std::max(row.sup_time, std::abs(v));
    rows[static_cast<std::size_t>(k)] = row;
  });
  return rows;
}

// ---------------------------------------------------------------- reconstruction

namespace {

// Kernel weights S̃₀^{(k)}(v − j) for the field's radius indices.
std::vector<double> radial_weights(const KernelTable& kernel, const PolysplineField& field, double v) {
  std::vector<double> w(static_cast<std::size_t>(field.radii()));
  for (int j = field.j_min(); j <= field.j_max(); ++j) w[static_cast<std::size_t>(j - field.j_min())] = kernel(v - j);
  return w;
}

void check_compatible(const ShannonPolysplineKernel& kernel, const PolysplineField& field) {
  if (field.max_degree() > kernel.max_degree())
    throw std::invalid_argument("reconstruct_spherical: field degree exceeds kernel truncation");
  if (field.p() != kernel.p() || field.dimension() != kernel.dimension())
    throw std::invalid_argument("reconstruct_spherical: field (n, p) does not match the kernel");
}

}  // namespace

ModeCoefficients reconstruct_modes(const ShannonPolysplineKernel& kernel, const PolysplineField& field, double r) {
  check_compatible(kernel, field);
  const double v = std::log(r);
  ModeCoefficients out(field.max_degree());
  for (int k = 0; k <= field.max_degree(); ++k) {
    const std::vector<double> w = radial_weights(kernel.degree(k), field, v);
    for (int l = 1; l <= 2 * k + 1; ++l) {
      const double* row = field.row(k, l);
      double s = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * row[j];
      out.at(k, l) = s;
    }
  }
  return out;
}

SphericalReconstruction reconstruct_spherical(const ShannonPolysplineKernel& kernel, const PolysplineField& field,
                                              const std::vector<SphereQuery>& queries, int threads) {
  check_compatible(kernel, field);
  SphericalReconstruction out;
  out.values.assign(queries.size(), 0.0);
  std::vector<double> sensitivity(queries.size(), 0.0);
  const int kmax = field.max_degree();
  parallel_for(static_cast<int>(queries.size()), threads, [&](int qi) {
    const SphereQuery& q = queries[static_cast<std::size_t>(qi)];
    const ModeCoefficients modes = reconstruct_modes(kernel, field, q.r);
    const std::vector<double> y = sph_harm_all(kmax, q.direction);
    double s = 0.0;
    for (std::size_t m = 0; m < y.size(); ++m) s += modes.values[m] * y[m];
    out.values[static_cast<std::size_t>(qi)] = s;
    const double v = std::log(q.r);
    if (v < field.j_min() + 2 || v > field.j_max() - 2) {
      // Total kernel weight that would fall on radii missing from the data.
      double worst = 0.0;
      for (int k = 0; k <= kmax; ++k) {
        const KernelTable& kt = kernel.degree(k);
        const int reach = static_cast<int>(std::ceil(kt.half_width()));
        double missing = 0.0;
        for (int j = static_cast<int>(std::floor(v)) - reach; j <= static_cast<int>(std::ceil(v)) + reach; ++j)
          if (j < field.j_min() || j > field.j_max()) missing += std::abs(kt(v - j));
        worst = std::max(worst, missing);
      }
      sensitivity[static_cast<std::size_t>(qi)] = worst;
    }
  });
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double v = std::log(queries[i].r);
    if (v < field.j_min() + 2 || v > field.j_max() - 2) {
      std::ostringstream os;
      os << "query " << i << ": log r = " << v << " is within 2 of the data range [" << field.j_min() << ", "
         << field.j_max() << "]; missing-radius kernel weight " << sensitivity[i];
      out.warnings.push_back(os.str());
      out.tail_bound = std::max(out.tail_bound, sensitivity[i]);
    }
  }
  return out;
}

}  // namespace polyshannon
