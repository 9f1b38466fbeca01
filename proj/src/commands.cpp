#include "polyshannon/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "polyshannon/dual.hpp"
#include "polyshannon/errors.hpp"
#include "polyshannon/kernel_cache.hpp"
#include "polyshannon/parallel.hpp"
#include "polyshannon/quadrature.hpp"
#include "polyshannon/spherical.hpp"
#include "polyshannon/strip.hpp"

namespace polyshannon {

namespace {

using Clock = std::chrono::steady_clock;
using cd = std::complex<double>;

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double a, double b) { return a + (b - a) * unit_uniform(engine_()); }

 private:
  std::mt19937_64 engine_;
};

void log_line(const CommandContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << std::endl;
}

std::uint64_t seed_of(const ExperimentConfig& cfg, const CommandContext& ctx) {
  return ctx.seed.value_or(cfg.effective_seed());
}

RunReport make_report(const std::string& command, const ExperimentConfig& cfg, const CommandContext& ctx) {
  RunReport r(command, cfg.hash(), seed_of(cfg, ctx));
  if (!cfg.seed && !ctx.seed) r.note("default.seed", std::to_string(ExperimentConfig::default_seed));
  return r;
}

// Records the value a key will take, marking it as a default when unset.
template <class T>
T with_default(RunReport& report, const std::optional<T>& value, const char* key, T fallback) {
  if (value) return *value;
  std::ostringstream os;
  os << fallback;
  report.note(std::string("default.") + key, os.str());
  return fallback;
}

void write_rows(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
  os << "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\r\n";
  }
}

void write_plot(const std::filesystem::path& path, const std::string& comment,
                const std::vector<std::pair<double, double>>& points) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "# " << comment << '\n';
  for (const auto& [x, y] : points) os << format_double(x) << ' ' << format_double(y) << '\n';
}

// Runs one check body; any library error becomes a failed row instead of aborting the run.
template <class F>
void guarded(RunReport& report, const std::string& name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report.record({name, std::numeric_limits<double>::quiet_NaN(), 0.0, false, e.what()});
  }
}

std::string fmt(double v) { return format_double(v); }

std::shared_ptr<KernelCache> open_cache(const ExperimentConfig& cfg, const CommandContext& ctx) {
  const std::filesystem::path dir = cfg.cache_dir ? std::filesystem::path(*cfg.cache_dir) : ctx.out_dir / "kernels";
  return std::make_shared<KernelCache>(dir);
}

// f = Σ_i c_i Q̄(t − first − i)
double v0_function(const TBSpline& q, int first, const std::vector<double>& c, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * q(t - (first + static_cast<double>(i)));
  return s / q.scale();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- shared check bodies

struct DecayWindows {
  double fourier_ratio = 0.0;     // max/min of k·sup|Ŝ₀| over k ≥ 8
  double time_ratio = 0.0;        // max/median of sup|S₀| over k ≥ 8
  double time_ratio_all = 0.0;    // max/median of sup|S₀| over every k
};

DecayWindows decay_windows(const std::vector<DecayRow>& rows) {
  DecayWindows w;
  std::vector<double> kf, st, st_all;
  for (const auto& r : rows) {
    st_all.push_back(r.sup_time);
    if (r.k < 8) continue;
    kf.push_back(r.k * r.sup_fourier);
    st.push_back(r.sup_time);
  }
  if (!kf.empty()) {
    w.fourier_ratio = *std::max_element(kf.begin(), kf.end()) / *std::min_element(kf.begin(), kf.end());
    w.time_ratio = *std::max_element(st.begin(), st.end()) / median(st);
  }
  w.time_ratio_all = *std::max_element(st_all.begin(), st_all.end()) / median(st_all);
  return w;
}

struct SphereErrors {
  double max_err = 0.0;
  double rms_err = 0.0;
  std::vector<std::pair<double, double>> plot;  // (log r, |error|)
  std::size_t warnings = 0;
};

std::vector<SphereQuery> sphere_queries(int count, std::uint64_t seed) {
  Uniform u(seed ^ 0x5bd1e995ULL);
  std::vector<SphereQuery> q;
  for (int i = 0; i < count; ++i) {
    const double v = u(-2.0, 2.0);
    const double z = u(-1.0, 1.0);
    const double phi = u(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    q.push_back({std::exp(v), {s * std::cos(phi), s * std::sin(phi), z}});
  }
  return q;
}

SphereErrors sphere_errors(const ShannonPolysplineKernel& kernel, const PolysplineField& field,
                           const SyntheticSphereField& truth, const std::vector<SphereQuery>& queries, int threads) {
  const SphericalReconstruction rec = reconstruct_spherical(kernel, field, queries, threads);
  std::vector<double> exact(queries.size());
  parallel_for(static_cast<int>(queries.size()), threads, [&](int i) {
    exact[static_cast<std::size_t>(i)] = truth(queries[static_cast<std::size_t>(i)].r, queries[static_cast<std::size_t>(i)].direction);
  });
  double scale = 0.0, sum_sq = 0.0;
  SphereErrors e;
  for (double v : exact) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double err = std::abs(rec.values[i] - exact[i]);
    e.max_err = std::max(e.max_err, err);
    sum_sq += err * err;
    e.plot.emplace_back(std::log(queries[i].r), err / scale);
  }
  e.max_err /= scale;
  e.rms_err = std::sqrt(sum_sq / static_cast<double>(queries.size())) / scale;
  e.warnings = rec.warnings.size();
  return e;
}

ShannonPolysplineKernel cached_sphere_kernel(KernelCache* cache, int p, int max_degree, const FrequencyGrid& grid,
                                             double half_width, int threads) {
  if (!cache) return ShannonPolysplineKernel(3, p, max_degree, grid, half_width, threads);
  std::vector<std::shared_ptr<const KernelTable>> kernels(static_cast<std::size_t>(max_degree + 1));
  parallel_for(max_degree + 1, threads, [&](int k) {
    kernels[static_cast<std::size_t>(k)] = cache->get(build_lambda_radial(k, 3, p), grid, half_width);
  });
  return ShannonPolysplineKernel(3, p, std::move(kernels));
}

// Leakage of a single-mode field into other modes after full reconstruction on sphere grids.
double single_mode_leakage(const ShannonPolysplineKernel& kernel, int p, int max_degree, int j_min, int j_max) {
  const int k = std::min(2, max_degree);
  const int l = std::min(2 * k + 1, 2);
  const auto truth = SyntheticSphereField::single_mode(3, p, max_degree, j_min, j_max, k, l, -1);
  const PolysplineField field = truth.sample();
  const SphereGrid grid(max_degree);
  double leak = 0.0;
  for (double v : {-1.3, -0.4, 0.55, 1.7}) {
    std::vector<SphereQuery> queries;
    for (std::size_t i = 0; i < grid.size(); ++i) queries.push_back({std::exp(v), grid.point(i)});
    const SphericalReconstruction rec = reconstruct_spherical(kernel, field, queries);
    const ModeCoefficients modes = analyze_sphere(grid, rec.values);
    for (int kk = 0; kk <= max_degree; ++kk)
      for (int ll = 1; ll <= 2 * kk + 1; ++ll)
        if (kk != k || ll != l) leak = std::max(leak, std::abs(modes.at(kk, ll)));
  }
  return leak;
}

struct StripErrors {
  double max_err = 0.0;
  double rms_err = 0.0;
  double max_imag = 0.0;
  std::vector<std::pair<double, double>> plot;
  std::size_t warnings = 0;
};

std::vector<StripQuery> strip_queries(int count, int dim, std::uint64_t seed) {
  Uniform u(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<StripQuery> q;
  for (int i = 0; i < count; ++i) {
    StripQuery s{u(-3.0, 3.0), std::vector<double>(static_cast<std::size_t>(dim))};
    for (double& y : s.y) y = u(0.0, 2.0 * std::numbers::pi);
    q.push_back(std::move(s));
  }
  return q;
}

StripErrors strip_errors(StripKernelCache& cache, const StripField& field, const SyntheticStripField& truth,
                         const std::vector<StripQuery>& queries, int threads) {
  const StripReconstruction rec = reconstruct_strip(cache, field, queries, threads);
  std::vector<double> exact(queries.size());
  parallel_for(static_cast<int>(queries.size()), threads, [&](int i) {
    exact[static_cast<std::size_t>(i)] = truth(queries[static_cast<std::size_t>(i)].t, queries[static_cast<std::size_t>(i)].y);
  });
  StripErrors e;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double err = std::abs(rec.values[i].real() - exact[i]);
    e.max_err = std::max(e.max_err, err);
    e.max_imag = std::max(e.max_imag, std::abs(rec.values[i].imag()));
    sum_sq += err * err;
    e.plot.emplace_back(queries[i].t, err);
  }
  e.rms_err = std::sqrt(sum_sq / static_cast<double>(queries.size()));
  e.warnings = rec.warnings.size();
  return e;
}

std::string range_label(int lo, int hi) { return "[" + std::to_string(lo) + ";" + std::to_string(hi) + "]"; }

}  // namespace

std::vector<SpectrumVector> test_battery() {
  std::vector<SpectrumVector> out;
  for (int p = 1; p <= 4; ++p) out.push_back(SpectrumVector::from_entries({{0.0, 2 * p}}));
  for (int p = 1; p <= 2; ++p)
    for (int k = 0; k <= 8; ++k) out.push_back(build_lambda_strip(k, p));
  for (int p = 1; p <= 2; ++p)
    for (int k = 0; k <= 16; ++k) out.push_back(build_lambda_radial(k, 3, p));
  return out;
}

// ---------------------------------------------------------------- kernel1d

RunReport cmd_kernel1d(const ExperimentConfig& cfg, const CommandContext& ctx) {
  RunReport report = make_report("kernel1d", cfg, ctx);
  const SpectrumVector lambda = cfg.spectrum();
  const FrequencyGrid grid = cfg.grid();
  const double t_half = cfg.kernel_half_width();
  report.note("lambda", lambda.describe());
  report.note("cutoff", fmt(grid.cutoff));
  report.note("grid_points", std::to_string(grid.samples));
  report.note("half_width", fmt(t_half));

  auto cache = open_cache(cfg, ctx);
  const auto kernel = cache->get(lambda, grid, t_half);
  const KernelMetadata& meta = kernel->metadata();
  report.note("kernel_file", cache->path_for(lambda, grid, t_half).filename().string());
  report.note("cache_hits", std::to_string(cache->hits()));
  report.note("cache_misses", std::to_string(cache->misses()));
  report.note("margin", fmt(meta.margin));
  report.note("relative_margin", fmt(meta.relative_margin));
  report.note("scale", fmt(meta.scale));
  report.note("tail_estimate", fmt(meta.tail_estimate));

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < kernel->values().size(); ++i) rows.push_back({fmt(kernel->time_at(i)), fmt(kernel->values()[i])});
  write_rows(ctx.out_dir / "kernel1d.csv", {"t", "S0"}, rows);

  report.check_le("cardinal_residual", meta.cardinal_residual, 1e-6);
  report.check_le("tail_at_half_width", std::max(std::abs((*kernel)(t_half)), std::abs((*kernel)(-t_half))),
                  meta.tail_estimate);
  if (lambda.is_symmetric()) {
    double asym = 0.0;
    const auto& v = kernel->values();
    for (std::size_t i = 0; i < v.size(); ++i) asym = std::max(asym, std::abs(v[i] - v[v.size() - 1 - i]));
    report.check_le("even_symmetry", asym, 1e-8);
  }
  if (lambda.order() >= 4) {
    guarded(report, "spectral_cross_check", [&] {
      const std::vector<double> spectral = synthesize_kernel_spectral(lambda, grid, t_half);
      double diff = 0.0;
      for (std::size_t i = 0; i < std::min(spectral.size(), kernel->values().size()); ++i)
        diff = std::max(diff, std::abs(spectral[i] - kernel->values()[i]));
      report.check_le("spectral_cross_check", diff, 1e-5, "inverse DFT of S0-hat against the coefficient route");
    });
  }
  return report;
}

// ---------------------------------------------------------------- zeros

RunReport cmd_zeros(const ExperimentConfig& cfg, const CommandContext& ctx) {
  RunReport report = make_report("zeros", cfg, ctx);
  const SpectrumVector lambda = cfg.spectrum();
  report.note("lambda", lambda.describe());
  const TBSpline q(lambda);
  const EFPolynomial pi = ef_polynomial(q);
  std::string coeffs;
  for (double c : pi.coefficients) coeffs += (coeffs.empty() ? "" : " ") + fmt(c);
  report.note("ef_coefficients", coeffs);
  report.check_le("interpolation_residual", pi.interpolation_residual, 1e-8);

  std::vector<std::vector<std::string>> rows;
  guarded(report, "zeros_real_negative", [&] {
    const EFZeros z = ef_zeros(q);
    for (std::size_t i = 0; i < z.zeros.size(); ++i) rows.push_back({std::to_string(i + 1), fmt(z.zeros[i])});
    report.check_le("zero_count_mismatch", std::abs(double(z.zeros.size()) - (lambda.order() - 2)), 0.0);
    report.check_le("zeros_real_negative", z.max_imaginary, 1e-8, "max relative imaginary part");
    if (lambda.is_symmetric()) report.check_le("reciprocal_pairing", z.pairing_residual, 1e-8);
  });
  write_rows(ctx.out_dir / "zeros.csv", {"index", "zero"}, rows);

  guarded(report, "contour_consistency", [&] {
    const cd z = std::polar(1.0, std::numbers::pi / 3.0);
    const cd via_contour = r_poly(lambda, z) * a_eval(lambda, 0.0, z);
    report.check_le("contour_consistency", std::abs(via_contour - pi(z)) / std::abs(pi(z)), 1e-8,
                    "r(z) A(0;z) against the interpolated polynomial at exp(i pi/3)");
  });
  return report;
}

// ---------------------------------------------------------------- decay

RunReport cmd_decay(const ExperimentConfig& cfg, const CommandContext& ctx) {
  RunReport report = make_report("decay", cfg, ctx);
  const int n = with_default(report, cfg.n, "n", 3);
  const int k_max = with_default(report, cfg.k_max, "k_max", 32);
  const std::vector<int> ps = cfg.p ? std::vector<int>{*cfg.p} : std::vector<int>{1, 2};
  if (!cfg.p) report.note("default.p", "1,2");
  const FrequencyGrid grid = cfg.grid();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<double, double>> plot;
  for (int p : ps) {
    log_line(ctx, "decay: p = " + std::to_string(p));
    const auto table = decay_check(n, p, k_max, grid, cfg.kernel_half_width(), ctx.threads);
    for (const auto& r : table) {
      rows.push_back({std::to_string(p), std::to_string(r.k), fmt(r.sup_fourier), fmt(r.k * r.sup_fourier), fmt(r.sup_time)});
      plot.emplace_back(r.k, r.k * r.sup_fourier);
    }
    const DecayWindows w = decay_windows(table);
    const std::string tag = "p" + std::to_string(p);
    if (k_max >= 8) {
      report.check_le("k_sup_fourier_max_over_min." + tag, w.fourier_ratio, 4.0, "k in [8, k_max]");
      report.check_le("sup_time_max_over_median." + tag, w.time_ratio, 3.0, "k in [8, k_max]");
    }
    report.check_le("sup_time_max_over_median_all_k." + tag, w.time_ratio_all, 3.0, "k in [0, k_max]");
  }
  write_rows(ctx.out_dir / "decay.csv", {"p", "k", "sup_fourier", "k_sup_fourier", "sup_time"}, rows);
  write_plot(ctx.out_dir / "decay_plot.dat", "k  k*sup|S0hat|", plot);
  return report;
}

// ---------------------------------------------------------------- reconstruct-sphere

RunReport cmd_reconstruct_sphere(const ExperimentConfig& cfg, const CommandContext& ctx) {
  RunReport report = make_report("reconstruct-sphere", cfg, ctx);
  const std::uint64_t seed = seed_of(cfg, ctx);
  const FrequencyGrid grid = cfg.grid();
  const double t_half = cfg.kernel_half_width();
  const int count = with_default(report, cfg.queries, "queries", 1000);
  const bool timing = cfg.timing.value_or(false);
  auto cache = open_cache(cfg, ctx);
  const auto queries = sphere_queries(count, seed);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"K", "j_range", "max_err", "rms_err"};
  if (timing) header.push_back("runtime");
  std::vector<std::pair<double, double>> plot, sweep_plot;

  if (cfg.field) {
    const PolysplineField field = PolysplineField::load(*cfg.field);
    report.note("field", *cfg.field);
    const ShannonPolysplineKernel kernel =
        cached_sphere_kernel(cache.get(), field.p(), field.max_degree(), grid, t_half, ctx.threads);
    // Fields written by this tool carry their generator; anything else is reconstructed only.
    std::uint64_t field_seed = 0;
    if (std::sscanf(field.generator().c_str(), "synthetic-sphere seed=%llu",
                    reinterpret_cast<unsigned long long*>(&field_seed)) == 1) {
      const SyntheticSphereField truth(3, field.p(), field.max_degree(), field.j_min(), field.j_max(), field_seed);
      const SphereErrors e = sphere_errors(kernel, field, truth, queries, ctx.threads);
      rows.push_back({std::to_string(field.max_degree()), range_label(field.j_min(), field.j_max()), fmt(e.max_err), fmt(e.rms_err)});
      report.check_le("max_relative_error", e.max_err, 1e-4);
    } else {
      const SphericalReconstruction rec = reconstruct_spherical(kernel, field, queries, ctx.threads);
      for (std::size_t i = 0; i < queries.size(); ++i) plot.emplace_back(std::log(queries[i].r), rec.values[i]);
      report.note("truth", "unknown generator; values written to sphere_plot.dat");
    }
    write_rows(ctx.out_dir / "sphere_errors.csv", header, rows);
    write_plot(ctx.out_dir / "sphere_plot.dat", "log_r value_or_error", plot);
    return report;
  }

  const int p = with_default(report, cfg.p, "p", 2);
  const int kmax = with_default(report, cfg.max_degree, "max_degree", 8);
  const int j_min = with_default(report, cfg.j_min, "j_min", -6);
  const int j_max = with_default(report, cfg.j_max, "j_max", 6);
  if (cfg.n && *cfg.n != 3) throw std::invalid_argument("reconstruct-sphere supports n = 3 only");
  const std::vector<int> degrees = cfg.degrees.value_or(std::vector<int>{kmax});
  const int top = *std::max_element(degrees.begin(), degrees.end());
  const ShannonPolysplineKernel kernel = cached_sphere_kernel(cache.get(), p, top, grid, t_half, ctx.threads);
  report.note("cache_hits", std::to_string(cache->hits()));
  report.note("cache_misses", std::to_string(cache->misses()));

  for (int kd : degrees) {
    const auto start = Clock::now();
    const SyntheticSphereField truth(3, p, kd, j_min, j_max, seed);
    const PolysplineField field = truth.sample();
    const ShannonPolysplineKernel sub(3, p, [&] {
      std::vector<std::shared_ptr<const KernelTable>> v;
      for (int k = 0; k <= kd; ++k) v.push_back(std::make_shared<const KernelTable>(kernel.degree(k)));
      return v;
    }());
    const SphereErrors e = sphere_errors(sub, field, truth, queries, ctx.threads);
    std::vector<std::string> row{std::to_string(kd), range_label(j_min, j_max), fmt(e.max_err), fmt(e.rms_err)};
    if (timing) row.push_back(fmt(std::chrono::duration<double>(Clock::now() - start).count()));
    rows.push_back(std::move(row));
    report.check_le("max_relative_error.K" + std::to_string(kd), e.max_err, 1e-4);
    if (kd == kmax) {
      plot = e.plot;
      field.save(ctx.out_dir / "sphere_field.txt", false);
    }
  }

  // Tail sweep: drop radii outside [−h, h] and watch the error grow.
  if (cfg.j_ranges) {
    const SyntheticSphereField truth(3, p, kmax, j_min, j_max, seed);
    const PolysplineField full = truth.sample();
    for (int h : *cfg.j_ranges) {
      const int lo = std::max(j_min, -h), hi = std::min(j_max, h);
      PolysplineField cut(3, p, kmax, lo, hi, full.generator());
      for (int k = 0; k <= kmax; ++k)
        for (int l = 1; l <= 2 * k + 1; ++l)
          for (int j = lo; j <= hi; ++j) cut.sample(k, l, j) = full.sample(k, l, j);
      const auto start = Clock::now();
      const ShannonPolysplineKernel sub(3, p, [&] {
        std::vector<std::shared_ptr<const KernelTable>> v;
        for (int k = 0; k <= kmax; ++k) v.push_back(std::make_shared<const KernelTable>(kernel.degree(k)));
        return v;
      }());
      const SphereErrors e = sphere_errors(sub, cut, truth, queries, ctx.threads);
      std::vector<std::string> row{std::to_string(kmax), range_label(lo, hi), fmt(e.max_err), fmt(e.rms_err)};
      if (timing) row.push_back(fmt(std::chrono::duration<double>(Clock::now() - start).count()));
      rows.push_back(std::move(row));
      sweep_plot.emplace_back(h, e.max_err);
    }
    write_plot(ctx.out_dir / "sphere_jsweep.dat", "j_half_range max_err", sweep_plot);
  }

  report.check_le("single_mode_leakage", single_mode_leakage(kernel, p, std::min(kmax, top), j_min, j_max), 1e-9);
  write_rows(ctx.out_dir / "sphere_errors.csv", header, rows);
  write_plot(ctx.out_dir / "sphere_plot.dat", "log_r abs_err/max|f|", plot);
  return report;
}

// ---------------------------------------------------------------- reconstruct-strip

RunReport cmd_reconstruct_strip(const ExperimentConfig& cfg, const CommandContext& ctx) {
  RunReport report = make_report("reconstruct-strip", cfg, ctx);
  const std::uint64_t seed = seed_of(cfg, ctx);
  const FrequencyGrid grid = cfg.grid();
  const double t_half = cfg.kernel_half_width();
  const int count = with_default(report, cfg.queries, "queries", 1000);
  const bool timing = cfg.timing.value_or(false);
  std::vector<std::string> header{"K", "j_range", "max_err", "rms_err"};
  if (timing) header.push_back("runtime");
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<double, double>> plot, sweep_plot;

  int dim = 0, p = 0, kmax = 0, j_min = 0, j_max = 0;
  std::optional<StripField> loaded;
  std::uint64_t field_seed = seed;
  bool has_truth = true;
  if (cfg.field) {
    loaded = StripField::load(*cfg.field);
    report.note("field", *cfg.field);
    dim = loaded->dimension();
    p = loaded->p();
    kmax = loaded->max_norm();
    j_min = loaded->j_min();
    j_max = loaded->j_max();
    has_truth = std::sscanf(loaded->generator().c_str(), "synthetic-strip seed=%llu",
                            reinterpret_cast<unsigned long long*>(&field_seed)) == 1;
  } else {
    dim = with_default(report, cfg.torus_dim, "torus_dim", 2);
    p = with_default(report, cfg.p, "p", 1);
    kmax = with_default(report, cfg.max_degree, "max_degree", 4);
    j_min = with_default(report, cfg.j_min, "j_min", -8);
    j_max = with_default(report, cfg.j_max, "j_max", 8);
  }
  StripKernelCache cache(p, grid, t_half);
  const auto queries = strip_queries(count, dim, seed);

  const std::vector<int> degrees = loaded ? std::vector<int>{kmax} : cfg.degrees.value_or(std::vector<int>{kmax});
  for (int kd : degrees) {
    const auto start = Clock::now();
    const SyntheticStripField truth(dim, p, kd, j_min, j_max, field_seed);
    const StripField field = loaded ? *loaded : truth.sample();
    if (!has_truth) {
      const StripReconstruction rec = reconstruct_strip(cache, field, queries, ctx.threads);
      for (std::size_t i = 0; i < queries.size(); ++i) plot.emplace_back(queries[i].t, rec.values[i].real());
      report.note("truth", "unknown generator; values written to strip_plot.dat");
      break;
    }
    const StripErrors e = strip_errors(cache, field, truth, queries, ctx.threads);
    std::vector<std::string> row{std::to_string(kd), range_label(j_min, j_max), fmt(e.max_err), fmt(e.rms_err)};
    if (timing) row.push_back(fmt(std::chrono::duration<double>(Clock::now() - start).count()));
    rows.push_back(std::move(row));
    report.check_le("max_error.K" + std::to_string(kd), e.max_err, 1e-5);
    report.check_le("max_imaginary.K" + std::to_string(kd), e.max_imag, 1e-9);
    if (kd == kmax) {
      plot = e.plot;
      if (!loaded) field.save(ctx.out_dir / "strip_field.txt", false);
    }
  }

  if (cfg.j_ranges && has_truth) {
    const SyntheticStripField truth(dim, p, kmax, j_min, j_max, field_seed);
    const StripField full = loaded ? *loaded : truth.sample();
    for (int h : *cfg.j_ranges) {
      const int lo = std::max(j_min, -h), hi = std::min(j_max, h);
      StripField cut(dim, p, kmax, lo, hi, full.generator());
      for (std::size_t m = 0; m < full.modes().size(); ++m)
        for (int j = lo; j <= hi; ++j) cut.sample(m, j) = full.sample(m, j);
      const auto start = Clock::now();
      const StripErrors e = strip_errors(cache, cut, truth, queries, ctx.threads);
      std::vector<std::string> row{std::to_string(kmax), range_label(lo, hi), fmt(e.max_err), fmt(e.rms_err)};
      if (timing) row.push_back(fmt(std::chrono::duration<double>(Clock::now() - start).count()));
      rows.push_back(std::move(row));
      sweep_plot.emplace_back(h, e.max_err);
    }
    write_plot(ctx.out_dir / "strip_jsweep.dat", "j_half_range max_err", sweep_plot);
  }
  report.note("distinct_kernels", std::to_string(cache.size()));
  write_rows(ctx.out_dir / "strip_errors.csv", header, rows);
  write_plot(ctx.out_dir / "strip_plot.dat", "t abs_err", plot);
  return report;
}

// ---------------------------------------------------------------- verify

RunReport cmd_verify(const ExperimentConfig& cfg, const CommandContext& ctx) {
  RunReport report = make_report("verify", cfg, ctx);
  const std::uint64_t seed = seed_of(cfg, ctx);
  const FrequencyGrid grid = cfg.grid();
  const double t_half = cfg.kernel_half_width();
  if (!cfg.cutoff) report.note("default.cutoff", fmt(grid.cutoff));
  if (!cfg.grid_points) report.note("default.grid_points", std::to_string(grid.samples));
  if (!cfg.half_width) report.note("default.half_width", fmt(t_half));
  const int k_max = with_default(report, cfg.k_max, "k_max", 32);
  const int queries = with_default(report, cfg.queries, "queries", 200);
  const std::vector<SpectrumVector> battery = test_battery();
  Uniform u(seed);

  log_line(ctx, "verify: Euler-Frobenius structure");
  guarded(report, "ef_zeros", [&] {
    double max_imag = 0.0, max_pair = 0.0, largest = -std::numeric_limits<double>::infinity();
    double mismatches = 0.0;
    std::string detail;
    for (const auto& lambda : battery) {
      try {
        const EFZeros z = ef_zeros(lambda);
        max_imag = std::max(max_imag, z.max_imaginary);
        if (lambda.is_symmetric()) max_pair = std::max(max_pair, z.pairing_residual);
        for (double v : z.zeros) largest = std::max(largest, v);
        if (z.zeros.size() != static_cast<std::size_t>(lambda.order() - 2)) mismatches += 1;
      } catch (const Error& e) {
        mismatches += 1;
        detail = e.what();
      }
    }
    report.check_le("ef_zeros.failures", mismatches, 0.0, detail);
    report.check_le("ef_zeros.max_relative_imaginary", max_imag, 1e-8);
    report.check_le("ef_zeros.reciprocal_pairing", max_pair, 1e-8);
    report.record({"ef_zeros.largest_zero_negative", largest, 0.0, largest < 0.0, ""});
  });

  guarded(report, "ef_zeros.cubic_benchmark", [&] {
    const EFZeros z = ef_zeros(SpectrumVector::from_entries({{0.0, 4}}));
    const double err = std::max(std::abs(z.zeros.at(0) - (-2.0 - std::sqrt(3.0))), std::abs(z.zeros.at(1) - (-2.0 + std::sqrt(3.0))));
    report.check_le("ef_zeros.cubic_benchmark", err, 1e-10);
  });

  guarded(report, "ef_bound", [&] {
    double worst = 0.0;
    for (const auto& lambda : battery) {
      if (!lambda.is_symmetric()) continue;
      const EFPolynomial pi = ef_polynomial(lambda);
      const double lo = std::abs(pi(-1.0)), hi = std::abs(pi(1.0));
      for (int i = 0; i < 1024; ++i) {
        const double v = std::abs(pi(std::polar(1.0, 2.0 * std::numbers::pi * i / 1024)));
        worst = std::max({worst, (lo - v) / hi, (v - hi) / hi});
      }
    }
    report.check_le("ef_bound.violation", worst, 1e-10, "relative to |Pi(1)|");
  });

  log_line(ctx, "verify: functional identities");
  guarded(report, "functional", [&] {
    double fieq = 0.0, fipi2 = 0.0, fisym = 0.0;
    for (const auto& lambda : battery) {
      const TBSpline q(lambda);
      const int n = q.order();
      const auto abs_sum = [&](double x, cd z) {
        double s = 0.0;
        for (long j = static_cast<long>(std::floor(x - n)); j <= static_cast<long>(std::ceil(x)); ++j)
          s += std::pow(std::abs(z), static_cast<double>(j)) * std::abs(q(x - static_cast<double>(j)));
        return s;
      };
      for (int i = 0; i < 20; ++i) {
        const double x = u(-2.0, n + 2.0);
        const cd z = std::polar(u(0.5, 2.0), u(0.0, 2.0 * std::numbers::pi));
        const double scale = abs_sum(x + 1.0, z) + std::abs(z) * abs_sum(x, z);
        fieq = std::max(fieq, std::abs(phi_big(q, x + 1.0, z) - z * phi_big(q, x, z)) / scale);
        if (n % 2 == 0) {
          const cd w = std::polar(1.0, u(0.0, 2.0 * std::numbers::pi));
          const cd lhs = phi_big(q, n / 2.0, w), rhs = std::pow(w, n / 2) * phi_big(q, 0.0, w);
          fipi2 = std::max(fipi2, std::abs(lhs - rhs) / abs_sum(n / 2.0, w));
          if (lambda.is_symmetric()) {
            const cd zz = i == 0 ? cd(2.0, 0.0) : z;
            const cd a = phi_big(q, n / 2.0, 1.0 / zz), b = phi_big(q, n / 2.0, zz);
            fisym = std::max(fisym, std::abs(a - b) / (abs_sum(n / 2.0, zz) + abs_sum(n / 2.0, 1.0 / zz)));
          }
        }
      }
    }
    report.check_le("phi_quasi_periodicity", fieq, 1e-9);
    report.check_le("phi_half_shift", fipi2, 1e-9);
    report.check_le("phi_inversion_symmetry", fisym, 1e-9);
  });

  log_line(ctx, "verify: exact vs FFT tabulation");
  guarded(report, "qn_fft_agreement", [&] {
    double worst = 0.0;
    for (int p = 1; p <= 2; ++p) {
      for (int k = 0; k <= 16; ++k) {
        const SpectrumVector lambda = build_lambda_radial(k, 3, p);
        const TBSpline q(lambda);
        const QnTable t = qn_fft_tabulate(lambda, 16, 8192.0 * std::numbers::pi);
        for (std::size_t i = 0; i < t.values.size(); ++i)
          worst = std::max(worst, std::abs(t.values[i] - q(static_cast<double>(i) * t.step)) / q.peak());
      }
    }
    report.check_le("qn_fft_agreement", worst, 1e-7, "radial k <= 16, p = 1, 2");
  });

  log_line(ctx, "verify: kernel synthesis");
  std::vector<std::shared_ptr<const KernelTable>> kernels(battery.size());
  guarded(report, "kernel_cardinal_residual", [&] {
    double worst = 0.0;
    std::string where;
    parallel_for(static_cast<int>(battery.size()), ctx.threads, [&](int i) {
      kernels[static_cast<std::size_t>(i)] = std::make_shared<const KernelTable>(
          synthesize_kernel(battery[static_cast<std::size_t>(i)], grid, t_half, {.enforce_cardinal = false}));
    });
    for (const auto& k : kernels) {
      if (k->metadata().cardinal_residual > worst || std::isnan(k->metadata().cardinal_residual)) {
        worst = std::isnan(k->metadata().cardinal_residual) ? std::numeric_limits<double>::infinity()
                                                            : k->metadata().cardinal_residual;
        where = k->spectrum().describe();
      }
    }
    std::ostringstream detail;
    detail << "worst " << where << ", cutoff " << grid.cutoff << ", samples " << grid.samples;
    report.check_le("kernel_cardinal_residual", worst, 1e-6, detail.str());
  });

  log_line(ctx, "verify: 1-D reconstruction");
  guarded(report, "shannon_1d_exactness", [&] {
    double worst = 0.0;
    for (std::size_t b = 0; b < battery.size(); ++b) {
      const KernelTable& kernel = *kernels.at(b);
      const TBSpline& q = kernel.basis();
      for (int rep = 0; rep < 2; ++rep) {
        std::vector<double> c(17);
        for (double& x : c) x = u(-1.0, 1.0);
        std::map<int, double> samples;
        for (int j = -40; j <= 40; ++j) samples[j] = v0_function(q, -8, c, j);
        std::vector<double> pts;
        for (int i = 0; i <= 120; ++i) pts.push_back(-3.0 + 6.0 * i / 120);
        const Reconstruction r = reconstruct_1d(kernel, samples, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, std::abs(r.values[i] - v0_function(q, -8, c, pts[i])));
      }
    }
    report.check_le("shannon_1d_exactness", worst, 1e-6);
  });

  log_line(ctx, "verify: dual, reproduction, biorthogonality");
  guarded(report, "biorthogonality", [&] {
    double bio = 0.0, repro = 0.0;
    const GaussRule rule = gauss_legendre(16);
    const std::vector<SpectrumVector> reps{SpectrumVector::from_entries({{0.0, 4}}), build_lambda_strip(1, 2),
                                           build_lambda_radial(2, 3, 2)};
    for (const auto& lambda : reps) {
      const DualScaling dual(lambda);
      const KernelTable s0 = synthesize_kernel(lambda, grid, t_half);
      const auto integrate = [&](auto&& f, double a, double b) {
        double s = 0.0;
        for (double seg = a; seg < b; seg += 1.0)
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += 0.5 * rule.weights[i] * f(seg + 0.5 * (rule.nodes[i] + 1.0));
        return s;
      };
      const TBSpline& q = dual.basis();
      const auto q0 = [&](double x) { return dual.q_kernel(x, 0.0); };
      for (int j = -2; j <= 2; ++j) {
        for (int k = -2; k <= 2; ++k) {
          const double v = integrate([&](double t) { return q0(t - j) * s0(t - k); }, -36.0, 36.0);
          bio = std::max(bio, std::abs(v - (j == k ? 1.0 : 0.0)));
        }
      }
      for (double x : {-0.7, 1.3, 2.5, 3.9}) {
        const double v = integrate([&](double y) { return dual.q_kernel(x, y) * q(y - 2.0); }, -4.0, 12.0);
        repro = std::max(repro, std::abs(v - q(x - 2.0)) / q.peak());
      }
    }
    report.check_le("biorthogonality", bio, 1e-5);
    report.check_le("reproduction", repro, 1e-5);
  });

  log_line(ctx, "verify: decay");
  guarded(report, "decay", [&] {
    for (int p = 1; p <= 2; ++p) {
      const auto rows = decay_check(3, p, k_max, grid, t_half, ctx.threads);
      const DecayWindows w = decay_windows(rows);
      const std::string tag = "p" + std::to_string(p);
      if (k_max >= 8) {
        report.check_le("decay.k_sup_fourier_max_over_min." + tag, w.fourier_ratio, 4.0);
        report.check_le("decay.sup_time_max_over_median." + tag, w.time_ratio, 3.0);
      }
      report.check_le("decay.sup_time_max_over_median_all_k." + tag, w.time_ratio_all, 3.0);
    }
  });

  log_line(ctx, "verify: spherical reconstruction");
  guarded(report, "sphere", [&] {
    const ShannonPolysplineKernel kernel(3, 2, 8, grid, t_half, ctx.threads);
    const SyntheticSphereField truth(3, 2, 8, -6, 6, seed);
    const SphereErrors e = sphere_errors(kernel, truth.sample(), truth, sphere_queries(queries, seed), ctx.threads);
    report.check_le("sphere.max_relative_error", e.max_err, 1e-4);
    report.check_le("sphere.single_mode_leakage", single_mode_leakage(kernel, 2, 8, -6, 6), 1e-9);
  });

  log_line(ctx, "verify: strip reconstruction");
  guarded(report, "strip", [&] {
    StripKernelCache cache(1, grid, t_half);
    const SyntheticStripField truth(2, 1, 4, -8, 8, seed);
    const StripField field = truth.sample();
    const StripErrors e = strip_errors(cache, field, truth, strip_queries(queries, 2, seed), ctx.threads);
    report.check_le("strip.max_error", e.max_err, 1e-5);
    report.check_le("strip.max_imaginary", e.max_imag, 1e-9);
    const auto k0 = cache.get(0);
    const KernelTable linear = synthesize_kernel(SpectrumVector::from_entries({{0.0, 2}}), grid, t_half);
    const bool same = k0->values() == linear.values() && k0->coefficients() == linear.coefficients();
    report.record({"strip.k0_kernel_bit_identical", same ? 0.0 : 1.0, 0.0, same, "against the classical linear kernel"});
  });

  guarded(report, "persistence", [&] {
    const KernelTable k = synthesize_kernel(SpectrumVector::from_entries({{0.0, 4}}), grid, t_half);
    std::ostringstream a;
    k.write(a);
    std::istringstream in(a.str());
    std::ostringstream b;
    KernelTable::read(in).write(b);
    const bool same = a.str() == b.str();
    report.record({"kernel_round_trip_bit_exact", same ? 0.0 : 1.0, 0.0, same, ""});
  });
  return report;
}

int run_command(const std::string& command, const ExperimentConfig& config, const CommandContext& ctx) {
  if (config.mode && *config.mode != command)
    throw std::invalid_argument("config mode '" + *config.mode + "' does not match command '" + command + "'");
  std::filesystem::create_directories(ctx.out_dir);
  RunReport report = [&] {
    if (command == "kernel1d") return cmd_kernel1d(config, ctx);
    if (command == "zeros") return cmd_zeros(config, ctx);
    if (command == "decay") return cmd_decay(config, ctx);
    if (command == "reconstruct-sphere") return cmd_reconstruct_sphere(config, ctx);
    if (command == "reconstruct-strip") return cmd_reconstruct_strip(config, ctx);
    if (command == "verify") return cmd_verify(config, ctx);
    throw std::invalid_argument("unknown command '" + command + "'");
  }();
  std::string stem = command;
  std::replace(stem.begin(), stem.end(), '-', '_');
  report.save(ctx.out_dir, stem + "_report");
  return report.all_passed() ? 0 : 1;
}

}  // namespace polyshannon
