#include <random>
#include <set>
#include <sstream>

#include "../oracles.hpp"
#include "doctest.h"
#include "polyshannon/errors.hpp"
#include "polyshannon/strip.hpp"

using namespace polyshannon;
using cd = std::complex<double>;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("torus mode sets") {
  const TorusModeSet s(2, 4);
  CHECK(s.index_of({0, 0}) >= 0);
  for (const Mode& m : s.modes()) {
    CHECK(TorusModeSet::norm_squared(m) <= 16);
    Mode neg = m;
    for (int& c : neg) c = -c;
    CHECK(s.index_of(neg) >= 0);
  }
  CHECK(std::is_sorted(s.modes().begin(), s.modes().end()));
  std::size_t count = 0;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) count += a * a + b * b <= 16;
  CHECK(s.size() == count);
  CHECK(s.index_of({5, 0}) == -1);
  CHECK(s.grid_size() == 16);
  CHECK(TorusModeSet(1, 3).grid_size() == 8);
  CHECK_THROWS_AS(TorusModeSet(4, 1), std::invalid_argument);
}

TEST_CASE("strip kernels") {
  const KernelTable hat = strip_kernel(0, 1);
  for (double t : {-1.5, -0.7, 0.0, 0.25, 0.9, 2.0}) CHECK(hat(t) == doctest::Approx(std::max(0.0, 1.0 - std::abs(t))).epsilon(1e-12).scale(1.0));
  const KernelTable r2 = strip_kernel(std::sqrt(2.0), 1);
  CHECK(r2.spectrum() == SpectrumVector::from_values({-std::sqrt(2.0), std::sqrt(2.0)}));
  CHECK(r2.metadata().cardinal_residual <= 1e-6);
  const KernelTable cubic = strip_kernel(0, 2);
  const KernelTable classical = synthesize_kernel(SpectrumVector::from_entries({{0.0, 4}}));
  CHECK(cubic.values() == classical.values());
  CHECK(cubic.coefficients() == classical.coefficients());
}

TEST_CASE("kernels are shared by modes of equal length") {
  StripKernelCache cache(1);
  const TorusModeSet s(2, 5);
  cache.warm(s, 4);
  std::set<long> norms;
  for (const Mode& m : s.modes()) norms.insert(TorusModeSet::norm_squared(m));
  CHECK(cache.size() == norms.size());
  const auto a = cache.get(TorusModeSet::norm_squared({3, 4}));
  const auto b = cache.get(TorusModeSet::norm_squared({5, 0}));
  CHECK(a == b);
  CHECK(a->values() == strip_kernel(5.0, 1).values());
}

TEST_CASE("torus analysis") {
  const TorusModeSet s(2, 3);
  const int g = s.grid_size();
  std::vector<double> constant(static_cast<std::size_t>(g * g), 2.5);
  const auto c = analyze_torus(s, constant);
  for (std::size_t m = 0; m < s.size(); ++m)
    CHECK(std::abs(c[m] - (s[m] == Mode{0, 0} ? cd(2.5) : cd(0.0))) < 1e-13);

  std::vector<double> wave;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) wave.push_back(std::cos(2 * pi * (2.0 * a + 1.0 * b) / g));
  const auto w = analyze_torus(s, wave);
  for (std::size_t m = 0; m < s.size(); ++m) {
    const bool hit = s[m] == Mode{2, 1} || s[m] == Mode{-2, -1};
    CHECK(std::abs(w[m] - (hit ? cd(0.5) : cd(0.0))) < 1e-13);
  }
}

TEST_CASE("torus round trip on band-limited data") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int d = 1; d <= 3; ++d) {
    const TorusModeSet s(d, 3);
    std::vector<cd> c(s.size());
    for (std::size_t m = 0; m < s.size(); ++m) {
      Mode neg = s[m];
      for (int& x : neg) x = -x;
      const auto p = static_cast<std::size_t>(s.index_of(neg));
      c[m] = p < m ? std::conj(c[p]) : (p == m ? cd(u(rng), 0.0) : cd(u(rng), u(rng)));
    }
    const int g = s.grid_size();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(g);
    std::vector<double> values(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<double> y(static_cast<std::size_t>(d));
      std::size_t rem = idx;
      for (int i = d - 1; i >= 0; --i) {
        y[static_cast<std::size_t>(i)] = 2 * pi * double(rem % static_cast<std::size_t>(g)) / g;
        rem /= static_cast<std::size_t>(g);
      }
      const cd v = synthesize_torus(s, c.data(), y);
      CHECK(std::abs(v.imag()) < 1e-12);
      values[idx] = v.real();
    }
    const auto back = analyze_torus(s, values);
    for (std::size_t m = 0; m < s.size(); ++m) CHECK(std::abs(back[m] - c[m]) <= 1e-10);
  }
}

TEST_CASE("plane values of the synthetic field match its analysis") {
  const SyntheticStripField f(2, 1, 3, -8, 8, 4);
  const auto c = analyze_torus(f.modes(), f.plane_values(0.3));
  for (std::size_t m = 0; m < f.modes().size(); ++m) CHECK(std::abs(c[m] - f.profile(m, 0.3)) <= 1e-10);
}

TEST_CASE("single mode with a cubic B-spline profile") {
  StripField field(1, 2, 0, -8, 8);
  for (int j = -8; j <= 8; ++j) field.sample(0, j) = oracle::bspline(4, j + 1.0);
  StripKernelCache cache(2);
  std::vector<StripQuery> q;
  for (double t = -3.0; t <= 3.0; t += 0.125) q.push_back({t, {0.4}});
  const auto rec = reconstruct_strip(cache, field, q);
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(std::abs(rec.values[i] - oracle::bspline(4, q[i].t + 1.0)) <= 1e-6);
}

TEST_CASE("zero strip field") {
  StripKernelCache cache(1);
  const auto rec = reconstruct_strip(cache, StripField(2, 1, 2, -8, 8), {{0.5, {1.0, 2.0}}, {-1.0, {0.0, 0.0}}});
  for (cd v : rec.values) CHECK(v == cd(0.0));
}

TEST_CASE("random strip field") {
  const SyntheticStripField truth(2, 1, 4, -8, 8, 31);
  const StripField field = truth.sample();
  CHECK(field.conjugate_asymmetry() == 0.0);
  StripKernelCache cache(1);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  std::vector<StripQuery> q;
  for (int i = 0; i < 300; ++i) q.push_back({-3.0 + 6.0 * i / 299, {u(rng), u(rng)}});
  const auto rec = reconstruct_strip(cache, field, q, 4);
  double err = 0.0, imag = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    err = std::max(err, std::abs(rec.values[i].real() - truth(q[i].t, q[i].y)));
    imag = std::max(imag, std::abs(rec.values[i].imag()));
  }
  CHECK(err <= 1e-5);
  CHECK(imag <= 1e-9);
  CHECK(rec.warnings.empty());
  CHECK_THROWS_AS(reconstruct_strip(*std::make_unique<StripKernelCache>(2), field, q), std::invalid_argument);
}

TEST_CASE("strip field files") {
  const StripField f = SyntheticStripField(2, 1, 2, -5, 5, 8).sample();
  std::ostringstream text, bin;
  f.write_text(text);
  f.write_binary(bin);
  std::istringstream ti(text.str()), bi(bin.str());
  CHECK(StripField::read(ti) == f);
  CHECK(StripField::read(bi) == f);
  CHECK(bin.str().substr(0, 4) == "PSSF");
  std::string bad = text.str();
  const auto pos = bad.find("d 2");
  REQUIRE(pos != std::string::npos);
  bad[pos + 2] = '7';
  std::istringstream bi2(bad);
  try {
    StripField::read(bi2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == pos + 2);
  }
}
