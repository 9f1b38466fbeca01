#include <random>
#include <sstream>

#include "../oracles.hpp"
#include "doctest.h"
#include "polyshannon/commands.hpp"
#include "polyshannon/dual.hpp"
#include "polyshannon/errors.hpp"
#include "polyshannon/shannon1d.hpp"

using namespace polyshannon;
using cd = std::complex<double>;

namespace {

SpectrumVector zeros(int n) { return SpectrumVector::from_entries({{0.0, n}}); }
constexpr double pi = std::numbers::pi;

const KernelTable& cubic_kernel() {
  static const KernelTable k = synthesize_kernel(zeros(4));
  return k;
}

// {−c ×2, 0 ×2} with c chosen by bisection so that φ*(π) = 0.
SpectrumVector degenerate_vector() {
  auto f = [](double c) { return phi_star(SpectrumVector::from_values({-c, -c, 0, 0}), pi).real(); };
  double lo = 0.1, hi = 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) > 0) == (f(lo) > 0) ? lo : hi) = mid;
  }
  return SpectrumVector::from_values({-lo, -lo, 0, 0});
}

}  // namespace

TEST_CASE("phi_star examples") {
  for (double xi : {-2.0, 0.0, 0.7, 3.0}) CHECK(std::abs(std::abs(phi_star(zeros(2), xi)) - 1.0) < 1e-14);
  CHECK(std::abs(phi_star(zeros(2), 0.7) - std::polar(1.0, -0.7)) < 1e-14);
  CHECK(std::abs(phi_star(zeros(4), pi)) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  const auto v = build_lambda_radial(3, 3, 2);
  for (double xi : {0.3, 1.1, -2.4}) CHECK(std::abs(phi_star(v, xi + 2 * pi) - phi_star(v, xi)) < 1e-12);
}

TEST_CASE("non-zero margin examples") {
  const NonzeroMargin c = nonzero_margin(zeros(4));
  CHECK(c.margin == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(c.argmin == doctest::Approx(pi));
  CHECK(c.guaranteed);
  CHECK(nonzero_margin(zeros(2)).margin == doctest::Approx(1.0));
  const NonzeroMargin r = nonzero_margin(build_lambda_radial(2, 3, 2));
  CHECK(r.margin > 0.0);
  CHECK(r.guaranteed);
  CHECK_FALSE(is_guaranteed_samplable(build_lambda_radial(2, 2, 2)));
  CHECK_FALSE(is_guaranteed_samplable(SpectrumVector::from_values({-1.0, 0.5})));
}

TEST_CASE("vectors with a vanishing symbol are refused") {
  const auto v = degenerate_vector();
  CHECK(nonzero_margin(v).relative < 1e-9);
  CHECK_FALSE(nonzero_margin(v).guaranteed);
  CHECK_THROWS_AS(synthesize_kernel(v), NotSamplableError);
}

TEST_CASE("s0_hat examples") {
  for (double xi : {0.4, 1.7, -3.0}) {
    const cd s = s0_hat(zeros(2), xi);
    CHECK(std::abs(s - qn_hat(zeros(2), xi) * std::polar(1.0, xi)) < 1e-14);
    CHECK(std::abs(s.imag()) < 1e-14);
    CHECK(s.real() == doctest::Approx(std::pow(std::sin(xi / 2) / (xi / 2), 2)).epsilon(1e-12));
  }
  const auto v = build_lambda_radial(1, 3, 2);
  CHECK(std::abs(s0_hat(v, 0.0) - qn_hat(v, 0.0) / phi_star(v, 0.0)) < 1e-14);
  CHECK(std::abs(s0_hat(zeros(4), pi)) == doctest::Approx(3.0 * 16.0 / std::pow(pi, 4)).epsilon(1e-12));
}

TEST_CASE("s0_hat is scale invariant and conjugate symmetric") {
  for (const auto& v : {zeros(4), build_lambda_radial(2, 3, 2), build_lambda_strip(3, 1)}) {
    const TBSpline q(v);
    for (double xi : {0.2, 1.3, 4.9, 17.0}) {
      const cd a = s0_hat(v, xi);
      const cd b = (2.0 * q.fourier(xi)) / (2.0 * phi_star(q, xi));
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
      CHECK(std::abs(s0_hat(v, -xi) - std::conj(a)) <= 1e-12 * std::abs(a));
    }
  }
}

TEST_CASE("hat kernel") {
  const KernelTable k = synthesize_kernel(zeros(2));
  CHECK(k(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(k(-0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(k(1.0)) < 1e-12);
  CHECK(std::abs(k(-1.0)) < 1e-12);
  CHECK(std::abs(k(2.3)) < 1e-12);
}

TEST_CASE("cubic kernel is cardinal, real and even") {
  const KernelTable& k = cubic_kernel();
  CHECK(k(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (int j = 1; j <= 30; ++j) {
    CHECK(std::abs(k(j)) < 1e-12);
    CHECK(std::abs(k(-j)) < 1e-12);
  }
  for (double t : {0.3, 1.7, 4.25, 11.1}) CHECK(std::abs(k(t) - k(-t)) < 1e-8);
  CHECK(std::abs(k(k.half_width() + 0.5)) == 0.0);
}

TEST_CASE("kernel metadata") {
  const KernelTable& k = cubic_kernel();
  const KernelMetadata& m = k.metadata();
  CHECK(m.grid == FrequencyGrid{});
  CHECK(m.margin == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(m.cardinal_residual <= 1e-6);
  CHECK(std::abs(k(m.half_width)) <= std::max(m.tail_estimate, 1e-300));
  CHECK(k.step() == doctest::Approx(1.0 / 64.0));
  CHECK(k.values().size() == 30 * 64 * 2 + 1);
}

TEST_CASE("cardinal property across the battery") {
  for (const auto& v : test_battery()) {
    CAPTURE(v.describe());
    const KernelTable k = synthesize_kernel(v);
    CHECK(k.metadata().cardinal_residual <= 1e-6);
    if (v.is_symmetric()) {
      const auto& vals = k.values();
      for (std::size_t i = 0; i < vals.size(); i += 37) CHECK(std::abs(vals[i] - vals[vals.size() - 1 - i]) <= 1e-8);
    }
  }
}

TEST_CASE("irrational strip frequency") {
  const KernelTable k = synthesize_kernel(build_lambda_strip(std::sqrt(2.0), 1));
  CHECK(k(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  for (int j = 1; j <= 10; ++j) CHECK(std::abs(k(j)) < 1e-10);
}

TEST_CASE("synthesis preconditions") {
  CHECK_THROWS_AS(synthesize_kernel(SpectrumVector::from_values({0.0, 0.0, 0.0})), RestrictionError);
  CHECK_THROWS_AS(synthesize_kernel(zeros(4), FrequencyGrid{64 * pi, 1000}), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_kernel(zeros(4), FrequencyGrid{pi, 1024}), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_kernel(zeros(20)), AccuracyError);
}

TEST_CASE("too coarse a frequency grid fails the cardinal check") {
  const FrequencyGrid coarse{512 * pi, 1024};
  CHECK(coarse.period_samples() == 2);
  CHECK_THROWS_AS(synthesize_kernel(zeros(4), coarse), SynthesisError);
  const KernelTable k = synthesize_kernel(zeros(4), coarse, 30.0, {.enforce_cardinal = false});
  CHECK(k.metadata().cardinal_residual > 1e-5);
}

TEST_CASE("spectral route agrees with the coefficient route") {
  for (const auto& v : {zeros(4), build_lambda_radial(2, 3, 2), build_lambda_strip(1, 3)}) {
    const KernelTable k = synthesize_kernel(v);
    const auto s = synthesize_kernel_spectral(v);
    REQUIRE(s.size() == k.values().size());
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] - k.values()[i]));
    CAPTURE(v.describe());
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("reconstruct_1d examples") {
  const KernelTable& k = cubic_kernel();
  const TBSpline q(zeros(4));
  std::map<int, double> samples;
  for (int j = -35; j <= 40; ++j) samples[j] = q(j - 3.0);
  std::vector<double> pts;
  for (int i = 0; i <= 120; ++i) pts.push_back(6.0 * i / 120);
  const Reconstruction r = reconstruct_1d(k, samples, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(r.values[i] - q(pts[i] - 3.0)) <= 1e-6);

  std::map<int, double> zero;
  for (int j = -10; j <= 10; ++j) zero[j] = 0.0;
  for (double v : reconstruct_1d(k, zero, {-1.0, 0.3, 2.2}).values) CHECK(v == 0.0);

  const Reconstruction self = reconstruct_1d(k, {{0, 1.0}}, {-2.5, 0.0, 0.4, 7.9});
  for (std::size_t i = 0; i < 4; ++i) CHECK(self.values[i] == doctest::Approx(k(std::vector<double>{-2.5, 0.0, 0.4, 7.9}[i])));
  CHECK_THROWS_AS(reconstruct_1d(k, {{0, 1.0}}, {45.0}), ExtrapolationError);
}

TEST_CASE("reconstruction is exact on V0") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& v : {zeros(2), zeros(4), zeros(8), build_lambda_radial(0, 3, 1), build_lambda_radial(5, 3, 2),
                        build_lambda_strip(2, 2), build_lambda_strip(8, 1)}) {
    const KernelTable k = synthesize_kernel(v);
    const TBSpline& q = k.basis();
    std::vector<double> c(17);
    for (double& x : c) x = u(rng);
    auto f = [&](double t) {
      double s = 0.0;
      for (int j = -8; j <= 8; ++j) s += c[static_cast<std::size_t>(j + 8)] * q(t - j);
      return s / q.scale();
    };
    std::map<int, double> samples;
    for (int j = -40; j <= 40; ++j) samples[j] = f(j);
    std::vector<double> pts;
    for (int i = 0; i <= 600; ++i) pts.push_back(-3.0 + 6.0 * i / 600);
    const Reconstruction r = reconstruct_1d(k, samples, pts);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, std::abs(r.values[i] - f(pts[i])));
    CAPTURE(v.describe());
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("Riesz ratio stays inside the symbol bounds") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& v : {zeros(4), build_lambda_radial(3, 3, 2), build_lambda_strip(2, 1)}) {
    const TBSpline q(v);
    const RieszBounds b = riesz_bounds(q);
    CHECK(b.lower > 0.0);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> c(17);
      double norm_c = 0.0;
      for (double& x : c) norm_c += (x = u(rng)) * x;
      const auto f = [&](double t) {
        double s = 0.0;
        for (int j = 0; j < 17; ++j) s += c[static_cast<std::size_t>(j)] * q(t - j);
        return s * s;
      };
      const double ratio = oracle::integrate_panels(f, 0.0, 17.0 + q.order()) / norm_c;
      CHECK(ratio >= b.lower * (1 - 1e-9));
      CHECK(ratio <= b.upper * (1 + 1e-9));
    }
  }
}

TEST_CASE("kernel persistence") {
  const KernelTable& k = cubic_kernel();
  std::ostringstream a;
  k.write(a);
  std::istringstream in(a.str());
  const KernelTable back = KernelTable::read(in);
  std::ostringstream b;
  back.write(b);
  CHECK(a.str() == b.str());
  CHECK(back.values() == k.values());
  CHECK(back.coefficients() == k.coefficients());
  CHECK(back.spectrum() == k.spectrum());
  CHECK(back(0.37) == k(0.37));

  const std::string bytes = a.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(KernelTable::read(truncated), ParseError);
  std::string bad = bytes;
  bad[0] = 'X';
  std::istringstream wrong(bad);
  try {
    KernelTable::read(wrong);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
  }
}
