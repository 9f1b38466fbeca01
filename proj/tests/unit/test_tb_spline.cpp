#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "polyshannon/commands.hpp"
#include "polyshannon/errors.hpp"
#include "polyshannon/tb_spline.hpp"

using namespace polyshannon;
using cd = std::complex<double>;
using Side = PiecewiseExpSpline::Side;

namespace {

SpectrumVector zeros(int n) { return SpectrumVector::from_entries({{0.0, n}}); }

std::vector<SpectrumVector> trusted_battery() {
  std::vector<SpectrumVector> out;
  for (const auto& v : test_battery())
    if (TBSpline(v).trusted()) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("qn_hat examples") {
  CHECK(std::abs(qn_hat(zeros(2), 0.0) - 1.0) < 1e-15);
  CHECK(qn_hat(SpectrumVector::from_values({-1.0, 1.0}), 0.0).real() ==
        doctest::Approx((1.0 - std::exp(-1.0)) * (std::exp(1.0) - 1.0)));
  const cd v = qn_hat(zeros(4), std::numbers::pi);
  CHECK(v.real() == doctest::Approx(16.0 / std::pow(std::numbers::pi, 4)).epsilon(1e-12));
  CHECK(std::abs(v.imag()) < 1e-14);
  CHECK(std::abs(v - oracle::fourier_product({0, 0, 0, 0}, std::numbers::pi)) < 1e-14);
}

TEST_CASE("qn_hat matches the direct product away from removable points") {
  for (const auto& v : {build_lambda_radial(3, 3, 2), build_lambda_strip(2, 1), SpectrumVector::from_values({-0.5, 0.7, 1.9})}) {
    for (double xi : {-7.3, -0.4, 0.9, 2.5, 11.0}) {
      const cd a = qn_hat(v, xi), b = oracle::fourier_product(v.expanded(), xi);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
    }
  }
  // series branch near ξ = 0: Q̂₄(ξ) = e^{−2iξ} (sin(ξ/2)/(ξ/2))⁴
  const auto z = zeros(4);
  for (double xi : {1e-9, 1e-7, 3e-4, 2e-3}) {
    const cd closed = std::polar(std::pow(std::sin(xi / 2) / (xi / 2), 4), -2.0 * xi);
    CHECK(std::abs(qn_hat(z, xi) - closed) < 1e-14);
  }
}

TEST_CASE("Green's function examples") {
  const GreenExpansion g2 = green_expansion(zeros(2));
  for (double t : {0.0, 0.3, 2.0, 7.5}) CHECK(g2.causal(t) == doctest::Approx(t));
  CHECK(g2.causal(-0.5) == 0.0);
  const GreenExpansion gpm = green_expansion(SpectrumVector::from_values({-1.0, 1.0}));
  for (double t : {0.1, 1.0, 3.0}) CHECK(gpm.causal(t) == doctest::Approx(std::sinh(t)).epsilon(1e-13));
  const GreenExpansion g1 = green_expansion(SpectrumVector::from_values({0.0}));
  CHECK(g1.causal(0.4) == doctest::Approx(1.0));
  CHECK(g1.causal(-0.4) == 0.0);
}

TEST_CASE("Green's function jump conditions") {
  for (const auto& v : {zeros(4), build_lambda_radial(2, 3, 2), build_lambda_strip(1, 3), SpectrumVector::from_values({-2.0, 0.5, 0.5, 3.0, 3.0})}) {
    const GreenExpansion g(v);
    for (int m = 0; m + 2 <= v.order(); ++m) CHECK(std::abs(g.derivative_at_zero(m)) < 1e-10);
    CHECK(g.derivative_at_zero(v.order() - 1) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("near-coincident frequencies are a conditioning error") {
  CHECK_THROWS_AS(green_expansion(SpectrumVector::from_values({0.0, 1e-9})), ConditioningError);
}

TEST_CASE("qn_exact examples") {
  CHECK(qn_exact(zeros(2), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(qn_exact(zeros(4), 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  for (const auto& v : test_battery()) CHECK(qn_exact(v, -0.5) == 0.0);
  CHECK_THROWS_AS(qn_exact(zeros(16), 1.0), AccuracyError);
}

TEST_CASE("classical B-spline oracle agreement") {
  std::mt19937_64 rng(11);
  for (int p = 1; p <= 4; ++p) {
    const int n = 2 * p;
    const TBSpline q(zeros(n));
    std::uniform_real_distribution<double> u(-0.5, n + 0.5);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double t = u(rng);
      worst = std::max(worst, std::abs(q(t) - oracle::bspline(n, t)));
    }
    CAPTURE(n);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("support and positivity") {
  for (const auto& v : trusted_battery()) {
    const TBSpline q(v);
    const int n = q.order();
    CAPTURE(v.describe());
    for (int i = 1; i <= 100; ++i) CHECK(q(n * i / 101.0) > 0.0);
    CHECK(q(-1e-9) == 0.0);
    CHECK(q(n + 1e-9) == 0.0);
    CHECK(q(n + 3.0) == 0.0);
  }
}

TEST_CASE("C^{N-2} smoothness at the knots") {
  for (const auto& v : trusted_battery()) {
    const TBSpline q(v);
    const int n = q.order();
    double scale = 0.0;
    for (int j = 1; j < n; ++j) scale = std::max(scale, std::abs(q.integer_value(j)));
    CAPTURE(v.describe());
    for (int j = 0; j <= n; ++j) {
      for (int m = 0; m <= n - 2; ++m) {
        const double l = q.derivative(j, m, Side::left), r = q.derivative(j, m, Side::right);
        const double ref = std::max({std::abs(l), std::abs(r), scale * std::pow(1.0 + v.max_abs(), m)});
        CHECK(std::abs(l - r) <= 1e-8 * ref);
      }
    }
  }
}

TEST_CASE("FFT tabulation examples") {
  const QnTable t4 = qn_fft_tabulate(zeros(4), 16, 4096.0 * std::numbers::pi);
  const auto peak = std::max_element(t4.values.begin(), t4.values.end());
  CHECK(*peak == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(static_cast<double>(peak - t4.values.begin()) * t4.step == doctest::Approx(2.0));
  const QnTable t2 = qn_fft_tabulate(zeros(2), 16, 4096.0 * std::numbers::pi);
  CHECK(t2.values[8] == doctest::Approx(0.5).epsilon(1e-6));
  for (const auto& v : {zeros(4), build_lambda_radial(2, 3, 1), build_lambda_strip(3, 2)}) {
    const QnTable t = qn_fft_tabulate(v, 16, 4096.0 * std::numbers::pi);
    double sum = 0.0;
    for (double x : t.values) sum += x;
    CHECK(sum * t.step == doctest::Approx(qn_hat(v, 0.0).real()).epsilon(1e-2));
  }
  CHECK_THROWS_AS(qn_fft_tabulate(zeros(4), 8, 1024.0), std::invalid_argument);
}

TEST_CASE("FFT tabulation agrees with the exact expansion") {
  for (const auto& v : {zeros(4), zeros(6), build_lambda_radial(5, 3, 2), build_lambda_strip(4, 1), build_lambda_radial(16, 3, 1)}) {
    const TBSpline q(v);
    const QnTable t = qn_fft_tabulate(v, 16, 8192.0 * std::numbers::pi);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i)
      worst = std::max(worst, std::abs(t.values[i] - q(static_cast<double>(i) * t.step)));
    CAPTURE(v.describe());
    CHECK(worst / q.peak() <= 1e-7);
    CHECK(t.truncation_estimate >= 0.0);
  }
}

TEST_CASE("Fourier consistency of the tabulation") {
  // Poisson summation: h Σ_i Q(ih) e^{−iξih} = Σ_m Q̂(ξ + 2πm/h).
  for (const auto& v : {zeros(4), build_lambda_strip(2, 2), build_lambda_radial(3, 3, 2), build_lambda_strip(5, 2)}) {
    if (v.max_abs() * v.order() > 40) continue;
    const QnTable t = qn_fft_tabulate(v, 16, 8192.0 * std::numbers::pi);
    const double h = t.step;
    const double ref = std::abs(qn_hat(v, 0.0));
    double worst = 0.0;
    for (int s = -8; s <= 8; ++s) {
      const double xi = 0.37 * s * std::numbers::pi;
      cd lhs = 0.0;
      for (std::size_t i = 0; i < t.values.size(); ++i) lhs += h * t.values[i] * std::polar(1.0, -xi * h * double(i));
      cd rhs = 0.0;
      for (int m = -400; m <= 400; ++m) rhs += qn_hat(v, xi + 2.0 * std::numbers::pi * m / h);
      worst = std::max(worst, std::abs(lhs - rhs) / ref);
    }
    CAPTURE(v.describe());
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("phi_big examples and identities") {
  CHECK(std::abs(phi_big(zeros(4), 0.0, -1.0) - 1.0 / 3.0) < 1e-14);
  CHECK_THROWS_AS(phi_big(zeros(4), 0.0, 0.0), DomainError);
  const auto pm = SpectrumVector::from_values({-1.0, 1.0});
  CHECK(std::abs(phi_big(pm, 1.0, 0.5) - phi_big(pm, 1.0, 2.0)) < 1e-14 * std::abs(phi_big(pm, 1.0, 2.0)));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& v : trusted_battery()) {
    const TBSpline q(v);
    const int n = q.order();
    for (int i = 0; i < 20; ++i) {
      const double x = -3.0 + (n + 6.0) * u(rng);
      const cd z = std::polar(0.5 + 1.5 * u(rng), 2.0 * std::numbers::pi * u(rng));
      const cd a = phi_big(q, x + 1.0, z), b = z * phi_big(q, x, z);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(std::abs(a), q.peak() * std::pow(std::abs(z), std::ceil(x + 1.0))));
      if (n % 2 == 0) {
        const cd w = std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
        const cd lhs = phi_big(q, n / 2.0, w), rhs = std::pow(w, n / 2) * phi_big(q, 0.0, w);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * q.peak() * n);
      }
    }
  }
}

TEST_CASE("Phi at N/2 is invariant under z -> 1/z for symmetric vectors") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (const auto& v : trusted_battery()) {
    if (!v.is_symmetric()) continue;
    const TBSpline q(v);
    const double half = q.order() / 2.0;
    for (cd z : {cd(2.0, 0.0), std::polar(u(rng), u(rng)), std::polar(u(rng), -u(rng))}) {
      const cd a = phi_big(q, half, 1.0 / z), b = phi_big(q, half, z);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)) * q.peak());
    }
  }
}

TEST_CASE("Phi(0; z) does not vanish on the unit circle for symmetric vectors") {
  for (const auto& v : trusted_battery()) {
    if (!v.is_symmetric()) continue;
    const TBSpline q(v);
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 512; ++i) lo = std::min(lo, std::abs(phi_big(q, 0.0, std::polar(1.0, 2.0 * std::numbers::pi * i / 512))));
    CHECK(lo / q.scale() > 1e-9);
  }
}

TEST_CASE("Euler-Frobenius polynomial examples") {
  const EFPolynomial p4 = ef_polynomial(zeros(4));
  REQUIRE(p4.coefficients.size() == 3);
  CHECK(p4.coefficients[0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  CHECK(p4.coefficients[1] == doctest::Approx(-4.0 / 6.0).epsilon(1e-12));
  CHECK(p4.coefficients[2] == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  CHECK(p4.degree() == 2);
  const EFPolynomial p2 = ef_polynomial(zeros(2));
  CHECK(p2.degree() == 0);
  CHECK(p2.coefficients[0] == doctest::Approx(-1.0));
  CHECK(p4.interpolation_residual <= 1e-8);
}

TEST_CASE("Euler-Frobenius zeros") {
  const EFZeros z4 = ef_zeros(zeros(4));
  const auto [r0, r1] = oracle::quadratic_roots(1.0, 4.0, 1.0);
  REQUIRE(z4.zeros.size() == 2);
  CHECK(std::abs(z4.zeros[0] - r0) <= 1e-10);
  CHECK(std::abs(z4.zeros[1] - r1) <= 1e-10);
  CHECK(z4.zeros[0] == doctest::Approx(-3.7320508).epsilon(1e-7));
  CHECK(ef_zeros(zeros(2)).zeros.empty());
  const EFZeros zs = ef_zeros(build_lambda_strip(1, 2));
  REQUIRE(zs.zeros.size() == 2);
  CHECK(std::abs(zs.zeros[0] * zs.zeros[1] - 1.0) <= 1e-8);
  CHECK(zs.pairing_residual <= 1e-8);
}

TEST_CASE("Euler-Frobenius structure over the battery") {
  for (const auto& v : test_battery()) {
    CAPTURE(v.describe());
    const EFZeros z = ef_zeros(v);
    CHECK(z.zeros.size() == static_cast<std::size_t>(v.order() - 2));
    CHECK(z.max_imaginary <= 1e-8);
    for (double x : z.zeros) CHECK(x < 0.0);
    if (v.is_symmetric()) {
      CHECK(z.pairing_residual <= 1e-8);
      for (std::size_t j = 0; j < z.zeros.size(); ++j)
        CHECK(std::abs(z.zeros[j] * z.zeros[z.zeros.size() - 1 - j] - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("Euler-Frobenius bound on the unit circle") {
  for (const auto& v : test_battery()) {
    if (!v.is_symmetric()) continue;
    const EFPolynomial pi = ef_polynomial(v);
    const double lo = std::abs(pi(-1.0)), hi = std::abs(pi(1.0));
    for (int i = 0; i < 1024; ++i) {
      const double a = std::abs(pi(std::polar(1.0, 2.0 * std::numbers::pi * i / 1024)));
      CHECK(a >= lo - 1e-10 * hi);
      CHECK(a <= hi + 1e-10 * hi);
    }
  }
}

TEST_CASE("contour integral against the residue oracle") {
  CHECK(std::abs(a_eval(SpectrumVector::from_values({0.0}), 0.0, -1.0) - 0.5) < 1e-12);
  const cd pm = a_eval(SpectrumVector::from_values({-1.0, 1.0}), 0.0, -1.0);
  CHECK(std::abs(pm - oracle::residue_sum({-1.0, 1.0}, 0.0, -1.0)) < 1e-12);
  CHECK(pm.real() == doctest::Approx(-0.23105).epsilon(1e-4));
  const std::vector<double> lam{-1.5, 0.2, 0.9, 2.0};
  for (double x : {0.0, 0.3, 0.8})
    for (cd z : {std::polar(1.0, 2.0), std::polar(1.0, -0.7), cd(-1.0, 0.0)}) {
      const cd a = a_eval(SpectrumVector::from_values(lam), x, z), b = oracle::residue_sum(lam, x, z);
      CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
    }
  CHECK_THROWS_AS(a_eval(SpectrumVector::from_values({0.0, 0.0}), 0.0, 1.0), DomainError);
}

TEST_CASE("contour representation reproduces the Euler-Frobenius polynomial") {
  const cd z = std::polar(1.0, std::numbers::pi / 3.0);
  for (const auto& v : {zeros(4), build_lambda_strip(1, 2), build_lambda_radial(2, 3, 2), build_lambda_radial(0, 3, 1)}) {
    const cd pi = ef_polynomial(v)(z);
    CHECK(std::abs(r_poly(v, z) * a_eval(v, 0.0, z) - pi) <= 1e-8 * std::abs(pi));
  }
}

TEST_CASE("cancellation guard") {
  CHECK(TBSpline(zeros(8)).trusted());
  CHECK_FALSE(TBSpline(zeros(20)).trusted());
  CHECK(TBSpline(build_lambda_radial(32, 3, 2)).trusted());
  CHECK(TBSpline(build_lambda_strip(40, 2)).trusted());
}
