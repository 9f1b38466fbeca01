#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "polyshannon/sphere.hpp"

using namespace polyshannon;

namespace {

constexpr double pi = std::numbers::pi;

Direction random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Direction d{g(rng), g(rng), g(rng)};
  const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  for (double& x : d) x /= n;
  return d;
}

double dot(const Direction& a, const Direction& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

TEST_CASE("constant harmonic") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) CHECK(sph_harm(0, 1, random_direction(rng)) == doctest::Approx(1.0 / std::sqrt(4 * pi)));
}

TEST_CASE("Legendre polynomials against the standard library") {
  for (int k = 0; k <= 20; ++k)
    for (double x : {-1.0, -0.73, -0.1, 0.0, 0.42, 0.99, 1.0}) CHECK(legendre(k, x) == doctest::Approx(oracle::legendre(k, x)).epsilon(1e-12));
}

TEST_CASE("sphere grid integrates harmonics orthonormally") {
  const int kmax = 8;
  const SphereGrid grid(kmax);
  CHECK(grid.latitudes() == kmax + 1);
  CHECK(grid.longitudes() == 2 * kmax + 2);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) total += grid.weight(i);
  CHECK(total == doctest::Approx(4 * pi).epsilon(1e-13));
  const int m = mode_count(kmax);
  std::vector<double> gram(static_cast<std::size_t>(m * m), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto y = sph_harm_all(kmax, grid.point(i));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) gram[static_cast<std::size_t>(a * m + b)] += grid.weight(i) * y[a] * y[b];
  }
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) worst = std::max(worst, std::abs(gram[static_cast<std::size_t>(a * m + b)] - (a == b ? 1.0 : 0.0)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("addition theorem") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const Direction a = random_direction(rng), b = random_direction(rng);
    const auto ya = sph_harm_all(12, a), yb = sph_harm_all(12, b);
    for (int k = 0; k <= 12; ++k) {
      double s = 0.0;
      for (int l = 1; l <= 2 * k + 1; ++l) s += ya[mode_index(k, l)] * yb[mode_index(k, l)];
      const double z = (2 * k + 1) / (4 * pi) * oracle::legendre(k, dot(a, b));
      CHECK(s == doctest::Approx(z).epsilon(1e-11).scale(1.0));
      CHECK(zonal(k, dot(a, b)) == doctest::Approx(z).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("zonal examples and reproduction") {
  CHECK(zonal(0, 0.3) == doctest::Approx(1.0 / (4 * pi)));
  CHECK(zonal(1, 1.0) == doctest::Approx(3.0 / (4 * pi)));
  const SphereGrid grid(6);
  std::mt19937_64 rng(3);
  const Direction psi = random_direction(rng);
  for (int k = 0; k <= 6; ++k)
    for (int l = 1; l <= 2 * k + 1; ++l) {
      double s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight(i) * zonal(k, dot(grid.point(i), psi)) * sph_harm(k, l, grid.point(i));
      CHECK(std::abs(s - sph_harm(k, l, psi)) <= 1e-9);
    }
}

TEST_CASE("analysis and synthesis") {
  const int kmax = 8;
  const SphereGrid grid(kmax);
  std::vector<Direction> pts;
  for (std::size_t i = 0; i < grid.size(); ++i) pts.push_back(grid.point(i));

  const ModeCoefficients constant = analyze_sphere(grid, std::vector<double>(grid.size(), 1.0));
  CHECK(constant.at(0, 1) == doctest::Approx(std::sqrt(4 * pi)));
  for (std::size_t i = 1; i < constant.values.size(); ++i) CHECK(std::abs(constant.values[i]) < 1e-12);

  std::vector<double> y32;
  for (const auto& d : pts) y32.push_back(sph_harm(3, 2, d));
  const ModeCoefficients single = analyze_sphere(grid, y32);
  for (int k = 0; k <= kmax; ++k)
    for (int l = 1; l <= 2 * k + 1; ++l) CHECK(std::abs(single.at(k, l) - (k == 3 && l == 2 ? 1.0 : 0.0)) < 1e-12);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModeCoefficients c(kmax);
  for (double& x : c.values) x = u(rng);
  const ModeCoefficients back = analyze_sphere(grid, synthesize_sphere(c, pts));
  for (std::size_t i = 0; i < c.values.size(); ++i) CHECK(std::abs(back.values[i] - c.values[i]) <= 1e-9);
}

TEST_CASE("harmonic index conventions") {
  CHECK(mode_count(0) == 1);
  CHECK(mode_count(8) == 81);
  CHECK(mode_index(0, 1) == 0);
  CHECK(mode_index(1, 1) == 1);
  CHECK(mode_index(2, 5) == 8);
  CHECK_THROWS_AS(sph_harm(2, 6, {0, 0, 1}), std::invalid_argument);
  // ℓ = k + 1 is the zonal (m = 0) harmonic: independent of longitude
  CHECK(sph_harm(3, 4, {1, 0, 0}) == doctest::Approx(sph_harm(3, 4, {0, 1, 0})).scale(1.0));
}
