#include "polyshannon/sphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polyshannon/quadrature.hpp"

namespace polyshannon {

SphereGrid::SphereGrid(int max_degree) : max_degree_(max_degree), longitudes_(2 * max_degree + 2) {
  if (max_degree < 0) throw std::invalid_argument("SphereGrid: max degree must be >= 0");
  const GaussRule rule = gauss_legendre(max_degree + 1);
  cos_theta_ = rule.nodes;
  lat_weights_ = rule.weights;
}

Direction SphereGrid::point(std::size_t index) const {
  const std::size_t i = index / static_cast<std::size_t>(longitudes_);
  const std::size_t j = index % static_cast<std::size_t>(longitudes_);
  const double z = cos_theta_[i];
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / longitudes_;
  return {s * std::cos(phi), s * std::sin(phi), z};
}

double SphereGrid::weight(std::size_t index) const {
  return lat_weights_[index / static_cast<std::size_t>(longitudes_)] * 2.0 * std::numbers::pi / longitudes_;
}

std::vector<double> sph_harm_all(int max_degree, const Direction& dir) {
  const double norm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  if (!(norm > 0.0)) throw std::invalid_argument("sph_harm_all: zero direction");
  const double x = dir[2] / norm;
  const double s = std::hypot(dir[0], dir[1]) / norm;
  const double phi = std::atan2(dir[1], dir[0]);

  std::vector<double> out(static_cast<std::size_t>(mode_count(max_degree)), 0.0);
  // Orthonormalized associated Legendre functions, column by column in m.
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int m = 0; m <= max_degree; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    const double c = m == 0 ? 1.0 : std::sqrt(2.0) * std::cos(m * phi);
    const double sn = std::sqrt(2.0) * std::sin(m * phi);
    double p_prev = 0.0, p_cur = pmm;
    for (int k = m; k <= max_degree; ++k) {
      if (k == m + 1) {
        p_prev = p_cur;
        p_cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
      } else if (k > m + 1) {
        const double a = std::sqrt((4.0 * k * k - 1.0) / (double(k) * k - double(m) * m));
        const double a_prev = std::sqrt((4.0 * (k - 1) * (k - 1) - 1.0) / (double(k - 1) * (k - 1) - double(m) * m));
        const double next = a * (x * p_cur - p_prev / a_prev);
        p_prev = p_cur;
        p_cur = next;
      }
      out[static_cast<std::size_t>(k * k + k + m)] = c * p_cur;
      if (m > 0) out[static_cast<std::size_t>(k * k + k - m)] = sn * p_cur;
    }
  }
  return out;
}

double sph_harm(int k, int l, const Direction& dir) {
  if (k < 0 || l < 1 || l > 2 * k + 1) throw std::invalid_argument("sph_harm: index out of range");
  return sph_harm_all(k, dir)[static_cast<std::size_t>(mode_index(k, l))];
}

double legendre(int k, double x) {
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int i = 2; i <= k; ++i) {
    const double p2 = ((2.0 * i - 1.0) * x * p1 - (i - 1.0) * p0) / i;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double zonal(int k, double cos_gamma) { return (2.0 * k + 1.0) / (4.0 * std::numbers::pi) * legendre(k, cos_gamma); }

ModeCoefficients analyze_sphere(const SphereGrid& grid, const std::vector<double>& values) {
  if (values.size() != grid.size()) throw std::invalid_argument("analyze_sphere: value count does not match grid");
  ModeCoefficients out(grid.max_degree());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == 0.0) continue;
    const std::vector<double> y = sph_harm_all(grid.max_degree(), grid.point(i));
    const double w = grid.weight(i) * values[i];
    for (std::size_t m = 0; m < y.size(); ++m) out.values[m] += w * y[m];
  }
  return out;
}

std::vector<double> synthesize_sphere(const ModeCoefficients& coeffs, const std::vector<Direction>& directions) {
  std::vector<double> out;
  out.reserve(directions.size());
  for (const auto& d : directions) {
    const std::vector<double> y = sph_harm_all(coeffs.max_degree, d);
    double v = 0.0;
    for (std::size_t m = 0; m < y.size(); ++m) v += coeffs.values[m] * y[m];
    out.push_back(v);
  }
  return out;
}

}  // namespace polyshannon
