#pragma once

#include <array>
#include <vector>

// Real orthonormal spherical harmonics on S² (n = 3) and Gauss-Legendre × uniform-longitude
// quadrature. Order index ℓ = 1..2k+1 corresponds to m = ℓ − k − 1: m > 0 carries cos(mφ),
// m < 0 carries sin(|m|φ).
namespace polyshannon {

using Direction = std::array<double, 3>;

inline int mode_count(int max_degree) { return (max_degree + 1) * (max_degree + 1); }
inline int mode_index(int k, int l) { return k * k + l - 1; }

class SphereGrid {
 public:
  explicit SphereGrid(int max_degree);

  int max_degree() const { return max_degree_; }
  int latitudes() const { return static_cast<int>(cos_theta_.size()); }
  int longitudes() const { return longitudes_; }
  std::size_t size() const { return cos_theta_.size() * static_cast<std::size_t>(longitudes_); }
  /// Point i·longitudes + j.
  Direction point(std::size_t index) const;
  double weight(std::size_t index) const;

 private:
  int max_degree_;
  int longitudes_;
  std::vector<double> cos_theta_;
  std::vector<double> lat_weights_;
};

/// All Y_{k,ℓ}(θ) for k ≤ K at flat index k² + ℓ − 1. `dir` need not be normalized.
std::vector<double> sph_harm_all(int max_degree, const Direction& dir);
double sph_harm(int k, int l, const Direction& dir);

/// Legendre polynomial P_k(x).
double legendre(int k, double x);
/// Z_k(cos γ) = (2k+1)/(4π) P_k(cos γ).
double zonal(int k, double cos_gamma);

struct ModeCoefficients {
  int max_degree = 0;
  std::vector<double> values;  // flat index k² + ℓ − 1

  explicit ModeCoefficients(int k_max = 0) : max_degree(k_max), values(static_cast<std::size_t>(mode_count(k_max)), 0.0) {}
  double& at(int k, int l) { return values[static_cast<std::size_t>(mode_index(k, l))]; }
  double at(int k, int l) const { return values[static_cast<std::size_t>(mode_index(k, l))]; }
};

/// Quadrature projection; input must be band-limited to degree ≤ K to avoid aliasing.
ModeCoefficients analyze_sphere(const SphereGrid& grid, const std::vector<double>& values);
std::vector<double> synthesize_sphere(const ModeCoefficients& coeffs, const std::vector<Direction>& directions);

}  // namespace polyshannon
