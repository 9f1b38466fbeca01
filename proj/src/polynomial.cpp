#include "polyshannon/polynomial.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace polyshannon::poly {

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> out(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) out[i - 1] = static_cast<double>(i) * c[i];
  return out;
}

std::vector<double> taylor_shift(std::span<const double> c, double shift) {
  // Repeated synthetic division; exact for the integer shifts used on spline segments.
  std::vector<double> out(c.begin(), c.end());
  const std::size_t n = out.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) out[j - 1] += shift * out[j];
  return out;
}

namespace {

// Parlett-Reinsch balancing (radix 2), in place.
void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / 2.0, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= 2.0;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c > g) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> roots(std::span<const double> c) {
  std::size_t size = c.size();
  while (size > 0 && c[size - 1] == 0.0) --size;
  if (size == 0) throw std::invalid_argument("poly::roots: zero polynomial");
  const auto degree = static_cast<Eigen::Index>(size - 1);
  if (degree == 0) return {};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
  balance(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("poly::roots: eigenvalue iteration failed");

  const std::span<const double> coeffs = c.first(size);
  const std::vector<double> dcoeffs = derivative(coeffs);
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(degree));
  for (Eigen::Index i = 0; i < degree; ++i) {
    std::complex<double> z = solver.eigenvalues()[i];
    double residual = std::abs(horner(coeffs, z));
    for (int iter = 0; iter < 8; ++iter) {
      const std::complex<double> d = horner(std::span<const double>(dcoeffs), z);
      if (d == 0.0) break;
      const std::complex<double> next = z - horner(coeffs, z) / d;
      const double next_residual = std::abs(horner(coeffs, next));
      if (!(next_residual < residual)) break;
      z = next;
      residual = next_residual;
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace polyshannon::poly
