#pragma once

#include <complex>
#include <span>
#include <vector>

// Dense real polynomials stored in ascending order: c[0] + c[1] x + ... + c[d] x^d.
namespace polyshannon::poly {

template <class T>
T horner(std::span<const double> c, T x) {
  T acc{0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b);

std::vector<double> derivative(std::span<const double> c);

/// Coefficients of (x + shift)^s for s = 0..degree, i.e. the Taylor shift of a polynomial.
std::vector<double> taylor_shift(std::span<const double> c, double shift);

/// Zeros via eigenvalues of the balanced companion matrix, each polished by Newton steps
/// on the original coefficients. Trailing (leading-order) zero coefficients are dropped.
std::vector<std::complex<double>> roots(std::span<const double> c);

}  // namespace polyshannon::poly
