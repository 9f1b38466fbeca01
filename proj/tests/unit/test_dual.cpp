#include "../oracles.hpp"
#include "doctest.h"
#include "polyshannon/dual.hpp"
#include "polyshannon/shannon1d.hpp"

using namespace polyshannon;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<SpectrumVector> representatives() {
  return {SpectrumVector::from_entries({{0.0, 4}}), build_lambda_strip(1, 2), build_lambda_radial(2, 3, 2)};
}

}  // namespace

TEST_CASE("Gram symbol: autocorrelation, symmetrized vector and the periodized sum agree") {
  for (const auto& v : representatives()) {
    const TBSpline q(v);
    const TBSpline qs(v.symmetrized());
    for (double xi : {0.0, 0.4, 1.9, pi, 5.0}) {
      const double a = gram_symbol(q, xi);
      const double b = gram_symbol_symmetrized(qs, v.sum(), xi);
      double c = 0.0;
      for (int k = -2000; k <= 2000; ++k) c += std::norm(qn_hat(v, xi + 2 * pi * k));
      CAPTURE(v.describe());
      CHECK(std::abs(a - b) <= 1e-10 * a);
      CHECK(std::abs(a - c) <= 1e-8 * a);
    }
    const RieszBounds rb = riesz_bounds(q);
    CHECK(rb.lower > 0.0);
    CHECK(rb.lower <= rb.upper);
  }
}

TEST_CASE("dual scaling function: normalization and duality") {
  const auto hat = SpectrumVector::from_entries({{0.0, 2}});
  CHECK(std::exp(0.5 * hat.sum()) == 1.0);
  std::vector<SpectrumVector> vs = representatives();
  vs.push_back(hat);
  const auto [nodes, weights] = oracle::gauss_legendre(32);
  for (const auto& v : vs) {
    // (1/2π) ∫ φ̂ conj(φ̃̂) e^{ijξ} dξ, periodized onto [0, 2π]
    const auto periodized = [&](double xi) {
      cd s = 0.0;
      for (int m = -400; m <= 400; ++m) s += qn_hat(v, xi + 2 * pi * m) * std::conj(dual_phi_hat(v, xi + 2 * pi * m));
      return s;
    };
    std::vector<cd> samples;
    std::vector<double> xs, ws;
    for (int panel = 0; panel < 4; ++panel)
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        xs.push_back(pi / 2 * (panel + 0.5 * (nodes[i] + 1.0)));
        ws.push_back(pi / 4 * weights[i]);
        samples.push_back(periodized(xs.back()));
      }
    for (int j = -3; j <= 3; ++j) {
      cd s = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * samples[i] * std::polar(1.0, j * xs[i]);
      s /= 2 * pi;
      CAPTURE(v.describe());
      CAPTURE(j);
      CHECK(std::abs(s - (j == 0 ? 1.0 : 0.0)) <= 1e-6);
    }
  }
}

TEST_CASE("dual transform decays like the order") {
  for (const auto& v : representatives()) {
    const int n = v.order();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int m = 2; m <= 500; m += 7) {
      const double xi = (2 * m + 1) * pi;
      const double a = std::pow(xi, n) * std::abs(dual_phi_hat(v, xi));
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    CHECK(hi / lo <= 2.0);
  }
}

TEST_CASE("dual scaling function in time") {
  for (const auto& v : representatives()) {
    const DualScaling d(v);
    CHECK(d.coefficient_tail() <= 1e-8);
    const TBSpline& q = d.basis();
    // ⟨φ̃, φ(· − j)⟩ = δ
    for (int j = -2; j <= 2; ++j) {
      const double ip = oracle::integrate_panels([&](double t) { return d(t) * q(t - j); }, -20.0, 24.0);
      CHECK(std::abs(ip - (j == 0 ? 1.0 : 0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("reproducing kernel") {
  for (const auto& v : representatives()) {
    const DualScaling d(v);
    const TBSpline& q = d.basis();
    CHECK(std::abs(d.q_kernel(1.3 - 2.0, 0.0) - d.q_kernel(1.3, 2.0)) <= 1e-12);
    for (double x : {-0.7, 1.3, 2.5, 3.9}) {
      const double r = oracle::integrate_panels([&](double y) { return d.q_kernel(x, y) * q(y - 2.0); }, -4.0, 12.0);
      CHECK(std::abs(r - q(x - 2.0)) <= 1e-5 * q.peak());
    }
  }
}

TEST_CASE("biorthogonality of the reproducing kernel and the Shannon kernel") {
  for (const auto& v : representatives()) {
    const DualScaling d(v);
    const KernelTable s0 = synthesize_kernel(v);
    for (int j = -2; j <= 2; ++j)
      for (int k = -2; k <= 2; ++k) {
        const double ip =
            oracle::integrate_panels([&](double t) { return d.q_kernel(t - j, 0.0) * s0(t - k); }, -36.0, 36.0);
        CAPTURE(v.describe());
        CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) <= 1e-5);
      }
  }
}
