#include "polyshannon/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numeric>
#include <stdexcept>

namespace polyshannon::fft {

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

cvec run(cvec data, const std::vector<int>& dims, int sign) {
  if (data.empty()) return data;
  const long total = std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
  if (total != static_cast<long>(data.size())) throw std::invalid_argument("fft: dims do not match data size");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fft: plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return data;
}

}  // namespace

cvec forward(cvec data) {
  const int n = static_cast<int>(data.size());
  return run(std::move(data), {n}, FFTW_FORWARD);
}

cvec backward(cvec data) {
  const int n = static_cast<int>(data.size());
  return run(std::move(data), {n}, FFTW_BACKWARD);
}

cvec forward_nd(cvec data, const std::vector<int>& dims) { return run(std::move(data), dims, FFTW_FORWARD); }

cvec backward_nd(cvec data, const std::vector<int>& dims) { return run(std::move(data), dims, FFTW_BACKWARD); }

}  // namespace polyshannon::fft
