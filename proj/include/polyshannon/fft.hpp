#pragma once

#include <complex>
#include <vector>

// Thin FFTW wrappers. Transforms are unnormalized; forward uses e^{-2πi jk/n}.
namespace polyshannon::fft {

using cvec = std::vector<std::complex<double>>;

cvec forward(cvec data);
cvec backward(cvec data);

/// Row-major n-dimensional transform; dims.size() ≥ 1 and product(dims) == data.size().
cvec forward_nd(cvec data, const std::vector<int>& dims);
cvec backward_nd(cvec data, const std::vector<int>& dims);

}  // namespace polyshannon::fft
