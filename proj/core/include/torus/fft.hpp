#pragma once

#include <vector>

#include "torus/types.hpp"

namespace torus::fft {

// Unnormalized c2c DFT over a row-major n-dimensional array, FFTW sign
// convention: sign=-1 forward (e^{-i...}), sign=+1 backward.
void dft(std::vector<cplx>& data, const std::vector<int>& dims, int sign);

// 1D convenience on a contiguous row.
void dft_1d(cplx* row, int n, int sign);

}  // namespace torus::fft
