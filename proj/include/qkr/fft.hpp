#pragma once

#include <complex>
#include <span>

namespace qkr::fft {

/// Unnormalized in-place forward DFT: out[k] = sum_j in[j] exp(-2 pi i jk/N).
void forward(std::span<std::complex<double>> data);

/// Unnormalized in-place backward DFT: out[j] = sum_k in[k] exp(+2 pi i jk/N).
void backward(std::span<std::complex<double>> data);

}  // namespace qkr::fft
