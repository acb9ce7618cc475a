#pragma once

#include <complex>
#include <span>

namespace psl {

using cplx = std::complex<double>;

/// In-place unnormalized DFT, X[k] = sum_m x[m] e^{-2 pi i k m / N}.
/// Any length is accepted; plans are cached per length and shared between
/// threads (plan creation is serialized, execution is lock-free).
void fft_forward(std::span<cplx> data);

/// In-place unnormalized inverse DFT (positive exponent, no 1/N factor).
void fft_inverse(std::span<cplx> data);

}  // namespace psl
