#pragma once

#include <cstddef>

#include "lpdecay/grid.hpp"

namespace lpdecay::detail {

// In-place unnormalized DFT, X_m = sum_n x_n e^{-2 pi i m n / N} (sign = -1)
// or its conjugate-kernel counterpart (sign = +1). Plans are cached per size
// and direction; execution is safe from multiple threads.
void fft_inplace(ComplexVector& data, int sign);

}  // namespace lpdecay::detail
