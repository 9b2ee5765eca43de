#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nnstne::detail {

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

/// In-place iterative radix-2 transform. a.size() must be a power of two.
/// inverse == true applies the 1/n scaling.
void fft(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace nnstne::detail
