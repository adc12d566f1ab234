#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pdpsim/types.hpp"

namespace pdpsim {

/// In-place radix-2 Cooley-Tukey transform. Forward is unnormalized,
/// inverse carries the 1/n factor, so forward-then-inverse is the identity.
/// Power-of-two lengths only; call sites guard with Grid1D::power_of_two().
void fft_inplace(std::span<cplx> a, bool inverse);

inline void fft_forward(std::span<cplx> a) { fft_inplace(a, false); }
inline void fft_inverse(std::span<cplx> a) { fft_inplace(a, true); }

/// Strided transform: elements a[offset + i*stride], i in [0, n).
/// Gathers into a scratch buffer, transforms, scatters back.
void fft_strided(cplx* a, int n, long stride, bool inverse, std::vector<cplx>& scratch);

}  // namespace pdpsim
