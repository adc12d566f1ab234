#pragma once

#include <complex>

namespace pdpsim {

using cplx = std::complex<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

}  // namespace pdpsim
