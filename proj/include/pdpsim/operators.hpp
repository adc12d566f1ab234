#pragma once

#include "pdpsim/potential.hpp"
#include "pdpsim/wavefunction.hpp"

namespace pdpsim {

enum class Backend { Spectral, FiniteDifference };

/// H psi = -(1/2m) psi'' + V psi   (hbar = 1 throughout).
/// Spectral backend multiplies by k^2/(2m) in Fourier space and requires a
/// power-of-two grid; the finite-difference backend uses the 3-point stencil
/// with periodic wrap. mass may be +infinity (kinetic term off).
WaveFunction1D apply_hamiltonian(const WaveFunction1D& psi, const PotentialSpec& V, double mass,
                                 Backend backend = Backend::Spectral);

}  // namespace pdpsim
