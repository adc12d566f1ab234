#pragma once

#include "pdpsim/potential.hpp"
#include "pdpsim/spinor_field.hpp"

namespace pdpsim {

/// Static electromagnetic potential (A_0(x), A_1(x)); zero by default.
struct GaugeField {
    PotentialSpec a0;
    PotentialSpec a1;
    bool is_zero() const { return a0.is_zero() && a1.is_zero(); }
};

/// D Psi = i gamma^mu (d_mu + i e A_mu) Psi - m Psi, with mu running over
/// t (axis 0) and x (axis 1); derivatives are spectral. Hermitian with
/// respect to the indefinite product on periodic grids with A = 0.
SpinorField2D apply_dirac(const SpinorField2D& psi, double mass, double charge = 0.0,
                          const GaugeField& gauge = {});

/// D(D Psi)/(2M) by composing apply_dirac twice; works for any gauge field.
SpinorField2D apply_dirac_squared(const SpinorField2D& psi, double mass, double evolution_mass,
                                  double charge = 0.0, const GaugeField& gauge = {});

/// Per-mode evaluation of the same operator (A = 0 only):
/// Dhat^2 = (w^2 - k^2 + m^2) I + 2 m (w gamma^0 + k gamma^1) applied in
/// Fourier space. Must agree with the double application.
SpinorField2D apply_dirac_squared_spectral(const SpinorField2D& psi, double mass,
                                           double evolution_mass);

}  // namespace pdpsim
