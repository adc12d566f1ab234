#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "pdpsim/grid.hpp"
#include "pdpsim/types.hpp"

namespace pdpsim {

/// 4-component spinor field on the (x, t) plane. Layout keeps the spinor
/// index fastest: amp[((ix * n_t) + it) * 4 + c].
struct SpinorField2D {
    Grid2D grid;
    std::vector<cplx> amp;

    SpinorField2D() = default;
    explicit SpinorField2D(Grid2D g)
        : grid(g), amp(static_cast<size_t>(g.size()) * 4, cplx(0.0, 0.0)) {}

    cplx& at(int ix, int it, int c) {
        return amp[(static_cast<size_t>(ix) * grid.t.n + it) * 4 + static_cast<size_t>(c)];
    }
    const cplx& at(int ix, int it, int c) const {
        return amp[(static_cast<size_t>(ix) * grid.t.n + it) * 4 + static_cast<size_t>(c)];
    }

    /// Euclidean squared norm: sum Psi^dag Psi dx dt.
    double euclid_norm2() const {
        double s = 0.0;
        for (const auto& z : amp) s += std::norm(z);
        return s * grid.cell();
    }

    /// Euclidean squared norm of the P+ component alone.
    double pplus_norm2() const {
        double s = 0.0;
        const size_t points = amp.size() / 4;
        for (size_t p = 0; p < points; ++p) {
            s += std::norm(amp[p * 4 + 0]);
            s += std::norm(amp[p * 4 + 1]);
        }
        return s * grid.cell();
    }

    /// Mean and spread of the P+ density over x and t.
    struct PlusSummary {
        double mean_x = 0.0, std_x = 0.0;
        double mean_t = 0.0, std_t = 0.0;
    };
    PlusSummary pplus_summary() const;
};

/// Indefinite pairing <Phi, Psi> = sum Phi^dag gamma^0 Psi dx dt;
/// conjugate-linear in the first argument, Hermitian, not positive definite.
cplx indefinite_product(const SpinorField2D& phi, const SpinorField2D& psi);

inline double indefinite_norm2(const SpinorField2D& psi) {
    return indefinite_product(psi, psi).real();
}

/// Gaussian packet in x and t times constant spinor weights, normalized so
/// the indefinite squared norm is +1. States whose indefinite norm is not
/// positive are rejected: the algorithm's probability budget needs a unit
/// positive start.
struct SpinorPacketParams {
    double x_center = 0.0, x_width = 1.0, x_momentum = 0.0;
    double t_center = 0.0, t_width = 1.0, t_momentum = 0.0;
    std::array<cplx, 4> weights = {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0),
                                   cplx(0.0, 0.0)};
};

SpinorField2D spinor_packet(const Grid2D& grid, const SpinorPacketParams& p);

/// In-place forward/inverse transform along both axes, per component.
void spinor_fft2(SpinorField2D& f, bool inverse);

/// Transform along the t axis only. The relativistic stepper keeps fields in
/// the mixed (x, t-mode) representation: the damping and the jumps are
/// diagonal in x and t-independent, so only x-axis transforms recur.
void spinor_fft_t(SpinorField2D& f, bool inverse);

/// Spectral partial derivative along one axis (0 = t, 1 = x).
SpinorField2D spinor_derivative(const SpinorField2D& f, int axis);

}  // namespace pdpsim
