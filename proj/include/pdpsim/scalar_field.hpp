#pragma once

#include <stdexcept>
#include <vector>

#include "pdpsim/grid.hpp"
#include "pdpsim/types.hpp"
#include "pdpsim/wavefunction.hpp"

namespace pdpsim {

/// Spinless complex field on the (x, t) plane. Layout is x-major:
/// amp[ix * n_t + it], so t-rows are contiguous.
struct ScalarField2D {
    Grid2D grid;
    std::vector<cplx> amp;

    ScalarField2D() = default;
    explicit ScalarField2D(Grid2D g)
        : grid(g), amp(static_cast<size_t>(g.size()), cplx(0.0, 0.0)) {}

    cplx& at(int ix, int it) { return amp[static_cast<size_t>(ix) * grid.t.n + it]; }
    const cplx& at(int ix, int it) const {
        return amp[static_cast<size_t>(ix) * grid.t.n + it];
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& z : amp) s += std::norm(z);
        return s * grid.cell();
    }

    ScalarField2D& normalize() {
        const double n2 = norm2();
        if (!(n2 > 0.0)) throw std::runtime_error("ScalarField2D: cannot normalize zero field");
        const double s = 1.0 / std::sqrt(n2);
        for (auto& z : amp) z *= s;
        return *this;
    }

    /// Product state phi(t) psi(x); phi lives on grid.t, psi on grid.x.
    static ScalarField2D product(const Grid2D& g, const WaveFunction1D& phi,
                                 const WaveFunction1D& psi) {
        if (!(phi.grid == g.t) || !(psi.grid == g.x))
            throw std::invalid_argument("ScalarField2D::product: grid mismatch");
        ScalarField2D out(g);
        for (int ix = 0; ix < g.x.n; ++ix)
            for (int it = 0; it < g.t.n; ++it)
                out.at(ix, it) = psi.amp[static_cast<size_t>(ix)] * phi.amp[static_cast<size_t>(it)];
        return out;
    }

    /// Position marginal density integrated over t.
    std::vector<double> x_marginal() const {
        std::vector<double> d(static_cast<size_t>(grid.x.n), 0.0);
        for (int ix = 0; ix < grid.x.n; ++ix) {
            double s = 0.0;
            for (int it = 0; it < grid.t.n; ++it) s += std::norm(at(ix, it));
            d[static_cast<size_t>(ix)] = s * grid.t.dx();
        }
        return d;
    }
};

inline cplx l2_inner2d(const ScalarField2D& a, const ScalarField2D& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("l2_inner2d: grid mismatch");
    cplx s(0.0, 0.0);
    for (size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s * a.grid.cell();
}

}  // namespace pdpsim
