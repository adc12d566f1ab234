#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pdpsim/grid.hpp"
#include "pdpsim/types.hpp"

namespace pdpsim {

/// Complex amplitude vector on a Grid1D.
struct WaveFunction1D {
    Grid1D grid;
    std::vector<cplx> amp;

    WaveFunction1D() = default;
    explicit WaveFunction1D(Grid1D g) : grid(g), amp(static_cast<size_t>(g.n), cplx0()) {}
    WaveFunction1D(Grid1D g, std::vector<cplx> a) : grid(g), amp(std::move(a)) {
        if (static_cast<int>(amp.size()) != grid.n)
            throw std::invalid_argument("WaveFunction1D: amplitude length mismatch");
    }

    static cplx cplx0() { return cplx(0.0, 0.0); }

    double norm2() const {
        double s = 0.0;
        for (const auto& z : amp) s += std::norm(z);
        return s * grid.dx();
    }

    double norm() const { return std::sqrt(norm2()); }

    WaveFunction1D& normalize() {
        const double n = norm();
        if (!(n > 0.0)) throw std::runtime_error("WaveFunction1D: cannot normalize zero state");
        const double s = 1.0 / n;
        for (auto& z : amp) z *= s;
        return *this;
    }

    /// Mean and standard deviation of the position density |psi|^2.
    void density_summary(double& mean, double& stddev) const {
        const double w = norm2();
        double m1 = 0.0, m2 = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.point(i);
            const double d = std::norm(amp[static_cast<size_t>(i)]) * grid.dx();
            m1 += x * d;
            m2 += x * x * d;
        }
        m1 /= w;
        m2 /= w;
        mean = m1;
        stddev = std::sqrt(std::max(0.0, m2 - m1 * m1));
    }
};

/// (phi, psi) = sum_i conj(phi_i) psi_i dx; conjugate-linear in the first slot.
inline cplx l2_inner(const WaveFunction1D& phi, const WaveFunction1D& psi) {
    if (!(phi.grid == psi.grid)) throw std::invalid_argument("l2_inner: grid mismatch");
    cplx s(0.0, 0.0);
    for (size_t i = 0; i < phi.amp.size(); ++i) s += std::conj(phi.amp[i]) * psi.amp[i];
    return s * phi.grid.dx();
}

/// Normalized Gaussian packet exp(-(x-c)^2/(4 w^2) + i k x); w is the
/// position-density standard deviation.
inline WaveFunction1D gaussian_packet(const Grid1D& grid, double center, double width,
                                      double momentum) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");
    WaveFunction1D psi(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.point(i);
        const double arg = -(x - center) * (x - center) / (4.0 * width * width);
        psi.amp[static_cast<size_t>(i)] = std::exp(arg) * std::exp(I_UNIT * momentum * x);
    }
    psi.normalize();
    return psi;
}

/// Plane wave e^{i k x} for a resolvable grid mode (k = 2 pi m / L), unit norm.
inline WaveFunction1D plane_wave(const Grid1D& grid, int mode) {
    WaveFunction1D psi(grid);
    const double k = 2.0 * M_PI * mode / grid.length();
    for (int i = 0; i < grid.n; ++i)
        psi.amp[static_cast<size_t>(i)] = std::exp(I_UNIT * k * grid.point(i));
    psi.normalize();
    return psi;
}

}  // namespace pdpsim
