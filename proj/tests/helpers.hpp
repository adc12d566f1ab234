#pragma once

#include <Eigen/Dense>
#include <random>

#include "pdpsim/operators.hpp"

namespace pdpsim::testing {

inline WaveFunction1D random_state(const Grid1D& g, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    WaveFunction1D psi(g);
    for (auto& z : psi.amp) z = cplx(d(gen), d(gen));
    return psi;
}

// Dense Hamiltonian built from the explicit DFT matrix: an oracle that never
// touches the fast transform path.
inline Eigen::MatrixXcd dense_hamiltonian(const Grid1D& g, const PotentialSpec& V, double mass) {
    const int n = g.n;
    Eigen::MatrixXcd F(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * k * j / n;
            F(k, j) = cplx(std::cos(ang), std::sin(ang));
        }
    Eigen::VectorXcd diag(n);
    for (int j = 0; j < n; ++j) {
        const double k = g.freq(j);
        diag(j) = std::isinf(mass) ? 0.0 : k * k / (2.0 * mass);
    }
    Eigen::MatrixXcd H = F.adjoint() * diag.asDiagonal() * F / static_cast<double>(n);
    const auto v = V.evaluate(g);
    for (int i = 0; i < n; ++i) H(i, i) += v[static_cast<size_t>(i)];
    return H;
}

inline Eigen::VectorXcd to_eigen(const WaveFunction1D& psi) {
    Eigen::VectorXcd x(psi.grid.n);
    for (int i = 0; i < psi.grid.n; ++i) x(i) = psi.amp[static_cast<size_t>(i)];
    return x;
}

inline WaveFunction1D from_eigen(const Grid1D& g, const Eigen::VectorXcd& x) {
    WaveFunction1D psi(g);
    for (int i = 0; i < g.n; ++i) psi.amp[static_cast<size_t>(i)] = x(i);
    return psi;
}

}  // namespace pdpsim::testing
