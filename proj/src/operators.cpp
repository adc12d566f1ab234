#include "pdpsim/operators.hpp"

#include <cmath>

#include "pdpsim/fft.hpp"

namespace pdpsim {

WaveFunction1D apply_hamiltonian(const WaveFunction1D& psi, const PotentialSpec& V, double mass,
                                 Backend backend) {
    if (!(mass > 0.0)) throw std::invalid_argument("apply_hamiltonian: mass must be positive");
    const Grid1D& grid = psi.grid;
    WaveFunction1D out(grid);

    const double kin = std::isinf(mass) ? 0.0 : 0.5 / mass;
    if (kin != 0.0) {
        if (backend == Backend::Spectral) {
            if (!grid.power_of_two())
                throw std::invalid_argument(
                    "apply_hamiltonian: spectral backend needs a power-of-two grid");
            std::vector<cplx> hat = psi.amp;
            fft_forward(hat);
            for (int j = 0; j < grid.n; ++j) {
                const double k = grid.freq(j);
                hat[static_cast<size_t>(j)] *= kin * k * k;
            }
            fft_inverse(hat);
            out.amp = std::move(hat);
        } else {
            const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
            const int n = grid.n;
            for (int i = 0; i < n; ++i) {
                const cplx left = psi.amp[static_cast<size_t>((i + n - 1) % n)];
                const cplx right = psi.amp[static_cast<size_t>((i + 1) % n)];
                const cplx mid = psi.amp[static_cast<size_t>(i)];
                out.amp[static_cast<size_t>(i)] = -kin * (left - 2.0 * mid + right) * inv_dx2;
            }
        }
    }

    if (!V.is_zero()) {
        const std::vector<double> v = V.evaluate(grid);
        for (int i = 0; i < grid.n; ++i)
            out.amp[static_cast<size_t>(i)] += v[static_cast<size_t>(i)] * psi.amp[static_cast<size_t>(i)];
    }
    return out;
}

}  // namespace pdpsim
