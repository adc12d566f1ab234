#include "pdpsim/spinor_field.hpp"

#include <cmath>

#include "pdpsim/fft.hpp"

namespace pdpsim {

SpinorField2D::PlusSummary SpinorField2D::pplus_summary() const {
    PlusSummary s;
    const double total = pplus_norm2();
    if (!(total > 0.0)) return s;
    double mx = 0.0, mx2 = 0.0, mt = 0.0, mt2 = 0.0;
    for (int ix = 0; ix < grid.x.n; ++ix) {
        const double x = grid.x.point(ix);
        for (int it = 0; it < grid.t.n; ++it) {
            const double t = grid.t.point(it);
            const double d =
                (std::norm(at(ix, it, 0)) + std::norm(at(ix, it, 1))) * grid.cell() / total;
            mx += x * d;
            mx2 += x * x * d;
            mt += t * d;
            mt2 += t * t * d;
        }
    }
    s.mean_x = mx;
    s.std_x = std::sqrt(std::max(0.0, mx2 - mx * mx));
    s.mean_t = mt;
    s.std_t = std::sqrt(std::max(0.0, mt2 - mt * mt));
    return s;
}

cplx indefinite_product(const SpinorField2D& phi, const SpinorField2D& psi) {
    if (!(phi.grid == psi.grid)) throw std::invalid_argument("indefinite_product: grid mismatch");
    cplx s(0.0, 0.0);
    const size_t points = phi.amp.size() / 4;
    for (size_t p = 0; p < points; ++p) {
        const size_t b = p * 4;
        s += std::conj(phi.amp[b + 0]) * psi.amp[b + 0];
        s += std::conj(phi.amp[b + 1]) * psi.amp[b + 1];
        s -= std::conj(phi.amp[b + 2]) * psi.amp[b + 2];
        s -= std::conj(phi.amp[b + 3]) * psi.amp[b + 3];
    }
    return s * phi.grid.cell();
}

SpinorField2D spinor_packet(const Grid2D& grid, const SpinorPacketParams& p) {
    if (!(p.x_width > 0.0) || !(p.t_width > 0.0))
        throw std::invalid_argument("spinor_packet: widths must be positive");
    SpinorField2D f(grid);
    for (int ix = 0; ix < grid.x.n; ++ix) {
        const double x = grid.x.point(ix);
        const cplx ex = std::exp(cplx(-(x - p.x_center) * (x - p.x_center) /
                                          (4.0 * p.x_width * p.x_width),
                                      p.x_momentum * x));
        for (int it = 0; it < grid.t.n; ++it) {
            const double t = grid.t.point(it);
            const cplx et = std::exp(cplx(-(t - p.t_center) * (t - p.t_center) /
                                              (4.0 * p.t_width * p.t_width),
                                          p.t_momentum * t));
            const cplx env = ex * et;
            for (int c = 0; c < 4; ++c) f.at(ix, it, c) = env * p.weights[static_cast<size_t>(c)];
        }
    }
    const double n2 = indefinite_norm2(f);
    if (!(n2 > 1e-12))
        throw std::invalid_argument(
            "spinor_packet: indefinite norm of the packet is not positive; "
            "such initial states are rejected");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& z : f.amp) z *= s;
    return f;
}

void spinor_fft2(SpinorField2D& f, bool inverse) {
    const int nx = f.grid.x.n, nt = f.grid.t.n;
    if (!f.grid.x.power_of_two() || !f.grid.t.power_of_two())
        throw std::invalid_argument("spinor_fft2: power-of-two grids required");
    std::vector<cplx> scratch;
    // Along t for every (x, component).
    for (int ix = 0; ix < nx; ++ix)
        for (int c = 0; c < 4; ++c)
            fft_strided(f.amp.data() + (static_cast<size_t>(ix) * nt) * 4 + c, nt, 4, inverse,
                        scratch);
    // Along x for every (t, component).
    for (int it = 0; it < nt; ++it)
        for (int c = 0; c < 4; ++c)
            fft_strided(f.amp.data() + static_cast<size_t>(it) * 4 + c, nx,
                        static_cast<long>(nt) * 4, inverse, scratch);
}

void spinor_fft_t(SpinorField2D& f, bool inverse) {
    const int nx = f.grid.x.n, nt = f.grid.t.n;
    if (!f.grid.t.power_of_two())
        throw std::invalid_argument("spinor_fft_t: power-of-two t grid required");
    std::vector<cplx> scratch;
    for (int ix = 0; ix < nx; ++ix)
        for (int c = 0; c < 4; ++c)
            fft_strided(f.amp.data() + (static_cast<size_t>(ix) * nt) * 4 + c, nt, 4, inverse,
                        scratch);
}

SpinorField2D spinor_derivative(const SpinorField2D& f, int axis) {
    if (axis != 0 && axis != 1) throw std::invalid_argument("spinor_derivative: axis is 0 or 1");
    SpinorField2D out = f;
    spinor_fft2(out, false);
    const int nx = f.grid.x.n, nt = f.grid.t.n;
    for (int jx = 0; jx < nx; ++jx) {
        const double kx = f.grid.x.freq(jx);
        for (int jt = 0; jt < nt; ++jt) {
            const double w = f.grid.t.freq(jt);
            const cplx factor = I_UNIT * (axis == 0 ? w : kx);
            for (int c = 0; c < 4; ++c) out.at(jx, jt, c) *= factor;
        }
    }
    spinor_fft2(out, true);
    return out;
}

}  // namespace pdpsim
