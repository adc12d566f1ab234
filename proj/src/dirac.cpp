#include "pdpsim/dirac.hpp"

namespace pdpsim {

namespace {

// gamma^0 v and gamma^1 v in the standard representation, unrolled.
inline void gamma0_apply(const cplx* v, cplx* out) {
    out[0] = v[0];
    out[1] = v[1];
    out[2] = -v[2];
    out[3] = -v[3];
}

inline void gamma1_apply(const cplx* v, cplx* out) {
    out[0] = v[3];
    out[1] = v[2];
    out[2] = -v[1];
    out[3] = -v[0];
}

}  // namespace

SpinorField2D apply_dirac(const SpinorField2D& psi, double mass, double charge,
                          const GaugeField& gauge) {
    const SpinorField2D dt = spinor_derivative(psi, 0);
    const SpinorField2D dx = spinor_derivative(psi, 1);

    std::vector<double> a0, a1;
    const bool gauged = charge != 0.0 && !gauge.is_zero();
    if (gauged) {
        a0 = gauge.a0.evaluate(psi.grid.x);
        a1 = gauge.a1.evaluate(psi.grid.x);
    }

    SpinorField2D out(psi.grid);
    const int nx = psi.grid.x.n, nt = psi.grid.t.n;
    cplx cov_t[4], cov_x[4], g0[4], g1[4];
    for (int ix = 0; ix < nx; ++ix) {
        for (int it = 0; it < nt; ++it) {
            const size_t b = (static_cast<size_t>(ix) * nt + it) * 4;
            for (int c = 0; c < 4; ++c) {
                cov_t[c] = dt.amp[b + static_cast<size_t>(c)];
                cov_x[c] = dx.amp[b + static_cast<size_t>(c)];
                if (gauged) {
                    const cplx v = psi.amp[b + static_cast<size_t>(c)];
                    cov_t[c] += I_UNIT * charge * a0[static_cast<size_t>(ix)] * v;
                    cov_x[c] += I_UNIT * charge * a1[static_cast<size_t>(ix)] * v;
                }
            }
            gamma0_apply(cov_t, g0);
            gamma1_apply(cov_x, g1);
            for (int c = 0; c < 4; ++c)
                out.amp[b + static_cast<size_t>(c)] =
                    I_UNIT * (g0[c] + g1[c]) - mass * psi.amp[b + static_cast<size_t>(c)];
        }
    }
    return out;
}

SpinorField2D apply_dirac_squared(const SpinorField2D& psi, double mass, double evolution_mass,
                                  double charge, const GaugeField& gauge) {
    if (!(evolution_mass > 0.0))
        throw std::invalid_argument("apply_dirac_squared: evolution mass must be positive");
    SpinorField2D out = apply_dirac(apply_dirac(psi, mass, charge, gauge), mass, charge, gauge);
    const double s = 0.5 / evolution_mass;
    for (auto& z : out.amp) z *= s;
    return out;
}

SpinorField2D apply_dirac_squared_spectral(const SpinorField2D& psi, double mass,
                                           double evolution_mass) {
    if (!(evolution_mass > 0.0))
        throw std::invalid_argument("apply_dirac_squared_spectral: evolution mass must be positive");
    SpinorField2D out = psi;
    spinor_fft2(out, false);
    const int nx = psi.grid.x.n, nt = psi.grid.t.n;
    const double s = 0.5 / evolution_mass;
    cplx v[4], sv[4];
    for (int jx = 0; jx < nx; ++jx) {
        const double k = psi.grid.x.freq(jx);
        for (int jt = 0; jt < nt; ++jt) {
            const double w = psi.grid.t.freq(jt);
            const double a = w * w - k * k + mass * mass;
            const size_t b = (static_cast<size_t>(jx) * nt + jt) * 4;
            for (int c = 0; c < 4; ++c) v[c] = out.amp[b + static_cast<size_t>(c)];
            // S v with S = w gamma^0 + k gamma^1.
            sv[0] = w * v[0] + k * v[3];
            sv[1] = w * v[1] + k * v[2];
            sv[2] = -k * v[1] - w * v[2];
            sv[3] = -k * v[0] - w * v[3];
            for (int c = 0; c < 4; ++c)
                out.amp[b + static_cast<size_t>(c)] = s * (a * v[c] + 2.0 * mass * sv[c]);
        }
    }
    spinor_fft2(out, true);
    return out;
}

}  // namespace pdpsim
