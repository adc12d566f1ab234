#include "pdpsim/proper_time.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "pdpsim/fft.hpp"
#include "pdpsim/liouville.hpp"
#include "pdpsim/nonrel.hpp"
#include "pdpsim/stats.hpp"

namespace pdpsim {

ProperTimeStepper::ProperTimeStepper(Grid2D grid, const PotentialSpec& V, double mass,
                                     std::vector<double> rate_x)
    : grid_(grid),
      potential_(V.evaluate(grid.x)),
      rate_(std::move(rate_x)),
      mass_(mass) {
    if (!(mass_ > 0.0)) throw std::invalid_argument("ProperTimeStepper: mass must be positive");
    kinetic_ = !std::isinf(mass_);
    if (!grid_.t.power_of_two() || (kinetic_ && !grid_.x.power_of_two()))
        throw std::invalid_argument("ProperTimeStepper: spectral axes need power-of-two grids");
    if (!rate_.empty() && static_cast<int>(rate_.size()) != grid_.x.n)
        throw std::invalid_argument("ProperTimeStepper: rate length mismatch");
}

void ProperTimeStepper::rebuild(double dtau) {
    const int nx = grid_.x.n, nt = grid_.t.n;
    if (kinetic_) {
        kin_half_.resize(static_cast<size_t>(nx));
        const double c = 0.5 / mass_;
        for (int j = 0; j < nx; ++j) {
            const double k = grid_.x.freq(j);
            kin_half_[static_cast<size_t>(j)] = std::exp(-I_UNIT * (c * k * k) * (0.5 * dtau));
        }
    }
    point_full_.resize(static_cast<size_t>(nx));
    for (int i = 0; i < nx; ++i) {
        const double v = potential_[static_cast<size_t>(i)];
        const double lam = rate_.empty() ? 0.0 : rate_[static_cast<size_t>(i)];
        point_full_[static_cast<size_t>(i)] = std::exp(cplx(-0.5 * lam * dtau, -v * dtau));
    }
    shift_.resize(static_cast<size_t>(nt));
    for (int j = 0; j < nt; ++j) {
        const double w = grid_.t.freq(j);
        shift_[static_cast<size_t>(j)] = std::exp(-I_UNIT * w * dtau);
    }
    cached_dtau_ = dtau;
}

void ProperTimeStepper::x_sector_step(std::vector<cplx>& amp, double dtau) {
    if (!(dtau > 0.0) || !std::isfinite(dtau))
        throw std::invalid_argument("ProperTimeStepper: dtau must be positive and finite");
    if (dtau != cached_dtau_) rebuild(dtau);
    const int nx = grid_.x.n, nt = grid_.t.n;

    auto kinetic_half = [&] {
        scratch_.resize(static_cast<size_t>(nx));
        for (int it = 0; it < nt; ++it) {
            for (int ix = 0; ix < nx; ++ix)
                scratch_[static_cast<size_t>(ix)] = amp[static_cast<size_t>(ix) * nt + it];
            fft_forward(scratch_);
            for (int j = 0; j < nx; ++j) scratch_[static_cast<size_t>(j)] *= kin_half_[static_cast<size_t>(j)];
            fft_inverse(scratch_);
            for (int ix = 0; ix < nx; ++ix)
                amp[static_cast<size_t>(ix) * nt + it] = scratch_[static_cast<size_t>(ix)];
        }
    };

    if (kinetic_) kinetic_half();
    for (int ix = 0; ix < nx; ++ix) {
        const cplx f = point_full_[static_cast<size_t>(ix)];
        cplx* row = amp.data() + static_cast<size_t>(ix) * nt;
        for (int it = 0; it < nt; ++it) row[it] *= f;
    }
    if (kinetic_) kinetic_half();
}

void ProperTimeStepper::t_shift(std::vector<cplx>& amp, double dtau) {
    if (dtau != cached_dtau_) rebuild(dtau);
    const int nx = grid_.x.n, nt = grid_.t.n;
    for (int ix = 0; ix < nx; ++ix) {
        std::span<cplx> row(amp.data() + static_cast<size_t>(ix) * nt, static_cast<size_t>(nt));
        fft_forward(row);
        for (int j = 0; j < nt; ++j) row[static_cast<size_t>(j)] *= shift_[static_cast<size_t>(j)];
        fft_inverse(row);
    }
}

void ProperTimeStepper::step(std::vector<cplx>& amp, double dtau) {
    x_sector_step(amp, dtau);
    t_shift(amp, dtau);
    double n2 = 0.0;
    for (const auto& z : amp) n2 += std::norm(z);
    if (!std::isfinite(n2))
        throw propagation_error("proper-time propagation produced non-finite amplitudes");
}

double ProperTimeStepper::rate_expectation(const std::vector<cplx>& amp) const {
    if (rate_.empty()) return 0.0;
    const int nx = grid_.x.n, nt = grid_.t.n;
    double s = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
        const double lam = rate_[static_cast<size_t>(ix)];
        if (lam == 0.0) continue;
        const cplx* row = amp.data() + static_cast<size_t>(ix) * nt;
        double r = 0.0;
        for (int it = 0; it < nt; ++it) r += std::norm(row[it]);
        s += lam * r;
    }
    return s * grid_.cell();
}

bool ProperTimeStepper::has_rate() const {
    for (double v : rate_)
        if (v > 0.0) return true;
    return false;
}

ScalarField2D evolve_proper_time(const ScalarField2D& field,
                                 const std::vector<DetectorSpec>& detectors,
                                 const PotentialSpec& V, double mass, double dtau) {
    ProperTimeStepper stepper(field.grid, V, mass, total_rate(field.grid.x, detectors));
    ScalarField2D out = field;
    stepper.step(out.amp, dtau);
    return out;
}

ScalarField2D factorized_solution(const WaveFunction1D& phi, const WaveFunction1D& psi0,
                                  const Grid2D& grid, const std::vector<DetectorSpec>& detectors,
                                  const PotentialSpec& V, double mass, double tau) {
    if (tau < 0.0) throw std::invalid_argument("factorized_solution: tau must be non-negative");
    if (tau == 0.0) return ScalarField2D::product(grid, phi, psi0);

    // Shift phi by tau along t (exact on the periodic box).
    WaveFunction1D phi_shifted = phi;
    {
        std::span<cplx> a(phi_shifted.amp);
        fft_forward(a);
        for (int j = 0; j < grid.t.n; ++j) {
            const double w = grid.t.freq(j);
            phi_shifted.amp[static_cast<size_t>(j)] *= std::exp(-I_UNIT * w * tau);
        }
        fft_inverse(a);
    }

    // x-sector damped propagator applied to psi0.
    WaveFunction1D psi_tau = psi0;
    const std::vector<double> lam = total_rate(grid.x, detectors);
    if (grid.x.n <= kDenseCap) {
        Eigen::MatrixXcd gen =
            cplx(0.0, -1.0) * dense_hamiltonian_matrix(grid.x, V, mass);
        for (int i = 0; i < grid.x.n; ++i) gen(i, i) -= 0.5 * lam[static_cast<size_t>(i)];
        const Eigen::MatrixXcd U = (gen * tau).exp();
        Eigen::VectorXcd v(grid.x.n);
        for (int i = 0; i < grid.x.n; ++i) v(i) = psi0.amp[static_cast<size_t>(i)];
        const Eigen::VectorXcd w = U * v;
        for (int i = 0; i < grid.x.n; ++i) psi_tau.amp[static_cast<size_t>(i)] = w(i);
    } else {
        DampedStepper1D stepper(grid.x, V, mass, lam);
        const double dt = 1e-4;
        double s = 0.0;
        while (s < tau) {
            const double h = std::min(dt, tau - s);
            stepper.step(psi_tau.amp, h);
            s += h;
        }
    }
    return ScalarField2D::product(grid, phi_shifted, psi_tau);
}

bool phi_wraps(const WaveFunction1D& phi, double tau) {
    double peak = 0.0;
    for (const auto& z : phi.amp) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) return false;
    const double floor = 1e-13 * peak;
    int hi = 0;
    for (int i = 0; i < phi.grid.n; ++i)
        if (std::abs(phi.amp[static_cast<size_t>(i)]) > floor) hi = i;
    return phi.grid.point(hi) + tau > phi.grid.x_max;
}

double ClickLawTable::invert(double p) const {
    if (tau.size() < 2 || p >= q_final()) return -1.0;
    if (p <= 0.0) return q.front() > 0.0 ? tau.front() : 0.0;
    // First interval whose right endpoint reaches p.
    const auto it = std::lower_bound(q.begin(), q.end(), p);
    const size_t k = static_cast<size_t>(it - q.begin());
    if (k == 0) return tau.front();
    const double s0 = 1.0 - q[k - 1];
    const double s1 = 1.0 - q[k];
    const double sp = 1.0 - p;
    if (!(s0 > 0.0) || !(s1 > 0.0) || s1 >= s0) return tau[k];
    // Exponential-in-survival interpolation: exact for a constant rate.
    const double f = std::log(s0 / sp) / std::log(s0 / s1);
    return tau[k - 1] + f * (tau[k] - tau[k - 1]);
}

namespace {

template <typename StepFn, typename Norm2Fn>
ClickLawTable tabulate_click_law(StepFn&& do_step, Norm2Fn&& norm2, double dt, double horizon) {
    ClickLawTable table;
    const long steps = std::lround(std::ceil(horizon / dt - 1e-12));
    table.tau.reserve(static_cast<size_t>(steps) + 1);
    table.q.reserve(static_cast<size_t>(steps) + 1);
    table.tau.push_back(0.0);
    table.q.push_back(0.0);
    double t = 0.0;
    double q_prev = 0.0;
    for (long k = 0; k < steps; ++k) {
        const double h = std::min(dt, horizon - t);
        if (!(h > 0.0)) break;
        do_step(h);
        t += h;
        const double q_now = std::max(q_prev, 1.0 - norm2());
        table.tau.push_back(t);
        table.q.push_back(q_now);
        q_prev = q_now;
    }
    return table;
}

}  // namespace

ClickLawTable propertime_click_law(const WaveFunction1D& phi, const WaveFunction1D& psi0,
                                   const Grid2D& grid, const std::vector<DetectorSpec>& detectors,
                                   const PotentialSpec& V, double mass, double dtau,
                                   double horizon) {
    ScalarField2D field = ScalarField2D::product(grid, phi, psi0);
    field.normalize();
    ProperTimeStepper stepper(grid, V, mass, total_rate(grid.x, detectors));
    return tabulate_click_law([&](double h) { stepper.step(field.amp, h); },
                              [&] { return field.norm2(); }, dtau, horizon);
}

ClickLawTable nonrel_click_law(const WaveFunction1D& psi0,
                               const std::vector<DetectorSpec>& detectors,
                               const PotentialSpec& V, double mass, double dt, double horizon) {
    WaveFunction1D psi = psi0;
    psi.normalize();
    DampedStepper1D stepper(psi.grid, V, mass, total_rate(psi.grid, detectors));
    return tabulate_click_law([&](double h) { stepper.step(psi.amp, h); },
                              [&] { return psi.norm2(); }, dt, horizon);
}

PropertimeComparison click_statistics_equivalence(const PropertimeComparisonConfig& cfg) {
    PropertimeComparison out;
    out.n_samples = cfg.n_samples;

    const WaveFunction1D psi0 =
        gaussian_packet(cfg.grid.x, cfg.packet_center, cfg.packet_width, cfg.packet_momentum);
    const WaveFunction1D phi = gaussian_packet(cfg.grid.t, cfg.phi_center, cfg.phi_width, 0.0);

    // Deterministic part: pointwise intensity functions along both flows.
    {
        WaveFunction1D psi = psi0;
        DampedStepper1D s1(cfg.grid.x, cfg.potential, cfg.mass,
                           total_rate(cfg.grid.x, cfg.detectors));
        ScalarField2D field = ScalarField2D::product(cfg.grid, phi, psi0);
        ProperTimeStepper s2(cfg.grid, cfg.potential, cfg.mass,
                             total_rate(cfg.grid.x, cfg.detectors));
        double t = 0.0;
        out.max_intensity_diff =
            std::abs(s1.rate_expectation(psi.amp) - s2.rate_expectation(field.amp));
        while (t < cfg.horizon) {
            const double h = std::min(cfg.dt, cfg.horizon - t);
            if (!(h > 0.0)) break;
            s1.step(psi.amp, h);
            s2.step(field.amp, h);
            t += h;
            out.max_intensity_diff =
                std::max(out.max_intensity_diff,
                         std::abs(s1.rate_expectation(psi.amp) - s2.rate_expectation(field.amp)));
        }
    }

    // Stochastic part: inverse-transform samples of each engine's click law.
    const ClickLawTable law1 =
        nonrel_click_law(psi0, cfg.detectors, cfg.potential, cfg.mass, cfg.dt, cfg.horizon);
    const ClickLawTable law2 = propertime_click_law(phi, psi0, cfg.grid, cfg.detectors,
                                                    cfg.potential, cfg.mass, cfg.dt, cfg.horizon);

    std::vector<double> t1, t2;
    t1.reserve(static_cast<size_t>(cfg.n_samples));
    t2.reserve(static_cast<size_t>(cfg.n_samples));
    RngStream r1(cfg.seed, 0);
    RngStream r2(cfg.seed, 1);
    for (long i = 0; i < cfg.n_samples; ++i) {
        const double a = law1.invert(r1.uniform());
        const double b = law2.invert(r2.uniform());
        if (a >= 0.0)
            t1.push_back(a);
        else
            ++out.no_click_1d;
        if (b >= 0.0)
            t2.push_back(b);
        else
            ++out.no_click_2d;
    }
    if (!t1.empty() && !t2.empty()) {
        out.ks_distance = ks_two_sample(t1, t2);
        out.ks_critical_5pct = ks_two_sample_critical(
            0.05, static_cast<long>(t1.size()), static_cast<long>(t2.size()));
    }
    return out;
}

}  // namespace pdpsim
