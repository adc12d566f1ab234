#include "pdpsim/nonrel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdpsim/fft.hpp"

namespace pdpsim {

namespace {

double norm2_of(const std::vector<cplx>& amp, double dx) {
    double s = 0.0;
    for (const auto& z : amp) s += std::norm(z);
    return s * dx;
}

constexpr double kQTolerance = 1e-9;

// Survival-ratio interpolation of the threshold crossing inside a bracket;
// exact for a constant rate, alternated with plain bisection so the bracket
// always shrinks.
double refine_guess(double lo, double q_lo, double hi, double q_hi, double p, bool interpolate) {
    if (interpolate) {
        const double s0 = 1.0 - q_lo, s1 = 1.0 - q_hi, sp = 1.0 - p;
        if (s0 > 0.0 && s1 > 0.0 && sp > 0.0 && s1 < s0) {
            double fr = std::log(s0 / sp) / std::log(s0 / s1);
            fr = std::min(0.98, std::max(0.02, fr));
            return lo + fr * (hi - lo);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

DampedStepper1D::DampedStepper1D(Grid1D grid, const PotentialSpec& V, double mass,
                                 std::vector<double> rate)
    : grid_(grid),
      potential_(V.evaluate(grid)),
      rate_(std::move(rate)),
      mass_(mass) {
    if (!(mass_ > 0.0)) throw std::invalid_argument("DampedStepper1D: mass must be positive");
    kinetic_ = !std::isinf(mass_);
    if (kinetic_ && !grid_.power_of_two())
        throw std::invalid_argument("DampedStepper1D: spectral stepping needs a power-of-two grid");
    if (!rate_.empty() && static_cast<int>(rate_.size()) != grid_.n)
        throw std::invalid_argument("DampedStepper1D: rate length mismatch");
}

void DampedStepper1D::set_rate(std::vector<double> rate) {
    if (!rate.empty() && static_cast<int>(rate.size()) != grid_.n)
        throw std::invalid_argument("DampedStepper1D: rate length mismatch");
    rate_ = std::move(rate);
    cached_dt_ = -1.0;
}

bool DampedStepper1D::has_rate() const {
    for (double v : rate_)
        if (v > 0.0) return true;
    return false;
}

void DampedStepper1D::rebuild(double dt) {
    const int n = grid_.n;
    if (kinetic_) {
        kin_half_.resize(static_cast<size_t>(n));
        const double c = 0.5 / mass_;
        for (int j = 0; j < n; ++j) {
            const double k = grid_.freq(j);
            kin_half_[static_cast<size_t>(j)] = std::exp(-I_UNIT * (c * k * k) * (0.5 * dt));
        }
    }
    point_full_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double v = potential_[static_cast<size_t>(i)];
        const double lam = rate_.empty() ? 0.0 : rate_[static_cast<size_t>(i)];
        point_full_[static_cast<size_t>(i)] =
            std::exp(cplx(-0.5 * lam * dt, -v * dt));
    }
    cached_dt_ = dt;
}

void DampedStepper1D::step(std::vector<cplx>& amp, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("DampedStepper1D: dt must be positive and finite");
    if (dt != cached_dt_) rebuild(dt);
    const size_t n = amp.size();
    if (kinetic_) {
        fft_forward(amp);
        for (size_t j = 0; j < n; ++j) amp[j] *= kin_half_[j];
        fft_inverse(amp);
    }
    for (size_t i = 0; i < n; ++i) amp[i] *= point_full_[i];
    if (kinetic_) {
        fft_forward(amp);
        for (size_t j = 0; j < n; ++j) amp[j] *= kin_half_[j];
        fft_inverse(amp);
    }
    if (!std::isfinite(norm2_of(amp, grid_.dx())))
        throw propagation_error("damped propagation produced non-finite amplitudes (dt=" +
                                std::to_string(dt) + ")");
}

double DampedStepper1D::rate_expectation(const std::vector<cplx>& amp) const {
    if (rate_.empty()) return 0.0;
    double s = 0.0;
    for (size_t i = 0; i < amp.size(); ++i) s += rate_[i] * std::norm(amp[i]);
    return s * grid_.dx();
}

std::vector<double> total_rate(const Grid1D& grid, const std::vector<DetectorSpec>& detectors) {
    std::vector<double> lam(static_cast<size_t>(grid.n), 0.0);
    for (const auto& det : detectors) {
        if (!det.active) continue;
        const std::vector<double> g = det.profile.evaluate(grid);
        for (size_t i = 0; i < lam.size(); ++i) lam[i] += g[i] * g[i];
    }
    return lam;
}

double suggest_dt(const Grid1D& grid, double mass, const std::vector<DetectorSpec>& detectors) {
    double dt = 0.01;
    const std::vector<double> lam = total_rate(grid, detectors);
    double lam_max = 0.0;
    for (double v : lam) lam_max = std::max(lam_max, v);
    if (lam_max > 0.0) dt = std::min(dt, 0.01 / lam_max);
    if (!std::isinf(mass)) {
        const double k_nyq = M_PI / grid.dx();
        const double e_nyq = 0.5 * k_nyq * k_nyq / mass;
        if (e_nyq > 0.0) dt = std::min(dt, 0.25 * M_PI / e_nyq);
    }
    return dt;
}

WaveFunction1D evolve_damped(const WaveFunction1D& psi, const std::vector<DetectorSpec>& detectors,
                             const PotentialSpec& V, double mass, double dt) {
    DampedStepper1D stepper(psi.grid, V, mass, total_rate(psi.grid, detectors));
    WaveFunction1D out = psi;
    stepper.step(out.amp, dt);
    return out;
}

namespace {

/// Shared monitoring kernel: starting from a normalized state at relative
/// time 0, advance the damped flow until 1 - |psi|^2 reaches p or budget runs
/// out. Refinement re-steps from the saved pre-step state with a single
/// partial step per trial.
struct MonitorResult {
    bool clicked = false;
    double elapsed = 0.0;
};

MonitorResult monitor_until(DampedStepper1D& stepper, std::vector<cplx>& amp, double budget,
                            double dt, double p, double dx) {
    MonitorResult out;
    const bool can_click = stepper.has_rate();
    if (p <= 0.0) {
        // Threshold met at the start; a click needs positive intensity.
        out.clicked = can_click && stepper.rate_expectation(amp) > 0.0;
        if (!out.clicked) {
            // Evolve through the budget anyway; Q stays at zero.
            double elapsed = 0.0;
            while (elapsed < budget) {
                const double h = std::min(dt, budget - elapsed);
                if (!(h > 0.0)) break;
                stepper.step(amp, h);
                elapsed += h;
            }
            out.elapsed = budget;
        }
        return out;
    }
    double elapsed = 0.0;
    double q_prev = 1.0 - norm2_of(amp, dx);
    std::vector<cplx> prev, trial;
    while (elapsed < budget) {
        const double h = std::min(dt, budget - elapsed);
        if (!(h > 0.0)) break;
        prev = amp;
        stepper.step(amp, h);
        const double q = 1.0 - norm2_of(amp, dx);
        if (can_click && q >= p) {
            double lo = 0.0, q_lo = q_prev, hi = h, q_hi = q;
            for (int it = 0; it < 60; ++it) {
                const double mid = refine_guess(lo, q_lo, hi, q_hi, p, it % 2 == 0);
                if (!(mid > lo) || !(mid < hi)) break;
                trial = prev;
                stepper.step(trial, mid);
                const double q_mid = 1.0 - norm2_of(trial, dx);
                if (std::abs(q_mid - p) <= kQTolerance) {
                    amp = std::move(trial);
                    out.clicked = true;
                    out.elapsed = elapsed + mid;
                    return out;
                }
                if (q_mid < p) {
                    lo = mid;
                    q_lo = q_mid;
                } else {
                    hi = mid;
                    q_hi = q_mid;
                }
            }
            trial = prev;
            stepper.step(trial, hi);
            amp = std::move(trial);
            out.clicked = true;
            out.elapsed = elapsed + hi;
            return out;
        }
        q_prev = q;
        elapsed += h;
    }
    out.elapsed = budget;
    return out;
}

}  // namespace

JumpSearchResult find_jump_time(const HybridState1D& state, const NonrelParams& params, double p,
                                double horizon) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("find_jump_time: p outside [0,1]");
    if (horizon < state.clock)
        throw std::invalid_argument("find_jump_time: horizon precedes the state clock");

    DampedStepper1D stepper(state.psi.grid, params.potential, params.mass,
                            total_rate(state.psi.grid, state.detectors));
    JumpSearchResult res;
    res.psi = state.psi;
    MonitorResult m = monitor_until(stepper, res.psi.amp, horizon - state.clock, params.dt, p,
                                    state.psi.grid.dx());
    res.clicked = m.clicked;
    res.t1 = state.clock + m.elapsed;
    return res;
}

std::vector<double> selection_weights(const WaveFunction1D& psi,
                                      const std::vector<DetectorSpec>& detectors) {
    const double dx = psi.grid.dx();
    std::vector<double> w(detectors.size(), 0.0);
    for (size_t d = 0; d < detectors.size(); ++d) {
        if (!detectors[d].active) continue;
        const std::vector<double> g = detectors[d].profile.evaluate(psi.grid);
        double s = 0.0;
        for (size_t i = 0; i < g.size(); ++i) s += g[i] * g[i] * std::norm(psi.amp[i]);
        w[d] = s * dx;
    }
    return w;
}

WaveFunction1D jump(const WaveFunction1D& psi, DetectorSpec& detector) {
    const std::vector<double> g = detector.profile.evaluate(psi.grid);
    WaveFunction1D out = psi;
    for (size_t i = 0; i < out.amp.size(); ++i) out.amp[i] *= g[i];
    const double n = out.norm();
    if (!(n > 0.0))
        throw std::runtime_error("jump: |g psi| = 0 (dark state), click is inconsistent");
    const double s = 1.0 / n;
    for (auto& z : out.amp) z *= s;
    detector.alpha = 1;
    return out;
}

TrajectoryRecord run_trajectory(const NonrelConfig& cfg, RngStream rng, SelectionStats* stats) {
    TrajectoryRecord rec;
    rec.seed = rng.seed();
    rec.stream_index = rng.stream_index();
    rec.horizon = cfg.horizon;
    if (cfg.detectors.empty())
        throw std::invalid_argument("run_trajectory: at least one detector required");

    WaveFunction1D psi = cfg.make_initial();
    psi.normalize();
    std::vector<DetectorSpec> dets = cfg.detectors;
    std::vector<double> rearm_at(dets.size(), std::numeric_limits<double>::infinity());

    DampedStepper1D stepper(cfg.grid, cfg.potential, cfg.mass, total_rate(cfg.grid, dets));
    const double dx = cfg.grid.dx();

    double t = 0.0;
    double p = rng.uniform();
    int clicks = 0;
    size_t next_sample = 0;

    auto record_snapshot = [&](double when) {
        WaveFunction1D snap = psi;
        snap.normalize();
        rec.snapshots.push_back({when, clicks, std::move(snap)});
    };

    auto any_active = [&] {
        return std::any_of(dets.begin(), dets.end(), [](const DetectorSpec& d) { return d.active; });
    };
    auto next_rearm = [&] {
        double r = std::numeric_limits<double>::infinity();
        for (double v : rearm_at) r = std::min(r, v);
        return r;
    };

    try {
        while (t < cfg.horizon) {
            const double sample_t = next_sample < cfg.sample_times.size()
                                        ? cfg.sample_times[next_sample]
                                        : std::numeric_limits<double>::infinity();
            const double boundary = std::min({cfg.horizon, sample_t, next_rearm()});

            // Nothing left that can change the record: stop early.
            if (!any_active() && boundary >= cfg.horizon &&
                next_sample >= cfg.sample_times.size())
                break;

            MonitorResult m = monitor_until(stepper, psi.amp, boundary - t, cfg.dt, p, dx);
            if (m.clicked) {
                t += m.elapsed;
                std::vector<double> w = selection_weights(psi, dets);
                double total = 0.0;
                for (double v : w) total += v;
                if (!(total > 0.0))
                    throw propagation_error("click detected with zero selection weight");
                std::vector<double> probs(w.size());
                for (size_t i = 0; i < w.size(); ++i) probs[i] = w[i] / total;
                if (stats) stats->accumulate(probs);

                const double u = rng.uniform();
                size_t pick = w.size() - 1;
                double acc = 0.0;
                for (size_t i = 0; i < probs.size(); ++i) {
                    acc += probs[i];
                    if (u < acc) {
                        pick = i;
                        break;
                    }
                }

                ClickEvent ev;
                ev.time = t;
                ev.detector_index = static_cast<int>(pick);
                ev.pre_click_norm2 = psi.norm2();
                psi = jump(psi, dets[pick]);
                psi.density_summary(ev.post_mean_x, ev.post_std_x);
                rec.events.push_back(ev);
                ++clicks;

                if (dets[pick].single_shot) {
                    dets[pick].active = false;
                } else if (dets[pick].dead_time > 0.0) {
                    dets[pick].active = false;
                    rearm_at[pick] = t + dets[pick].dead_time;
                }
                stepper.set_rate(total_rate(cfg.grid, dets));
                p = rng.uniform();
                continue;
            }

            t = boundary;
            if (next_sample < cfg.sample_times.size() && boundary == sample_t) {
                record_snapshot(sample_t);
                ++next_sample;
            }
            for (size_t d = 0; d < dets.size(); ++d) {
                if (rearm_at[d] <= t) {
                    rearm_at[d] = std::numeric_limits<double>::infinity();
                    dets[d].active = true;
                    stepper.set_rate(total_rate(cfg.grid, dets));
                }
            }
        }
    } catch (const propagation_error& e) {
        rec.aborted = true;
        rec.abort_reason = e.what();
    }

    rec.no_click = rec.events.empty();
    return rec;
}

}  // namespace pdpsim
