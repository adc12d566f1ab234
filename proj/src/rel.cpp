#include "pdpsim/rel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdpsim/fft.hpp"

namespace pdpsim {

namespace {

constexpr double kQTolerance = 1e-9;

// Fields inside the relativistic engine live in the mixed (x, t-mode)
// representation; sums over the t axis pick up the 1/n_t Parseval factor.

double euclid_norm2_mixed(const SpinorField2D& f) {
    double s = 0.0;
    for (const auto& z : f.amp) s += std::norm(z);
    return s * f.grid.cell() / f.grid.t.n;
}

double indefinite_norm2_mixed(const SpinorField2D& f) {
    double s = 0.0;
    const size_t points = f.amp.size() / 4;
    for (size_t p = 0; p < points; ++p) {
        const size_t b = p * 4;
        s += std::norm(f.amp[b + 0]) + std::norm(f.amp[b + 1]);
        s -= std::norm(f.amp[b + 2]) + std::norm(f.amp[b + 3]);
    }
    return s * f.grid.cell() / f.grid.t.n;
}

double profile_weighted_plus_density_mixed(const SpinorField2D& psi,
                                           const std::vector<double>& w) {
    const int nx = psi.grid.x.n, nt = psi.grid.t.n;
    double s = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
        const double wx = w[static_cast<size_t>(ix)];
        if (wx == 0.0) continue;
        const cplx* row = psi.amp.data() + static_cast<size_t>(ix) * nt * 4;
        double r = 0.0;
        for (int it = 0; it < nt; ++it) {
            r += std::norm(row[it * 4 + 0]);
            r += std::norm(row[it * 4 + 1]);
        }
        s += wx * r;
    }
    return s * psi.grid.cell() / nt;
}

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

RelStepper::RelStepper(Grid2D grid, double dirac_mass, double evolution_mass,
                       std::vector<double> rate_x)
    : grid_(grid), m_(dirac_mass), M_(evolution_mass), rate_(std::move(rate_x)) {
    if (!(M_ > 0.0)) throw std::invalid_argument("RelStepper: evolution mass must be positive");
    if (!grid_.x.power_of_two() || !grid_.t.power_of_two())
        throw std::invalid_argument("RelStepper: power-of-two grids required");
    if (!rate_.empty() && static_cast<int>(rate_.size()) != grid_.x.n)
        throw std::invalid_argument("RelStepper: rate length mismatch");
}

void RelStepper::set_rate(std::vector<double> rate_x) {
    if (!rate_x.empty() && static_cast<int>(rate_x.size()) != grid_.x.n)
        throw std::invalid_argument("RelStepper: rate length mismatch");
    rate_ = std::move(rate_x);
    cached_dtau_ = -1.0;
}

bool RelStepper::has_rate() const {
    for (double v : rate_)
        if (v > 0.0) return true;
    return false;
}

void RelStepper::rebuild(double dtau) {
    const int nx = grid_.x.n, nt = grid_.t.n;
    const double h = 0.5 * dtau;  // half step
    alpha_.resize(static_cast<size_t>(nx) * nt);
    beta_.resize(static_cast<size_t>(nx) * nt);
    for (int jx = 0; jx < nx; ++jx) {
        const double k = grid_.x.freq(jx);
        for (int jt = 0; jt < nt; ++jt) {
            const double w = grid_.t.freq(jt);
            const double sigma = w * w - k * k;
            const double a = sigma + m_ * m_;
            const cplx phase = std::exp(cplx(0.0, -a * h / (2.0 * M_)));
            const cplx theta(0.0, -m_ * h / M_);
            const cplx s = std::sqrt(cplx(sigma, 0.0));
            cplx ch, shs;
            if (std::abs(theta * s) < 1e-6) {
                const cplx z = theta * s;
                ch = 1.0 + 0.5 * z * z;
                shs = theta * (1.0 + z * z / 6.0);
            } else {
                ch = std::cosh(theta * s);
                shs = std::sinh(theta * s) / s;
            }
            const size_t idx = static_cast<size_t>(jx) * nt + jt;
            alpha_[idx] = phase * ch;
            beta_[idx] = phase * shs;
        }
    }
    damp_.resize(static_cast<size_t>(nx));
    for (int ix = 0; ix < nx; ++ix) {
        const double lam = rate_.empty() ? 0.0 : rate_[static_cast<size_t>(ix)];
        damp_[static_cast<size_t>(ix)] = std::exp(-0.5 * lam * dtau);
    }
    cached_dtau_ = dtau;
}

void RelStepper::to_mixed(SpinorField2D& f) { spinor_fft_t(f, false); }
void RelStepper::from_mixed(SpinorField2D& f) { spinor_fft_t(f, true); }

void RelStepper::step(SpinorField2D& f, double dtau) {
    if (!(dtau > 0.0) || !std::isfinite(dtau))
        throw std::invalid_argument("RelStepper: dtau must be positive and finite");
    if (dtau != cached_dtau_) rebuild(dtau);
    const int nx = grid_.x.n, nt = grid_.t.n;

    // Half-step of the per-mode propagator: x axis to mode space and back,
    // t already lives in mode space.
    auto half_unitary = [&] {
        for (int jt = 0; jt < nt; ++jt)
            for (int c = 0; c < 4; ++c)
                fft_strided(f.amp.data() + static_cast<size_t>(jt) * 4 + c, nx,
                            static_cast<long>(nt) * 4, false, scratch_);
        for (int jx = 0; jx < nx; ++jx) {
            const double k = grid_.x.freq(jx);
            for (int jt = 0; jt < nt; ++jt) {
                const double w = grid_.t.freq(jt);
                const size_t idx = static_cast<size_t>(jx) * nt + jt;
                const cplx al = alpha_[idx], be = beta_[idx];
                cplx* v = f.amp.data() + idx * 4;
                const cplx s0 = w * v[0] + k * v[3];
                const cplx s1 = w * v[1] + k * v[2];
                const cplx s2 = -k * v[1] - w * v[2];
                const cplx s3 = -k * v[0] - w * v[3];
                v[0] = al * v[0] + be * s0;
                v[1] = al * v[1] + be * s1;
                v[2] = al * v[2] + be * s2;
                v[3] = al * v[3] + be * s3;
            }
        }
        for (int jt = 0; jt < nt; ++jt)
            for (int c = 0; c < 4; ++c)
                fft_strided(f.amp.data() + static_cast<size_t>(jt) * 4 + c, nx,
                            static_cast<long>(nt) * 4, true, scratch_);
    };

    half_unitary();
    for (int ix = 0; ix < nx; ++ix) {
        const double d = damp_[static_cast<size_t>(ix)];
        if (d == 1.0) continue;
        cplx* row = f.amp.data() + static_cast<size_t>(ix) * nt * 4;
        for (int it = 0; it < nt; ++it) {
            row[it * 4 + 0] *= d;
            row[it * 4 + 1] *= d;
        }
    }
    half_unitary();

    if (!std::isfinite(euclid_norm2_mixed(f)))
        throw propagation_error("relativistic propagation produced non-finite amplitudes");
}

double RelStepper::rate_expectation(const SpinorField2D& f) const {
    if (rate_.empty()) return 0.0;
    return profile_weighted_plus_density_mixed(f, rate_);
}

double RelStepper::indefinite_norm2_of(const SpinorField2D& f) {
    return indefinite_norm2_mixed(f);
}

SpinorField2D evolve_rel_damped(const SpinorField2D& psi, const RelConfig& cfg, double dtau) {
    RelStepper stepper(psi.grid, cfg.dirac_mass, cfg.evolution_mass,
                       total_rate(psi.grid.x, cfg.detectors));
    SpinorField2D out = psi;
    RelStepper::to_mixed(out);
    stepper.step(out, dtau);
    RelStepper::from_mixed(out);
    return out;
}

SpinorField2D apply_coupling(const SpinorField2D& psi, const DetectorSpec& detector) {
    const std::vector<double> g = detector.profile.evaluate(psi.grid.x);
    SpinorField2D out(psi.grid);
    const int nx = psi.grid.x.n, nt = psi.grid.t.n;
    for (int ix = 0; ix < nx; ++ix) {
        const double gx = g[static_cast<size_t>(ix)];
        const cplx* src = psi.amp.data() + static_cast<size_t>(ix) * nt * 4;
        cplx* dst = out.amp.data() + static_cast<size_t>(ix) * nt * 4;
        for (int it = 0; it < nt; ++it) {
            dst[it * 4 + 0] = gx * src[it * 4 + 0];
            dst[it * 4 + 1] = gx * src[it * 4 + 1];
            // P+ zeroes the lower components.
        }
    }
    return out;
}

SpinorField2D apply_dirac_squared_cfg(const SpinorField2D& psi, const RelConfig& cfg) {
    return apply_dirac_squared(psi, cfg.dirac_mass, cfg.evolution_mass, cfg.charge, cfg.gauge);
}

std::vector<double> rel_selection_weights(const SpinorField2D& psi,
                                          const std::vector<DetectorSpec>& detectors,
                                          RelWeighting weighting) {
    std::vector<double> w(detectors.size(), 0.0);
    for (size_t d = 0; d < detectors.size(); ++d) {
        if (!detectors[d].active) continue;
        std::vector<double> g = detectors[d].profile.evaluate(psi.grid.x);
        if (weighting == RelWeighting::Rate)
            for (auto& v : g) v *= v;
        double s = 0.0;
        const int nx = psi.grid.x.n, nt = psi.grid.t.n;
        for (int ix = 0; ix < nx; ++ix) {
            const double wx = g[static_cast<size_t>(ix)];
            if (wx == 0.0) continue;
            const cplx* row = psi.amp.data() + static_cast<size_t>(ix) * nt * 4;
            double r = 0.0;
            for (int it = 0; it < nt; ++it)
                r += std::norm(row[it * 4 + 0]) + std::norm(row[it * 4 + 1]);
            s += wx * r;
        }
        w[d] = s * psi.grid.cell();
    }
    return w;
}

size_t pick_index(const std::vector<double>& weights, double u) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::runtime_error("pick_index: weights must be finite and non-negative");
        total += w;
    }
    if (!(total > 0.0))
        throw std::runtime_error("pick_index: zero total weight is inconsistent with a click");
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i] / total;
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

int rel_select_detector(const SpinorField2D& psi, const std::vector<DetectorSpec>& detectors,
                        RelWeighting weighting, double u) {
    if (detectors.empty())
        throw std::invalid_argument("rel_select_detector: at least one detector required");
    return static_cast<int>(pick_index(rel_selection_weights(psi, detectors, weighting), u));
}

SpinorField2D rel_jump(const SpinorField2D& psi, DetectorSpec& detector) {
    SpinorField2D out = apply_coupling(psi, detector);
    // G Psi lies in the P+ subspace: indefinite norm equals Euclidean norm.
    const double n2 = out.euclid_norm2();
    if (!(n2 > 0.0))
        throw std::runtime_error("rel_jump: <Psi, G^2 Psi> = 0, click is inconsistent");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& z : out.amp) z *= s;
    detector.alpha = 1;
    return out;
}

namespace {

// Selection weights for a mixed-representation field (Parseval over t).
std::vector<double> selection_weights_mixed(const SpinorField2D& psi,
                                            const std::vector<DetectorSpec>& detectors,
                                            RelWeighting weighting) {
    std::vector<double> w(detectors.size(), 0.0);
    for (size_t d = 0; d < detectors.size(); ++d) {
        if (!detectors[d].active) continue;
        std::vector<double> g = detectors[d].profile.evaluate(psi.grid.x);
        if (weighting == RelWeighting::Rate)
            for (auto& v : g) v *= v;
        w[d] = profile_weighted_plus_density_mixed(psi, g);
    }
    return w;
}

// Jump applied in the mixed representation: g(x) P+ is diagonal in x and
// t-independent, so it commutes with the t transform.
void rel_jump_mixed(SpinorField2D& psi, DetectorSpec& detector) {
    const std::vector<double> g = detector.profile.evaluate(psi.grid.x);
    const int nx = psi.grid.x.n, nt = psi.grid.t.n;
    for (int ix = 0; ix < nx; ++ix) {
        const double gx = g[static_cast<size_t>(ix)];
        cplx* row = psi.amp.data() + static_cast<size_t>(ix) * nt * 4;
        for (int it = 0; it < nt; ++it) {
            row[it * 4 + 0] *= gx;
            row[it * 4 + 1] *= gx;
            row[it * 4 + 2] = cplx(0.0, 0.0);
            row[it * 4 + 3] = cplx(0.0, 0.0);
        }
    }
    const double n2 = euclid_norm2_mixed(psi);
    if (!(n2 > 0.0))
        throw std::runtime_error("rel_jump: <Psi, G^2 Psi> = 0, click is inconsistent");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& z : psi.amp) z *= s;
    detector.alpha = 1;
}

struct RelMonitorResult {
    bool clicked = false;
    double elapsed = 0.0;
};

RelMonitorResult rel_monitor_until(RelStepper& stepper, SpinorField2D& f, double budget,
                                   double dtau, double p) {
    RelMonitorResult out;
    const bool can_click = stepper.has_rate();
    auto q_of = [](const SpinorField2D& field) { return 1.0 - indefinite_norm2_mixed(field); };

    if (p <= 0.0) {
        out.clicked = can_click && stepper.rate_expectation(f) > 0.0;
        if (!out.clicked) {
            double elapsed = 0.0;
            while (elapsed < budget) {
                const double h = std::min(dtau, budget - elapsed);
                if (!(h > 0.0)) break;
                stepper.step(f, h);
                elapsed += h;
            }
            out.elapsed = budget;
        }
        return out;
    }

    double elapsed = 0.0;
    double q_prev = q_of(f);
    SpinorField2D prev, trial;
    while (elapsed < budget) {
        const double h = std::min(dtau, budget - elapsed);
        if (!(h > 0.0)) break;
        prev = f;
        stepper.step(f, h);
        const double q = q_of(f);
        if (q < q_prev - 1e-10)
            throw propagation_error(
                "indefinite norm grew along the damped flow (positivity violated)");
        if (can_click && q >= p) {
            double lo = 0.0, q_lo = q_prev, hi = h, q_hi = q;
            for (int it = 0; it < 60; ++it) {
                const double mid = refine_guess(lo, q_lo, hi, q_hi, p, it % 2 == 0);
                if (!(mid > lo) || !(mid < hi)) break;
                trial = prev;
                stepper.step(trial, mid);
                const double q_mid = q_of(trial);
                if (std::abs(q_mid - p) <= kQTolerance) {
                    f = std::move(trial);
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
            f = std::move(trial);
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

void require_zero_gauge(const RelConfig& cfg) {
    if (cfg.charge != 0.0 && !cfg.gauge.is_zero())
        throw std::invalid_argument(
            "relativistic evolution requires A = 0 (the spectral propagator is "
            "per-mode diagonal only without a gauge field)");
}

}  // namespace

RelJumpSearchResult rel_find_jump_time(const SpinorField2D& psi0, const RelConfig& cfg, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("rel_find_jump_time: p outside [0,1]");
    require_zero_gauge(cfg);
    RelStepper stepper(psi0.grid, cfg.dirac_mass, cfg.evolution_mass,
                       total_rate(psi0.grid.x, cfg.detectors));
    RelJumpSearchResult res;
    res.psi = psi0;
    RelStepper::to_mixed(res.psi);
    RelMonitorResult m = rel_monitor_until(stepper, res.psi, cfg.horizon, cfg.dtau, p);
    RelStepper::from_mixed(res.psi);
    res.clicked = m.clicked;
    res.tau1 = m.elapsed;
    return res;
}

RelTrajectoryRecord run_rel_trajectory(const RelConfig& cfg, RngStream rng,
                                       SelectionStats* stats) {
    require_zero_gauge(cfg);
    RelTrajectoryRecord rec;
    rec.seed = rng.seed();
    rec.stream_index = rng.stream_index();
    rec.horizon = cfg.horizon;
    if (cfg.detectors.empty())
        throw std::invalid_argument("run_rel_trajectory: at least one detector required");

    SpinorField2D psi = spinor_packet(cfg.grid, cfg.packet);
    RelStepper::to_mixed(psi);
    std::vector<DetectorSpec> dets = cfg.detectors;
    std::vector<double> rearm_at(dets.size(), std::numeric_limits<double>::infinity());
    RelStepper stepper(cfg.grid, cfg.dirac_mass, cfg.evolution_mass,
                       total_rate(cfg.grid.x, dets));

    double tau = 0.0;
    double p = rng.uniform();

    auto any_active = [&] {
        return std::any_of(dets.begin(), dets.end(), [](const DetectorSpec& d) { return d.active; });
    };
    auto next_rearm = [&] {
        double r = std::numeric_limits<double>::infinity();
        for (double v : rearm_at) r = std::min(r, v);
        return r;
    };

    try {
        while (tau < cfg.horizon) {
            const double boundary = std::min(cfg.horizon, next_rearm());
            if (!any_active() && boundary >= cfg.horizon) break;

            RelMonitorResult m = rel_monitor_until(stepper, psi, boundary - tau, cfg.dtau, p);
            if (m.clicked) {
                tau += m.elapsed;
                const std::vector<double> w = selection_weights_mixed(psi, dets, cfg.weighting);
                double total = 0.0;
                for (double v : w) total += v;
                if (!(total > 0.0))
                    throw propagation_error("click detected with zero selection weight");
                if (stats) {
                    std::vector<double> probs(w.size());
                    for (size_t i = 0; i < w.size(); ++i) probs[i] = w[i] / total;
                    stats->accumulate(probs);
                }
                const size_t pick = pick_index(w, rng.uniform());

                RelClickEvent ev;
                ev.tau = tau;
                ev.detector_index = static_cast<int>(pick);
                ev.pre_click_norm = indefinite_norm2_mixed(psi);
                rel_jump_mixed(psi, dets[pick]);
                {
                    SpinorField2D snapshot = psi;
                    RelStepper::from_mixed(snapshot);
                    ev.post = snapshot.pplus_summary();
                }
                rec.events.push_back(ev);

                if (dets[pick].single_shot) {
                    dets[pick].active = false;
                } else if (dets[pick].dead_time > 0.0) {
                    dets[pick].active = false;
                    rearm_at[pick] = tau + dets[pick].dead_time;
                }
                stepper.set_rate(total_rate(cfg.grid.x, dets));
                p = rng.uniform();
                continue;
            }

            tau = boundary;
            for (size_t d = 0; d < dets.size(); ++d) {
                if (rearm_at[d] <= tau) {
                    rearm_at[d] = std::numeric_limits<double>::infinity();
                    dets[d].active = true;
                    stepper.set_rate(total_rate(cfg.grid.x, dets));
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
