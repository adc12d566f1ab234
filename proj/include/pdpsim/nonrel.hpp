#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdpsim/detector.hpp"
#include "pdpsim/operators.hpp"
#include "pdpsim/rng.hpp"

namespace pdpsim {

/// Thrown when the damped propagation produces non-finite amplitudes.
struct propagation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pure state of the hybrid system: quantum state plus classical detectors.
struct HybridState1D {
    WaveFunction1D psi;
    std::vector<DetectorSpec> detectors;
    double clock = 0.0;
};

struct ClickEvent {
    double time = 0.0;
    int detector_index = -1;
    double pre_click_norm2 = 0.0;  // squared norm of the damped state just before the jump
    double post_mean_x = 0.0;      // post-jump position density summary
    double post_std_x = 0.0;
};

struct StateSnapshot {
    double time = 0.0;
    int clicks_so_far = 0;
    WaveFunction1D psi;  // normalized
};

struct TrajectoryRecord {
    uint64_t seed = 0;
    uint64_t stream_index = 0;
    std::vector<ClickEvent> events;
    bool no_click = true;
    double horizon = 0.0;
    bool aborted = false;
    std::string abort_reason;
    std::vector<StateSnapshot> snapshots;  // in-memory only, not serialized
};

/// Dynamics parameters shared by the damped-evolution operations.
struct NonrelParams {
    PotentialSpec potential;
    double mass = 1.0;  // +infinity switches the kinetic term off
    double dt = 1e-3;
};

/// Full per-trajectory configuration.
struct NonrelConfig {
    Grid1D grid;
    double packet_center = 0.0;
    double packet_width = 1.0;
    double packet_momentum = 0.0;
    std::optional<WaveFunction1D> initial_psi;  // overrides the packet parameters
    PotentialSpec potential;
    std::vector<DetectorSpec> detectors;
    double mass = 1.0;
    double dt = 1e-3;
    double horizon = 10.0;
    std::vector<double> sample_times;  // strictly increasing, within [0, horizon]

    NonrelParams params() const { return {potential, mass, dt}; }
    WaveFunction1D make_initial() const {
        if (initial_psi) return *initial_psi;
        return gaussian_packet(grid, packet_center, packet_width, packet_momentum);
    }
};

/// One Strang step of psi' = (-iH - Lambda/2) psi with per-step factor caching.
/// Half kinetic step in Fourier space, full pointwise exp((-iV - Lambda/2) dt),
/// half kinetic step. Norm is non-increasing for Lambda >= 0.
class DampedStepper1D {
public:
    DampedStepper1D(Grid1D grid, const PotentialSpec& V, double mass,
                    std::vector<double> rate);

    void set_rate(std::vector<double> rate);  // Lambda(x); empty means zero
    const std::vector<double>& rate() const { return rate_; }
    bool has_rate() const;  // true if Lambda > 0 anywhere

    void step(std::vector<cplx>& amp, double dt);

    /// (psi, Lambda psi) for the current rate, times dx.
    double rate_expectation(const std::vector<cplx>& amp) const;

    const Grid1D& grid() const { return grid_; }

private:
    void rebuild(double dt);

    Grid1D grid_;
    std::vector<double> potential_;
    std::vector<double> rate_;
    double mass_;
    bool kinetic_;
    double cached_dt_ = -1.0;
    std::vector<cplx> kin_half_;   // exp(-i k^2/(2m) dt/2)
    std::vector<cplx> point_full_; // exp((-iV - Lambda/2) dt)
    std::vector<cplx> scratch_;
};

/// Total rate operator Lambda(x) = sum of g_i(x)^2 over active detectors.
std::vector<double> total_rate(const Grid1D& grid, const std::vector<DetectorSpec>& detectors);

/// Default step size: max(Lambda) dt <= 0.01 and kinetic phase per step at
/// the Nyquist mode <= pi/4, capped at 0.01 for idle dynamics.
double suggest_dt(const Grid1D& grid, double mass, const std::vector<DetectorSpec>& detectors);

/// One damped Strang step (pure wrapper around DampedStepper1D).
WaveFunction1D evolve_damped(const WaveFunction1D& psi, const std::vector<DetectorSpec>& detectors,
                             const PotentialSpec& V, double mass, double dt);

struct JumpSearchResult {
    bool clicked = false;
    double t1 = 0.0;       // absolute click time (state.clock origin)
    WaveFunction1D psi;    // damped (unnormalized) state at t1, or at the horizon
};

/// Integrates the damped flow from state.psi (normalized) monitoring
/// Q(t) = 1 - |psi_t|^2 and returns the first t1 with Q(t1) = p, refined by
/// bisection to |Q - p| < 1e-9. No-click when the horizon is reached first.
JumpSearchResult find_jump_time(const HybridState1D& state, const NonrelParams& params, double p,
                                double horizon);

/// Collapse psi -> g psi / |g psi| and flip the detector state alpha 0 -> 1.
WaveFunction1D jump(const WaveFunction1D& psi, DetectorSpec& detector);

/// Per-click detector selection weights w_i = (psi, Lambda_i psi) over active
/// detectors; returned unnormalized together with their sum.
std::vector<double> selection_weights(const WaveFunction1D& psi,
                                      const std::vector<DetectorSpec>& detectors);

/// Optional accumulator for selection probabilities (test/diagnostic hook).
struct SelectionStats {
    std::vector<double> prob_sums;
    long clicks = 0;
    double max_simplex_error = 0.0;  // worst |sum p_i - 1| seen
    void accumulate(const std::vector<double>& probs) {
        if (prob_sums.size() < probs.size()) prob_sums.resize(probs.size(), 0.0);
        double total = 0.0;
        for (size_t i = 0; i < probs.size(); ++i) {
            prob_sums[i] += probs[i];
            total += probs[i];
        }
        max_simplex_error = std::max(max_simplex_error, std::abs(total - 1.0));
        ++clicks;
    }
};

/// Algorithm: repeat (draw p -> integrate damped flow to the jump time ->
/// select detector with probability (psi, Lambda_i psi)/(psi, Lambda psi) ->
/// jump -> continue) until the horizon. Single-shot detectors deactivate
/// after their click; reusable ones re-arm after dead_time.
TrajectoryRecord run_trajectory(const NonrelConfig& cfg, RngStream rng,
                                SelectionStats* stats = nullptr);

}  // namespace pdpsim
