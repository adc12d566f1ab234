#pragma once

#include <cstdint>
#include <string>

#include "pdpsim/detector.hpp"
#include "pdpsim/dirac.hpp"
#include "pdpsim/nonrel.hpp"
#include "pdpsim/rng.hpp"

namespace pdpsim {

/// Detector selection weighting at a click: Rate uses the Lambda_i = G_i^2
/// expectations (matching the nonrelativistic rule), Linear the first-power
/// G_i expectations. Both are non-negative for any field.
enum class RelWeighting { Rate, Linear };

struct RelConfig {
    Grid2D grid;
    double dirac_mass = 0.0;      // m in the Dirac operator
    double evolution_mass = 1.0;  // M in the D^2/(2M) generator
    double charge = 0.0;
    GaugeField gauge;
    SpinorPacketParams packet;
    std::vector<DetectorSpec> detectors;  // profiles induce G = P+ g(x)
    double dtau = 1e-2;
    double horizon = 10.0;
    RelWeighting weighting = RelWeighting::Rate;
};

struct RelClickEvent {
    double tau = 0.0;
    int detector_index = -1;
    double pre_click_norm = 0.0;  // indefinite norm just before the jump
    SpinorField2D::PlusSummary post;
};

struct RelTrajectoryRecord {
    uint64_t seed = 0;
    uint64_t stream_index = 0;
    std::vector<RelClickEvent> events;
    bool no_click = true;
    double horizon = 0.0;
    bool aborted = false;
    std::string abort_reason;
};

/// Strang step of dPsi/dtau = (-i D^2/(2M) - Lambda/2) Psi with
/// Lambda = P+ sum g_i(x)^2: half spectral D^2/(2M) propagator, full
/// pointwise upper-component damping, half spectral propagator. The
/// per-mode propagator is the closed form
///   exp(-i h (a I + 2 m S)/(2M)) = e^{-i a h/(2M)} (cosh(theta s) I +
///   sinh(theta s)/s S),   S = w gamma^0 + k gamma^1,  s^2 = w^2 - k^2,
/// stored as two coefficients per mode. Requires A = 0.
/// The stepper works on fields in the mixed (x, t-mode) representation:
/// damping and jumps are diagonal in x and t-independent, so the t axis is
/// transformed once per segment instead of twice per step.
class RelStepper {
public:
    RelStepper(Grid2D grid, double dirac_mass, double evolution_mass,
               std::vector<double> rate_x);

    void set_rate(std::vector<double> rate_x);
    bool has_rate() const;

    static void to_mixed(SpinorField2D& f);
    static void from_mixed(SpinorField2D& f);

    /// One Strang step on a mixed-representation field.
    void step(SpinorField2D& f, double dtau);

    /// <Psi, Lambda Psi> = sum g^2 |P+ Psi|^2 dx dt (non-negative);
    /// f in the mixed representation.
    double rate_expectation(const SpinorField2D& f) const;

    /// Indefinite norm of a mixed-representation field.
    static double indefinite_norm2_of(const SpinorField2D& f);

private:
    void rebuild(double dtau);

    Grid2D grid_;
    double m_, M_;
    std::vector<double> rate_;
    double cached_dtau_ = -1.0;
    std::vector<cplx> alpha_, beta_;  // per mode, for the half step
    std::vector<double> damp_;        // per x row, for the full step
    std::vector<cplx> scratch_;
};

/// One damped Strang step on an ordinary-representation field (the public
/// operation; trajectory loops use the stepper directly).
SpinorField2D evolve_rel_damped(const SpinorField2D& psi, const RelConfig& cfg, double dtau);

/// (G Psi)(x,t) = P+ g(x) Psi(x,t): upper components scaled by g, lower
/// components zeroed.
SpinorField2D apply_coupling(const SpinorField2D& psi, const DetectorSpec& detector);

/// D^2/(2M) composed twice through apply_dirac (see dirac.hpp for the
/// spectral route used by the propagator).
SpinorField2D apply_dirac_squared_cfg(const SpinorField2D& psi, const RelConfig& cfg);

/// Selection weights over active detectors under the configured weighting.
std::vector<double> rel_selection_weights(const SpinorField2D& psi,
                                          const std::vector<DetectorSpec>& detectors,
                                          RelWeighting weighting);

/// Cumulative-probability pick: index i with probability w_i / sum w.
/// Throws when the weights cannot be normalized.
size_t pick_index(const std::vector<double>& weights, double u);

/// Sample the clicking detector at the jump state:
/// p_i = <Psi, Lambda_i Psi> / sum_j <Psi, Lambda_j Psi> under Rate
/// weighting, first-power expectations under Linear.
int rel_select_detector(const SpinorField2D& psi, const std::vector<DetectorSpec>& detectors,
                        RelWeighting weighting, double u);

/// Jump Psi -> G Psi scaled to unit indefinite norm; the scale is
/// 1/sqrt(<Psi, G^2 Psi>), well defined because the radicand is the
/// non-negative Euclidean quantity. Flips the detector's alpha.
SpinorField2D rel_jump(const SpinorField2D& psi, DetectorSpec& detector);

struct RelJumpSearchResult {
    bool clicked = false;
    double tau1 = 0.0;
    SpinorField2D psi;  // damped state at tau1 (indefinite norm 1 - p) or at the horizon
};

/// Monitor Q(tau) = 1 - <Psi, Psi> along the damped flow until Q = p
/// (bisection-refined to |Q - p| < 1e-9) or the horizon. A decreasing Q
/// signals a broken positivity invariant and aborts.
RelJumpSearchResult rel_find_jump_time(const SpinorField2D& psi0, const RelConfig& cfg, double p);

RelTrajectoryRecord run_rel_trajectory(const RelConfig& cfg, RngStream rng,
                                       SelectionStats* stats = nullptr);

}  // namespace pdpsim
