#pragma once

#include "pdpsim/detector.hpp"
#include "pdpsim/potential.hpp"
#include "pdpsim/rng.hpp"
#include "pdpsim/scalar_field.hpp"

namespace pdpsim {

/// One proper-time step of dPsi/dtau = (-iH - Lambda/2) Psi - dPsi/dt:
/// the x-sector damped Strang step composed with an exact spectral shift
/// along t. The two factors commute because the coupling depends on x only
/// (couplings here are x-profiles by construction, so a t-dependent G is
/// unrepresentable).
class ProperTimeStepper {
public:
    ProperTimeStepper(Grid2D grid, const PotentialSpec& V, double mass,
                      std::vector<double> rate_x);

    void step(std::vector<cplx>& amp, double dtau);

    // Exposed separately so the commutation property is testable.
    void x_sector_step(std::vector<cplx>& amp, double dtau);
    void t_shift(std::vector<cplx>& amp, double dtau);

    /// (Psi, Lambda Psi) over dx dt for the x-only rate.
    double rate_expectation(const std::vector<cplx>& amp) const;
    bool has_rate() const;

    const Grid2D& grid() const { return grid_; }

private:
    void rebuild(double dtau);

    Grid2D grid_;
    std::vector<double> potential_;
    std::vector<double> rate_;
    double mass_;
    bool kinetic_;
    double cached_dtau_ = -1.0;
    std::vector<cplx> kin_half_;    // x modes
    std::vector<cplx> point_full_;  // x rows
    std::vector<cplx> shift_;       // t modes
    std::vector<cplx> scratch_;
};

ScalarField2D evolve_proper_time(const ScalarField2D& field,
                                 const std::vector<DetectorSpec>& detectors,
                                 const PotentialSpec& V, double mass, double dtau);

/// Closed form Psi_tau(x,t) = phi(t - tau) [e^{(-iH - Lambda/2) tau} psi0](x).
/// The x-sector propagator is a dense exponential up to the dense cap and a
/// substepped Strang flow beyond it. tau = 0 returns the product state
/// exactly.
ScalarField2D factorized_solution(const WaveFunction1D& phi, const WaveFunction1D& psi0,
                                  const Grid2D& grid, const std::vector<DetectorSpec>& detectors,
                                  const PotentialSpec& V, double mass, double tau);

/// True when the shifted phi support would cross the periodic t-box edge,
/// invalidating the closed form; callers surface this as a warning.
bool phi_wraps(const WaveFunction1D& phi, double tau);

/// Cumulative click threshold Q(tau) = 1 - |Psi_tau|^2 tabulated along the
/// deterministic damped flow at step resolution, with monotone inversion by
/// per-interval exponential interpolation (exact for a constant rate).
struct ClickLawTable {
    std::vector<double> tau;
    std::vector<double> q;

    double q_final() const { return q.empty() ? 0.0 : q.back(); }

    /// First tau with Q(tau) = p, or a negative value for no-click.
    double invert(double p) const;
};

/// Tabulate the click law of the proper-time flow from a product state.
ClickLawTable propertime_click_law(const WaveFunction1D& phi, const WaveFunction1D& psi0,
                                   const Grid2D& grid, const std::vector<DetectorSpec>& detectors,
                                   const PotentialSpec& V, double mass, double dtau,
                                   double horizon);

/// Tabulate the click law of the 1D damped flow from psi0.
ClickLawTable nonrel_click_law(const WaveFunction1D& psi0,
                               const std::vector<DetectorSpec>& detectors,
                               const PotentialSpec& V, double mass, double dt, double horizon);

struct PropertimeComparison {
    double max_intensity_diff = 0.0;  // deterministic pointwise gap
    double ks_distance = 0.0;         // two-sample KS between click samples
    double ks_critical_5pct = 0.0;
    long n_samples = 0;
    long no_click_1d = 0;
    long no_click_2d = 0;
};

struct PropertimeComparisonConfig {
    Grid2D grid;
    double packet_center = 0.0, packet_width = 1.0, packet_momentum = 0.0;
    double phi_center = 0.0, phi_width = 0.5;
    std::vector<DetectorSpec> detectors;
    PotentialSpec potential;
    double mass = 1.0;
    double dt = 5e-3;
    double horizon = 8.0;
    long n_samples = 10000;
    uint64_t seed = 1;
};

/// Runs the proper-time PDP (first click) and the 1D PDP side by side:
/// pointwise intensity agreement plus a two-sample KS between empirical
/// click-time distributions.
PropertimeComparison click_statistics_equivalence(const PropertimeComparisonConfig& cfg);

}  // namespace pdpsim
