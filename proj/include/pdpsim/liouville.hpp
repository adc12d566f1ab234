#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdpsim/nonrel.hpp"

namespace pdpsim {

/// Statistical state of the hybrid system: (rho0, rho1) with
/// Tr rho0 + Tr rho1 = 1. Matrices use the dx-weighted convention
/// rho_ij = psi_i conj(psi_j) dx so traces are grid-independent.
struct DensityPair {
    Eigen::MatrixXcd rho0;
    Eigen::MatrixXcd rho1;

    static DensityPair pure(const WaveFunction1D& psi);

    double trace0() const { return rho0.trace().real(); }
    double trace1() const { return rho1.trace().real(); }
    double trace_total() const { return trace0() + trace1(); }

    /// Smallest eigenvalue over both components (Hermitized).
    double min_eigenvalue() const;
};

inline constexpr int kDenseCap = 128;

/// One RK4 step of
///   rho0' = -i[H, rho0] - 1/2 {Lambda, rho0},
///   rho1' = -i[H, rho1] + g rho0 g,      Lambda = g^2 (g diagonal).
DensityPair step_master(const DensityPair& dp, const Eigen::MatrixXcd& H,
                        const std::vector<double>& g, double dt);

/// Dense Hamiltonian matrix assembled by applying the configured operator to
/// basis vectors, so the master equation sees exactly the trajectory engine's
/// discretization.
Eigen::MatrixXcd dense_hamiltonian_matrix(const Grid1D& grid, const PotentialSpec& V, double mass,
                                          Backend backend = Backend::Spectral);

struct MasterRun {
    std::vector<double> sample_times;
    std::vector<DensityPair> states;   // one per sample time
    double max_trace_drift = 0.0;      // max |Tr rho0 + Tr rho1 - 1| seen
    double min_eigenvalue = 0.0;       // most negative eigenvalue seen
};

/// Integrate the master equation from DensityPair::pure(psi0), recording
/// states at the requested sample times (each must be a non-negative multiple
/// of the step budget; steps are shortened to land exactly on them).
MasterRun run_master(const WaveFunction1D& psi0, const Eigen::MatrixXcd& H,
                     const std::vector<double>& g, double dt,
                     const std::vector<double>& sample_times);

/// Sum of absolute eigenvalues of the Hermitized difference.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct EnsembleEstimate {
    std::vector<double> sample_times;
    std::vector<DensityPair> states;
    std::vector<Eigen::MatrixXd> se0;  // per-entry standard errors
    std::vector<Eigen::MatrixXd> se1;
};

/// Frequency-weighted ensemble average over trajectory snapshots:
/// rho0(t) averages |psi><psi| over trajectories with no click by t,
/// rho1(t) over the rest; 1/N weighting reproduces the unnormalized pair.
EnsembleEstimate ensemble_estimate(const std::vector<TrajectoryRecord>& trajectories,
                                   const std::vector<double>& sample_times);

}  // namespace pdpsim
