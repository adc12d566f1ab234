#include "pdpsim/liouville.hpp"

#include <cmath>
#include <stdexcept>

namespace pdpsim {

namespace {

struct PairRhs {
    Eigen::MatrixXcd d0;
    Eigen::MatrixXcd d1;
};

PairRhs master_rhs(const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& rho1,
                   const Eigen::MatrixXcd& H, const Eigen::VectorXd& gd) {
    const cplx mi(0.0, -1.0);
    const
        Eigen::MatrixXcd comm0 = H * rho0 - rho0 * H;
    const Eigen::MatrixXcd comm1 = H * rho1 - rho1 * H;
    const Eigen::VectorXd lam = gd.cwiseProduct(gd);
    PairRhs rhs;
    rhs.d0 = mi * comm0 - 0.5 * (lam.asDiagonal() * rho0 + rho0 * lam.asDiagonal());
    rhs.d1 = mi * comm1 + gd.asDiagonal() * rho0 * gd.asDiagonal();
    return rhs;
}

}  // namespace

DensityPair DensityPair::pure(const WaveFunction1D& psi) {
    const int n = psi.grid.n;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = psi.amp[static_cast<size_t>(i)];
    DensityPair dp;
    dp.rho0 = (v * v.adjoint()) * psi.grid.dx();
    dp.rho1 = Eigen::MatrixXcd::Zero(n, n);
    return dp;
}

double DensityPair::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s0(0.5 * (rho0 + rho0.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s1(0.5 * (rho1 + rho1.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return std::min(s0.eigenvalues().minCoeff(), s1.eigenvalues().minCoeff());
}

DensityPair step_master(const DensityPair& dp, const Eigen::MatrixXcd& H,
                        const std::vector<double>& g, double dt) {
    const int n = static_cast<int>(dp.rho0.rows());
    if (n > kDenseCap)
        throw std::invalid_argument("step_master: dimension exceeds the dense cap " +
                                    std::to_string(kDenseCap));
    if (!(dt > 0.0)) throw std::invalid_argument("step_master: dt must be positive");
    if (H.rows() != n || static_cast<int>(g.size()) != n)
        throw std::invalid_argument("step_master: dimension mismatch");

    Eigen::VectorXd gd(n);
    for (int i = 0; i < n; ++i) gd(i) = g[static_cast<size_t>(i)];

    const PairRhs k1 = master_rhs(dp.rho0, dp.rho1, H, gd);
    const PairRhs k2 =
        master_rhs(dp.rho0 + 0.5 * dt * k1.d0, dp.rho1 + 0.5 * dt * k1.d1, H, gd);
    const PairRhs k3 =
        master_rhs(dp.rho0 + 0.5 * dt * k2.d0, dp.rho1 + 0.5 * dt * k2.d1, H, gd);
    const PairRhs k4 = master_rhs(dp.rho0 + dt * k3.d0, dp.rho1 + dt * k3.d1, H, gd);

    DensityPair out;
    out.rho0 = dp.rho0 + (dt / 6.0) * (k1.d0 + 2.0 * k2.d0 + 2.0 * k3.d0 + k4.d0);
    out.rho1 = dp.rho1 + (dt / 6.0) * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
    return out;
}

Eigen::MatrixXcd dense_hamiltonian_matrix(const Grid1D& grid, const PotentialSpec& V, double mass,
                                          Backend backend) {
    const int n = grid.n;
    if (n > kDenseCap)
        throw std::invalid_argument("dense_hamiltonian_matrix: grid exceeds the dense cap");
    Eigen::MatrixXcd H(n, n);
    WaveFunction1D basis(grid);
    for (int j = 0; j < n; ++j) {
        std::fill(basis.amp.begin(), basis.amp.end(), cplx(0.0, 0.0));
        basis.amp[static_cast<size_t>(j)] = cplx(1.0, 0.0);
        const WaveFunction1D col = apply_hamiltonian(basis, V, mass, backend);
        for (int i = 0; i < n; ++i) H(i, j) = col.amp[static_cast<size_t>(i)];
    }
    return H;
}

MasterRun run_master(const WaveFunction1D& psi0, const Eigen::MatrixXcd& H,
                     const std::vector<double>& g, double dt,
                     const std::vector<double>& sample_times) {
    MasterRun run;
    run.sample_times = sample_times;
    DensityPair dp = DensityPair::pure(psi0);
    run.max_trace_drift = std::abs(dp.trace_total() - 1.0);
    run.min_eigenvalue = dp.min_eigenvalue();

    double t = 0.0;
    for (double target : sample_times) {
        if (target < t) throw std::invalid_argument("run_master: sample times must be increasing");
        while (t < target) {
            const double h = std::min(dt, target - t);
            dp = step_master(dp, H, g, h);
            t += h;
            run.max_trace_drift = std::max(run.max_trace_drift, std::abs(dp.trace_total() - 1.0));
        }
        t = target;
        run.min_eigenvalue = std::min(run.min_eigenvalue, dp.min_eigenvalue());
        run.states.push_back(dp);
    }
    return run;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    const Eigen::MatrixXcd d = a - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(0.5 * (d + d.adjoint()),
                                                      Eigen::EigenvaluesOnly);
    return s.eigenvalues().cwiseAbs().sum();
}

EnsembleEstimate ensemble_estimate(const std::vector<TrajectoryRecord>& trajectories,
                                   const std::vector<double>& sample_times) {
    if (trajectories.empty()) throw std::invalid_argument("ensemble_estimate: empty ensemble");
    const size_t n_times = sample_times.size();
    for (const auto& rec : trajectories)
        if (rec.snapshots.size() != n_times)
            throw std::invalid_argument(
                "ensemble_estimate: trajectory snapshots do not cover the sample times");

    const int n = trajectories.front().snapshots.empty()
                      ? 0
                      : trajectories.front().snapshots.front().psi.grid.n;
    const double dx = trajectories.front().snapshots.empty()
                          ? 1.0
                          : trajectories.front().snapshots.front().psi.grid.dx();
    const double nt = static_cast<double>(trajectories.size());

    EnsembleEstimate est;
    est.sample_times = sample_times;
    for (size_t s = 0; s < n_times; ++s) {
        Eigen::MatrixXcd sum0 = Eigen::MatrixXcd::Zero(n, n);
        Eigen::MatrixXcd sum1 = Eigen::MatrixXcd::Zero(n, n);
        Eigen::MatrixXd sq0 = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd sq1 = Eigen::MatrixXd::Zero(n, n);
        for (const auto& rec : trajectories) {
            const StateSnapshot& snap = rec.snapshots[s];
            Eigen::VectorXcd v(n);
            for (int i = 0; i < n; ++i) v(i) = snap.psi.amp[static_cast<size_t>(i)];
            const Eigen::MatrixXcd proj = (v * v.adjoint()) * dx;
            if (snap.clicks_so_far == 0) {
                sum0 += proj;
                sq0 += proj.cwiseAbs2();
            } else {
                sum1 += proj;
                sq1 += proj.cwiseAbs2();
            }
        }
        DensityPair dp;
        dp.rho0 = sum0 / nt;
        dp.rho1 = sum1 / nt;
        // Per-entry standard error of the mean: contributions are zero for
        // trajectories in the other class, so second moments come from the
        // accumulated squares alone.
        Eigen::MatrixXd var0 = (sq0 / nt - dp.rho0.cwiseAbs2()).cwiseMax(0.0);
        Eigen::MatrixXd var1 = (sq1 / nt - dp.rho1.cwiseAbs2()).cwiseMax(0.0);
        est.states.push_back(std::move(dp));
        est.se0.push_back((var0 / std::max(1.0, nt - 1.0)).cwiseSqrt());
        est.se1.push_back((var1 / std::max(1.0, nt - 1.0)).cwiseSqrt());
        est.sample_times[s] = sample_times[s];
    }
    return est;
}

}  // namespace pdpsim
