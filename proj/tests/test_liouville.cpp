#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "pdpsim/liouville.hpp"

using namespace pdpsim;
using pdpsim::testing::random_state;

namespace {

DensityPair random_pair(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    Eigen::MatrixXcd A(n, n), B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A(i, j) = cplx(d(gen), d(gen));
            B(i, j) = cplx(d(gen), d(gen));
        }
    DensityPair dp;
    dp.rho0 = A * A.adjoint();
    dp.rho1 = B * B.adjoint();
    const double tr = dp.trace_total();
    dp.rho0 /= tr;
    dp.rho1 /= tr;
    return dp;
}

// Exact one-step propagator of the full Liouvillian superoperator, the
// independent oracle for step_master.
DensityPair superoperator_step(const DensityPair& dp, const Eigen::MatrixXcd& H,
                               const Eigen::VectorXd& g, double dt) {
    const int n = static_cast<int>(H.rows());
    const int n2 = n * n;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd lam = g.cwiseProduct(g).asDiagonal();
    const Eigen::MatrixXcd gd = g.cast<cplx>().asDiagonal();

    const Eigen::MatrixXcd unitary =
        cplx(0.0, -1.0) * (Eigen::kroneckerProduct(id, H) - Eigen::kroneckerProduct(H.transpose(), id));
    const Eigen::MatrixXcd damp =
        -0.5 * (Eigen::kroneckerProduct(id, lam) + Eigen::kroneckerProduct(lam.transpose(), id));
    const Eigen::MatrixXcd feed = Eigen::kroneckerProduct(gd.transpose(), gd);

    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(2 * n2, 2 * n2);
    L.topLeftCorner(n2, n2) = unitary + damp;
    L.bottomRightCorner(n2, n2) = unitary;
    L.bottomLeftCorner(n2, n2) = feed;

    Eigen::VectorXcd v(2 * n2);
    v.head(n2) = Eigen::Map<const Eigen::VectorXcd>(dp.rho0.data(), n2);
    v.tail(n2) = Eigen::Map<const Eigen::VectorXcd>(dp.rho1.data(), n2);
    const Eigen::VectorXcd w = (L * dt).exp() * v;

    DensityPair out;
    out.rho0 = Eigen::Map<const Eigen::MatrixXcd>(w.head(n2).data(), n, n);
    out.rho1 = Eigen::Map<const Eigen::MatrixXcd>(w.tail(n2).data(), n, n);
    return out;
}

}  // namespace

TEST_SUITE("liouville") {

TEST_CASE("g = 0 reduces to von Neumann evolution") {
    Grid1D grid(16, -4.0, 4.0);
    const Eigen::MatrixXcd H =
        dense_hamiltonian_matrix(grid, PotentialSpec::harmonic(0.0, 1.0), 1.0);
    std::vector<double> g(16, 0.0);

    WaveFunction1D psi = gaussian_packet(grid, 0.0, 0.8, 0.5);
    DensityPair dp = DensityPair::pure(psi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> before(dp.rho0);

    for (int i = 0; i < 100; ++i) dp = step_master(dp, H, g, 0.005);

    CHECK(dp.trace0() == doctest::Approx(1.0).epsilon(1e-10));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> after(dp.rho0);
    for (int i = 0; i < 16; ++i)
        CHECK(std::abs(after.eigenvalues()(i) - before.eigenvalues()(i)) < 1e-8);
    // rho1 stays exactly zero when it starts zero and g = 0.
    CHECK(dp.rho1.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant rate drains the trace exponentially") {
    Grid1D grid(16, -4.0, 4.0);
    const Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(16, 16);
    const double kappa = 0.9;
    std::vector<double> g(16, std::sqrt(kappa));

    WaveFunction1D psi = gaussian_packet(grid, 0.0, 0.8, 0.0);
    DensityPair dp = DensityPair::pure(psi);
    const double dt = 0.01;
    double t = 0.0;
    for (int i = 0; i < 150; ++i) {
        dp = step_master(dp, H, g, dt);
        t += dt;
    }
    CHECK(dp.trace0() == doctest::Approx(std::exp(-kappa * t)).epsilon(1e-8));
    CHECK(dp.trace_total() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("one RK4 step matches the superoperator exponential at fifth order") {
    const int n = 8;
    Grid1D grid(n, -2.0, 2.0);
    const Eigen::MatrixXcd H =
        dense_hamiltonian_matrix(grid, PotentialSpec::barrier(-1.0, 0.5, 1.5), 1.0);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = 0.3 + 0.1 * i;
    std::vector<double> gv(g.data(), g.data() + n);

    DensityPair dp = random_pair(n, 17u);

    auto deviation = [&](double dt) {
        const DensityPair got = step_master(dp, H, gv, dt);
        const DensityPair expect = superoperator_step(dp, H, g, dt);
        return std::max((got.rho0 - expect.rho0).cwiseAbs().maxCoeff(),
                        (got.rho1 - expect.rho1).cwiseAbs().maxCoeff());
    };

    const double e1 = deviation(0.02);
    const double e2 = deviation(0.01);
    CHECK(e1 < 1e-6);
    const double ratio = e1 / e2;  // RK4 local error is O(dt^5): ~32x
    CHECK(ratio > 20.0);
    CHECK(ratio < 45.0);
}

TEST_CASE("trace stays conserved and states stay positive") {
    Grid1D grid(32, -6.0, 6.0);
    const Eigen::MatrixXcd H =
        dense_hamiltonian_matrix(grid, PotentialSpec::harmonic(0.0, 0.7), 1.0);
    DetectorSpec det;
    det.profile = DetectorProfile::gaussian(1.0, 0.8, 1.0);
    const auto gv = det.profile.evaluate(grid);

    WaveFunction1D psi = gaussian_packet(grid, -1.0, 0.9, 0.6);
    MasterRun run = run_master(psi, H, gv, 0.005, {0.5, 1.0, 2.0});
    CHECK(run.max_trace_drift < 1e-8);
    CHECK(run.min_eigenvalue > -1e-8);
    // Some probability actually moved to the clicked sector.
    CHECK(run.states.back().trace1() > 0.05);
}

TEST_CASE("dimension cap is enforced") {
    DensityPair dp;
    dp.rho0 = Eigen::MatrixXcd::Zero(200, 200);
    dp.rho1 = Eigen::MatrixXcd::Zero(200, 200);
    const Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(200, 200);
    CHECK_THROWS_AS(step_master(dp, H, std::vector<double>(200, 0.0), 0.01),
                    std::invalid_argument);
}

TEST_CASE("trace distance basics") {
    Grid1D grid(8, 0.0, 1.0);
    WaveFunction1D a(grid), b(grid);
    a.amp[0] = cplx(1.0, 0.0);
    b.amp[1] = cplx(1.0, 0.0);
    a.normalize();
    b.normalize();
    const DensityPair pa = DensityPair::pure(a);
    const DensityPair pb = DensityPair::pure(b);
    CHECK(trace_distance(pa.rho0, pa.rho0) == doctest::Approx(0.0));
    // Orthogonal pure states: |rho_a - rho_b|_1 = 2.
    CHECK(trace_distance(pa.rho0, pb.rho0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("single unitary trajectory reproduces its own projector") {
    Grid1D grid(16, -4.0, 4.0);
    NonrelConfig cfg;
    cfg.grid = grid;
    cfg.packet_width = 0.8;
    DetectorSpec off;
    off.profile = DetectorProfile::constant(grid, 0.0);
    cfg.detectors = {off};
    cfg.mass = 1.0;
    cfg.dt = 0.01;
    cfg.horizon = 1.0;
    cfg.sample_times = {0.5, 1.0};

    TrajectoryRecord rec = run_trajectory(cfg, RngStream(11u, 0u));
    EnsembleEstimate est = ensemble_estimate({rec}, cfg.sample_times);

    for (size_t s = 0; s < est.states.size(); ++s) {
        const DensityPair expect = DensityPair::pure(rec.snapshots[s].psi);
        CHECK((est.states[s].rho0 - expect.rho0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(est.states[s].rho1.cwiseAbs().maxCoeff() == 0.0);
        CHECK(est.states[s].trace0() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ensemble survival matches the exponential law") {
    Grid1D grid(16, -1.0, 1.0);
    const double kappa = 1.0;
    NonrelConfig cfg;
    cfg.grid = grid;
    cfg.packet_width = 0.3;
    DetectorSpec det;
    det.profile = DetectorProfile::constant(grid, std::sqrt(kappa));
    cfg.detectors = {det};
    cfg.mass = std::numeric_limits<double>::infinity();
    cfg.dt = 0.01;
    cfg.horizon = 2.0;
    cfg.sample_times = {0.5, 1.0, 2.0};

    const int n_traj = 2000;
    std::vector<TrajectoryRecord> recs;
    recs.reserve(n_traj);
    for (int i = 0; i < n_traj; ++i)
        recs.push_back(run_trajectory(cfg, RngStream(314159u, static_cast<uint64_t>(i))));

    EnsembleEstimate est = ensemble_estimate(recs, cfg.sample_times);
    for (size_t s = 0; s < cfg.sample_times.size(); ++s) {
        const double expect = std::exp(-kappa * cfg.sample_times[s]);
        const double sigma = std::sqrt(expect * (1.0 - expect) / n_traj);
        CHECK(std::abs(est.states[s].trace0() - expect) < 3.0 * sigma + 1e-6);
    }
}

TEST_CASE("ensemble estimate converges to the master equation") {
    // Trace distance against the dense integration, Monte-Carlo limited:
    // doubling the ensemble should shrink it noticeably.
    Grid1D grid(16, -6.0, 6.0);
    NonrelConfig cfg;
    cfg.grid = grid;
    cfg.packet_center = -1.0;
    cfg.packet_width = 0.9;
    cfg.packet_momentum = 0.7;
    DetectorSpec det;
    det.profile = DetectorProfile::gaussian(1.5, 0.8, 1.0);
    cfg.detectors = {det};
    cfg.mass = 1.0;
    cfg.dt = 0.005;
    cfg.horizon = 2.0;
    cfg.sample_times = {0.5, 1.0, 2.0};

    const Eigen::MatrixXcd H = dense_hamiltonian_matrix(grid, cfg.potential, cfg.mass);
    const auto gv = det.profile.evaluate(grid);
    MasterRun master = run_master(cfg.make_initial(), H, gv, cfg.dt, cfg.sample_times);

    auto ensemble_error = [&](int n_traj, uint64_t stream0) {
        std::vector<TrajectoryRecord> recs;
        recs.reserve(static_cast<size_t>(n_traj));
        for (int i = 0; i < n_traj; ++i)
            recs.push_back(
                run_trajectory(cfg, RngStream(2718u, stream0 + static_cast<uint64_t>(i))));
        EnsembleEstimate est = ensemble_estimate(recs, cfg.sample_times);
        double err = 0.0;
        for (size_t s = 0; s < cfg.sample_times.size(); ++s) {
            err += trace_distance(est.states[s].rho0, master.states[s].rho0);
            err += trace_distance(est.states[s].rho1, master.states[s].rho1);
        }
        return err;
    };

    // Average the improvement over independent seed blocks to tame the
    // fluctuation of the ratio itself.
    double ratio_sum = 0.0;
    const int blocks = 2;
    for (int b = 0; b < blocks; ++b) {
        const uint64_t base = static_cast<uint64_t>(b) * 4000u;
        const double e_small = ensemble_error(600, base);
        const double e_big = ensemble_error(1200, base + 1200u);
        ratio_sum += e_small / e_big;
    }
    CHECK(ratio_sum / blocks > 1.3);
}

TEST_CASE("empty ensemble is rejected") {
    CHECK_THROWS_AS(ensemble_estimate({}, {0.5}), std::invalid_argument);
}

}  // TEST_SUITE
