#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "pdpsim/nonrel.hpp"

using namespace pdpsim;
using pdpsim::testing::dense_hamiltonian;
using pdpsim::testing::from_eigen;
using pdpsim::testing::random_state;
using pdpsim::testing::to_eigen;

namespace {

DetectorSpec constant_detector(const Grid1D& g, double strength) {
    DetectorSpec d;
    d.profile = DetectorProfile::constant(g, strength);
    return d;
}

DetectorSpec gaussian_detector(double center, double width, double strength) {
    DetectorSpec d;
    d.profile = DetectorProfile::gaussian(center, width, strength);
    return d;
}

}  // namespace

TEST_SUITE("nonrel") {

TEST_CASE("undamped step is unitary") {
    Grid1D g(64, -8.0, 8.0);
    WaveFunction1D psi = gaussian_packet(g, 0.0, 1.0, 1.5);
    std::vector<DetectorSpec> none;
    WaveFunction1D out = psi;
    for (int i = 0; i < 100; ++i)
        out = evolve_damped(out, none, PotentialSpec::harmonic(0.0, 1.0), 1.0, 0.01);
    CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant rate decays the norm exponentially") {
    Grid1D g(32, -4.0, 4.0);
    const double kappa = 0.7;  // Lambda = g^2 = kappa
    WaveFunction1D psi = gaussian_packet(g, 0.0, 0.7, 0.0);
    std::vector<DetectorSpec> dets = {constant_detector(g, std::sqrt(kappa))};
    const double dt = 0.01;
    WaveFunction1D out = psi;
    double t = 0.0;
    for (int i = 0; i < 200; ++i) {
        out = evolve_damped(out, dets, PotentialSpec::zero(),
                            std::numeric_limits<double>::infinity(), dt);
        t += dt;
        CHECK(out.norm2() == doctest::Approx(std::exp(-kappa * t)).epsilon(1e-10));
    }
}

TEST_CASE("step matches the dense exponential to third order") {
    Grid1D g(32, -6.0, 6.0);
    const double mass = 1.0;
    PotentialSpec V = PotentialSpec::harmonic(0.0, 0.8);
    std::vector<DetectorSpec> dets = {gaussian_detector(1.0, 0.8, 1.2)};
    WaveFunction1D psi = gaussian_packet(g, -0.5, 1.0, 0.5);

    // Dense generator (-iH - Lambda/2) exponentiated: the oracle.
    Eigen::MatrixXcd H = dense_hamiltonian(g, V, mass);
    const auto lam = total_rate(g, dets);
    Eigen::MatrixXcd Gen = cplx(0.0, -1.0) * H;
    for (int i = 0; i < g.n; ++i) Gen(i, i) -= 0.5 * lam[static_cast<size_t>(i)];

    auto one_step_error = [&](double dt) {
        Eigen::MatrixXcd U = (Gen * dt).exp();
        Eigen::VectorXcd expect = U * to_eigen(psi);
        WaveFunction1D got = evolve_damped(psi, dets, V, mass, dt);
        double err = 0.0;
        for (int i = 0; i < g.n; ++i)
            err = std::max(err, std::abs(got.amp[static_cast<size_t>(i)] - expect(i)));
        return err;
    };

    const double e1 = one_step_error(0.02);
    const double e2 = one_step_error(0.01);
    CHECK(e1 < 1e-5);
    // Strang: local error O(dt^3), so halving dt cuts it ~8x.
    CHECK(e1 / e2 > 6.0);
    CHECK(e1 / e2 < 10.0);
}

TEST_CASE("norm never increases along the damped flow") {
    Grid1D g(64, -8.0, 8.0);
    WaveFunction1D psi = random_state(g, 9u);
    psi.normalize();
    std::vector<DetectorSpec> dets = {gaussian_detector(2.0, 0.5, 1.5),
                                      gaussian_detector(-3.0, 1.0, 0.4)};
    DampedStepper1D stepper(g, PotentialSpec::barrier(-1.0, 0.0, 1.0), 1.0, total_rate(g, dets));
    double prev = psi.norm2();
    for (int i = 0; i < 300; ++i) {
        stepper.step(psi.amp, 0.005);
        const double cur = psi.norm2();
        CHECK(cur <= prev + 1e-14);
        prev = cur;
    }
}

TEST_CASE("norm loss equals the integrated rate expectation") {
    // Independent quadrature of (psi, Lambda psi) dt against 1 - |psi|^2.
    Grid1D g(64, -8.0, 8.0);
    WaveFunction1D psi = gaussian_packet(g, -1.0, 0.8, 1.0);
    std::vector<DetectorSpec> dets = {gaussian_detector(1.5, 0.6, 1.0)};
    DampedStepper1D stepper(g, PotentialSpec::zero(), 1.0, total_rate(g, dets));

    const double dt = 0.002;
    double integral = 0.0;
    double prev_expect = stepper.rate_expectation(psi.amp);
    for (int i = 0; i < 500; ++i) {
        stepper.step(psi.amp, dt);
        const double cur = stepper.rate_expectation(psi.amp);
        integral += 0.5 * dt * (prev_expect + cur);  // trapezoid
        prev_expect = cur;
    }
    const double q = 1.0 - psi.norm2();
    CHECK(q == doctest::Approx(integral).epsilon(1e-5));
}

TEST_CASE("rejects nonpositive dt") {
    Grid1D g(16, 0.0, 1.0);
    WaveFunction1D psi = gaussian_packet(g, 0.5, 0.1, 0.0);
    std::vector<DetectorSpec> none;
    CHECK_THROWS_AS(evolve_damped(psi, none, PotentialSpec::zero(), 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(evolve_damped(psi, none, PotentialSpec::zero(), 1.0, -0.1),
                    std::invalid_argument);
}

TEST_CASE("jump time hits the analytic ln 2") {
    Grid1D g(16, -1.0, 1.0);
    HybridState1D state;
    state.psi = gaussian_packet(g, 0.0, 0.3, 0.0);
    state.detectors = {constant_detector(g, 1.0)};  // kappa = 1
    NonrelParams params;
    params.mass = std::numeric_limits<double>::infinity();
    params.dt = 0.01;

    JumpSearchResult r = find_jump_time(state, params, 0.5, 100.0);
    REQUIRE(r.clicked);
    CHECK(r.t1 == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    // Returned state is the damped one: |psi|^2 = 1 - p.
    CHECK(r.psi.norm2() == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("p = 0 clicks immediately") {
    Grid1D g(16, -1.0, 1.0);
    HybridState1D state;
    state.psi = gaussian_packet(g, 0.0, 0.3, 0.0);
    state.detectors = {constant_detector(g, 2.0)};
    NonrelParams params;
    params.mass = std::numeric_limits<double>::infinity();
    params.dt = 0.01;
    JumpSearchResult r = find_jump_time(state, params, 0.0, 10.0);
    CHECK(r.clicked);
    CHECK(r.t1 == 0.0);
}

TEST_CASE("zero coupling never clicks") {
    Grid1D g(16, -1.0, 1.0);
    HybridState1D state;
    state.psi = gaussian_packet(g, 0.0, 0.3, 0.0);
    state.detectors = {constant_detector(g, 0.0)};
    NonrelParams params;
    params.mass = std::numeric_limits<double>::infinity();
    params.dt = 0.01;
    JumpSearchResult r = find_jump_time(state, params, 0.3, 5.0);
    CHECK_FALSE(r.clicked);
    CHECK(r.t1 == doctest::Approx(5.0));
    CHECK_THROWS_AS(find_jump_time(state, params, 1.5, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(find_jump_time(state, params, -0.1, 5.0), std::invalid_argument);
}

TEST_CASE("jump with constant g leaves the state unchanged") {
    Grid1D g(32, -4.0, 4.0);
    WaveFunction1D psi = gaussian_packet(g, 0.3, 0.9, -1.0);
    DetectorSpec det = constant_detector(g, 3.0);
    WaveFunction1D out = jump(psi, det);
    CHECK(det.alpha == 1);
    for (size_t i = 0; i < psi.amp.size(); ++i) CHECK(std::abs(out.amp[i] - psi.amp[i]) < 1e-12);
}

TEST_CASE("indicator jump truncates and renormalizes") {
    Grid1D g(64, -8.0, 8.0);
    WaveFunction1D psi = gaussian_packet(g, 0.0, 1.0, 0.0);  // symmetric about 0
    DetectorSpec det;
    det.profile = DetectorProfile::indicator(0.0, 8.0, 1.0);
    WaveFunction1D out = jump(psi, det);
    CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < g.n; ++i) {
        if (g.point(i) < 0.0) CHECK(std::abs(out.amp[static_cast<size_t>(i)]) == 0.0);
    }
}

TEST_CASE("gaussian jump equals the pointwise product at n=16") {
    Grid1D g(16, -4.0, 4.0);
    WaveFunction1D psi = gaussian_packet(g, -0.5, 1.2, 0.7);
    DetectorSpec det = gaussian_detector(0.5, 0.8, 1.3);
    WaveFunction1D out = jump(psi, det);

    const auto gv = det.profile.evaluate(g);
    std::vector<cplx> expect(psi.amp);
    double n2 = 0.0;
    for (size_t i = 0; i < expect.size(); ++i) {
        expect[i] *= gv[i];
        n2 += std::norm(expect[i]);
    }
    const double s = 1.0 / std::sqrt(n2 * g.dx());
    for (size_t i = 0; i < expect.size(); ++i)
        CHECK(std::abs(out.amp[i] - expect[i] * s) < 1e-12);
}

TEST_CASE("dark state jump is rejected") {
    Grid1D g(32, -4.0, 4.0);
    WaveFunction1D psi = gaussian_packet(g, -3.0, 0.2, 0.0);
    DetectorSpec det = constant_detector(g, 0.0);  // g psi identically zero
    CHECK_THROWS_AS(jump(psi, det), std::runtime_error);
}

TEST_CASE("click times follow the exponential law") {
    Grid1D g(16, -1.0, 1.0);
    NonrelConfig cfg;
    cfg.grid = g;
    cfg.packet_center = 0.0;
    cfg.packet_width = 0.3;
    cfg.detectors = {constant_detector(g, 1.0)};
    cfg.mass = std::numeric_limits<double>::infinity();
    cfg.dt = 0.01;
    cfg.horizon = 50.0;

    const int n_traj = 2000;
    double sum = 0.0;
    int clicked = 0;
    for (int i = 0; i < n_traj; ++i) {
        TrajectoryRecord rec = run_trajectory(cfg, RngStream(2024u, static_cast<uint64_t>(i)));
        REQUIRE_FALSE(rec.aborted);
        if (!rec.no_click) {
            sum += rec.events.front().time;
            ++clicked;
        }
    }
    CHECK(clicked == n_traj);  // horizon 50 with rate 1: all click
    const double mean = sum / clicked;
    const double se = 1.0 / std::sqrt(static_cast<double>(clicked));
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("symmetric detectors click evenly") {
    Grid1D g(64, -10.0, 10.0);
    NonrelConfig cfg;
    cfg.grid = g;
    cfg.packet_center = 0.0;
    cfg.packet_width = 1.5;
    cfg.detectors = {gaussian_detector(-2.5, 1.0, 0.8), gaussian_detector(2.5, 1.0, 0.8)};
    cfg.mass = 1.0;
    cfg.dt = 0.02;
    cfg.horizon = 12.0;

    const int n_traj = 800;
    long first_counts[2] = {0, 0};
    SelectionStats stats;
    for (int i = 0; i < n_traj; ++i) {
        TrajectoryRecord rec =
            run_trajectory(cfg, RngStream(77u, static_cast<uint64_t>(i)), &stats);
        REQUIRE_FALSE(rec.aborted);
        if (!rec.no_click) ++first_counts[rec.events.front().detector_index];
    }
    const double total = first_counts[0] + first_counts[1];
    REQUIRE(total > 500);
    const double f0 = first_counts[0] / total;
    const double sigma = std::sqrt(0.25 / total);
    CHECK(std::abs(f0 - 0.5) < 3.0 * sigma);
    // Selection probabilities live on the simplex.
    CHECK(stats.clicks > 0);
}

TEST_CASE("selection probabilities sum to one at every click") {
    Grid1D g(64, -10.0, 10.0);
    NonrelConfig cfg;
    cfg.grid = g;
    cfg.packet_width = 1.0;
    cfg.detectors = {gaussian_detector(-2.0, 0.7, 1.0), gaussian_detector(2.0, 0.7, 0.5),
                     gaussian_detector(0.0, 2.0, 0.3)};
    cfg.mass = 1.0;
    cfg.dt = 0.01;
    cfg.horizon = 10.0;

    for (int i = 0; i < 50; ++i) {
        WaveFunction1D psi = random_state(g, 500u + static_cast<unsigned>(i));
        psi.normalize();
        std::vector<double> w = selection_weights(psi, cfg.detectors);
        double total = 0.0;
        for (double v : w) {
            CHECK(v >= 0.0);
            total += v;
        }
        REQUIRE(total > 0.0);
        double sum_p = 0.0;
        for (double v : w) sum_p += v / total;
        CHECK(std::abs(sum_p - 1.0) < 1e-12);
    }
}

TEST_CASE("zero-coupling run reports no_click") {
    Grid1D g(16, -1.0, 1.0);
    NonrelConfig cfg;
    cfg.grid = g;
    cfg.packet_width = 0.3;
    cfg.detectors = {constant_detector(g, 0.0)};
    cfg.mass = std::numeric_limits<double>::infinity();
    cfg.dt = 0.01;
    cfg.horizon = 5.0;
    TrajectoryRecord rec = run_trajectory(cfg, RngStream(1u, 0u));
    CHECK(rec.no_click);
    CHECK(rec.events.empty());
}

TEST_CASE("identical config and stream reproduce the record bit-for-bit") {
    Grid1D g(64, -8.0, 8.0);
    NonrelConfig cfg;
    cfg.grid = g;
    cfg.packet_center = -1.0;
    cfg.packet_width = 1.0;
    cfg.packet_momentum = 0.8;
    cfg.detectors = {gaussian_detector(2.0, 0.6, 1.1)};
    cfg.detectors[0].single_shot = false;
    cfg.detectors[0].dead_time = 0.5;
    cfg.mass = 1.0;
    cfg.dt = 0.01;
    cfg.horizon = 15.0;
    cfg.sample_times = {5.0, 10.0};

    TrajectoryRecord a = run_trajectory(cfg, RngStream(99u, 3u));
    TrajectoryRecord b = run_trajectory(cfg, RngStream(99u, 3u));
    // The dead time gates consecutive clicks of the reusable detector.
    for (size_t i = 1; i < a.events.size(); ++i)
        CHECK(a.events[i].time - a.events[i - 1].time >= cfg.detectors[0].dead_time - 1e-12);
    REQUIRE(a.events.size() == b.events.size());
    for (size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].detector_index == b.events[i].detector_index);
        CHECK(a.events[i].pre_click_norm2 == b.events[i].pre_click_norm2);
        CHECK(a.events[i].post_mean_x == b.events[i].post_mean_x);
    }
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (size_t i = 0; i < a.snapshots.size(); ++i)
        for (size_t j = 0; j < a.snapshots[i].psi.amp.size(); ++j)
            CHECK(a.snapshots[i].psi.amp[j] == b.snapshots[i].psi.amp[j]);
}

TEST_CASE("post-jump states have unit norm along a reusable-detector run") {
    Grid1D g(64, -8.0, 8.0);
    NonrelConfig cfg;
    cfg.grid = g;
    cfg.packet_width = 1.2;
    cfg.detectors = {gaussian_detector(1.0, 1.0, 1.5)};
    cfg.detectors[0].single_shot = false;  // keeps clicking
    cfg.mass = 1.0;
    cfg.dt = 0.01;
    cfg.horizon = 12.0;

    TrajectoryRecord rec = run_trajectory(cfg, RngStream(5u, 8u));
    REQUIRE(rec.events.size() > 1);  // reusable detector clicks repeatedly
    for (size_t i = 1; i < rec.events.size(); ++i)
        CHECK(rec.events[i].time > rec.events[i - 1].time);
}

}  // TEST_SUITE
