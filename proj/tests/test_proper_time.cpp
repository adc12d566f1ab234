#include <doctest.h>

#include <Eigen/SVD>

#include "helpers.hpp"
#include "pdpsim/nonrel.hpp"
#include "pdpsim/proper_time.hpp"

using namespace pdpsim;

namespace {

DetectorSpec constant_detector(const Grid1D& g, double strength) {
    DetectorSpec d;
    d.profile = DetectorProfile::constant(g, strength);
    return d;
}

Grid2D make_grid(int nx, double xl, double xh, int nt, double tl, double th) {
    return Grid2D(Grid1D(nx, xl, xh), Grid1D(nt, tl, th));
}

double second_singular_value(const ScalarField2D& f) {
    Eigen::MatrixXcd m(f.grid.x.n, f.grid.t.n);
    for (int ix = 0; ix < f.grid.x.n; ++ix)
        for (int it = 0; it < f.grid.t.n; ++it) m(ix, it) = f.at(ix, it);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(1);
}

}  // namespace

TEST_SUITE("proper_time") {

TEST_CASE("with H and Lambda off the flow is a pure t-translation") {
    Grid2D grid = make_grid(16, -4.0, 4.0, 64, -8.0, 8.0);
    WaveFunction1D phi = gaussian_packet(grid.t, -1.0, 0.5, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, 0.0, 1.0, 0.0);
    ScalarField2D field = ScalarField2D::product(grid, phi, psi);
    // Products of normalized factors are normalized.
    CHECK(field.norm2() == doctest::Approx(1.0).epsilon(1e-12));

    const double dtau = 0.25;
    ScalarField2D shifted = evolve_proper_time(
        field, {}, PotentialSpec::zero(), std::numeric_limits<double>::infinity(), dtau);

    // Against the analytically shifted profile.
    WaveFunction1D phi_shift = gaussian_packet(grid.t, -1.0 + dtau, 0.5, 0.0);
    ScalarField2D expect = ScalarField2D::product(grid, phi_shift, psi);
    double worst = 0.0;
    for (size_t i = 0; i < field.amp.size(); ++i)
        worst = std::max(worst, std::abs(shifted.amp[i] - expect.amp[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("constant rate decays the 2D norm exponentially") {
    Grid2D grid = make_grid(16, -4.0, 4.0, 32, -4.0, 4.0);
    const double kappa = 0.8;
    std::vector<DetectorSpec> dets = {constant_detector(grid.x, std::sqrt(kappa))};
    WaveFunction1D phi = gaussian_packet(grid.t, 0.0, 0.4, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, 0.0, 0.8, 0.0);
    ScalarField2D field = ScalarField2D::product(grid, phi, psi);

    const double dtau = 0.01;
    double tau = 0.0;
    for (int i = 0; i < 100; ++i) {
        field = evolve_proper_time(field, dets, PotentialSpec::zero(), 1.0, dtau);
        tau += dtau;
    }
    CHECK(field.norm2() == doctest::Approx(std::exp(-kappa * tau)).epsilon(1e-8));
}

TEST_CASE("numerical flow matches the factorized solution") {
    Grid2D grid = make_grid(32, -8.0, 8.0, 32, -6.0, 6.0);
    std::vector<DetectorSpec> dets;
    DetectorSpec det;
    det.profile = DetectorProfile::gaussian(1.0, 0.8, 1.0);
    dets.push_back(det);
    PotentialSpec V = PotentialSpec::harmonic(0.0, 0.6);
    const double mass = 1.0;

    WaveFunction1D phi = gaussian_packet(grid.t, -2.0, 0.5, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, -1.0, 1.0, 0.5);

    ScalarField2D field = ScalarField2D::product(grid, phi, psi);
    const double tau = 1.0;
    const double dtau = 5e-4;
    ProperTimeStepper stepper(grid, V, mass, total_rate(grid.x, dets));
    double s = 0.0;
    while (s < tau) {
        const double h = std::min(dtau, tau - s);
        stepper.step(field.amp, h);
        s += h;
    }

    ScalarField2D expect = factorized_solution(phi, psi, grid, dets, V, mass, tau);
    double worst = 0.0;
    for (size_t i = 0; i < field.amp.size(); ++i)
        worst = std::max(worst, std::abs(field.amp[i] - expect.amp[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("factorized solution at tau = 0 is the product state exactly") {
    Grid2D grid = make_grid(16, -4.0, 4.0, 16, -4.0, 4.0);
    WaveFunction1D phi = gaussian_packet(grid.t, 0.0, 0.5, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, 0.0, 1.0, 0.0);
    ScalarField2D direct = ScalarField2D::product(grid, phi, psi);
    ScalarField2D fact = factorized_solution(phi, psi, grid, {}, PotentialSpec::zero(), 1.0, 0.0);
    for (size_t i = 0; i < direct.amp.size(); ++i) CHECK(fact.amp[i] == direct.amp[i]);
}

TEST_CASE("factorized solution with H = 0 and constant rate is analytic") {
    Grid2D grid = make_grid(16, -4.0, 4.0, 64, -8.0, 8.0);
    const double kappa = 1.3;
    std::vector<DetectorSpec> dets = {constant_detector(grid.x, std::sqrt(kappa))};
    WaveFunction1D phi = gaussian_packet(grid.t, -2.0, 0.5, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, 0.0, 0.9, 0.0);

    const double tau = 0.75;
    ScalarField2D got = factorized_solution(phi, psi, grid, dets, PotentialSpec::zero(),
                                            std::numeric_limits<double>::infinity(), tau);

    WaveFunction1D phi_shift = gaussian_packet(grid.t, -2.0 + tau, 0.5, 0.0);
    const double decay = std::exp(-0.5 * kappa * tau);
    double worst = 0.0;
    for (int ix = 0; ix < grid.x.n; ++ix)
        for (int it = 0; it < grid.t.n; ++it) {
            const cplx expect = decay * psi.amp[static_cast<size_t>(ix)] *
                                phi_shift.amp[static_cast<size_t>(it)];
            worst = std::max(worst, std::abs(got.at(ix, it) - expect));
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("undamped factorized solution marginal matches the 1D engine") {
    Grid2D grid = make_grid(32, -8.0, 8.0, 32, -6.0, 6.0);
    WaveFunction1D phi = gaussian_packet(grid.t, -2.0, 0.5, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, -1.0, 1.0, 1.0);
    const double tau = 1.5;

    ScalarField2D fact =
        factorized_solution(phi, psi, grid, {}, PotentialSpec::zero(), 1.0, tau);
    const std::vector<double> marginal = fact.x_marginal();

    WaveFunction1D evolved = psi;
    DampedStepper1D stepper(grid.x, PotentialSpec::zero(), 1.0, {});
    double s = 0.0;
    while (s < tau) {
        const double h = std::min(0.01, tau - s);
        stepper.step(evolved.amp, h);
        s += h;
    }
    for (int ix = 0; ix < grid.x.n; ++ix)
        CHECK(std::abs(marginal[static_cast<size_t>(ix)] -
                       std::norm(evolved.amp[static_cast<size_t>(ix)])) < 1e-8);
}

TEST_CASE("x-sector step and t-shift commute to roundoff") {
    Grid2D grid = make_grid(16, -4.0, 4.0, 16, -4.0, 4.0);
    std::vector<DetectorSpec> dets;
    DetectorSpec det;
    det.profile = DetectorProfile::gaussian(0.5, 0.7, 1.1);
    dets.push_back(det);
    PotentialSpec V = PotentialSpec::harmonic(0.0, 1.0);

    WaveFunction1D phi = gaussian_packet(grid.t, 0.0, 0.6, 0.3);
    WaveFunction1D psi = gaussian_packet(grid.x, 0.2, 0.8, -0.4);
    ScalarField2D a = ScalarField2D::product(grid, phi, psi);
    ScalarField2D b = a;

    ProperTimeStepper stepper(grid, V, 1.0, total_rate(grid.x, dets));
    const double dtau = 0.05;
    stepper.x_sector_step(a.amp, dtau);
    stepper.t_shift(a.amp, dtau);
    stepper.t_shift(b.amp, dtau);
    stepper.x_sector_step(b.amp, dtau);
    for (size_t i = 0; i < a.amp.size(); ++i) CHECK(std::abs(a.amp[i] - b.amp[i]) < 1e-12);
}

TEST_CASE("product states stay rank one along the flow") {
    Grid2D grid = make_grid(32, -8.0, 8.0, 32, -6.0, 6.0);
    std::vector<DetectorSpec> dets;
    DetectorSpec det;
    det.profile = DetectorProfile::gaussian(1.0, 0.9, 0.9);
    dets.push_back(det);

    WaveFunction1D phi = gaussian_packet(grid.t, -1.5, 0.5, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, 0.0, 1.0, 0.8);
    ScalarField2D field = ScalarField2D::product(grid, phi, psi);

    ProperTimeStepper stepper(grid, PotentialSpec::harmonic(0.0, 0.5), 1.0,
                              total_rate(grid.x, dets));
    for (int i = 0; i < 100; ++i) stepper.step(field.amp, 0.01);
    CHECK(second_singular_value(field) < 1e-8);
}

TEST_CASE("2D norm equals the x-sector norm when phi is normalized") {
    Grid2D grid = make_grid(32, -8.0, 8.0, 32, -6.0, 6.0);
    std::vector<DetectorSpec> dets;
    DetectorSpec det;
    det.profile = DetectorProfile::gaussian(0.0, 1.0, 1.0);
    dets.push_back(det);
    PotentialSpec V = PotentialSpec::zero();

    WaveFunction1D phi = gaussian_packet(grid.t, -1.0, 0.4, 0.0);
    WaveFunction1D psi = gaussian_packet(grid.x, -0.5, 1.0, 0.0);
    const double tau = 1.2;
    ScalarField2D fact = factorized_solution(phi, psi, grid, dets, V, 1.0, tau);

    // Independent x-sector norm from the same closed form.
    ScalarField2D at_tau = fact;
    const double norm_x = [&] {
        // |e^{(-iH - Lambda/2) tau} psi0|^2 recovered from the marginal.
        double s = 0.0;
        for (double d : at_tau.x_marginal()) s += d;
        return s * grid.x.dx();
    }();
    CHECK(fact.norm2() == doctest::Approx(norm_x).epsilon(1e-10));
}

TEST_CASE("click law table inverts the constant-rate law exactly") {
    Grid1D gx(16, -2.0, 2.0);
    Grid2D grid = make_grid(16, -2.0, 2.0, 32, -8.0, 8.0);
    const double kappa = 1.0;
    std::vector<DetectorSpec> dets = {constant_detector(gx, 1.0)};
    WaveFunction1D psi = gaussian_packet(gx, 0.0, 0.5, 0.0);

    ClickLawTable law = nonrel_click_law(psi, dets, PotentialSpec::zero(),
                                         std::numeric_limits<double>::infinity(), 0.01, 12.0);
    for (double p : {0.1, 0.5, 0.9}) {
        CHECK(law.invert(p) == doctest::Approx(-std::log(1.0 - p) / kappa).epsilon(1e-9));
    }
    CHECK(law.invert(1.0 - 1e-9) < 0.0);  // beyond the horizon budget: no click
}

TEST_CASE("click statistics agree between the engines") {
    PropertimeComparisonConfig cfg;
    cfg.grid = make_grid(16, -2.0, 2.0, 32, -10.0, 10.0);
    cfg.packet_width = 0.5;
    cfg.phi_center = -4.0;
    cfg.phi_width = 0.5;
    cfg.detectors = {constant_detector(cfg.grid.x, 1.0)};
    cfg.mass = std::numeric_limits<double>::infinity();
    cfg.dt = 0.01;
    cfg.horizon = 8.0;
    cfg.n_samples = 10000;
    cfg.seed = 41u;

    PropertimeComparison cmp = click_statistics_equivalence(cfg);
    CHECK(cmp.max_intensity_diff < 1e-8);
    CHECK(cmp.ks_distance < cmp.ks_critical_5pct);
    CHECK(cmp.no_click_1d < 10);
    CHECK(cmp.no_click_2d < 10);
}

TEST_CASE("zero coupling reports 100% no-click on both engines") {
    PropertimeComparisonConfig cfg;
    cfg.grid = make_grid(16, -2.0, 2.0, 16, -4.0, 4.0);
    cfg.packet_width = 0.5;
    cfg.phi_width = 0.4;
    cfg.detectors = {constant_detector(cfg.grid.x, 0.0)};
    cfg.mass = std::numeric_limits<double>::infinity();
    cfg.dt = 0.05;
    cfg.horizon = 2.0;
    cfg.n_samples = 100;

    PropertimeComparison cmp = click_statistics_equivalence(cfg);
    CHECK(cmp.no_click_1d == cfg.n_samples);
    CHECK(cmp.no_click_2d == cfg.n_samples);
}

TEST_CASE("wrap warning fires when the shifted profile leaves the box") {
    Grid1D gt(64, -8.0, 8.0);
    WaveFunction1D phi = gaussian_packet(gt, 5.0, 0.5, 0.0);
    CHECK_FALSE(phi_wraps(phi, 0.1));
    CHECK(phi_wraps(phi, 4.0));
}

}  // TEST_SUITE
