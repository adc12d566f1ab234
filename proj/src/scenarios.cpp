#include "pdpsim/scenarios.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include "pdpsim/experiment.hpp"
#include "pdpsim/gamma.hpp"
#include "pdpsim/liouville.hpp"

namespace pdpsim {

using nlohmann::json;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

DetectorSpec constant_detector(double strength) {
    DetectorSpec det;
    det.profile = DetectorProfile::indicator(-std::numeric_limits<double>::infinity(),
                                             std::numeric_limits<double>::infinity(), strength);
    return det;
}

DetectorSpec gaussian_detector(double center, double width, double strength) {
    DetectorSpec det;
    det.profile = DetectorProfile::gaussian(center, width, strength);
    return det;
}

double exp_cdf(double t) { return 1.0 - std::exp(-t); }

SpinorField2D scenario_random_field(const Grid2D& g, std::mt19937& gen) {
    std::normal_distribution<double> d(0.0, 1.0);
    SpinorField2D f(g);
    for (auto& z : f.amp) z = cplx(d(gen), d(gen));
    return f;
}

// --- criterion 1 -----------------------------------------------------------

ScenarioOutcome exp_click_law(const ScenarioContext& ctx) {
    Timer timer;
    ExperimentConfig cfg;
    cfg.engine = EngineKind::Nonrel;
    cfg.grid = Grid1D(16, -1.0, 1.0);
    cfg.packet_width = 0.3;
    cfg.detectors = {constant_detector(1.0)};
    cfg.mass = std::numeric_limits<double>::infinity();
    cfg.dt = 0.01;
    cfg.horizon = 12.0;
    cfg.ensemble = 10000;
    cfg.seed = ctx.seed.value_or(20250801u);
    cfg.threads = ctx.threads;
    cfg.out_dir = ctx.out_dir + "/exp-click-law";

    const RunSummary s = run_experiment(cfg);
    const double mean = s.first_click.mean;
    const double ks = ks_statistic(s.first_click_times, exp_cdf);
    const double ks_crit = ks_one_sample_critical(0.01, s.first_click.n);
    const double wall = timer.seconds();

    ScenarioOutcome out;
    out.name = "exp-click-law";
    out.criterion = 1;
    out.gate = "|mean - 1| <= 0.03, KS < 1% critical, wall < 10 s";
    out.metrics = {{"mean", mean},       {"n_clicked", s.first_click.n},
                   {"ks", ks},           {"ks_critical_1pct", ks_crit},
                   {"wall_seconds", wall}, {"no_click", s.no_click_count}};
    out.passed = std::abs(mean - 1.0) <= 0.03 && ks < ks_crit && wall < 10.0;
    out.wall_seconds = wall;
    return out;
}

// --- criterion 2 -----------------------------------------------------------

ScenarioOutcome jump_time_analytic(const ScenarioContext& ctx) {
    Timer timer;
    Grid1D grid(16, -1.0, 1.0);
    HybridState1D state;
    state.psi = gaussian_packet(grid, 0.0, 0.3, 0.0);
    state.detectors = {constant_detector(1.0)};
    NonrelParams params;
    params.mass = std::numeric_limits<double>::infinity();
    params.dt = 0.01;

    const JumpSearchResult r = find_jump_time(state, params, 0.5, 100.0);
    const double target = std::log(2.0);
    const double err = r.clicked ? std::abs(r.t1 - target) : 1.0;

    ScenarioOutcome out;
    out.name = "jump-time-analytic";
    out.criterion = 2;
    out.gate = "|t1 - ln 2| <= 1e-6 with kappa = 1, p = 0.5";
    out.metrics = {{"t1", r.t1}, {"ln2", target}, {"abs_error", err}, {"clicked", r.clicked}};
    out.passed = r.clicked && err <= 1e-6;
    out.wall_seconds = timer.seconds();
    (void)ctx;
    return out;
}

// --- criterion 3 -----------------------------------------------------------

ScenarioOutcome ensemble_liouville(const ScenarioContext& ctx) {
    Timer timer;
    ExperimentConfig cfg;
    cfg.engine = EngineKind::CompareEnsemble;
    cfg.grid = Grid1D(64, -10.0, 10.0);
    cfg.packet_center = -2.0;
    cfg.packet_width = 1.0;
    cfg.packet_momentum = 1.0;
    cfg.detectors = {gaussian_detector(2.0, 0.7, 1.0)};
    cfg.mass = 1.0;
    cfg.dt = 0.005;
    cfg.horizon = 2.0;
    cfg.sample_times = {0.5, 1.0, 2.0};  // units of T_char = 1/max Lambda = 1
    cfg.ensemble = 5000;
    cfg.seed = ctx.seed.value_or(31415u);
    cfg.threads = ctx.threads;
    cfg.out_dir = ctx.out_dir + "/ensemble-liouville";

    const RunSummary s = run_experiment(cfg);
    double worst0 = 0.0, worst1 = 0.0;
    for (const auto& row : s.comparison.at("rows")) {
        worst0 = std::max(worst0, row.at("trace_distance_rho0").get<double>());
        worst1 = std::max(worst1, row.at("trace_distance_rho1").get<double>());
    }
    const double wall = timer.seconds();

    ScenarioOutcome out;
    out.name = "ensemble-liouville";
    out.criterion = 3;
    out.gate = "trace distance rho0 < 0.05 at all three sample times, wall < 120 s";
    out.metrics = {{"max_trace_distance_rho0", worst0},
                   {"max_trace_distance_rho1", worst1},
                   {"rows", s.comparison.at("rows")},
                   {"wall_seconds", wall}};
    out.passed = worst0 < 0.05 && wall < 120.0;
    out.wall_seconds = wall;
    return out;
}

// --- criterion 4 -----------------------------------------------------------

ScenarioOutcome trace_conservation(const ScenarioContext& ctx) {
    Timer timer;
    ExperimentConfig cfg;
    cfg.engine = EngineKind::Liouville;
    cfg.grid = Grid1D(32, -6.0, 6.0);
    cfg.packet_center = -1.0;
    cfg.packet_width = 0.9;
    cfg.packet_momentum = 0.6;
    cfg.potential = PotentialSpec::harmonic(0.0, 0.7);
    cfg.detectors = {gaussian_detector(1.0, 0.8, 1.0)};
    cfg.mass = 1.0;
    cfg.dt = 0.005;
    cfg.horizon = 2.0;
    cfg.sample_times = {0.5, 1.0, 2.0};
    cfg.seed = ctx.seed.value_or(1u);
    cfg.out_dir = ctx.out_dir + "/trace-conservation";

    const RunSummary s = run_experiment(cfg);
    const double drift = s.comparison.at("max_trace_drift").get<double>();
    const double min_eig = s.comparison.at("min_eigenvalue").get<double>();

    ScenarioOutcome out;
    out.name = "trace-conservation";
    out.criterion = 4;
    out.gate = "|Tr rho0 + Tr rho1 - 1| < 1e-8 throughout the run";
    out.metrics = {{"max_trace_drift", drift}, {"min_eigenvalue", min_eig}};
    out.passed = drift < 1e-8 && min_eig > -1e-8;
    out.wall_seconds = timer.seconds();
    return out;
}

// --- criterion 5 -----------------------------------------------------------

ScenarioOutcome propertime_factorization(const ScenarioContext& ctx) {
    Timer timer;
    const Grid2D grid(Grid1D(64, -8.0, 8.0), Grid1D(64, -6.0, 6.0));
    std::vector<DetectorSpec> dets = {gaussian_detector(1.0, 0.8, 1.0)};
    const PotentialSpec V = PotentialSpec::harmonic(0.0, 0.6);
    const double mass = 1.0;
    const WaveFunction1D phi = gaussian_packet(grid.t, -2.0, 0.5, 0.0);
    const WaveFunction1D psi = gaussian_packet(grid.x, -1.0, 1.0, 0.5);

    const double tau = 1.0;
    const double dtau = 2.5e-4;
    ScalarField2D field = ScalarField2D::product(grid, phi, psi);
    ProperTimeStepper stepper(grid, V, mass, total_rate(grid.x, dets));
    double s = 0.0;
    while (s < tau) {
        const double h = std::min(dtau, tau - s);
        stepper.step(field.amp, h);
        s += h;
    }
    const ScalarField2D closed = factorized_solution(phi, psi, grid, dets, V, mass, tau);
    double worst = 0.0;
    for (size_t i = 0; i < field.amp.size(); ++i)
        worst = std::max(worst, std::abs(field.amp[i] - closed.amp[i]));

    ScenarioOutcome out;
    out.name = "propertime-factorization";
    out.criterion = 5;
    out.gate = "max pointwise deviation < 1e-6 at tau = 1 on a 64x64 grid";
    out.metrics = {{"max_deviation", worst}, {"dtau", dtau}, {"wrap_warning", phi_wraps(phi, tau)}};
    out.passed = worst < 1e-6;
    out.wall_seconds = timer.seconds();
    (void)ctx;
    return out;
}

// --- criterion 6 -----------------------------------------------------------

ScenarioOutcome propertime_click_equivalence(const ScenarioContext& ctx) {
    Timer timer;
    ExperimentConfig cfg;
    cfg.engine = EngineKind::ComparePropertime;
    cfg.grid = Grid1D(32, -6.0, 6.0);
    cfg.has_time_grid = true;
    cfg.time_grid = Grid1D(64, -12.0, 12.0);
    cfg.packet_center = -1.0;
    cfg.packet_width = 0.8;
    cfg.packet_momentum = 0.3;
    cfg.packet_t_center = -6.0;
    cfg.packet_t_width = 0.5;
    cfg.detectors = {gaussian_detector(1.5, 0.8, 1.0)};
    cfg.mass = 1.0;
    cfg.dt = 0.01;
    cfg.horizon = 6.0;
    cfg.ensemble = 10000;
    cfg.seed = ctx.seed.value_or(27182u);
    cfg.out_dir = ctx.out_dir + "/propertime-click-equivalence";

    const RunSummary s = run_experiment(cfg);
    const double intensity = s.comparison.at("max_intensity_diff").get<double>();
    const double ks = s.comparison.at("ks_distance").get<double>();
    const double crit = s.comparison.at("ks_critical_5pct").get<double>();

    ScenarioOutcome out;
    out.name = "propertime-click-equivalence";
    out.criterion = 6;
    out.gate = "intensities agree pointwise < 1e-8; two-sample KS < 5% critical at 1e4 samples";
    out.metrics = s.comparison;
    out.passed = intensity < 1e-8 && ks < crit;
    out.wall_seconds = timer.seconds();
    return out;
}

// --- criterion 7 -----------------------------------------------------------

ScenarioOutcome rel_positivity(const ScenarioContext& ctx) {
    Timer timer;
    const Grid2D grid(Grid1D(16, -4.0, 4.0), Grid1D(8, -2.0, 2.0));
    std::mt19937 gen(static_cast<unsigned>(ctx.seed.value_or(97u)));
    std::uniform_real_distribution<double> u(0.0, 1.0);

    double min_value = std::numeric_limits<double>::infinity();
    double worst_rel = 0.0;
    const int n_fields = 1000;
    for (int trial = 0; trial < n_fields; ++trial) {
        SpinorField2D f = scenario_random_field(grid, gen);
        DetectorSpec det;
        switch (trial % 3) {
            case 0: det = gaussian_detector(-3.0 + 6.0 * u(gen), 0.2 + u(gen), 2.0 * u(gen)); break;
            case 1: det.profile = DetectorProfile::indicator(-3.0 + 2.0 * u(gen),
                                                             0.0 + 3.0 * u(gen), 2.0 * u(gen));
                    break;
            default: {
                std::vector<double> tab(static_cast<size_t>(grid.x.n));
                for (auto& v : tab) v = 2.0 * u(gen);
                det.profile = DetectorProfile::tabulated(tab);
            }
        }
        const cplx lhs = indefinite_product(f, apply_coupling(apply_coupling(f, det), det));
        const std::vector<double> g = det.profile.evaluate(grid.x);
        double rhs = 0.0;
        for (int ix = 0; ix < grid.x.n; ++ix)
            for (int it = 0; it < grid.t.n; ++it)
                rhs += g[static_cast<size_t>(ix)] * g[static_cast<size_t>(ix)] *
                       (std::norm(f.at(ix, it, 0)) + std::norm(f.at(ix, it, 1)));
        rhs *= grid.cell();

        min_value = std::min(min_value, lhs.real());
        const double scale = std::max(1.0, std::abs(rhs));
        worst_rel = std::max(worst_rel, std::abs(lhs.real() - rhs) / scale);
        worst_rel = std::max(worst_rel, std::abs(lhs.imag()) / scale);
    }

    ScenarioOutcome out;
    out.name = "rel-positivity";
    out.criterion = 7;
    out.gate = "<Psi, G^2 Psi> >= 0 and equals the Euclidean form to 1e-12 relative, 1e3 fields";
    out.metrics = {{"n_fields", n_fields},
                   {"min_expectation", min_value},
                   {"worst_relative_gap", worst_rel}};
    out.passed = min_value >= 0.0 && worst_rel <= 1e-12;
    out.wall_seconds = timer.seconds();
    return out;
}

// --- criterion 8 -----------------------------------------------------------

ScenarioOutcome rel_hermiticity(const ScenarioContext& ctx) {
    Timer timer;
    const Grid2D grid(Grid1D(16, -6.0, 6.0), Grid1D(16, -6.0, 6.0));
    std::mt19937 gen(static_cast<unsigned>(ctx.seed.value_or(131u)));
    const double m = 0.8, M = 1.3;

    double worst_d = 0.0, worst_d2 = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        SpinorField2D a = scenario_random_field(grid, gen);
        SpinorField2D b = scenario_random_field(grid, gen);
        const double scale = std::sqrt(a.euclid_norm2() * b.euclid_norm2());
        worst_d = std::max(worst_d,
                           std::abs(indefinite_product(apply_dirac(a, m), b) -
                                    indefinite_product(a, apply_dirac(b, m))) /
                               scale);
        worst_d2 = std::max(worst_d2,
                            std::abs(indefinite_product(apply_dirac_squared(a, m, M), b) -
                                     indefinite_product(a, apply_dirac_squared(b, m, M))) /
                                scale);
    }

    ScenarioOutcome out;
    out.name = "rel-hermiticity";
    out.criterion = 8;
    out.gate = "indefinite adjointness of D and D^2 within 1e-10 on random pairs";
    out.metrics = {{"worst_dirac", worst_d}, {"worst_dirac_squared", worst_d2}};
    out.passed = worst_d <= 1e-10 && worst_d2 <= 1e-10;
    out.wall_seconds = timer.seconds();
    return out;
}

// --- criterion 9 -----------------------------------------------------------

ScenarioOutcome gamma_algebra(const ScenarioContext& ctx) {
    Timer timer;
    const GammaSet& gs = gammas();
    double worst = 0.0;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu; nu < 4; ++nu) {
            const Mat4 anti = gs[mu] * gs[nu] + gs[nu] * gs[mu];
            const Mat4 expect = 2.0 * GammaSet::eta(mu, nu) * Mat4::Identity();
            worst = std::max(worst, (anti - expect).cwiseAbs().maxCoeff());
        }
    const double g0_sq = (gs[0] * gs[0] - Mat4::Identity()).cwiseAbs().maxCoeff();
    const Mat4 p = gs.p_plus();
    const double proj = (p * p - p).cwiseAbs().maxCoeff();

    ScenarioOutcome out;
    out.name = "gamma-algebra";
    out.criterion = 9;
    out.gate = "all 10 anticommutators equal 2 eta exactly; (gamma^0)^2 = I exactly";
    out.metrics = {{"max_anticommutator_residual", worst},
                   {"gamma0_squared_residual", g0_sq},
                   {"projector_residual", proj}};
    out.passed = worst == 0.0 && g0_sq == 0.0 && proj == 0.0;
    out.wall_seconds = timer.seconds();
    (void)ctx;
    return out;
}

// --- criterion 10 ----------------------------------------------------------

ScenarioOutcome rel_click_law(const ScenarioContext& ctx) {
    Timer timer;
    ExperimentConfig cfg;
    cfg.engine = EngineKind::Relativistic;
    cfg.grid = Grid1D(8, -2.0, 2.0);
    cfg.has_time_grid = true;
    cfg.time_grid = Grid1D(8, -2.0, 2.0);
    cfg.packet_width = 0.5;
    cfg.packet_t_width = 0.5;
    cfg.dirac_mass = 0.0;  // keeps the P+ sector exactly invariant: Exp(kappa) is exact
    cfg.evolution_mass = 1.0;
    cfg.detectors = {constant_detector(1.0)};
    cfg.dt = 0.02;
    cfg.horizon = 12.0;
    cfg.ensemble = 10000;
    cfg.seed = ctx.seed.value_or(16180u);
    cfg.threads = ctx.threads;
    cfg.out_dir = ctx.out_dir + "/rel-click-law";

    const RunSummary s = run_experiment(cfg);
    const double mean = s.first_click.mean;
    const double ks = ks_statistic(s.first_click_times, exp_cdf);
    const double ks_crit = ks_one_sample_critical(0.01, s.first_click.n);
    const double wall = timer.seconds();

    ScenarioOutcome out;
    out.name = "rel-click-law";
    out.criterion = 10;
    out.gate = "|mean - 1| <= 0.03 and KS < 1% critical for the P+ constant-kappa packet";
    out.metrics = {{"mean", mean},
                   {"n_clicked", s.first_click.n},
                   {"ks", ks},
                   {"ks_critical_1pct", ks_crit},
                   {"wall_seconds", wall}};
    out.passed = std::abs(mean - 1.0) <= 0.03 && ks < ks_crit;
    out.wall_seconds = wall;
    return out;
}

// --- criterion 11 ----------------------------------------------------------

ScenarioOutcome rel_two_detector_symmetry(const ScenarioContext& ctx) {
    Timer timer;
    ExperimentConfig cfg;
    cfg.engine = EngineKind::Relativistic;
    cfg.grid = Grid1D(16, -6.0, 6.0);
    cfg.has_time_grid = true;
    cfg.time_grid = Grid1D(8, -3.0, 3.0);
    cfg.packet_width = 1.2;
    cfg.packet_t_width = 0.7;
    cfg.dirac_mass = 0.0;
    cfg.evolution_mass = 1.0;
    cfg.detectors = {gaussian_detector(-1.5, 1.0, 1.2), gaussian_detector(1.5, 1.0, 1.2)};
    cfg.dt = 0.04;
    cfg.horizon = 5.0;
    cfg.ensemble = 10600;
    cfg.seed = ctx.seed.value_or(57721u);
    cfg.threads = ctx.threads;
    cfg.out_dir = ctx.out_dir + "/rel-two-detector-symmetry";

    SelectionStats stats;
    const RelEnsembleResult ens = run_rel_ensemble(cfg, &stats);

    long counts[2] = {0, 0};
    for (const auto& rec : ens.records)
        if (!rec.no_click) ++counts[rec.events.front().detector_index];
    const long clicked = counts[0] + counts[1];
    const double f0 = clicked > 0 ? static_cast<double>(counts[0]) / clicked : 0.0;
    const double sigma = clicked > 0 ? std::sqrt(0.25 / clicked) : 1.0;

    ScenarioOutcome out;
    out.name = "rel-two-detector-symmetry";
    out.criterion = 11;
    out.gate = "sum p_i = 1 within 1e-12 at every click; frequency 0.5 within 3 sigma at 1e4 clicks";
    out.metrics = {{"clicked", clicked},
                   {"frequency_0", f0},
                   {"three_sigma", 3.0 * sigma},
                   {"max_simplex_error", stats.max_simplex_error},
                   {"clicks_observed", stats.clicks}};
    out.passed = clicked >= 10000 && std::abs(f0 - 0.5) <= 3.0 * sigma &&
                 stats.max_simplex_error <= 1e-12;
    out.wall_seconds = timer.seconds();
    return out;
}

// --- criterion 12 ----------------------------------------------------------

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioOutcome determinism_threads(const ScenarioContext& ctx) {
    Timer timer;
    ExperimentConfig base;
    base.engine = EngineKind::Nonrel;
    base.grid = Grid1D(32, -8.0, 8.0);
    base.packet_center = -1.0;
    base.packet_width = 1.0;
    base.packet_momentum = 0.7;
    base.detectors = {gaussian_detector(1.5, 0.7, 1.0), gaussian_detector(-2.5, 0.9, 0.5)};
    base.detectors[0].single_shot = false;
    base.detectors[0].dead_time = 0.4;
    base.mass = 1.0;
    base.dt = 0.01;
    base.horizon = 6.0;
    base.ensemble = 200;
    base.seed = ctx.seed.value_or(11u);

    ExperimentConfig a = base, b = base;
    a.threads = 1;
    a.out_dir = ctx.out_dir + "/determinism/nonrel-threads1";
    b.threads = 2;
    b.out_dir = ctx.out_dir + "/determinism/nonrel-threads2";
    run_experiment(a);
    run_experiment(b);
    const bool nonrel_same = file_bytes(a.out_dir + "/trajectories.jsonl") ==
                             file_bytes(b.out_dir + "/trajectories.jsonl");

    ExperimentConfig rel;
    rel.engine = EngineKind::Relativistic;
    rel.grid = Grid1D(8, -2.0, 2.0);
    rel.has_time_grid = true;
    rel.time_grid = Grid1D(8, -2.0, 2.0);
    rel.packet_width = 0.5;
    rel.packet_t_width = 0.5;
    rel.dirac_mass = 0.0;
    rel.evolution_mass = 1.0;
    rel.detectors = {constant_detector(1.0)};
    rel.dt = 0.02;
    rel.horizon = 6.0;
    rel.ensemble = 100;
    rel.seed = ctx.seed.value_or(11u);
    ExperimentConfig ra = rel, rb = rel;
    ra.threads = 1;
    ra.out_dir = ctx.out_dir + "/determinism/rel-threads1";
    rb.threads = 2;
    rb.out_dir = ctx.out_dir + "/determinism/rel-threads2";
    run_experiment(ra);
    run_experiment(rb);
    const bool rel_same = file_bytes(ra.out_dir + "/trajectories.jsonl") ==
                          file_bytes(rb.out_dir + "/trajectories.jsonl");

    ScenarioOutcome out;
    out.name = "determinism-threads";
    out.criterion = 12;
    out.gate = "byte-identical trajectories.jsonl across thread counts";
    out.metrics = {{"nonrel_identical", nonrel_same}, {"rel_identical", rel_same}};
    out.passed = nonrel_same && rel_same;
    out.wall_seconds = timer.seconds();
    return out;
}

// --- criterion 13 ----------------------------------------------------------

ScenarioOutcome backend_agreement(const ScenarioContext& ctx) {
    Timer timer;
    const double mass = 1.0;
    std::vector<double> errors;
    for (int n : {64, 128, 256}) {
        Grid1D g(n, -12.0, 12.0);
        WaveFunction1D psi = gaussian_packet(g, 0.0, 1.5, 1.0);
        const WaveFunction1D hs =
            apply_hamiltonian(psi, PotentialSpec::zero(), mass, Backend::Spectral);
        const WaveFunction1D hf =
            apply_hamiltonian(psi, PotentialSpec::zero(), mass, Backend::FiniteDifference);
        double err = 0.0;
        for (size_t i = 0; i < psi.amp.size(); ++i)
            err = std::max(err, std::abs(hs.amp[i] - hf.amp[i]));
        errors.push_back(err);
    }
    const double slope1 = std::log2(errors[0] / errors[1]);
    const double slope2 = std::log2(errors[1] / errors[2]);

    ScenarioOutcome out;
    out.name = "backend-agreement";
    out.criterion = 13;
    out.gate = "grid-refinement slope of the FD-vs-spectral gap within [1.8, 2.2]";
    out.metrics = {{"errors", errors}, {"slope_64_128", slope1}, {"slope_128_256", slope2}};
    out.passed = slope1 >= 1.8 && slope1 <= 2.2 && slope2 >= 1.8 && slope2 <= 2.2;
    out.wall_seconds = timer.seconds();
    (void)ctx;
    return out;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> scenarios = {
        {"exp-click-law", 1,
         "Nonrelativistic exponential click law: H = 0, kappa = 1, 1e4 trajectories",
         exp_click_law},
        {"jump-time-analytic", 2, "Deterministic jump time ln 2 at p = 0.5, kappa = 1",
         jump_time_analytic},
        {"ensemble-liouville", 3,
         "Trajectory ensemble vs dual master equation, n = 64, 5e3 trajectories",
         ensemble_liouville},
        {"trace-conservation", 4, "Master equation conserves Tr rho0 + Tr rho1",
         trace_conservation},
        {"propertime-factorization", 5,
         "Proper-time flow vs factorized closed form at tau = 1, 64x64",
         propertime_factorization},
        {"propertime-click-equivalence", 6,
         "Proper-time and coordinate-time click processes coincide", propertime_click_equivalence},
        {"rel-positivity", 7,
         "Indefinite-metric detector expectations are non-negative Euclidean forms",
         rel_positivity},
        {"rel-hermiticity", 8, "Dirac operator and its square are indefinite-Hermitian",
         rel_hermiticity},
        {"gamma-algebra", 9, "Gamma matrices satisfy the Clifford algebra exactly", gamma_algebra},
        {"rel-click-law", 10,
         "Relativistic exponential click law for a P+ packet under constant coupling",
         rel_click_law},
        {"rel-two-detector-symmetry", 11,
         "Mirror-symmetric detectors click evenly; selection simplex holds",
         rel_two_detector_symmetry},
        {"determinism-threads", 12, "Trajectory output is byte-identical across thread counts",
         determinism_threads},
        {"backend-agreement", 13,
         "Spectral and finite-difference Hamiltonians agree at truncation order",
         backend_agreement},
    };
    return scenarios;
}

const Scenario* find_scenario(const std::string& name) {
    for (const auto& s : scenario_registry())
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace pdpsim
