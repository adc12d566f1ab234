#include "pdpsim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pdpsim/array_io.hpp"
#include "pdpsim/liouville.hpp"
#include "pdpsim/parallel.hpp"

namespace pdpsim {

using nlohmann::json;

namespace {

json event_to_json(const ClickEvent& ev) {
    return {{"t", ev.time},
            {"detector", ev.detector_index},
            {"pre_norm2", ev.pre_click_norm2},
            {"post_mean_x", ev.post_mean_x},
            {"post_std_x", ev.post_std_x}};
}

json record_to_json(const TrajectoryRecord& rec) {
    json events = json::array();
    for (const auto& ev : rec.events) events.push_back(event_to_json(ev));
    json j = {{"seed", rec.seed},       {"stream", rec.stream_index}, {"events", events},
              {"no_click", rec.no_click}, {"horizon", rec.horizon}};
    if (rec.aborted) {
        j["aborted"] = true;
        j["abort_reason"] = rec.abort_reason;
    }
    return j;
}

json rel_event_to_json(const RelClickEvent& ev) {
    return {{"tau", ev.tau},
            {"detector", ev.detector_index},
            {"pre_norm", ev.pre_click_norm},
            {"post_mean_x", ev.post.mean_x},
            {"post_std_x", ev.post.std_x},
            {"post_mean_t", ev.post.mean_t},
            {"post_std_t", ev.post.std_t}};
}

json rel_record_to_json(const RelTrajectoryRecord& rec) {
    json events = json::array();
    for (const auto& ev : rec.events) events.push_back(rel_event_to_json(ev));
    json j = {{"seed", rec.seed},       {"stream", rec.stream_index}, {"events", events},
              {"no_click", rec.no_click}, {"horizon", rec.horizon}};
    if (rec.aborted) {
        j["aborted"] = true;
        j["abort_reason"] = rec.abort_reason;
    }
    return j;
}

void write_jsonl(const std::string& path, const json& header, const std::vector<json>& lines) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << header.dump() << "\n";
    for (const auto& l : lines) out << l.dump() << "\n";
}

void write_histogram_csv(const std::string& path, const Histogram& h) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# schema_version=" << kSchemaVersion << "\n";
    out << "bin_lo,bin_hi,count\n";
    char buf[128];
    for (size_t b = 0; b + 1 < h.edges.size(); ++b) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%ld\n", h.edges[b], h.edges[b + 1],
                      h.counts[b]);
        out << buf;
    }
}

json histogram_to_json(const Histogram& h) {
    return {{"edges", h.edges}, {"counts", h.counts}, {"below", h.below}, {"above", h.above}};
}

Histogram histogram_from_json(const json& j) {
    Histogram h;
    h.edges = j.value("edges", std::vector<double>{});
    h.counts = j.value("counts", std::vector<long>{});
    h.below = j.value("below", 0L);
    h.above = j.value("above", 0L);
    return h;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void check_abort_budget(long aborted, long total) {
    if (total > 0 && aborted * 100 > total)
        throw std::runtime_error("run failed: " + std::to_string(aborted) + " of " +
                                 std::to_string(total) + " trajectories aborted (>1%)");
}

// First-click sampling for the proper-time engine: the damped flow is
// deterministic between jumps, so the click law and the per-detector
// selection weights are tabulated once along the flow and inverted per
// trajectory.
struct PropertimeTables {
    ClickLawTable law;
    std::vector<std::vector<double>> weights;  // per step, per detector
    ScalarField2D final_field;                 // damped flow at the horizon
};

PropertimeTables propertime_tables(const ExperimentConfig& cfg) {
    const Grid2D grid(cfg.grid, cfg.time_grid);
    const WaveFunction1D psi0 =
        gaussian_packet(grid.x, cfg.packet_center, cfg.packet_width, cfg.packet_momentum);
    const WaveFunction1D phi =
        gaussian_packet(grid.t, cfg.packet_t_center, cfg.packet_t_width, cfg.packet_t_momentum);
    if (phi_wraps(phi, cfg.horizon))
        std::cerr << "warning: the t-profile shifted by the horizon wraps around the periodic "
                     "t-box; enlarge time_grid\n";
    ScalarField2D field = ScalarField2D::product(grid, phi, psi0);
    field.normalize();
    ProperTimeStepper stepper(grid, cfg.potential, cfg.mass, total_rate(grid.x, cfg.detectors));

    std::vector<std::vector<double>> profiles;
    for (const auto& det : cfg.detectors) {
        std::vector<double> g = det.profile.evaluate(grid.x);
        for (auto& v : g) v *= v;
        if (!det.active) std::fill(g.begin(), g.end(), 0.0);
        profiles.push_back(std::move(g));
    }
    auto step_weights = [&] {
        std::vector<double> w(profiles.size(), 0.0);
        const std::vector<double> marg = field.x_marginal();
        for (size_t d = 0; d < profiles.size(); ++d) {
            double s = 0.0;
            for (size_t i = 0; i < marg.size(); ++i) s += profiles[d][i] * marg[i];
            w[d] = s * grid.x.dx();
        }
        return w;
    };

    PropertimeTables tables;
    tables.law.tau.push_back(0.0);
    tables.law.q.push_back(0.0);
    tables.weights.push_back(step_weights());
    double t = 0.0, q_prev = 0.0;
    while (t < cfg.horizon) {
        const double h = std::min(cfg.dt, cfg.horizon - t);
        if (!(h > 0.0)) break;
        stepper.step(field.amp, h);
        t += h;
        q_prev = std::max(q_prev, 1.0 - field.norm2());
        tables.law.tau.push_back(t);
        tables.law.q.push_back(q_prev);
        tables.weights.push_back(step_weights());
    }
    tables.final_field = std::move(field);
    return tables;
}

RunSummary summarize_clicks(const ExperimentConfig& cfg, std::vector<double> first_clicks,
                            std::vector<DetectorCounts> per_detector, long no_click, long aborted,
                            long n) {
    RunSummary s;
    s.engine = engine_name(cfg.engine);
    s.cfg_hash = config_hash(cfg);
    s.seed = cfg.seed;
    s.n_trajectories = n;
    s.aborted = aborted;
    s.per_detector = std::move(per_detector);
    s.no_click_count = no_click;
    s.no_click_fraction = n > 0 ? static_cast<double>(no_click) / n : 0.0;
    s.first_click = mean_se(first_clicks);
    s.histogram = make_histogram(first_clicks, 0.0, cfg.horizon, cfg.histogram_bins);
    s.first_click_times = std::move(first_clicks);
    s.comparison = nullptr;
    return s;
}

void write_common_artifacts(const ExperimentConfig& cfg, const json& header,
                            const std::vector<json>& lines, const RunSummary& summary) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    std::ofstream cfgout(cfg.out_dir + "/config_echo.json");
    cfgout << cfg.to_json().dump(2) << "\n";
    write_jsonl(cfg.out_dir + "/trajectories.jsonl", header, lines);
    write_histogram_csv(cfg.out_dir + "/histogram.csv", summary.histogram);
    std::ofstream sout(cfg.out_dir + "/summary.json");
    sout << summary.to_json().dump(2) << "\n";
}

}  // namespace

json RunSummary::to_json() const {
    json pd = json::array();
    for (const auto& d : per_detector)
        pd.push_back({{"first_clicks", d.first_clicks}, {"total_events", d.total_events}});
    return {{"schema_version", kSchemaVersion},
            {"engine", engine},
            {"scenario", scenario},
            {"config_hash", cfg_hash},
            {"seed", seed},
            {"n_trajectories", n_trajectories},
            {"aborted", aborted},
            {"per_detector", pd},
            {"no_click_count", no_click_count},
            {"no_click_fraction", no_click_fraction},
            {"first_click",
             {{"mean", first_click.mean}, {"se", first_click.se}, {"n", first_click.n}}},
            {"histogram", histogram_to_json(histogram)},
            {"comparison", comparison},
            {"wall_seconds", wall_seconds},
            {"trajectories_per_second", trajectories_per_second}};
}

RunSummary RunSummary::from_json(const json& j) {
    const int version = j.value("schema_version", -1);
    if (version != kSchemaVersion)
        throw std::runtime_error("summary schema version mismatch: expected " +
                                 std::to_string(kSchemaVersion) + ", got " +
                                 std::to_string(version));
    RunSummary s;
    s.engine = j.value("engine", "");
    s.scenario = j.value("scenario", "");
    s.cfg_hash = j.value("config_hash", "");
    s.seed = j.value("seed", uint64_t{0});
    s.n_trajectories = j.value("n_trajectories", 0L);
    s.aborted = j.value("aborted", 0L);
    for (const auto& d : j.value("per_detector", json::array()))
        s.per_detector.push_back({d.value("first_clicks", 0L), d.value("total_events", 0L)});
    s.no_click_count = j.value("no_click_count", 0L);
    s.no_click_fraction = j.value("no_click_fraction", 0.0);
    if (j.contains("first_click")) {
        const json& f = j.at("first_click");
        s.first_click.mean = f.value("mean", 0.0);
        s.first_click.se = f.value("se", 0.0);
        s.first_click.n = f.value("n", 0L);
    }
    if (j.contains("histogram")) s.histogram = histogram_from_json(j.at("histogram"));
    s.comparison = j.value("comparison", json());
    s.wall_seconds = j.value("wall_seconds", 0.0);
    s.trajectories_per_second = j.value("trajectories_per_second", 0.0);
    return s;
}

NonrelEnsembleResult run_nonrel_ensemble(const ExperimentConfig& cfg, SelectionStats* stats) {
    NonrelEnsembleResult out;
    const long n = cfg.ensemble;
    out.records.resize(static_cast<size_t>(n));
    const NonrelConfig run_cfg = cfg.nonrel_config();
    std::vector<SelectionStats> local(stats ? static_cast<size_t>(n) : 0);
    parallel_for(n, cfg.threads, [&](long i) {
        out.records[static_cast<size_t>(i)] =
            run_trajectory(run_cfg, RngStream(cfg.seed, static_cast<uint64_t>(i)),
                           stats ? &local[static_cast<size_t>(i)] : nullptr);
    });
    for (const auto& rec : out.records)
        if (rec.aborted) ++out.aborted;
    if (stats)
        for (const auto& l : local) {
            if (l.prob_sums.size() > stats->prob_sums.size())
                stats->prob_sums.resize(l.prob_sums.size(), 0.0);
            for (size_t i = 0; i < l.prob_sums.size(); ++i) stats->prob_sums[i] += l.prob_sums[i];
            stats->clicks += l.clicks;
            stats->max_simplex_error = std::max(stats->max_simplex_error, l.max_simplex_error);
        }
    return out;
}

RelEnsembleResult run_rel_ensemble(const ExperimentConfig& cfg, SelectionStats* stats) {
    RelEnsembleResult out;
    const long n = cfg.ensemble;
    out.records.resize(static_cast<size_t>(n));
    const RelConfig run_cfg = cfg.rel_config();
    std::vector<SelectionStats> local(stats ? static_cast<size_t>(n) : 0);
    parallel_for(n, cfg.threads, [&](long i) {
        out.records[static_cast<size_t>(i)] =
            run_rel_trajectory(run_cfg, RngStream(cfg.seed, static_cast<uint64_t>(i)),
                               stats ? &local[static_cast<size_t>(i)] : nullptr);
    });
    for (const auto& rec : out.records)
        if (rec.aborted) ++out.aborted;
    if (stats)
        for (const auto& l : local) {
            if (l.prob_sums.size() > stats->prob_sums.size())
                stats->prob_sums.resize(l.prob_sums.size(), 0.0);
            for (size_t i = 0; i < l.prob_sums.size(); ++i) stats->prob_sums[i] += l.prob_sums[i];
            stats->clicks += l.clicks;
            stats->max_simplex_error = std::max(stats->max_simplex_error, l.max_simplex_error);
        }
    return out;
}

namespace {

RunSummary run_nonrel_like(const ExperimentConfig& cfg,
                           std::vector<TrajectoryRecord>* keep_records = nullptr) {
    Timer timer;
    NonrelEnsembleResult ens = run_nonrel_ensemble(cfg);

    std::vector<double> first_clicks;
    std::vector<DetectorCounts> per_detector(cfg.detectors.size());
    long no_click = 0;
    std::vector<json> lines;
    lines.reserve(ens.records.size());
    for (const auto& rec : ens.records) {
        if (rec.no_click) {
            ++no_click;
        } else {
            first_clicks.push_back(rec.events.front().time);
            ++per_detector[static_cast<size_t>(rec.events.front().detector_index)].first_clicks;
        }
        for (const auto& ev : rec.events)
            ++per_detector[static_cast<size_t>(ev.detector_index)].total_events;
        lines.push_back(record_to_json(rec));
    }
    RunSummary summary = summarize_clicks(cfg, std::move(first_clicks), std::move(per_detector),
                                          no_click, ens.aborted, cfg.ensemble);
    summary.wall_seconds = timer.seconds();
    summary.trajectories_per_second =
        summary.wall_seconds > 0.0 ? cfg.ensemble / summary.wall_seconds : 0.0;

    const json header = {{"schema_version", kSchemaVersion},
                         {"kind", "trajectories"},
                         {"engine", summary.engine},
                         {"n", cfg.ensemble},
                         {"seed", cfg.seed}};
    write_common_artifacts(cfg, header, lines, summary);
    check_abort_budget(ens.aborted, cfg.ensemble);
    if (keep_records) *keep_records = std::move(ens.records);
    return summary;
}

RunSummary run_relativistic(const ExperimentConfig& cfg) {
    Timer timer;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    {
        const SpinorField2D packet = spinor_packet(Grid2D(cfg.grid, cfg.time_grid),
                                                   cfg.rel_config().packet);
        write_array(cfg.out_dir + "/packet.pdparr",
                    {static_cast<uint64_t>(cfg.grid.n), static_cast<uint64_t>(cfg.time_grid.n), 4},
                    packet.amp);
    }
    RelEnsembleResult ens = run_rel_ensemble(cfg);

    std::vector<double> first_clicks;
    std::vector<DetectorCounts> per_detector(cfg.detectors.size());
    long no_click = 0;
    std::vector<json> lines;
    lines.reserve(ens.records.size());
    for (const auto& rec : ens.records) {
        if (rec.no_click) {
            ++no_click;
        } else {
            first_clicks.push_back(rec.events.front().tau);
            ++per_detector[static_cast<size_t>(rec.events.front().detector_index)].first_clicks;
        }
        for (const auto& ev : rec.events)
            ++per_detector[static_cast<size_t>(ev.detector_index)].total_events;
        lines.push_back(rel_record_to_json(rec));
    }
    RunSummary summary = summarize_clicks(cfg, std::move(first_clicks), std::move(per_detector),
                                          no_click, ens.aborted, cfg.ensemble);
    summary.wall_seconds = timer.seconds();
    summary.trajectories_per_second =
        summary.wall_seconds > 0.0 ? cfg.ensemble / summary.wall_seconds : 0.0;

    const json header = {{"schema_version", kSchemaVersion},
                         {"kind", "trajectories"},
                         {"engine", summary.engine},
                         {"n", cfg.ensemble},
                         {"seed", cfg.seed}};
    write_common_artifacts(cfg, header, lines, summary);
    check_abort_budget(ens.aborted, cfg.ensemble);
    return summary;
}

RunSummary run_propertime(const ExperimentConfig& cfg) {
    Timer timer;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const PropertimeTables tables = propertime_tables(cfg);
    write_array(cfg.out_dir + "/field_horizon.pdparr",
                {static_cast<uint64_t>(cfg.grid.n), static_cast<uint64_t>(cfg.time_grid.n)},
                tables.final_field.amp);

    std::vector<double> first_clicks;
    std::vector<DetectorCounts> per_detector(cfg.detectors.size());
    long no_click = 0;
    std::vector<json> lines;
    lines.reserve(static_cast<size_t>(cfg.ensemble));
    for (long i = 0; i < cfg.ensemble; ++i) {
        RngStream rng(cfg.seed, static_cast<uint64_t>(i));
        const double p = rng.uniform();
        const double tau = tables.law.invert(p);
        json events = json::array();
        bool clicked = tau >= 0.0;
        if (clicked) {
            // Interpolate the selection weights at tau and draw the detector.
            const auto it = std::lower_bound(tables.law.tau.begin(), tables.law.tau.end(), tau);
            size_t k = static_cast<size_t>(it - tables.law.tau.begin());
            if (k == 0) k = 1;
            if (k >= tables.law.tau.size()) k = tables.law.tau.size() - 1;
            const double t0 = tables.law.tau[k - 1], t1 = tables.law.tau[k];
            const double f = t1 > t0 ? (tau - t0) / (t1 - t0) : 0.0;
            std::vector<double> w(cfg.detectors.size(), 0.0);
            double total = 0.0;
            for (size_t d = 0; d < w.size(); ++d) {
                w[d] = (1.0 - f) * tables.weights[k - 1][d] + f * tables.weights[k][d];
                total += w[d];
            }
            if (total > 0.0) {
                const double u = rng.uniform();
                size_t pick = w.size() - 1;
                double acc = 0.0;
                for (size_t d = 0; d < w.size(); ++d) {
                    acc += w[d] / total;
                    if (u < acc) {
                        pick = d;
                        break;
                    }
                }
                first_clicks.push_back(tau);
                ++per_detector[pick].first_clicks;
                ++per_detector[pick].total_events;
                events.push_back(
                    {{"t", tau}, {"detector", static_cast<long>(pick)}, {"pre_norm2", 1.0 - p}});
            } else {
                clicked = false;
            }
        }
        if (!clicked) ++no_click;
        lines.push_back({{"seed", cfg.seed},
                         {"stream", static_cast<uint64_t>(i)},
                         {"events", events},
                         {"no_click", !clicked},
                         {"horizon", cfg.horizon}});
    }

    RunSummary summary = summarize_clicks(cfg, std::move(first_clicks), std::move(per_detector),
                                          no_click, 0, cfg.ensemble);
    summary.wall_seconds = timer.seconds();
    summary.trajectories_per_second =
        summary.wall_seconds > 0.0 ? cfg.ensemble / summary.wall_seconds : 0.0;
    const json header = {{"schema_version", kSchemaVersion},
                         {"kind", "trajectories"},
                         {"engine", summary.engine},
                         {"n", cfg.ensemble},
                         {"seed", cfg.seed}};
    write_common_artifacts(cfg, header, lines, summary);
    return summary;
}

RunSummary run_liouville(const ExperimentConfig& cfg) {
    Timer timer;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);

    const WaveFunction1D psi0 =
        gaussian_packet(cfg.grid, cfg.packet_center, cfg.packet_width, cfg.packet_momentum);
    const Eigen::MatrixXcd H =
        dense_hamiltonian_matrix(cfg.grid, cfg.potential, cfg.mass, cfg.backend);
    const std::vector<double> g = cfg.detectors.front().profile.evaluate(cfg.grid);
    std::vector<double> times = cfg.sample_times;
    if (times.empty()) times = {cfg.horizon};

    const MasterRun run = run_master(psi0, H, g, cfg.dt, times);

    std::ofstream traces(cfg.out_dir + "/master_traces.csv");
    traces << "# schema_version=" << kSchemaVersion << "\n";
    traces << "t,trace0,trace1,total\n";
    char buf[160];
    for (size_t s = 0; s < run.states.size(); ++s) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", run.sample_times[s],
                      run.states[s].trace0(), run.states[s].trace1(),
                      run.states[s].trace_total());
        traces << buf;
    }
    for (size_t s = 0; s < run.states.size(); ++s) {
        const auto& dp = run.states[s];
        const uint64_t n = static_cast<uint64_t>(dp.rho0.rows());
        std::vector<cplx> flat(static_cast<size_t>(n) * n);
        Eigen::Map<Eigen::MatrixXcd>(flat.data(), n, n) = dp.rho0;
        write_array(cfg.out_dir + "/rho0_" + std::to_string(s) + ".pdparr", {n, n}, flat);
        Eigen::Map<Eigen::MatrixXcd>(flat.data(), n, n) = dp.rho1;
        write_array(cfg.out_dir + "/rho1_" + std::to_string(s) + ".pdparr", {n, n}, flat);
    }

    RunSummary summary =
        summarize_clicks(cfg, {}, std::vector<DetectorCounts>(cfg.detectors.size()), 0, 0, 0);
    summary.comparison = {{"schema_version", kSchemaVersion},
                          {"max_trace_drift", run.max_trace_drift},
                          {"min_eigenvalue", run.min_eigenvalue},
                          {"sample_times", run.sample_times},
                          {"final_trace0", run.states.back().trace0()},
                          {"final_trace1", run.states.back().trace1()}};
    summary.wall_seconds = timer.seconds();

    const json header = {{"schema_version", kSchemaVersion},
                         {"kind", "trajectories"},
                         {"engine", summary.engine},
                         {"n", 0},
                         {"seed", cfg.seed}};
    write_common_artifacts(cfg, header, {}, summary);
    return summary;
}

RunSummary run_compare_ensemble(const ExperimentConfig& cfg) {
    Timer timer;
    std::vector<TrajectoryRecord> records;
    RunSummary summary = run_nonrel_like(cfg, &records);

    // Aborted trajectories (tolerated below the 1% budget) carry no usable
    // snapshots.
    records.erase(std::remove_if(records.begin(), records.end(),
                                 [](const TrajectoryRecord& r) { return r.aborted; }),
                  records.end());
    const EnsembleEstimate est = ensemble_estimate(records, cfg.sample_times);
    const WaveFunction1D psi0 =
        gaussian_packet(cfg.grid, cfg.packet_center, cfg.packet_width, cfg.packet_momentum);
    const Eigen::MatrixXcd H =
        dense_hamiltonian_matrix(cfg.grid, cfg.potential, cfg.mass, cfg.backend);
    const std::vector<double> g = cfg.detectors.front().profile.evaluate(cfg.grid);
    const MasterRun master = run_master(psi0, H, g, cfg.dt, cfg.sample_times);

    json rows = json::array();
    for (size_t s = 0; s < cfg.sample_times.size(); ++s) {
        const double d0 = trace_distance(est.states[s].rho0, master.states[s].rho0);
        const double d1 = trace_distance(est.states[s].rho1, master.states[s].rho1);
        rows.push_back({{"t", cfg.sample_times[s]},
                        {"trace_distance_rho0", d0},
                        {"trace_distance_rho1", d1},
                        {"mean_se_rho0", est.se0[s].mean()},
                        {"mean_se_rho1", est.se1[s].mean()},
                        {"ensemble_trace0", est.states[s].trace0()},
                        {"master_trace0", master.states[s].trace0()}});
    }
    summary.comparison = {{"schema_version", kSchemaVersion},
                          {"kind", "ensemble-vs-master"},
                          {"rows", rows},
                          {"max_trace_drift", master.max_trace_drift},
                          {"min_eigenvalue", master.min_eigenvalue},
                          {"n_trajectories", cfg.ensemble}};
    summary.wall_seconds = timer.seconds();

    std::ofstream cmp(cfg.out_dir + "/comparison.json");
    cmp << summary.comparison.dump(2) << "\n";
    std::ofstream sout(cfg.out_dir + "/summary.json");
    sout << summary.to_json().dump(2) << "\n";
    return summary;
}

RunSummary run_compare_propertime(const ExperimentConfig& cfg) {
    Timer timer;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);

    const PropertimeComparison cmp = click_statistics_equivalence(cfg.propertime_config());

    RunSummary summary =
        summarize_clicks(cfg, {}, std::vector<DetectorCounts>(cfg.detectors.size()), 0, 0,
                         cfg.ensemble);
    summary.comparison = {{"schema_version", kSchemaVersion},
                          {"kind", "propertime-vs-coordinate"},
                          {"max_intensity_diff", cmp.max_intensity_diff},
                          {"ks_distance", cmp.ks_distance},
                          {"ks_critical_5pct", cmp.ks_critical_5pct},
                          {"n_samples", cmp.n_samples},
                          {"no_click_1d", cmp.no_click_1d},
                          {"no_click_2d", cmp.no_click_2d}};
    summary.wall_seconds = timer.seconds();

    std::ofstream out(cfg.out_dir + "/comparison.json");
    out << summary.comparison.dump(2) << "\n";
    const json header = {{"schema_version", kSchemaVersion},
                         {"kind", "trajectories"},
                         {"engine", summary.engine},
                         {"n", 0},
                         {"seed", cfg.seed}};
    write_common_artifacts(cfg, header, {}, summary);
    return summary;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg) {
    if (cfg.ensemble == 0 &&
        (cfg.engine == EngineKind::Nonrel || cfg.engine == EngineKind::Relativistic ||
         cfg.engine == EngineKind::ProperTime)) {
        std::cerr << "warning: ensemble size is 0, writing an empty summary\n";
    }
    switch (cfg.engine) {
        case EngineKind::Nonrel: return run_nonrel_like(cfg);
        case EngineKind::Relativistic: return run_relativistic(cfg);
        case EngineKind::ProperTime: return run_propertime(cfg);
        case EngineKind::Liouville: return run_liouville(cfg);
        case EngineKind::CompareEnsemble: return run_compare_ensemble(cfg);
        case EngineKind::ComparePropertime: return run_compare_propertime(cfg);
    }
    throw std::logic_error("unreachable engine kind");
}

}  // namespace pdpsim
