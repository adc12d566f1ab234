#pragma once

#include <json.hpp>

#include "pdpsim/config.hpp"
#include "pdpsim/stats.hpp"

namespace pdpsim {

struct DetectorCounts {
    long first_clicks = 0;
    long total_events = 0;
};

/// Aggregate of one experiment run; to_json() is what lands in summary.json.
struct RunSummary {
    std::string engine;
    std::string scenario;  // empty for plain config runs
    std::string cfg_hash;
    uint64_t seed = 0;
    long n_trajectories = 0;
    long aborted = 0;
    std::vector<DetectorCounts> per_detector;
    long no_click_count = 0;
    double no_click_fraction = 0.0;
    SummaryStats first_click;
    Histogram histogram;
    nlohmann::json comparison;  // engine-specific metrics; null otherwise
    double wall_seconds = 0.0;
    double trajectories_per_second = 0.0;

    // Raw first-click times, kept in memory for statistical gates;
    // deliberately not serialized.
    std::vector<double> first_click_times;

    nlohmann::json to_json() const;
    static RunSummary from_json(const nlohmann::json& j);
};

struct NonrelEnsembleResult {
    std::vector<TrajectoryRecord> records;
    long aborted = 0;
};

struct RelEnsembleResult {
    std::vector<RelTrajectoryRecord> records;
    long aborted = 0;
};

/// Trajectory i runs on RngStream(cfg.seed, i); records land in index order
/// regardless of the thread count.
NonrelEnsembleResult run_nonrel_ensemble(const ExperimentConfig& cfg,
                                         SelectionStats* stats = nullptr);
RelEnsembleResult run_rel_ensemble(const ExperimentConfig& cfg, SelectionStats* stats = nullptr);

/// Executes the configured engine, writes trajectories.jsonl, histogram.csv
/// and summary.json (plus engine-specific artifacts) under cfg.out_dir, and
/// returns the summary. Throws when more than 1% of trajectories abort.
RunSummary run_experiment(const ExperimentConfig& cfg);

}  // namespace pdpsim
