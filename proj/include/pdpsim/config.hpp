#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pdpsim/nonrel.hpp"
#include "pdpsim/proper_time.hpp"
#include "pdpsim/rel.hpp"

namespace pdpsim {

inline constexpr int kSchemaVersion = 1;

enum class EngineKind {
    Nonrel,
    ProperTime,
    Relativistic,
    Liouville,
    CompareEnsemble,
    ComparePropertime,
};

std::string engine_name(EngineKind k);
std::optional<EngineKind> engine_from_name(const std::string& name);

/// Carries every violation found during validation, one message per field.
class config_error : public std::runtime_error {
public:
    explicit config_error(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct ExperimentConfig {
    EngineKind engine = EngineKind::Nonrel;

    Grid1D grid{64, -10.0, 10.0};
    Grid1D time_grid{64, -10.0, 10.0};
    bool has_time_grid = false;

    double packet_center = 0.0, packet_width = 1.0, packet_momentum = 0.0;
    double packet_t_center = 0.0, packet_t_width = 1.0, packet_t_momentum = 0.0;
    std::array<cplx, 4> spinor_weights = {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0),
                                          cplx(0.0, 0.0)};

    PotentialSpec potential;
    std::vector<DetectorSpec> detectors;

    double mass = 1.0;  // +inf allowed ("inf" in JSON)
    double dirac_mass = 0.0;
    std::optional<double> evolution_mass;  // defaults to dirac_mass when absent
    double charge = 0.0;

    double dt = 1e-3;
    double horizon = 10.0;
    long ensemble = 1000;
    uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency
    Backend backend = Backend::Spectral;
    std::vector<double> sample_times;
    RelWeighting weighting = RelWeighting::Rate;
    int histogram_bins = 50;
    std::string out_dir = "out";

    nlohmann::json to_json() const;

    double evolution_mass_value() const {
        return evolution_mass.value_or(dirac_mass);
    }

    NonrelConfig nonrel_config() const;
    RelConfig rel_config() const;
    PropertimeComparisonConfig propertime_config() const;
};

/// Parse and validate; throws config_error listing every violation.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Stable content hash over the canonical config with seed, threads and
/// out_dir stripped; used to group summaries of the same experiment.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace pdpsim
