#include "pdpsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pdpsim/liouville.hpp"

namespace pdpsim {

using nlohmann::json;

std::string engine_name(EngineKind k) {
    switch (k) {
        case EngineKind::Nonrel: return "nonrel";
        case EngineKind::ProperTime: return "propertime";
        case EngineKind::Relativistic: return "relativistic";
        case EngineKind::Liouville: return "liouville";
        case EngineKind::CompareEnsemble: return "compare-ensemble";
        case EngineKind::ComparePropertime: return "compare-propertime";
    }
    return "unknown";
}

std::optional<EngineKind> engine_from_name(const std::string& name) {
    for (EngineKind k : {EngineKind::Nonrel, EngineKind::ProperTime, EngineKind::Relativistic,
                         EngineKind::Liouville, EngineKind::CompareEnsemble,
                         EngineKind::ComparePropertime})
        if (engine_name(k) == name) return k;
    return std::nullopt;
}

config_error::config_error(std::vector<std::string> issues)
    : std::runtime_error([&issues] {
          std::ostringstream os;
          os << "configuration invalid (" << issues.size() << " issue"
             << (issues.size() == 1 ? "" : "s") << "):";
          for (const auto& s : issues) os << "\n  - " << s;
          return os.str();
      }()),
      issues_(std::move(issues)) {}

namespace {

struct Check {
    const json& j;
    std::vector<std::string>& issues;

    bool has(const std::string& key) const { return j.contains(key); }

    template <typename T>
    T get(const std::string& key, T fallback) {
        if (!j.contains(key)) return fallback;
        try {
            return j.at(key).get<T>();
        } catch (const json::exception&) {
            issues.push_back(key + ": wrong type");
            return fallback;
        }
    }
};

double parse_mass(const json& j, const std::string& key, double fallback,
                  std::vector<std::string>& issues) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinite") return std::numeric_limits<double>::infinity();
        issues.push_back(key + ": string value must be \"inf\"");
        return fallback;
    }
    if (v.is_number()) return v.get<double>();
    issues.push_back(key + ": must be a positive number or \"inf\"");
    return fallback;
}

PotentialSpec parse_potential(const json& j, std::vector<std::string>& issues) {
    if (!j.is_object()) {
        issues.push_back("potential: must be an object");
        return {};
    }
    const std::string type = j.value("type", "zero");
    if (type == "zero") return PotentialSpec::zero();
    if (type == "harmonic")
        return PotentialSpec::harmonic(j.value("center", 0.0), j.value("omega", 1.0));
    if (type == "barrier")
        return PotentialSpec::barrier(j.value("a", 0.0), j.value("b", 0.0),
                                      j.value("height", 0.0));
    if (type == "tabulated") {
        PotentialSpec v = PotentialSpec::tabulated(
            j.value("values", std::vector<double>{}));
        if (v.table.empty()) issues.push_back("potential.values: required for tabulated type");
        return v;
    }
    issues.push_back("potential.type: unknown type '" + type + "'");
    return {};
}

json potential_to_json(const PotentialSpec& v) {
    switch (v.kind) {
        case PotentialSpec::Kind::Zero: return {{"type", "zero"}};
        case PotentialSpec::Kind::Harmonic:
            return {{"type", "harmonic"}, {"center", v.center}, {"omega", v.omega}};
        case PotentialSpec::Kind::Barrier:
            return {{"type", "barrier"}, {"a", v.a}, {"b", v.b}, {"height", v.height}};
        case PotentialSpec::Kind::Tabulated: return {{"type", "tabulated"}, {"values", v.table}};
    }
    return {{"type", "zero"}};
}

DetectorSpec parse_detector(const json& j, const std::string& where,
                            std::vector<std::string>& issues) {
    DetectorSpec det;
    if (!j.is_object()) {
        issues.push_back(where + ": must be an object");
        return det;
    }
    const std::string shape = j.value("shape", "gaussian");
    const double strength = j.value("strength", 1.0);
    if (strength < 0.0) issues.push_back(where + ".strength: must be non-negative");
    if (shape == "gaussian") {
        const double width = j.value("width", 1.0);
        if (!(width > 0.0)) issues.push_back(where + ".width: must be positive");
        det.profile = DetectorProfile::gaussian(j.value("center", 0.0), width,
                                                std::max(0.0, strength));
    } else if (shape == "indicator") {
        const double a = j.value("a", 0.0), b = j.value("b", 0.0);
        if (!(b >= a)) issues.push_back(where + ": indicator needs b >= a");
        det.profile = DetectorProfile::indicator(a, b, std::max(0.0, strength));
    } else if (shape == "constant") {
        det.profile = DetectorProfile::indicator(-std::numeric_limits<double>::infinity(),
                                                 std::numeric_limits<double>::infinity(),
                                                 std::max(0.0, strength));
    } else if (shape == "tabulated") {
        const auto values = j.value("values", std::vector<double>{});
        if (values.empty()) issues.push_back(where + ".values: required for tabulated shape");
        for (size_t i = 0; i < values.size(); ++i)
            if (values[i] < 0.0) {
                issues.push_back(where + ".values[" + std::to_string(i) +
                                 "]: g(x) must be non-negative");
                break;
            }
        det.profile = DetectorProfile::tabulated(values);
    } else {
        issues.push_back(where + ".shape: unknown shape '" + shape + "'");
    }
    det.active = j.value("active", true);
    det.single_shot = j.value("single_shot", true);
    det.dead_time = j.value("dead_time", 0.0);
    if (det.dead_time < 0.0) issues.push_back(where + ".dead_time: must be non-negative");
    return det;
}

json detector_to_json(const DetectorSpec& det) {
    json j;
    const DetectorProfile& p = det.profile;
    switch (p.shape) {
        case DetectorProfile::Shape::Gaussian:
            j = {{"shape", "gaussian"}, {"center", p.center}, {"width", p.width},
                 {"strength", p.strength}};
            break;
        case DetectorProfile::Shape::Indicator:
            if (std::isinf(p.a) && std::isinf(p.b))
                j = {{"shape", "constant"}, {"strength", p.strength}};
            else
                j = {{"shape", "indicator"}, {"a", p.a}, {"b", p.b}, {"strength", p.strength}};
            break;
        case DetectorProfile::Shape::Tabulated:
            j = {{"shape", "tabulated"}, {"values", p.table}};
            break;
    }
    j["active"] = det.active;
    j["single_shot"] = det.single_shot;
    j["dead_time"] = det.dead_time;
    return j;
}

}  // namespace

ExperimentConfig config_from_json(const json& root) {
    std::vector<std::string> issues;
    if (!root.is_object()) throw config_error({"root: must be a JSON object"});
    Check c{root, issues};

    ExperimentConfig cfg;

    const int version = c.get<int>("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
        issues.push_back("schema_version: expected " + std::to_string(kSchemaVersion) + ", got " +
                         std::to_string(version));

    const std::string engine = c.get<std::string>("engine", "nonrel");
    if (auto k = engine_from_name(engine))
        cfg.engine = *k;
    else
        issues.push_back("engine: unknown engine '" + engine + "'");

    if (root.contains("grid")) {
        const json& g = root.at("grid");
        const int n = g.value("n", 64);
        const double lo = g.value("x_min", -10.0), hi = g.value("x_max", 10.0);
        if (n < 2) issues.push_back("grid.n: need at least 2 points");
        if (!(hi > lo)) issues.push_back("grid: x_max must exceed x_min");
        if (n >= 2 && hi > lo) cfg.grid = Grid1D(n, lo, hi);
    }
    if (root.contains("time_grid")) {
        cfg.has_time_grid = true;
        const json& g = root.at("time_grid");
        const int n = g.value("n", 64);
        const double lo = g.value("t_min", -10.0), hi = g.value("t_max", 10.0);
        if (n < 2) issues.push_back("time_grid.n: need at least 2 points");
        if (!(hi > lo)) issues.push_back("time_grid: t_max must exceed t_min");
        if (n >= 2 && hi > lo) cfg.time_grid = Grid1D(n, lo, hi);
    }

    if (root.contains("packet")) {
        const json& p = root.at("packet");
        cfg.packet_center = p.value("center", 0.0);
        cfg.packet_width = p.value("width", 1.0);
        cfg.packet_momentum = p.value("momentum", 0.0);
        cfg.packet_t_center = p.value("t_center", 0.0);
        cfg.packet_t_width = p.value("t_width", 1.0);
        cfg.packet_t_momentum = p.value("t_momentum", 0.0);
        if (!(cfg.packet_width > 0.0)) issues.push_back("packet.width: must be positive");
        if (!(cfg.packet_t_width > 0.0)) issues.push_back("packet.t_width: must be positive");
        if (p.contains("spinor_weights")) {
            const json& w = p.at("spinor_weights");
            if (!w.is_array() || w.size() != 4) {
                issues.push_back("packet.spinor_weights: need 4 [re, im] pairs");
            } else {
                for (size_t i = 0; i < 4; ++i) {
                    const json& e = w.at(i);
                    if (e.is_array() && e.size() == 2)
                        cfg.spinor_weights[i] = cplx(e.at(0).get<double>(), e.at(1).get<double>());
                    else if (e.is_number())
                        cfg.spinor_weights[i] = cplx(e.get<double>(), 0.0);
                    else
                        issues.push_back("packet.spinor_weights[" + std::to_string(i) +
                                         "]: must be a number or [re, im]");
                }
            }
        }
    }

    if (root.contains("potential")) cfg.potential = parse_potential(root.at("potential"), issues);

    if (root.contains("detectors")) {
        const json& ds = root.at("detectors");
        if (!ds.is_array()) {
            issues.push_back("detectors: must be an array");
        } else {
            for (size_t i = 0; i < ds.size(); ++i)
                cfg.detectors.push_back(
                    parse_detector(ds.at(i), "detectors[" + std::to_string(i) + "]", issues));
        }
    }

    for (size_t i = 0; i < cfg.detectors.size(); ++i) {
        try {
            cfg.detectors[i].profile.evaluate(cfg.grid);
        } catch (const std::exception& e) {
            issues.push_back("detectors[" + std::to_string(i) + "]: " + e.what());
        }
    }

    cfg.mass = parse_mass(root, "mass", 1.0, issues);
    if (!(cfg.mass > 0.0)) issues.push_back("mass: must be positive (or \"inf\")");
    cfg.dirac_mass = c.get<double>("dirac_mass", 0.0);
    if (cfg.dirac_mass < 0.0) issues.push_back("dirac_mass: must be non-negative");
    if (root.contains("evolution_mass")) cfg.evolution_mass = c.get<double>("evolution_mass", 1.0);
    cfg.charge = c.get<double>("charge", 0.0);

    if (root.contains("dt")) {
        cfg.dt = c.get<double>("dt", 1e-3);
        if (!(cfg.dt > 0.0)) issues.push_back("dt: must be positive");
    } else if (issues.empty()) {
        // Default step: rate and Nyquist-phase bounds from the configured
        // dynamics. The relativistic generator scale is quadratic in both
        // Nyquist frequencies.
        if (cfg.engine == EngineKind::Relativistic) {
            const double em = cfg.evolution_mass_value();
            const double kx = M_PI / cfg.grid.dx();
            const double kt = cfg.has_time_grid ? M_PI / cfg.time_grid.dx() : kx;
            const double scale =
                (kx * kx + kt * kt + cfg.dirac_mass * cfg.dirac_mass) / (2.0 * std::max(em, 1e-12));
            cfg.dt = std::min(suggest_dt(cfg.grid, std::numeric_limits<double>::infinity(),
                                         cfg.detectors),
                              0.25 * M_PI / scale);
        } else {
            cfg.dt = suggest_dt(cfg.grid, cfg.mass, cfg.detectors);
        }
    }
    cfg.horizon = c.get<double>("horizon", 10.0);
    if (!(cfg.horizon > 0.0)) issues.push_back("horizon: must be positive");
    cfg.ensemble = c.get<long>("ensemble", 1000);
    if (cfg.ensemble < 0) issues.push_back("ensemble: must be non-negative");
    cfg.seed = c.get<uint64_t>("seed", 1);
    cfg.threads = c.get<int>("threads", 0);
    if (cfg.threads < 0) issues.push_back("threads: must be non-negative");

    const std::string backend = c.get<std::string>("backend", "spectral");
    if (backend == "spectral")
        cfg.backend = Backend::Spectral;
    else if (backend == "fd")
        cfg.backend = Backend::FiniteDifference;
    else
        issues.push_back("backend: must be 'spectral' or 'fd'");

    cfg.sample_times = c.get<std::vector<double>>("sample_times", {});
    for (size_t i = 0; i < cfg.sample_times.size(); ++i) {
        if (cfg.sample_times[i] < 0.0 || cfg.sample_times[i] > cfg.horizon)
            issues.push_back("sample_times[" + std::to_string(i) + "]: outside [0, horizon]");
        if (i > 0 && cfg.sample_times[i] <= cfg.sample_times[i - 1])
            issues.push_back("sample_times: must be strictly increasing");
    }

    const std::string weighting = c.get<std::string>("selection_weighting", "rate");
    if (weighting == "rate")
        cfg.weighting = RelWeighting::Rate;
    else if (weighting == "linear")
        cfg.weighting = RelWeighting::Linear;
    else
        issues.push_back("selection_weighting: must be 'rate' or 'linear'");

    cfg.histogram_bins = c.get<int>("histogram_bins", 50);
    if (cfg.histogram_bins < 1) issues.push_back("histogram_bins: must be at least 1");
    cfg.out_dir = c.get<std::string>("out_dir", "out");

    // Engine-specific constraints.
    const bool needs_2d = cfg.engine == EngineKind::ProperTime ||
                          cfg.engine == EngineKind::Relativistic ||
                          cfg.engine == EngineKind::ComparePropertime;
    if (needs_2d && !cfg.has_time_grid)
        issues.push_back("time_grid: required by engine '" + engine_name(cfg.engine) + "'");
    if (cfg.detectors.empty()) issues.push_back("detectors: at least one detector required");

    const bool spectral_x = cfg.backend == Backend::Spectral && !std::isinf(cfg.mass);
    if (spectral_x && !cfg.grid.power_of_two() && cfg.engine != EngineKind::Relativistic)
        issues.push_back("grid.n: spectral backend needs a power of two");
    if (cfg.engine == EngineKind::Relativistic || cfg.engine == EngineKind::ComparePropertime ||
        cfg.engine == EngineKind::ProperTime) {
        if (!cfg.grid.power_of_two()) issues.push_back("grid.n: must be a power of two");
        if (cfg.has_time_grid && !cfg.time_grid.power_of_two())
            issues.push_back("time_grid.n: must be a power of two");
    }

    if (cfg.engine == EngineKind::Liouville || cfg.engine == EngineKind::CompareEnsemble) {
        if (cfg.grid.n > kDenseCap)
            issues.push_back("grid.n: exceeds the dense master-equation cap of " +
                             std::to_string(kDenseCap));
        if (cfg.detectors.size() != 1)
            issues.push_back("detectors: the master equation takes exactly one detector");
        if (cfg.engine == EngineKind::CompareEnsemble && cfg.sample_times.empty())
            issues.push_back("sample_times: required by compare-ensemble");
    }

    if (cfg.engine == EngineKind::Relativistic) {
        const double em = cfg.evolution_mass_value();
        if (!(em > 0.0))
            issues.push_back(
                "evolution_mass: must be positive (defaults to dirac_mass, which is " +
                std::to_string(cfg.dirac_mass) + ")");
        const double w2 = std::norm(cfg.spinor_weights[0]) + std::norm(cfg.spinor_weights[1]) -
                          std::norm(cfg.spinor_weights[2]) - std::norm(cfg.spinor_weights[3]);
        if (!(w2 > 0.0))
            issues.push_back(
                "packet.spinor_weights: indefinite norm must be positive; states with "
                "non-positive norm are rejected");
        if (cfg.charge != 0.0)
            issues.push_back("charge: the relativistic evolution requires A = 0 (charge 0)");
    }

    if (!issues.empty()) throw config_error(std::move(issues));
    return cfg;
}

json ExperimentConfig::to_json() const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["engine"] = engine_name(engine);
    j["grid"] = {{"n", grid.n}, {"x_min", grid.x_min}, {"x_max", grid.x_max}};
    if (has_time_grid)
        j["time_grid"] = {{"n", time_grid.n}, {"t_min", time_grid.x_min},
                          {"t_max", time_grid.x_max}};
    json w = json::array();
    for (const auto& z : spinor_weights) w.push_back({z.real(), z.imag()});
    j["packet"] = {{"center", packet_center},     {"width", packet_width},
                   {"momentum", packet_momentum}, {"t_center", packet_t_center},
                   {"t_width", packet_t_width},   {"t_momentum", packet_t_momentum},
                   {"spinor_weights", w}};
    j["potential"] = potential_to_json(potential);
    json ds = json::array();
    for (const auto& d : detectors) ds.push_back(detector_to_json(d));
    j["detectors"] = ds;
    if (std::isinf(mass))
        j["mass"] = "inf";
    else
        j["mass"] = mass;
    j["dirac_mass"] = dirac_mass;
    if (evolution_mass) j["evolution_mass"] = *evolution_mass;
    j["charge"] = charge;
    j["dt"] = dt;
    j["horizon"] = horizon;
    j["ensemble"] = ensemble;
    j["seed"] = seed;
    j["threads"] = threads;
    j["backend"] = backend == Backend::Spectral ? "spectral" : "fd";
    j["sample_times"] = sample_times;
    j["selection_weighting"] = weighting == RelWeighting::Rate ? "rate" : "linear";
    j["histogram_bins"] = histogram_bins;
    j["out_dir"] = out_dir;
    return j;
}

NonrelConfig ExperimentConfig::nonrel_config() const {
    NonrelConfig c;
    c.grid = grid;
    c.packet_center = packet_center;
    c.packet_width = packet_width;
    c.packet_momentum = packet_momentum;
    c.potential = potential;
    c.detectors = detectors;
    c.mass = mass;
    c.dt = dt;
    c.horizon = horizon;
    c.sample_times = sample_times;
    return c;
}

RelConfig ExperimentConfig::rel_config() const {
    RelConfig c;
    c.grid = Grid2D(grid, time_grid);
    c.dirac_mass = dirac_mass;
    c.evolution_mass = evolution_mass_value();
    c.charge = charge;
    c.packet.x_center = packet_center;
    c.packet.x_width = packet_width;
    c.packet.x_momentum = packet_momentum;
    c.packet.t_center = packet_t_center;
    c.packet.t_width = packet_t_width;
    c.packet.t_momentum = packet_t_momentum;
    c.packet.weights = spinor_weights;
    c.detectors = detectors;
    c.dtau = dt;
    c.horizon = horizon;
    c.weighting = weighting;
    return c;
}

PropertimeComparisonConfig ExperimentConfig::propertime_config() const {
    PropertimeComparisonConfig c;
    c.grid = Grid2D(grid, time_grid);
    c.packet_center = packet_center;
    c.packet_width = packet_width;
    c.packet_momentum = packet_momentum;
    c.phi_center = packet_t_center;
    c.phi_width = packet_t_width;
    c.detectors = detectors;
    c.potential = potential;
    c.mass = mass;
    c.dt = dt;
    c.horizon = horizon;
    c.n_samples = ensemble;
    c.seed = seed;
    return c;
}

ExperimentConfig config_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error({std::string("parse error: ") + e.what()});
    }
    return config_from_json(j);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error({"cannot open config file: " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_text(ss.str());
}

std::string config_hash(const ExperimentConfig& cfg) {
    json j = cfg.to_json();
    j.erase("seed");
    j.erase("threads");
    j.erase("out_dir");
    const std::string s = j.dump();
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace pdpsim
