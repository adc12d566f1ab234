#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdpsim/experiment.hpp"
#include "pdpsim/gamma.hpp"
#include "pdpsim/liouville.hpp"
#include "pdpsim/report.hpp"
#include "pdpsim/scenarios.hpp"

namespace py = pybind11;
using namespace pdpsim;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::array_t<cplx> wf_values(const WaveFunction1D& psi) {
    py::array_t<cplx> a(static_cast<py::ssize_t>(psi.amp.size()));
    std::copy(psi.amp.begin(), psi.amp.end(), a.mutable_data());
    return a;
}

void wf_set_values(WaveFunction1D& psi, py::array_t<cplx, py::array::c_style> values) {
    if (values.ndim() != 1 || values.shape(0) != psi.grid.n)
        throw std::invalid_argument("values must be a 1-d array of length grid.n");
    std::copy(values.data(), values.data() + values.shape(0), psi.amp.begin());
}

py::array_t<cplx> scalar_values(const ScalarField2D& f) {
    py::array_t<cplx> a({f.grid.x.n, f.grid.t.n});
    std::copy(f.amp.begin(), f.amp.end(), a.mutable_data());
    return a;
}

py::array_t<cplx> spinor_values(const SpinorField2D& f) {
    py::array_t<cplx> a({f.grid.x.n, f.grid.t.n, 4});
    std::copy(f.amp.begin(), f.amp.end(), a.mutable_data());
    return a;
}

void spinor_set_values(SpinorField2D& f, py::array_t<cplx, py::array::c_style> values) {
    if (values.ndim() != 3 || values.shape(0) != f.grid.x.n || values.shape(1) != f.grid.t.n ||
        values.shape(2) != 4)
        throw std::invalid_argument("values must have shape (n_x, n_t, 4)");
    std::copy(values.data(), values.data() + values.size(), f.amp.begin());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "piecewise-deterministic detector-click simulation engines";

    py::class_<Grid1D>(m, "Grid1D")
        .def(py::init<int, double, double>(), py::arg("n"), py::arg("x_min"), py::arg("x_max"))
        .def_readonly("n", &Grid1D::n)
        .def_readonly("x_min", &Grid1D::x_min)
        .def_readonly("x_max", &Grid1D::x_max)
        .def_property_readonly("dx", &Grid1D::dx)
        .def("points", &Grid1D::points);

    py::class_<Grid2D>(m, "Grid2D")
        .def(py::init<Grid1D, Grid1D>(), py::arg("x"), py::arg("t"))
        .def_readonly("x", &Grid2D::x)
        .def_readonly("t", &Grid2D::t);

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_static("zero", &PotentialSpec::zero)
        .def_static("harmonic", &PotentialSpec::harmonic, py::arg("center"), py::arg("omega"))
        .def_static("barrier", &PotentialSpec::barrier, py::arg("a"), py::arg("b"),
                    py::arg("height"))
        .def_static("tabulated", &PotentialSpec::tabulated, py::arg("values"))
        .def("evaluate", &PotentialSpec::evaluate, py::arg("grid"));

    py::class_<DetectorProfile>(m, "DetectorProfile")
        .def_static("gaussian", &DetectorProfile::gaussian, py::arg("center"), py::arg("width"),
                    py::arg("strength"))
        .def_static("indicator", &DetectorProfile::indicator, py::arg("a"), py::arg("b"),
                    py::arg("strength"))
        .def_static("tabulated", &DetectorProfile::tabulated, py::arg("values"))
        .def_static("constant", &DetectorProfile::constant, py::arg("grid"), py::arg("strength"))
        .def("evaluate", &DetectorProfile::evaluate, py::arg("grid"));

    py::class_<DetectorSpec>(m, "DetectorSpec")
        .def(py::init([](DetectorProfile profile, bool active, bool single_shot,
                         double dead_time) {
                 DetectorSpec d;
                 d.profile = std::move(profile);
                 d.active = active;
                 d.single_shot = single_shot;
                 d.dead_time = dead_time;
                 return d;
             }),
             py::arg("profile"), py::arg("active") = true, py::arg("single_shot") = true,
             py::arg("dead_time") = 0.0)
        .def_readwrite("profile", &DetectorSpec::profile)
        .def_readwrite("active", &DetectorSpec::active)
        .def_readwrite("single_shot", &DetectorSpec::single_shot)
        .def_readwrite("dead_time", &DetectorSpec::dead_time)
        .def_readonly("alpha", &DetectorSpec::alpha);

    py::class_<WaveFunction1D>(m, "WaveFunction1D")
        .def(py::init<Grid1D>(), py::arg("grid"))
        .def_readonly("grid", &WaveFunction1D::grid)
        .def_property("values", &wf_values, &wf_set_values)
        .def("norm2", &WaveFunction1D::norm2)
        .def("normalize", [](WaveFunction1D& psi) { psi.normalize(); });

    m.def("gaussian_packet", &gaussian_packet, py::arg("grid"), py::arg("center"),
          py::arg("width"), py::arg("momentum") = 0.0);
    m.def("plane_wave", &plane_wave, py::arg("grid"), py::arg("mode"));
    m.def("l2_inner", &l2_inner, py::arg("phi"), py::arg("psi"));

    py::enum_<Backend>(m, "Backend")
        .value("spectral", Backend::Spectral)
        .value("finite_difference", Backend::FiniteDifference);

    m.def("apply_hamiltonian", &apply_hamiltonian, py::arg("psi"), py::arg("potential"),
          py::arg("mass"), py::arg("backend") = Backend::Spectral);

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<uint64_t, uint64_t>(), py::arg("seed"), py::arg("stream_index"))
        .def("uniform", &RngStream::uniform)
        .def("next_u64", &RngStream::next_u64);

    // --- nonrelativistic engine ---

    py::class_<NonrelParams>(m, "NonrelParams")
        .def(py::init<>())
        .def_readwrite("potential", &NonrelParams::potential)
        .def_readwrite("mass", &NonrelParams::mass)
        .def_readwrite("dt", &NonrelParams::dt);

    py::class_<HybridState1D>(m, "HybridState1D")
        .def(py::init<>())
        .def_readwrite("psi", &HybridState1D::psi)
        .def_readwrite("detectors", &HybridState1D::detectors)
        .def_readwrite("clock", &HybridState1D::clock);

    py::class_<ClickEvent>(m, "ClickEvent")
        .def_readonly("time", &ClickEvent::time)
        .def_readonly("detector_index", &ClickEvent::detector_index)
        .def_readonly("pre_click_norm2", &ClickEvent::pre_click_norm2)
        .def_readonly("post_mean_x", &ClickEvent::post_mean_x)
        .def_readonly("post_std_x", &ClickEvent::post_std_x);

    py::class_<StateSnapshot>(m, "StateSnapshot")
        .def_readonly("time", &StateSnapshot::time)
        .def_readonly("clicks_so_far", &StateSnapshot::clicks_so_far)
        .def_readonly("psi", &StateSnapshot::psi);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("seed", &TrajectoryRecord::seed)
        .def_readonly("stream_index", &TrajectoryRecord::stream_index)
        .def_readonly("events", &TrajectoryRecord::events)
        .def_readonly("no_click", &TrajectoryRecord::no_click)
        .def_readonly("horizon", &TrajectoryRecord::horizon)
        .def_readonly("aborted", &TrajectoryRecord::aborted)
        .def_readonly("snapshots", &TrajectoryRecord::snapshots);

    py::class_<NonrelConfig>(m, "NonrelConfig")
        .def(py::init<>())
        .def_readwrite("grid", &NonrelConfig::grid)
        .def_readwrite("packet_center", &NonrelConfig::packet_center)
        .def_readwrite("packet_width", &NonrelConfig::packet_width)
        .def_readwrite("packet_momentum", &NonrelConfig::packet_momentum)
        .def_readwrite("potential", &NonrelConfig::potential)
        .def_readwrite("detectors", &NonrelConfig::detectors)
        .def_readwrite("mass", &NonrelConfig::mass)
        .def_readwrite("dt", &NonrelConfig::dt)
        .def_readwrite("horizon", &NonrelConfig::horizon)
        .def_readwrite("sample_times", &NonrelConfig::sample_times);

    m.def("evolve_damped", &evolve_damped, py::arg("psi"), py::arg("detectors"),
          py::arg("potential"), py::arg("mass"), py::arg("dt"));
    m.def(
        "find_jump_time",
        [](const HybridState1D& state, const NonrelParams& params, double p, double horizon) {
            const JumpSearchResult r = find_jump_time(state, params, p, horizon);
            return py::make_tuple(r.clicked, r.t1, r.psi);
        },
        py::arg("state"), py::arg("params"), py::arg("p"), py::arg("horizon"));
    m.def("jump", &jump, py::arg("psi"), py::arg("detector"));
    m.def(
        "run_trajectory",
        [](const NonrelConfig& cfg, uint64_t seed, uint64_t stream) {
            return run_trajectory(cfg, RngStream(seed, stream));
        },
        py::arg("config"), py::arg("seed"), py::arg("stream_index") = 0);

    // --- master equation ---

    m.def("dense_hamiltonian_matrix", &dense_hamiltonian_matrix, py::arg("grid"),
          py::arg("potential"), py::arg("mass"), py::arg("backend") = Backend::Spectral);

    py::class_<DensityPair>(m, "DensityPair")
        .def_static("pure", &DensityPair::pure, py::arg("psi"))
        .def_readwrite("rho0", &DensityPair::rho0)
        .def_readwrite("rho1", &DensityPair::rho1)
        .def("trace0", &DensityPair::trace0)
        .def("trace1", &DensityPair::trace1)
        .def("min_eigenvalue", &DensityPair::min_eigenvalue);

    m.def("step_master", &step_master, py::arg("pair"), py::arg("hamiltonian"), py::arg("g"),
          py::arg("dt"));
    m.def(
        "run_master",
        [](const WaveFunction1D& psi0, const Eigen::MatrixXcd& H, const std::vector<double>& g,
           double dt, const std::vector<double>& times) {
            const MasterRun run = run_master(psi0, H, g, dt, times);
            py::list states;
            for (const auto& dp : run.states) states.append(dp);
            return py::make_tuple(states, run.max_trace_drift, run.min_eigenvalue);
        },
        py::arg("psi0"), py::arg("hamiltonian"), py::arg("g"), py::arg("dt"),
        py::arg("sample_times"));
    m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));
    m.def(
        "ensemble_estimate",
        [](const std::vector<TrajectoryRecord>& recs, const std::vector<double>& times) {
            const EnsembleEstimate est = ensemble_estimate(recs, times);
            py::list states;
            for (const auto& dp : est.states) states.append(dp);
            return states;
        },
        py::arg("trajectories"), py::arg("sample_times"));

    // --- proper-time engine ---

    py::class_<ScalarField2D>(m, "ScalarField2D")
        .def(py::init<Grid2D>(), py::arg("grid"))
        .def_static("product", &ScalarField2D::product, py::arg("grid"), py::arg("phi"),
                    py::arg("psi"))
        .def_readonly("grid", &ScalarField2D::grid)
        .def_property_readonly("values", &scalar_values)
        .def("norm2", &ScalarField2D::norm2)
        .def("x_marginal", &ScalarField2D::x_marginal);

    m.def("evolve_proper_time", &evolve_proper_time, py::arg("field"), py::arg("detectors"),
          py::arg("potential"), py::arg("mass"), py::arg("dtau"));
    m.def("factorized_solution", &factorized_solution, py::arg("phi"), py::arg("psi0"),
          py::arg("grid"), py::arg("detectors"), py::arg("potential"), py::arg("mass"),
          py::arg("tau"));
    m.def("phi_wraps", &phi_wraps, py::arg("phi"), py::arg("tau"));

    py::class_<PropertimeComparisonConfig>(m, "PropertimeComparisonConfig")
        .def(py::init<>())
        .def_readwrite("grid", &PropertimeComparisonConfig::grid)
        .def_readwrite("packet_center", &PropertimeComparisonConfig::packet_center)
        .def_readwrite("packet_width", &PropertimeComparisonConfig::packet_width)
        .def_readwrite("packet_momentum", &PropertimeComparisonConfig::packet_momentum)
        .def_readwrite("phi_center", &PropertimeComparisonConfig::phi_center)
        .def_readwrite("phi_width", &PropertimeComparisonConfig::phi_width)
        .def_readwrite("detectors", &PropertimeComparisonConfig::detectors)
        .def_readwrite("potential", &PropertimeComparisonConfig::potential)
        .def_readwrite("mass", &PropertimeComparisonConfig::mass)
        .def_readwrite("dt", &PropertimeComparisonConfig::dt)
        .def_readwrite("horizon", &PropertimeComparisonConfig::horizon)
        .def_readwrite("n_samples", &PropertimeComparisonConfig::n_samples)
        .def_readwrite("seed", &PropertimeComparisonConfig::seed);

    m.def(
        "click_statistics_equivalence",
        [](const PropertimeComparisonConfig& cfg) {
            const PropertimeComparison c = click_statistics_equivalence(cfg);
            py::dict d;
            d["max_intensity_diff"] = c.max_intensity_diff;
            d["ks_distance"] = c.ks_distance;
            d["ks_critical_5pct"] = c.ks_critical_5pct;
            d["n_samples"] = c.n_samples;
            d["no_click_1d"] = c.no_click_1d;
            d["no_click_2d"] = c.no_click_2d;
            return d;
        },
        py::arg("config"));

    // --- relativistic engine ---

    py::class_<SpinorField2D>(m, "SpinorField2D")
        .def(py::init<Grid2D>(), py::arg("grid"))
        .def_readonly("grid", &SpinorField2D::grid)
        .def_property("values", &spinor_values, &spinor_set_values)
        .def("euclid_norm2", &SpinorField2D::euclid_norm2)
        .def("pplus_norm2", &SpinorField2D::pplus_norm2);

    py::class_<SpinorPacketParams>(m, "SpinorPacketParams")
        .def(py::init<>())
        .def_readwrite("x_center", &SpinorPacketParams::x_center)
        .def_readwrite("x_width", &SpinorPacketParams::x_width)
        .def_readwrite("x_momentum", &SpinorPacketParams::x_momentum)
        .def_readwrite("t_center", &SpinorPacketParams::t_center)
        .def_readwrite("t_width", &SpinorPacketParams::t_width)
        .def_readwrite("t_momentum", &SpinorPacketParams::t_momentum)
        .def_readwrite("weights", &SpinorPacketParams::weights);

    m.def("spinor_packet", &spinor_packet, py::arg("grid"), py::arg("params"));
    m.def("indefinite_product", &indefinite_product, py::arg("phi"), py::arg("psi"));

    py::class_<GaugeField>(m, "GaugeField")
        .def(py::init<>())
        .def_readwrite("a0", &GaugeField::a0)
        .def_readwrite("a1", &GaugeField::a1);

    m.def("apply_dirac", &apply_dirac, py::arg("psi"), py::arg("mass"), py::arg("charge") = 0.0,
          py::arg("gauge") = GaugeField{});
    m.def("apply_dirac_squared", &apply_dirac_squared, py::arg("psi"), py::arg("mass"),
          py::arg("evolution_mass"), py::arg("charge") = 0.0, py::arg("gauge") = GaugeField{});
    m.def("apply_dirac_squared_spectral", &apply_dirac_squared_spectral, py::arg("psi"),
          py::arg("mass"), py::arg("evolution_mass"));
    m.def("apply_coupling", &apply_coupling, py::arg("psi"), py::arg("detector"));
    m.def("rel_jump", &rel_jump, py::arg("psi"), py::arg("detector"));
    m.def("rel_selection_weights", &rel_selection_weights, py::arg("psi"), py::arg("detectors"),
          py::arg("weighting"));
    m.def("rel_select_detector", &rel_select_detector, py::arg("psi"), py::arg("detectors"),
          py::arg("weighting"), py::arg("u"));

    py::enum_<RelWeighting>(m, "RelWeighting")
        .value("rate", RelWeighting::Rate)
        .value("linear", RelWeighting::Linear);

    py::class_<RelConfig>(m, "RelConfig")
        .def(py::init<>())
        .def_readwrite("grid", &RelConfig::grid)
        .def_readwrite("dirac_mass", &RelConfig::dirac_mass)
        .def_readwrite("evolution_mass", &RelConfig::evolution_mass)
        .def_readwrite("packet", &RelConfig::packet)
        .def_readwrite("detectors", &RelConfig::detectors)
        .def_readwrite("dtau", &RelConfig::dtau)
        .def_readwrite("horizon", &RelConfig::horizon)
        .def_readwrite("weighting", &RelConfig::weighting);

    py::class_<SpinorField2D::PlusSummary>(m, "PlusSummary")
        .def_readonly("mean_x", &SpinorField2D::PlusSummary::mean_x)
        .def_readonly("std_x", &SpinorField2D::PlusSummary::std_x)
        .def_readonly("mean_t", &SpinorField2D::PlusSummary::mean_t)
        .def_readonly("std_t", &SpinorField2D::PlusSummary::std_t);

    py::class_<RelClickEvent>(m, "RelClickEvent")
        .def_readonly("tau", &RelClickEvent::tau)
        .def_readonly("detector_index", &RelClickEvent::detector_index)
        .def_readonly("pre_click_norm", &RelClickEvent::pre_click_norm)
        .def_readonly("post", &RelClickEvent::post);

    py::class_<RelTrajectoryRecord>(m, "RelTrajectoryRecord")
        .def_readonly("seed", &RelTrajectoryRecord::seed)
        .def_readonly("stream_index", &RelTrajectoryRecord::stream_index)
        .def_readonly("events", &RelTrajectoryRecord::events)
        .def_readonly("no_click", &RelTrajectoryRecord::no_click)
        .def_readonly("horizon", &RelTrajectoryRecord::horizon)
        .def_readonly("aborted", &RelTrajectoryRecord::aborted);

    m.def("evolve_rel_damped", &evolve_rel_damped, py::arg("psi"), py::arg("config"),
          py::arg("dtau"));
    m.def(
        "rel_find_jump_time",
        [](const SpinorField2D& psi0, const RelConfig& cfg, double p) {
            const RelJumpSearchResult r = rel_find_jump_time(psi0, cfg, p);
            return py::make_tuple(r.clicked, r.tau1, r.psi);
        },
        py::arg("psi0"), py::arg("config"), py::arg("p"));
    m.def(
        "run_rel_trajectory",
        [](const RelConfig& cfg, uint64_t seed, uint64_t stream) {
            return run_rel_trajectory(cfg, RngStream(seed, stream));
        },
        py::arg("config"), py::arg("seed"), py::arg("stream_index") = 0);

    // --- harness ---

    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_from_text", &config_from_text, py::arg("text"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def_readwrite("ensemble", &ExperimentConfig::ensemble)
        .def("to_dict", [](const ExperimentConfig& cfg) { return json_to_py(cfg.to_json()); });

    m.def(
        "run_experiment",
        [](const ExperimentConfig& cfg) { return json_to_py(run_experiment(cfg).to_json()); },
        py::arg("config"));
    m.def("merge_report", &merge_report, py::arg("summary_paths"), py::arg("csv_out") = "");

    m.def("list_scenarios", [] {
        py::list out;
        for (const auto& s : scenario_registry()) {
            py::dict d;
            d["name"] = s.name;
            d["criterion"] = s.criterion;
            d["description"] = s.description;
            out.append(d);
        }
        return out;
    });
    m.def(
        "run_scenario",
        [](const std::string& name, const std::string& out_dir, py::object seed, int threads) {
            const Scenario* sc = find_scenario(name);
            if (!sc) throw std::invalid_argument("unknown scenario: " + name);
            ScenarioContext ctx;
            ctx.out_dir = out_dir;
            ctx.threads = threads;
            if (!seed.is_none()) ctx.seed = seed.cast<uint64_t>();
            const ScenarioOutcome o = sc->run(ctx);
            py::dict d;
            d["name"] = o.name;
            d["criterion"] = o.criterion;
            d["gate"] = o.gate;
            d["passed"] = o.passed;
            d["metrics"] = json_to_py(o.metrics);
            d["wall_seconds"] = o.wall_seconds;
            return d;
        },
        py::arg("name"), py::arg("out_dir") = "out", py::arg("seed") = py::none(),
        py::arg("threads") = 0);

    m.attr("__version__") = "0.1.0";
}
