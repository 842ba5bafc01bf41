#include "trotherm/config.hpp"
#include "trotherm/estimators.hpp"
#include "trotherm/experiment.hpp"
#include "trotherm/hamiltonian.hpp"
#include "trotherm/hilbert.hpp"
#include "trotherm/imagtime.hpp"
#include "trotherm/oracle.hpp"
#include "trotherm/state_prep.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace trotherm;

namespace {

py::array_t<Complex> amplitudes_of(const StateVector& s) {
    py::array_t<Complex> out(static_cast<py::ssize_t>(s.dim()));
    std::copy(s.amplitudes().begin(), s.amplitudes().end(), out.mutable_data());
    return out;
}

StateVector state_from(py::array_t<Complex, py::array::c_style | py::array::forcecast> amps, double offset) {
    const auto n = static_cast<std::size_t>(amps.size());
    int L = 0;
    while ((std::size_t{1} << L) < n) ++L;
    return StateVector(L, std::vector<Complex>(amps.data(), amps.data() + n), offset);
}

PropagatorConfig propagator(double tolerance, int max_order, double substep_cap) {
    PropagatorConfig cfg{tolerance, max_order, substep_cap};
    cfg.validate();
    return cfg;
}

py::dict row_dict(const SummaryRow& r) {
    py::dict d;
    d["L"] = r.L;
    d["beta"] = r.beta;
    d["init_class"] = r.init_class;
    d["eta"] = r.eta;
    d["eta_sigma"] = r.eta_sigma;
    d["S_ini_mean"] = r.S_ini_mean;
    d["S_ini_sigma"] = r.S_ini_sigma;
    d["energy_weighted"] = r.energy_weighted;
    d["energy_weighted_sigma"] = r.energy_weighted_sigma;
    d["energy_simple"] = r.energy_simple;
    d["energy_simple_sigma"] = r.energy_simple_sigma;
    d["M"] = r.M;
    d["master_seed"] = r.master_seed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Thermal averages from Trotter-scrambled random product states";

    py::register_exception<DegenerateStateError>(m, "DegenerateStateError", PyExc_ValueError);
    py::register_exception<OrderExhaustedError>(m, "OrderExhaustedError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("Heisenberg", ModelKind::Heisenberg)
        .value("XXZStaggered", ModelKind::XXZStaggered)
        .value("TransverseIsing", ModelKind::TransverseIsing)
        .value("MixedIsing", ModelKind::MixedIsing);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init([](ModelKind kind, int L, double J, double delta, double h_stag, double h_x, double h_z) {
                 return ModelSpec{kind, L, J, delta, h_stag, h_x, h_z};
             }),
             py::arg("kind"), py::arg("L"), py::arg("J") = 1.0, py::arg("delta") = 1.0, py::arg("h_stag") = 0.0,
             py::arg("h_x") = 0.0, py::arg("h_z") = 0.0)
        .def_readwrite("kind", &ModelSpec::kind)
        .def_readwrite("L", &ModelSpec::L)
        .def_readwrite("J", &ModelSpec::J)
        .def_readwrite("delta", &ModelSpec::delta)
        .def_readwrite("h_stag", &ModelSpec::h_stag)
        .def_readwrite("h_x", &ModelSpec::h_x)
        .def_readwrite("h_z", &ModelSpec::h_z);

    py::class_<HamiltonianTerms>(m, "HamiltonianTerms")
        .def_readonly("L", &HamiltonianTerms::L)
        .def_property_readonly("num_bonds", [](const HamiltonianTerms& t) { return t.bonds.size(); })
        .def_property_readonly("num_fields", [](const HamiltonianTerms& t) { return t.fields.size(); });

    py::class_<StateVector>(m, "StateVector")
        .def(py::init(&state_from), py::arg("amplitudes"), py::arg("log_norm_offset") = 0.0)
        .def_property_readonly("num_sites", &StateVector::num_sites)
        .def_property_readonly("amplitudes", &amplitudes_of)
        .def_property_readonly("log_norm_offset", &StateVector::log_norm_offset)
        .def("norm", &StateVector::norm);

    m.def("normalize", &normalize);
    m.def("inner", &inner);
    m.def("schmidt_spectrum", [](const StateVector& s, int cut) { return schmidt_spectrum(s, SiteIndex(cut)); },
          py::arg("state"), py::arg("cut_after"));

    m.def("build_hamiltonian", &build_hamiltonian);
    m.def("apply_h", &apply_h);
    m.def("expectation", &expectation);
    m.def("spectral_bound", &spectral_bound);

    m.def("sample_rpps", [](int L, std::uint64_t seed, std::uint64_t index) { return sample_rpps(L, {seed, index}); },
          py::arg("L"), py::arg("master_seed"), py::arg("sample_index"));
    m.def("sample_haar", [](int L, std::uint64_t seed, std::uint64_t index) { return sample_haar(L, {seed, index}); },
          py::arg("L"), py::arg("master_seed"), py::arg("sample_index"));

    py::class_<TrotterCircuit>(m, "TrotterCircuit")
        .def_readonly("L", &TrotterCircuit::L)
        .def_readonly("tau", &TrotterCircuit::tau)
        .def_readonly("n_reps", &TrotterCircuit::n_reps);
    m.def("build_trotter_circuit", &build_trotter_circuit, py::arg("spec"), py::arg("tau"), py::arg("n_reps"));
    m.def("apply_circuit", &apply_circuit);

    m.def(
        "evolve",
        [](const StateVector& s, const HamiltonianTerms& h, double theta, double tol, int order, double cap) {
            py::gil_scoped_release release;
            return evolve(s, h, theta, propagator(tol, order, cap));
        },
        py::arg("state"), py::arg("terms"), py::arg("theta"), py::arg("tolerance") = 1e-12, py::arg("max_order") = 64,
        py::arg("substep_cap") = 1.0);
    m.def(
        "evolve_with_checkpoints",
        [](const StateVector& s, const HamiltonianTerms& h, std::vector<double> grid, const HamiltonianTerms& o) {
            std::vector<std::tuple<double, double, double>> out;
            for (const auto& c : evolve_with_checkpoints(s, h, BetaGrid(std::move(grid)), o))
                out.emplace_back(c.beta, c.log_sq_norm, c.obs_value);
            return out;
        },
        py::arg("state"), py::arg("terms"), py::arg("betas"), py::arg("observable"));

    m.def("weights", [](std::vector<double> log_sq_norms) { return normalized_weights(log_sq_norms); },
          py::arg("log_sq_norms"));
    m.def(
        "efficiency",
        [](std::vector<double> w, int n_resamples, std::uint64_t seed) {
            const auto r = efficiency(w, n_resamples, seed);
            py::dict d;
            d["eta"] = r.eta;
            d["entropy_I"] = r.entropy_I;
            d["M"] = r.M;
            d["bootstrap_sigma"] = r.bootstrap_sigma;
            d["n_resamples"] = r.n_resamples;
            return d;
        },
        py::arg("weights"), py::arg("n_resamples") = 0, py::arg("seed") = 0);
    m.def("entanglement_entropy", &entanglement_entropy);

    m.def(
        "exact_thermal",
        [](const HamiltonianTerms& h, const HamiltonianTerms& o, double beta) { return oracle::exact_thermal(h, o, beta); },
        py::arg("terms_h"), py::arg("terms_o"), py::arg("beta"));

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("M", &RunConfig::M)
        .def_readwrite("master_seed", &RunConfig::master_seed)
        .def_readwrite("n_resamples", &RunConfig::n_resamples)
        .def_readwrite("L_list", &RunConfig::L_list)
        .def_readwrite("beta_grid", &RunConfig::beta_grid)
        .def_readwrite("output_path", &RunConfig::output_path)
        .def_readwrite("threads", &RunConfig::threads)
        .def_readwrite("system", &RunConfig::system)
        .def_property_readonly("sampler_labels",
                               [](const RunConfig& c) {
                                   std::vector<std::string> v;
                                   for (const auto& s : c.samplers) v.push_back(s.label);
                                   return v;
                               })
        .def("validate", &RunConfig::validate)
        .def("to_config_text", &to_config_text)
        .def("to_json", &to_json)
        .def("__eq__", &RunConfig::operator==);
    m.def("preset", [](const std::string& name) { return preset(name); });
    m.def("preset_names", &preset_names);
    m.def("parse_config", [](const std::string& text) { return parse_config(text); });
    m.def("config_from_json", [](const std::string& text) { return config_from_json(text); });
    m.def(
        "run_experiment",
        [](const RunConfig& cfg, const std::string& out_dir) {
            RunResult result;
            {
                py::gil_scoped_release release;
                result = run_experiment(cfg);
                if (!out_dir.empty()) emit_results(result, cfg, out_dir);
            }
            py::list rows;
            for (const auto& r : result.summary) rows.append(row_dict(r));
            return rows;
        },
        py::arg("config"), py::arg("out_dir") = "");
}
