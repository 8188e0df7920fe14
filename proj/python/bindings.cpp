#include "etgossip/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>

namespace py = pybind11;
using namespace etg;

namespace {

std::vector<std::pair<std::size_t, std::size_t>> edge_pairs(const Graph& g) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(g.edge_count());
    for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
    return out;
}

TheoryConstants make_constants(std::size_t n, double lipschitz, double alpha, double beta, double delta, double eta,
                               double f0_gap) {
    return {n, lipschitz, alpha, beta, delta, eta, f0_gap};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Event-triggered gossip SGD simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<TopologyError>(m, "TopologyError", PyExc_ValueError);
    py::register_exception<AssumptionViolation>(m, "AssumptionViolation", PyExc_ValueError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
                 std::vector<Edge> es;
                 for (const auto& [u, v] : edges) es.push_back({u, v});
                 return Graph(n, std::move(es));
             }),
             py::arg("n"), py::arg("edges"))
        .def_property_readonly("n", &Graph::size)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def_property_readonly("edges", &edge_pairs)
        .def_property_readonly("realized_sparsity", &Graph::realized_sparsity)
        .def("neighbors", &Graph::neighbors)
        .def("degree", &Graph::degree);

    py::class_<MixingMatrix>(m, "MixingMatrix")
        .def_property_readonly("weights", &MixingMatrix::weights)
        .def_property_readonly("delta", &MixingMatrix::delta);

    m.def("generate_topology", &generate_topology, py::arg("n"), py::arg("sparsity"), py::arg("seed"));
    m.def("generate_topology_with_edges", &generate_topology_with_edges, py::arg("n"), py::arg("edge_count"),
          py::arg("seed"));
    m.def("metropolis_mixing", &metropolis_mixing, py::arg("graph"));
    m.def("count_full_comm", &count_full_comm, py::arg("graph"), py::arg("rounds"));

    m.def("eta_max", &eta_max, py::arg("lipschitz"), py::arg("delta"), py::arg("n"));
    m.def(
        "stability_constants",
        [](std::size_t n, double lipschitz, double delta, double eta) {
            const auto s = stability_constants(make_constants(n, lipschitz, 0.0, 0.0, delta, eta, 0.0));
            return std::make_pair(s.gamma, s.delta_cap);
        },
        py::arg("n"), py::arg("lipschitz"), py::arg("delta"), py::arg("eta"),
        "Returns (Gamma, Delta).");
    m.def(
        "ergodic_bound_rhs",
        [](std::size_t n, double lipschitz, double alpha, double beta, double delta, double eta, double f0_gap,
           const std::vector<double>& thresholds) {
            return ergodic_bound_rhs(make_constants(n, lipschitz, alpha, beta, delta, eta, f0_gap), thresholds);
        },
        py::arg("n"), py::arg("lipschitz"), py::arg("alpha"), py::arg("beta"), py::arg("delta"), py::arg("eta"),
        py::arg("f0_gap"), py::arg("thresholds"));

    py::class_<MetricsRow>(m, "MetricsRow")
        .def_readonly("rep", &MetricsRow::rep)
        .def_readonly("t", &MetricsRow::t)
        .def_readonly("transmissions_cum", &MetricsRow::transmissions_cum)
        .def_readonly("M_t", &MetricsRow::consensus_energy)
        .def_readonly("grad_norm_sq", &MetricsRow::grad_norm_sq)
        .def_readonly("ebar_norm", &MetricsRow::ebar_norm)
        .def_readonly("tau_t", &MetricsRow::tau_t)
        .def_readonly("f_avg", &MetricsRow::f_avg);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("rows", &ExperimentResult::rows)
        .def_readonly("eta", &ExperimentResult::eta)
        .def_readonly("bound_rhs", &ExperimentResult::bound_rhs)
        .def_property_readonly("total_transmissions",
                               [](const ExperimentResult& r) {
                                   std::vector<std::uint64_t> out;
                                   for (const auto& run : r.runs) out.push_back(run.total_transmissions);
                                   return out;
                               })
        .def_property_readonly("final_f_avg", [](const ExperimentResult& r) {
            std::vector<double> out;
            for (const auto& run : r.runs) out.push_back(run.final_f_avg);
            return out;
        });

    m.def(
        "validate_config", [](const std::string& text) { parse_config(text); }, py::arg("text"),
        "Raises ConfigError listing every problem in the config text.");
    m.def(
        "load_config",
        [](const std::string& path) {
            load_config(path);
            return true;
        },
        py::arg("path"));
    m.def(
        "run_config",
        [](const std::string& text) {
            const auto cfg = parse_config(text);
            py::gil_scoped_release release;
            return run_experiment(cfg);
        },
        py::arg("text"));
    m.def(
        "run_config_file",
        [](const std::string& path) {
            const auto cfg = load_config(path);
            py::gil_scoped_release release;
            return run_experiment(cfg);
        },
        py::arg("path"));
    m.def(
        "emit_csv", [](const ExperimentResult& r, const std::string& path) { emit_csv(r.rows, path); },
        py::arg("result"), py::arg("path"));
}
