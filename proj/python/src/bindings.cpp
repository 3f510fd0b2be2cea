#include "coop_lms/chebyshev.hpp"
#include "coop_lms/errors.hpp"
#include "coop_lms/graph.hpp"
#include "coop_lms/harness.hpp"
#include "coop_lms/lms.hpp"
#include "coop_lms/simnet.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace coop_lms;

namespace {

using linalg::Matrix;
using linalg::Vector;

// (K, N) array, row k = agent k's estimate.
py::array_t<double> state_array(const lms::GlobalState& x) {
    const auto k = static_cast<py::ssize_t>(x.agents());
    const auto n = static_cast<py::ssize_t>(x.dim());
    py::array_t<double> out({k, n});
    std::copy(x.chi().data(), x.chi().data() + k * n, out.mutable_data());
    return out;
}

py::array_t<double> vectors_array(const std::vector<Vector>& rows) {
    const auto k = static_cast<py::ssize_t>(rows.size());
    const auto n = k ? static_cast<py::ssize_t>(rows[0].size()) : 0;
    py::array_t<double> out({k, n});
    double* p = out.mutable_data();
    for (const auto& r : rows) p = std::copy(r.data(), r.data() + n, p);
    return out;
}

// (T+1, K, N) array plus the divergence index.
py::dict trajectory_dict(const lms::Trajectory& tr) {
    const auto t = static_cast<py::ssize_t>(tr.states.size());
    const auto k = t ? static_cast<py::ssize_t>(tr.states[0].agents()) : 0;
    const auto n = t ? static_cast<py::ssize_t>(tr.states[0].dim()) : 0;
    py::array_t<double> states({t, k, n});
    double* p = states.mutable_data();
    for (const auto& s : tr.states) p = std::copy(s.chi().data(), s.chi().data() + k * n, p);
    py::dict d;
    d["states"] = states;
    d["diverged_at"] = tr.diverged_at;
    return d;
}

lms::GlobalState state_from_array(const Matrix& rows) {
    const auto k = static_cast<std::size_t>(rows.rows());
    const auto n = static_cast<std::size_t>(rows.cols());
    Vector chi(rows.size());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) chi.segment(i * rows.cols(), rows.cols()) = rows.row(i).transpose();
    return lms::GlobalState(k, n, std::move(chi));
}

simnet::Variant variant_of(const std::optional<chebyshev::ChebyshevSchedule>& sched) {
    return sched ? simnet::Variant::chebyshev(*sched) : simnet::Variant::plain();
}

py::dict comm_dict(const simnet::CommStats& s) {
    py::dict d;
    d["messages_sent"] = s.messages_sent;
    d["scalars_sent"] = s.scalars_sent;
    d["rounds"] = s.rounds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cooperative LMS over agent networks with Chebyshev relaxation";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("trial"), py::arg("stream"));

    // graph
    py::class_<graph::Graph>(m, "Graph")
        .def(py::init<std::size_t, std::vector<graph::Edge>>(), py::arg("node_count"), py::arg("edges"))
        .def_property_readonly("node_count", &graph::Graph::node_count)
        .def_property_readonly("edge_count", &graph::Graph::edge_count)
        .def_property_readonly("edges", &graph::Graph::edges)
        .def("neighbors", [](const graph::Graph& g, graph::NodeId k) {
            const auto nb = g.neighbors(k);
            return std::vector<graph::NodeId>(nb.begin(), nb.end());
        })
        .def("degree", &graph::Graph::degree)
        .def("has_edge", &graph::Graph::has_edge)
        .def(py::self == py::self)
        .def("__repr__", [](const graph::Graph& g) {
            return "Graph(K=" + std::to_string(g.node_count()) + ", |E|=" + std::to_string(g.edge_count()) + ")";
        });

    m.def("named_graph", py::overload_cast<std::string_view>(&graph::named_graph), py::arg("name"));
    m.def("named_graph_names", [] {
        std::vector<std::string> out;
        for (auto n : graph::all_named_graphs()) out.emplace_back(graph::to_string(n));
        return out;
    });
    m.def(
        "gen_er",
        [](std::size_t k, double p, std::uint64_t seed) {
            Rng rng(seed);
            auto r = graph::gen_er(k, p, rng);
            return py::make_tuple(std::move(r.graph), r.resamples);
        },
        py::arg("nodes"), py::arg("p"), py::arg("seed"), "Connected G(K, p) draw; returns (graph, resamples).");
    m.def(
        "gen_ba",
        [](std::size_t k, std::size_t m_attach, std::uint64_t seed) {
            Rng rng(seed);
            return graph::gen_ba(k, m_attach, rng);
        },
        py::arg("nodes"), py::arg("m_attach"), py::arg("seed"));
    m.def("laplacian", &graph::laplacian);
    m.def("laplacian_lambda_max", &graph::laplacian_lambda_max);
    m.def("is_connected", &graph::is_connected);

    // chebyshev
    py::class_<chebyshev::ChebyshevSchedule>(m, "ChebyshevSchedule")
        .def(py::init<double, double, std::size_t>(), py::arg("a"), py::arg("b"), py::arg("period"))
        .def_property_readonly("a", &chebyshev::ChebyshevSchedule::a)
        .def_property_readonly("b", &chebyshev::ChebyshevSchedule::b)
        .def_property_readonly("period", &chebyshev::ChebyshevSchedule::period)
        .def_property_readonly("factors",
                               [](const chebyshev::ChebyshevSchedule& s) {
                                   const auto f = s.factors();
                                   return std::vector<double>(f.begin(), f.end());
                               })
        .def("factor_at", &chebyshev::ChebyshevSchedule::factor_at);
    m.def("chebyshev_factors", &chebyshev::chebyshev_factors, py::arg("a"), py::arg("b"), py::arg("period"));
    m.def("beta_eval", &chebyshev::beta_eval, py::arg("lam"), py::arg("schedule"));
    m.def("beta_max_abs", &chebyshev::beta_max_abs, py::arg("schedule"), py::arg("lo"), py::arg("hi"),
          py::arg("grid") = 10000);

    // lms
    m.def(
        "step_sizes",
        [](double lam, const std::vector<double>& grams, double eps) {
            const auto s = lms::step_sizes(lam, grams, eps);
            return py::make_tuple(s.eta, s.mu);
        },
        py::arg("lambda_max_laplacian"), py::arg("gram_maxes"), py::arg("epsilon"), "Returns (eta, mu).");

    py::class_<lms::Scenario>(m, "Scenario")
        .def(py::init([](graph::Graph g, std::vector<Matrix> h, std::vector<Vector> y, double eta, double mu,
                         std::optional<Vector> x0, double sigma) {
                 return lms::Scenario(std::move(g), std::move(h), std::move(y), {eta, mu}, x0.value_or(Vector{}),
                                      sigma);
             }),
             py::arg("graph"), py::arg("H"), py::arg("y"), py::arg("eta"), py::arg("mu"), py::arg("x0") = py::none(),
             py::arg("sigma") = 0.0)
        .def_property_readonly("graph", &lms::Scenario::graph)
        .def_property_readonly("agents", &lms::Scenario::agents)
        .def_property_readonly("dim", &lms::Scenario::dim)
        .def_property_readonly("obs_per_agent", &lms::Scenario::obs_per_agent)
        .def_property_readonly("eta", &lms::Scenario::eta)
        .def_property_readonly("mu", &lms::Scenario::mu)
        .def_property_readonly("sigma", &lms::Scenario::sigma)
        .def_property_readonly("x0", &lms::Scenario::x0)
        .def_property_readonly("lambda_max_laplacian", &lms::Scenario::lambda_max_laplacian)
        .def("H", &lms::Scenario::h)
        .def("y", &lms::Scenario::y)
        .def("valid_for_convergence", &lms::Scenario::valid_for_convergence)
        .def("with_steps", [](const lms::Scenario& s, double eta, double mu) { return s.with_steps({eta, mu}); });

    m.def(
        "sample_scenario",
        [](const graph::Graph& g, std::size_t n, std::size_t obs, double sigma, double eps, std::uint64_t seed) {
            Rng rng(seed);
            return lms::sample_scenario(g, n, obs, sigma, eps, rng);
        },
        py::arg("graph"), py::arg("dim"), py::arg("obs"), py::arg("sigma"), py::arg("epsilon"), py::arg("seed"));

    m.def(
        "run_cooperative_lms", [](const lms::Scenario& s, std::size_t l) { return trajectory_dict(lms::run_cooperative_lms(s, l)); },
        py::arg("scenario"), py::arg("iterations"));
    m.def(
        "run_chebyshev_lms",
        [](const lms::Scenario& s, std::size_t l, const chebyshev::ChebyshevSchedule& sched) {
            return trajectory_dict(lms::run_chebyshev_lms(s, l, sched));
        },
        py::arg("scenario"), py::arg("iterations"), py::arg("schedule"));
    m.def(
        "run_global_form", [](const lms::Scenario& s, std::size_t l) { return trajectory_dict(lms::run_global_form(s, l)); },
        py::arg("scenario"), py::arg("iterations"));
    m.def("build_q", [](const lms::Scenario& s) {
        auto q = lms::build_q(s);
        return py::make_tuple(std::move(q.q), std::move(q.consensus), std::move(q.gradient));
    }, "Returns (Q, consensus factor, gradient factor).");
    m.def("q_eigvals", &lms::q_eigvals);
    m.def("fixed_point", [](const lms::Scenario& s) { return state_array(lms::fixed_point(s)); });
    m.def("gradient_factor_lambda_max", &lms::gradient_factor_lambda_max);
    m.def("lms_solution", &lms::lms_solution);
    m.def("noncooperative_solutions", [](const lms::Scenario& s) { return vectors_array(lms::noncooperative_solutions(s)); });
    m.def("noncooperative_ase", &lms::noncooperative_ase);
    m.def(
        "ase", [](const Matrix& states, const Vector& ref) { return lms::ase(state_from_array(states), ref); },
        py::arg("states"), py::arg("reference"), "states: (K, N) array of agent estimates.");

    // simnet
    m.def(
        "run_distributed",
        [](const lms::Scenario& s, std::size_t l, std::optional<chebyshev::ChebyshevSchedule> sched,
           std::optional<std::uint64_t> schedule_seed) {
            simnet::RunOptions opts;
            opts.schedule_seed = schedule_seed;
            const auto r = simnet::run_distributed(s, l, variant_of(sched), opts);
            py::dict d = trajectory_dict(r.trajectory);
            d["final_states"] = vectors_array(r.final_states);
            d["stats"] = comm_dict(r.stats);
            return d;
        },
        py::arg("scenario"), py::arg("iterations"), py::arg("schedule") = py::none(),
        py::arg("schedule_seed") = py::none());
    m.def(
        "messages_to_target_ase",
        [](const lms::Scenario& s, double target, std::optional<chebyshev::ChebyshevSchedule> sched,
           std::size_t max_rounds) -> py::object {
            const auto r = simnet::messages_to_target_ase(s, target, variant_of(sched), max_rounds);
            if (!r) return py::none();
            return comm_dict(*r);
        },
        py::arg("scenario"), py::arg("target"), py::arg("schedule") = py::none(), py::arg("max_rounds") = 1000);

    // harness
    m.def("preset_names", &harness::preset_names);
    m.def("preset_json", [](std::string_view name) { return harness::config_to_json(harness::preset(name)); });
    m.def(
        "run_experiment_json",
        [](std::string_view text, std::optional<std::string> out_dir) {
            const auto cfg = harness::config_from_json(text);
            harness::ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = harness::run_experiment(cfg);
            }
            py::dict curves;
            for (const auto& c : r.curves) {
                py::dict vs;
                for (const auto& v : c.variants) vs[py::str(v.name)] = v.mean;
                curves[py::str(c.graph_label)] = vs;
            }
            py::dict spectra;
            for (const auto& s : r.spectra) spectra[py::str(s.graph_label)] = s.eigenvalues;
            py::dict comm;
            for (const auto& c : r.comm) {
                py::dict rows;
                for (const auto& row : c.rows) {
                    py::dict d = comm_dict(row.total);
                    d["reached"] = row.reached;
                    rows[py::str(row.variant)] = d;
                }
                comm[py::str(c.graph_label)] = rows;
            }
            py::dict out;
            out["curves"] = curves;
            out["q_eigenvalues"] = spectra;
            out["comm"] = comm;
            out["elapsed_seconds"] = r.elapsed_seconds;
            if (out_dir) {
                std::vector<std::string> files;
                for (const auto& p : harness::write_outputs(r, *out_dir)) files.push_back(p.string());
                out["files"] = files;
            }
            return out;
        },
        py::arg("config_json"), py::arg("out_dir") = py::none());
}
