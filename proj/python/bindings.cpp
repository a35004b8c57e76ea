// Python bindings: graphs, exact search, greedy, bounds, MIP emission, bench.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <variant>

#include "qbc/bench.hpp"
#include "qbc/bounds.hpp"
#include "qbc/error.hpp"
#include "qbc/exact.hpp"
#include "qbc/greedy.hpp"
#include "qbc/io.hpp"
#include "qbc/mip.hpp"
#include "qbc/quasidef.hpp"

namespace py = pybind11;
using namespace qbc;

namespace {

// Thresholds arrive as floats (0.6), ints (1) or strings ("3/5"); floats go
// through their shortest decimal form so 0.6 means exactly 3/5.
using Threshold = std::variant<std::int64_t, double, std::string>;

Rational to_rational(const Threshold& t) {
  if (auto i = std::get_if<std::int64_t>(&t)) return Rational(*i);
  if (auto d = std::get_if<double>(&t)) return Rational::from_double(*d);
  return Rational::parse(std::get<std::string>(t));
}

std::optional<SizeBounds> to_bounds(const std::optional<std::array<std::int64_t, 4>>& b) {
  if (!b) return std::nullopt;
  return SizeBounds{(*b)[0], (*b)[1], (*b)[2], (*b)[3]};
}

py::dict selection_dict(const Selection& s) {
  py::dict d;
  d["u"] = s.u;
  d["v"] = s.v;
  d["edges"] = s.edges;
  d["size"] = s.size();
  d["density"] = s.has_density() ? py::object(py::float_(s.density().to_double())) : py::object(py::none());
  return d;
}

}  // namespace

PYBIND11_MODULE(_qbc, m) {
  m.doc() = "Maximum quasi-biclique search";

  auto base = py::register_exception<Error>(m, "QbcError", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base);

  py::class_<BipartiteGraph>(m, "Graph")
      .def(py::init([](std::size_t nu, std::size_t nv, const std::vector<Edge>& edges) {
             return BipartiteGraph(nu, nv, edges);
           }),
           py::arg("u_count"), py::arg("v_count"), py::arg("edges"))
      .def_property_readonly("u_count", &BipartiteGraph::u_count)
      .def_property_readonly("v_count", &BipartiteGraph::v_count)
      .def_property_readonly("edge_count", &BipartiteGraph::edge_count)
      .def("edges", &BipartiteGraph::edges)
      .def("has_edge", &BipartiteGraph::has_edge)
      .def("density", [](const BipartiteGraph& g) { return density(g).to_double(); })
      .def("u_labels", [](const BipartiteGraph& g) { return g.labels(Side::U); })
      .def("v_labels", [](const BipartiteGraph& g) { return g.labels(Side::V); })
      .def("transposed", &BipartiteGraph::transposed)
      .def("__repr__", [](const BipartiteGraph& g) {
        return "Graph(" + std::to_string(g.u_count()) + "x" + std::to_string(g.v_count()) + ", " +
               std::to_string(g.edge_count()) + " edges)";
      });

  m.def(
      "load_graph",
      [](const std::filesystem::path& path, const std::string& format) {
        return load_graph(path, parse_graph_format(format));
      },
      py::arg("path"), py::arg("format") = "auto");

  m.def(
      "solve",
      [](const BipartiteGraph& g, const Threshold& gamma, const std::string& objective, std::size_t pool,
         const std::optional<std::array<std::int64_t, 4>>& bounds, const std::optional<Threshold>& theta,
         const std::string& method, std::size_t threads, std::optional<double> time_limit) {
        SearchParams p;
        p.gamma = to_rational(gamma);
        p.objective = parse_objective(objective);
        p.pool_limit = pool == 0 ? kUnlimitedPool : pool;
        p.size_bounds = to_bounds(bounds);
        if (theta) p.theta = to_rational(*theta);
        p.threads = threads;
        p.time_limit_seconds = time_limit;
        const Method mt = parse_method(method);
        SolutionPool res;
        {
          py::gil_scoped_release release;
          res = solve(g, p, mt);
        }
        py::dict d;
        d["infeasible"] = res.infeasible;
        d["certified"] = res.certified;
        d["truncated"] = res.truncated;
        d["optimum"] = res.optimum ? py::object(py::float_(res.optimum->to_double())) : py::object(py::none());
        d["optimum_exact"] = res.optimum ? py::object(py::str(res.optimum->value().to_string())) : py::object(py::none());
        d["bound"] = res.bound_at_termination;
        py::list sols;
        for (const auto& s : res.solutions) sols.append(selection_dict(s.selection));
        d["solutions"] = sols;
        return d;
      },
      py::arg("graph"), py::arg("gamma"), py::arg("objective") = "size", py::arg("pool") = 1,
      py::arg("bounds") = py::none(), py::arg("theta") = py::none(), py::arg("method") = "bb", py::arg("threads") = 1,
      py::arg("time_limit") = py::none());

  m.def(
      "greedy",
      [](const BipartiteGraph& g, const Threshold& delta, std::optional<std::size_t> tau, bool restricted_degree,
         bool both_sides) {
        const Rational d = to_rational(delta);
        GreedyOptions opt{restricted_degree, both_sides};
        GreedySolution s = tau ? greedy_quasi_biclique(g, d, *tau, opt) : greedy_tau_sweep(g, d, opt);
        py::dict out = selection_dict(s.selection);
        out["tau"] = s.trace.tau;
        out["delta_valid"] = s.delta_valid;
        out["gamma_valid"] = s.gamma_valid;
        return out;
      },
      py::arg("graph"), py::arg("delta"), py::arg("tau") = py::none(), py::arg("restricted_degree") = false,
      py::arg("both_sides") = false);

  m.def(
      "is_quasi_biclique",
      [](const BipartiteGraph& g, const std::vector<std::size_t>& u, const std::vector<std::size_t>& v,
         const std::optional<Threshold>& gamma, const std::optional<Threshold>& delta,
         std::optional<std::int64_t> epsilon) {
        const Selection s = induced_stats(g, u, v);
        if (!!gamma + !!delta + !!epsilon != 1) throw ArgumentError("pass exactly one of gamma, delta, epsilon");
        if (gamma) return is_gamma_quasi_biclique(g, s, to_rational(*gamma));
        if (delta) return is_delta_quasi_biclique(g, s, to_rational(*delta));
        return is_epsilon_quasi_biclique(g, s, *epsilon);
      },
      py::arg("graph"), py::arg("u"), py::arg("v"), py::arg("gamma") = py::none(), py::arg("delta") = py::none(),
      py::arg("epsilon") = py::none());

  m.def("quasi_clique_upper_bound", &quasi_clique_upper_bound, py::arg("m"), py::arg("gamma"));
  m.def("balanced_biclique_upper_bound", &balanced_biclique_upper_bound, py::arg("m"), py::arg("gamma"));
  m.def("near_balanced_upper_bound", &near_balanced_upper_bound, py::arg("m"), py::arg("gamma"), py::arg("theta"));
  m.def(
      "edge_count_bounds",
      [](const BipartiteGraph& g, const Threshold& gamma, const std::optional<std::array<std::int64_t, 4>>& bounds) {
        auto b = to_bounds(bounds).value_or(SizeBounds::unconstrained(g));
        EdgeRange r = edge_count_bounds(g, to_rational(gamma), b);
        return std::make_pair(r.k_min, r.k_max);
      },
      py::arg("graph"), py::arg("gamma"), py::arg("bounds") = py::none());

  m.def(
      "emit_lp",
      [](const BipartiteGraph& g, const Threshold& gamma, const std::string& model,
         const std::optional<std::array<std::int64_t, 4>>& bounds, const std::optional<Threshold>& theta) {
        const Rational gr = to_rational(gamma);
        const SizeBounds b = to_bounds(bounds).value_or(SizeBounds::unconstrained(g));
        MipInstance mip;
        if (model == "1") {
          mip = build_model1(g, gr, b, Model1Form::Bilinear);
        } else if (model == "1lin") {
          mip = build_model1(g, gr, b, Model1Form::Linearized);
        } else if (model == "2") {
          mip = build_model2(g, gr, b);
        } else {
          throw ArgumentError("model must be 1, 1lin or 2");
        }
        if (theta) add_balance_constraints(mip, to_rational(*theta));
        return emit_lp(mip, {!mip.is_linear()});
      },
      py::arg("graph"), py::arg("gamma"), py::arg("model") = "1lin", py::arg("bounds") = py::none(),
      py::arg("theta") = py::none());

  m.def(
      "run_bench",
      [](const std::filesystem::path& config) {
        BenchConfig cfg = BenchConfig::load(config);
        SuiteResult res;
        {
          py::gil_scoped_release release;
          res = run_suite(cfg);
        }
        py::list rows;
        for (const auto& r : res.rows) {
          py::dict d;
          d["dataset"] = r.dataset;
          d["method"] = r.method;
          d["gamma"] = r.gamma.to_double();
          d["time_ms"] = r.time_ms;
          d["count"] = r.count;
          d["size_u"] = r.size_u;
          d["size_v"] = r.size_v;
          d["total"] = r.total;
          d["objective"] = r.objective;
          d["certified"] = r.certified;
          rows.append(d);
        }
        return py::make_tuple(rows, write_csv(res.rows));
      },
      py::arg("config"));
}
