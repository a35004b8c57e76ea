// qbc: command-line front end for the quasi-biclique library.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbc/bench.hpp"
#include "qbc/bounds.hpp"
#include "qbc/exact.hpp"
#include "qbc/greedy.hpp"
#include "qbc/io.hpp"
#include "qbc/mip.hpp"
#include "qbc/quasidef.hpp"

using namespace qbc;
using nlohmann::ordered_json;

namespace {

struct GraphArgs {
  std::string input;
  std::string format = "auto";

  void add(CLI::App* app) {
    app->add_option("--input,-i", input, "graph file (edge list or Pajek two-mode)")->required();
    app->add_option("--format", format, "auto, edgelist or pajek");
  }
  BipartiteGraph load() const { return load_graph(input, parse_graph_format(format)); }
};

struct BoundArgs {
  std::string bounds;
  std::optional<std::int64_t> min_u, max_u, min_v, max_v;

  void add(CLI::App* app) {
    app->add_option("--bounds", bounds, "min_u,max_u,min_v,max_v");
    app->add_option("--min-u", min_u);
    app->add_option("--max-u", max_u);
    app->add_option("--min-v", min_v);
    app->add_option("--max-v", max_v);
  }
  SizeBounds resolve(const BipartiteGraph& g) const {
    SizeBounds b = bounds.empty() ? SizeBounds::unconstrained(g) : SizeBounds::parse(bounds);
    if (min_u) b.min_u = *min_u;
    if (max_u) b.max_u = *max_u;
    if (min_v) b.min_v = *min_v;
    if (max_v) b.max_v = *max_v;
    b.validate(g);
    return b;
  }
  bool given() const { return !bounds.empty() || min_u || max_u || min_v || max_v; }
};

std::vector<std::string> names(const BipartiteGraph& g, Side s, const std::vector<std::size_t>& xs) {
  std::vector<std::string> out;
  for (auto x : xs) out.push_back(g.label(s, x));
  return out;
}

std::string join(const std::vector<std::string>& xs, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ArgumentError("bad vertex index '" + item + "'");
    }
  }
  return out;
}

ordered_json selection_json(const BipartiteGraph& g, const Selection& s) {
  ordered_json j;
  j["size_u"] = s.u.size();
  j["size_v"] = s.v.size();
  j["edges"] = s.edges;
  j["density"] = s.has_density() ? s.density().to_string() : "undefined";
  j["u"] = names(g, Side::U, s.u);
  j["v"] = names(g, Side::V, s.v);
  return j;
}

std::string dbl(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw ArgumentError("cannot write " + path);
}

// ---- solve ----

struct SolveCmd {
  GraphArgs graph;
  BoundArgs bounds;
  std::string objective = "size", method = "bb", gamma, theta;
  std::size_t pool = 1, threads = 1;
  std::optional<double> time_limit;
  bool json = false, tsv = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("solve", "exact maximum quasi-biclique");
    graph.add(app);
    bounds.add(app);
    app->add_option("--objective", objective, "size or quality");
    app->add_option("--gamma,-g", gamma, "density threshold, e.g. 0.6 or 3/5")->required();
    app->add_option("--theta", theta, "near-balance slack");
    app->add_option("--pool", pool, "optimal selections to keep (0 = all)");
    app->add_option("--time-limit", time_limit, "seconds");
    app->add_option("--method", method, "bb or oracle");
    app->add_option("--threads", threads, "branch-and-bound workers");
    auto* j = app->add_flag("--json", json);
    app->add_flag("--tsv", tsv)->excludes(j);
    app->callback([this] { run(); });
  }

  void run() {
    auto g = graph.load();
    SearchParams p;
    p.gamma = Rational::parse(gamma);
    p.objective = parse_objective(objective);
    if (bounds.given()) p.size_bounds = bounds.resolve(g);
    if (!theta.empty()) p.theta = Rational::parse(theta);
    p.pool_limit = pool == 0 ? kUnlimitedPool : pool;
    p.time_limit_seconds = time_limit;
    p.threads = threads;
    const auto start = std::chrono::steady_clock::now();
    SolutionPool res = solve(g, p, parse_method(method));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (json) {
      ordered_json j;
      j["gamma"] = p.gamma.to_string();
      j["objective"] = objective;
      j["method"] = method;
      j["bounds"] = p.bounds_for(g).to_string();
      if (p.theta) j["theta"] = p.theta->to_string();
      j["infeasible"] = res.infeasible;
      j["certified"] = res.certified;
      j["truncated"] = res.truncated;
      j["optimum"] = res.optimum ? ordered_json(res.optimum->to_string()) : ordered_json(nullptr);
      j["bound_at_termination"] = res.bound_at_termination;
      j["solutions"] = ordered_json::array();
      for (const auto& s : res.solutions) j["solutions"].push_back(selection_json(g, s.selection));
      std::cout << j.dump(2) << "\n";
      return;
    }
    if (tsv) {
      std::cout << "rank\tsize_u\tsize_v\tedges\tdensity\tobjective\tcertified\tu\tv\n";
      std::size_t rank = 0;
      for (const auto& s : res.solutions) {
        std::cout << ++rank << "\t" << s.selection.u.size() << "\t" << s.selection.v.size() << "\t" << s.selection.edges
                  << "\t" << s.selection.density().to_decimal_string() << "\t" << s.objective.to_string() << "\t"
                  << (res.certified ? "true" : "false") << "\t" << join(names(g, Side::U, s.selection.u)) << "\t"
                  << join(names(g, Side::V, s.selection.v)) << "\n";
      }
      return;
    }
    if (res.infeasible) {
      std::cout << "infeasible: no " << gamma << "-quasi-biclique within " << p.bounds_for(g).to_string() << "\n";
      return;
    }
    std::cout << "optimum " << (res.optimum ? res.optimum->to_string() : "none") << " (" << objective << ")"
              << (res.certified ? ", certified" : ", not certified, bound " + dbl(res.bound_at_termination)) << ", "
              << res.solutions.size() << (res.truncated ? "+" : "") << " solution(s), " << dbl(ms) << " ms\n";
    std::size_t rank = 0;
    for (const auto& s : res.solutions) {
      std::cout << "#" << ++rank << " (" << s.selection.u.size() << "," << s.selection.v.size()
                << ") edges " << s.selection.edges << " density " << s.selection.density().to_string() << "\n";
      std::cout << "  U: " << join(names(g, Side::U, s.selection.u), ", ") << "\n";
      std::cout << "  V: " << join(names(g, Side::V, s.selection.v), ", ") << "\n";
    }
  }
};

// ---- greedy ----

struct GreedyCmd {
  GraphArgs graph;
  std::string delta, gamma;
  std::optional<std::size_t> tau;
  bool sweep = false, restricted = false, both = false, json = false, trace = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("greedy", "two-phase greedy heuristic (delta-quasi-biclique)");
    graph.add(app);
    auto* d = app->add_option("--delta,-d", delta, "per-vertex slack in [0, 1/2]");
    app->add_option("--gamma,-g", gamma, "use delta = 1 - gamma")->excludes(d);
    auto* t = app->add_option("--tau,-t", tau, "U-side size after the build phase (default: min U-degree)");
    app->add_flag("--sweep", sweep, "best result over every tau")->excludes(t);
    app->add_flag("--restricted-degree", restricted, "rank by degree into the current selection");
    app->add_flag("--both-sides", both, "also run with U and V swapped");
    app->add_flag("--trace", trace, "print the step trace");
    app->add_flag("--json", json);
    app->callback([this] { run(); });
  }

  void run() {
    auto g = graph.load();
    if (delta.empty() && gamma.empty()) throw ArgumentError("greedy needs --delta or --gamma");
    const Rational d = delta.empty() ? Rational(1) - Rational::parse(gamma) : Rational::parse(delta);
    GreedyOptions opt{restricted, both};
    GreedySolution s = sweep ? greedy_tau_sweep(g, d, opt) : greedy_quasi_biclique(g, d, tau.value_or(default_tau(g)), opt);
    if (json) {
      ordered_json j = selection_json(g, s.selection);
      j["delta"] = d.to_string();
      j["tau"] = s.trace.tau;
      j["delta_valid"] = s.delta_valid;
      j["gamma_valid"] = s.gamma_valid;
      j["transposed"] = s.trace.transposed;
      std::cout << j.dump(2) << "\n";
      return;
    }
    std::cout << "greedy delta " << d.to_string() << " tau " << s.trace.tau << (s.trace.transposed ? " (transposed)" : "")
              << ": (" << s.selection.u.size() << "," << s.selection.v.size() << ") size " << s.size << " density "
              << s.density.to_string() << (s.delta_valid ? ", delta-valid" : ", INVALID") << "\n";
    std::cout << "  U: " << join(names(g, Side::U, s.selection.u), ", ") << "\n";
    std::cout << "  V: " << join(names(g, Side::V, s.selection.v), ", ") << "\n";
    if (trace) {
      const char* phase[] = {"build", "repair", "augment"};
      for (const auto& st : s.trace.steps) {
        std::cout << "  " << phase[static_cast<int>(st.phase)] << (st.added ? " +" : " -")
                  << (st.side == Side::U ? "u" : "v") << st.vertex;
        if (!st.pruned.empty()) {
          std::vector<std::string> p;
          for (auto v : st.pruned) p.push_back(std::to_string(v));
          std::cout << " pruned v{" << join(p) << "}";
        }
        std::cout << "\n";
      }
    }
  }
};

// ---- bounds ----

struct BoundsCmd {
  std::string input, format = "auto", gamma, theta;
  std::optional<std::int64_t> edges;
  BoundArgs bounds;
  bool degree_bounds = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("bounds", "size and edge-count bounds");
    auto* in = app->add_option("--input,-i", input, "graph file");
    app->add_option("--edges,-m", edges, "edge count instead of a graph")->excludes(in);
    app->add_option("--format", format);
    app->add_option("--gamma,-g", gamma)->required();
    app->add_option("--theta", theta);
    bounds.add(app);
    app->add_flag("--degree-bounds", degree_bounds, "also report the degree-sum edge floor");
    app->callback([this] { run(); });
  }

  void run() {
    if (input.empty() && !edges) throw ArgumentError("bounds needs --input or --edges");
    const Rational gr = Rational::parse(gamma);
    check_gamma(gr);
    std::optional<BipartiteGraph> g;
    if (!input.empty()) g = load_graph(input, parse_graph_format(format));
    const std::int64_t m = g ? g->edge_count() : *edges;
    const double gd = gr.to_double();
    std::cout << "edges " << m << ", gamma " << gr.to_string() << "\n";
    const double qc = quasi_clique_upper_bound(m, gd), bal = balanced_biclique_upper_bound(m, gd);
    std::cout << "quasi-clique size bound      " << dbl(qc) << " -> " << floor_bound(qc) << "\n";
    std::cout << "balanced biclique size bound " << dbl(bal) << " -> " << floor_bound(bal) << "\n";
    if (!theta.empty()) {
      const Rational t = Rational::parse(theta);
      check_theta(t);
      const double nb = near_balanced_upper_bound(m, gd, t.to_double());
      std::cout << "near-balanced bound (theta " << t.to_string() << ") " << dbl(nb) << " -> " << floor_bound(nb) << "\n";
    }
    if (g) {
      const SizeBounds b = bounds.resolve(*g);
      EdgeRange k = edge_count_bounds(*g, gr, b);
      std::cout << "size bounds " << b.to_string() << "\n";
      std::cout << "edge-count range [" << k.k_min << ", " << k.k_max << "]" << (k.feasible() ? "" : " (empty)") << "\n";
      if (degree_bounds) {
        EdgeRange kd = edge_count_bounds(*g, gr, b, true);
        std::cout << "with degree-sum floor [" << kd.k_min << ", " << kd.k_max << "] (heuristic, can exclude optima)\n";
      }
    }
  }
};

// ---- emit / verify ----

struct ModelArgs {
  GraphArgs graph;
  BoundArgs bounds;
  std::string model = "1lin", gamma, theta;
  bool unweighted_density = false, indicator_balance = false, no_tighten = false;

  void add(CLI::App* app) {
    graph.add(app);
    bounds.add(app);
    app->add_option("--model", model, "1 (bilinear), 1lin, 2 or 2bil");
    app->add_option("--gamma,-g", gamma)->required();
    app->add_option("--theta", theta, "add near-balance rows");
    app->add_flag("--unweighted-density", unweighted_density, "model 2 density row on sum w_k without k weights");
    app->add_flag("--indicator-balance", indicator_balance, "balance rows on the z indicator sums");
    app->add_flag("--no-tighten-k", no_tighten, "model 2 with w_k for k = 1..|E|");
  }

  MipInstance build(const BipartiteGraph& g) const {
    const Rational gr = Rational::parse(gamma);
    const SizeBounds b = bounds.resolve(g);
    MipInstance mip;
    if (model == "1") {
      mip = build_model1(g, gr, b, Model1Form::Bilinear);
    } else if (model == "1lin") {
      mip = build_model1(g, gr, b, Model1Form::Linearized);
    } else if (model == "2" || model == "2bil") {
      mip = build_model2(g, gr, b, {model == "2bil", !no_tighten, unweighted_density});
    } else {
      throw ArgumentError("model must be 1, 1lin, 2 or 2bil");
    }
    if (!theta.empty()) add_balance_constraints(mip, Rational::parse(theta), indicator_balance);
    return mip;
  }
};

struct EmitCmd {
  ModelArgs args;
  std::string out;
  bool quadratic = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("emit", "write a MIP model as CPLEX LP text");
    args.add(app);
    app->add_option("--out,-o", out, "output file (default stdout)");
    app->add_flag("--quadratic", quadratic, "allow bilinear rows ([ ... ] section)");
    app->callback([this] { run(); });
  }

  void run() {
    auto g = args.graph.load();
    auto mip = args.build(g);
    write_text(out, emit_lp(mip, {quadratic}));
    if (!out.empty() && out != "-") {
      std::cerr << to_string(mip.metadata.model) << ": " << mip.variables().size() << " variables ("
                << mip.count(VarKind::Binary) << " binary), " << mip.constraints().size() << " constraints\n";
    }
  }
};

struct VerifyCmd {
  ModelArgs args;
  std::string solution, lp;
  bool run_solver = false;
  std::string solver_cmd, config;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("verify", "check a solver's solution against the model and the graph");
    args.add(app);
    auto* s = app->add_option("--solution,-s", solution, "solution file (`objective v`, `name value` lines)");
    app->add_option("--lp", lp, "read the model from this LP file instead of rebuilding it");
    app->add_flag("--run", run_solver, "run the configured external solver first")->excludes(s);
    app->add_option("--solver-cmd", solver_cmd, "command template with {lp} and {sol}");
    app->add_option("--config", config, "TOML file with solver_cmd");
    app->callback([this] { run(); });
  }

  void run() {
    auto g = args.graph.load();
    MipInstance mip = lp.empty() ? args.build(g) : parse_lp(slurp(lp));
    Assignment a;
    if (run_solver) {
      std::optional<std::string> cmd = solver_cmd.empty() ? std::nullopt : std::optional(solver_cmd);
      if (!cmd) cmd = resolve_solver_command(config.empty() ? std::nullopt : std::optional<std::filesystem::path>(config));
      if (!cmd) throw ArgumentError("no solver command: pass --solver-cmd, set QBC_SOLVER_CMD or solver_cmd in --config");
      a = run_external_solver(mip, *cmd, {!mip.is_linear()});
    } else {
      if (solution.empty()) throw ArgumentError("verify needs --solution or --run");
      a = parse_solution(slurp(solution));
      normalize_assignment(mip, a);
    }
    if (a.infeasible()) {
      std::cout << "solver status infeasible\n";
      return;
    }
    const Rational gr = Rational::parse(args.gamma);
    Selection s = verify_assignment(g, mip, a, gr);
    std::cout << "verified: (" << s.u.size() << "," << s.v.size() << ") edges " << s.edges << " density "
              << s.density().to_string() << ", objective " << dbl(objective_value(mip, a.values)) << "\n";
    std::cout << "  U: " << join(names(g, Side::U, s.u), ", ") << "\n";
    std::cout << "  V: " << join(names(g, Side::V, s.v), ", ") << "\n";
  }
};

// ---- check ----

struct CheckCmd {
  GraphArgs graph;
  std::string u, v, gamma, delta;
  std::optional<std::int64_t> epsilon;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("check", "test a selection against the quasi-biclique definitions");
    graph.add(app);
    app->add_option("--u", u, "comma-separated U indices")->required();
    app->add_option("--v", v, "comma-separated V indices")->required();
    app->add_option("--gamma,-g", gamma);
    app->add_option("--delta,-d", delta);
    app->add_option("--epsilon,-e", epsilon);
    app->callback([this] { run(); });
  }

  void run() {
    auto g = graph.load();
    Selection s = induced_stats(g, parse_indices(u), parse_indices(v));
    std::cout << "selection (" << s.u.size() << "," << s.v.size() << ") edges " << s.edges << " density "
              << (s.has_density() ? s.density().to_string() : "undefined") << "\n";
    bool ok = true;
    if (!gamma.empty()) {
      bool r = is_gamma_quasi_biclique(g, s, Rational::parse(gamma));
      ok = ok && r;
      std::cout << "gamma " << gamma << ": " << (r ? "yes" : "no") << "\n";
    }
    if (!delta.empty()) {
      bool r = is_delta_quasi_biclique(g, s, Rational::parse(delta));
      ok = ok && r;
      std::cout << "delta " << delta << ": " << (r ? "yes" : "no") << "\n";
    }
    if (epsilon) {
      bool r = is_epsilon_quasi_biclique(g, s, *epsilon);
      ok = ok && r;
      std::cout << "epsilon " << *epsilon << ": " << (r ? "yes" : "no") << "\n";
    }
    if (!ok) throw CLI::RuntimeError(3);
  }
};

// ---- bench ----

struct BenchCmd {
  std::string config, out, report;
  bool compare = true;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("bench", "run a benchmark suite from a TOML config");
    app->add_option("--config,-c", config)->required();
    app->add_option("--out,-o", out, "CSV output (default stdout)");
    app->add_option("--report,-r", report, "Markdown report");
    app->add_flag("!--no-compare", compare, "skip the reference comparison in the report");
    app->callback([this] { run(); });
  }

  void run() {
    BenchConfig cfg = BenchConfig::load(config);
    if (auto env = std::getenv("QBC_SOLVER_CMD"); env && *env) cfg.solver_cmd = env;
    SuiteResult res = run_suite(cfg);
    write_text(out, write_csv(res.rows));
    if (!report.empty()) {
      std::vector<Annotation> ann = compare ? reference_comparison(cfg, res) : std::vector<Annotation>{};
      write_text(report, render_markdown(cfg, res, ann));
    }
    std::size_t errors = 0;
    for (const auto& r : res.rows) errors += r.objective == "error";
    if (errors) std::cerr << errors << " cell(s) failed; see the objective column and the report\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum quasi-biclique search"};
  app.require_subcommand(1);
  SolveCmd solve_cmd;
  GreedyCmd greedy_cmd;
  BoundsCmd bounds_cmd;
  EmitCmd emit_cmd;
  VerifyCmd verify_cmd;
  CheckCmd check_cmd;
  BenchCmd bench_cmd;
  solve_cmd.add(app);
  greedy_cmd.add(app);
  bounds_cmd.add(app);
  emit_cmd.add(app);
  verify_cmd.add(app);
  check_cmd.add(app);
  bench_cmd.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
