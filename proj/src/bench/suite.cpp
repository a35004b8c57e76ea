#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qbc/bench.hpp"
#include "qbc/error.hpp"
#include "qbc/greedy.hpp"
#include "qbc/mip.hpp"

namespace qbc {
namespace {

struct Cell {
  std::size_t dataset;
  Rational gamma;
  MethodSpec method;
};

void fill_selection(BenchRow& row, const Selection& s) {
  row.size_u = static_cast<std::int64_t>(s.u.size());
  row.size_v = static_cast<std::int64_t>(s.v.size());
  row.total = row.size_u + row.size_v;
}

void run_exact(const BenchConfig& c, const BipartiteGraph& g, const SizeBounds& b, const Cell& cell, BenchRow& row) {
  SearchParams p;
  p.gamma = cell.gamma;
  p.objective = cell.method.objective;
  p.size_bounds = b;
  p.theta = c.theta;
  p.pool_limit = c.pool_limit;
  p.time_limit_seconds = c.time_limit_seconds;
  p.threads = cell.method.method == BenchMethod::BranchAndBound ? c.threads : 1;
  auto pool = solve(g, p, cell.method.method == BenchMethod::Oracle ? Method::Oracle : Method::BranchAndBound);
  row.certified = pool.certified;
  row.count = static_cast<std::int64_t>(pool.solutions.size());
  if (pool.infeasible) {
    row.objective = "infeasible";
    return;
  }
  if (pool.empty()) {
    row.objective = "none";
    row.note = "time limit hit before any feasible selection";
    return;
  }
  fill_selection(row, pool.solutions.front().selection);
  row.objective = pool.optimum->to_string();
  if (pool.truncated) row.note = "pool truncated at " + std::to_string(c.pool_limit);
  if (!pool.certified) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "time limit; bound %.12g", pool.bound_at_termination);
    row.note = buf;
  }
}

void run_greedy(const BenchConfig& c, const BipartiteGraph& g, const Cell& cell, BenchRow& row) {
  const Rational delta = Rational(1) - cell.gamma;
  if (delta > Rational(1, 2)) throw ArgumentError("greedy needs gamma >= 0.5 (delta = 1 - gamma <= 0.5)");
  GreedySolution s = c.greedy_tau ? greedy_quasi_biclique(g, delta, std::min(*c.greedy_tau, g.u_count()))
                                  : greedy_tau_sweep(g, delta);
  fill_selection(row, s.selection);
  row.count = 1;
  row.certified = false;
  row.objective = std::to_string(row.total);
  row.note = "tau " + std::to_string(s.trace.tau);
}

void run_mip(const BenchConfig& c, const BipartiteGraph& g, const SizeBounds& b, const Cell& cell, BenchRow& row) {
  if (!c.solver_cmd) throw MipError("no solver command configured (solver_cmd or QBC_SOLVER_CMD)");
  MipInstance mip = cell.method.objective == Objective::Size ? build_model1(g, cell.gamma, b) : build_model2(g, cell.gamma, b);
  if (c.theta) add_balance_constraints(mip, *c.theta);
  Assignment a = run_external_solver(mip, *c.solver_cmd);
  if (a.infeasible()) {
    row.objective = "infeasible";
    row.certified = a.status == "infeasible";
    return;
  }
  Selection s = verify_assignment(g, mip, a, cell.gamma);
  fill_selection(row, s);
  row.count = 1;
  row.certified = a.status == "optimal";
  row.objective = ObjectiveValue::of(cell.method.objective, s.edges, row.size_u, row.size_v).to_string();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line, std::size_t number) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError(number, "unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

std::int64_t to_int(const std::string& s, std::size_t number) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(number, "expected an integer, got '" + s + "'");
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

SuiteResult run_suite(const BenchConfig& config) {
  config.validate();
  SuiteResult result;
  std::vector<std::optional<BipartiteGraph>> graphs(config.datasets.size());
  std::vector<std::string> load_errors(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    const auto& ds = config.datasets[d];
    try {
      graphs[d] = load_graph(ds.path, ds.format);
      result.graphs[ds.name] = {static_cast<std::int64_t>(graphs[d]->u_count()),
                                static_cast<std::int64_t>(graphs[d]->v_count()), graphs[d]->edge_count()};
    } catch (const std::exception& e) {
      load_errors[d] = e.what();
    }
  }

  std::vector<Cell> cells;
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    const auto& methods = config.datasets[d].methods.empty() ? config.methods : config.datasets[d].methods;
    for (const auto& gamma : config.gammas) {
      for (const auto& m : methods) cells.push_back({d, gamma, m});
    }
  }
  result.rows.resize(cells.size());

  auto run_cell = [&](std::size_t i) {
    const Cell& cell = cells[i];
    BenchRow& row = result.rows[i];
    row.dataset = config.datasets[cell.dataset].name;
    row.method = cell.method.name();
    row.gamma = cell.gamma;
    if (!graphs[cell.dataset]) {
      row.objective = "error";
      row.note = "load failed: " + load_errors[cell.dataset];
      return;
    }
    const auto& g = *graphs[cell.dataset];
    const auto start = std::chrono::steady_clock::now();
    try {
      SizeBounds b = config.datasets[cell.dataset].bounds.value_or(SizeBounds::unconstrained(g));
      b.validate(g);
      row.bounds_used = b.to_string();
      switch (cell.method.method) {
        case BenchMethod::BranchAndBound:
        case BenchMethod::Oracle: run_exact(config, g, b, cell, row); break;
        case BenchMethod::Greedy: run_greedy(config, g, cell, row); break;
        case BenchMethod::ExternalMip: run_mip(config, g, b, cell, row); break;
      }
    } catch (const std::exception& e) {
      row = BenchRow{row.dataset, row.method, row.gamma, 0.0, 0, 0, 0, 0, "error", false, row.bounds_used, e.what()};
    }
    row.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) run_cell(i);
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < std::min(config.workers, cells.size()); ++w) pool.emplace_back(worker);
    worker();
  }
  return result;
}

std::string write_csv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += csv_field(r.dataset) + "," + csv_field(r.method) + "," + r.gamma.to_decimal_string() + "," +
           fmt("%.3f", r.time_ms) + "," + std::to_string(r.count) + "," + std::to_string(r.size_u) + "," +
           std::to_string(r.size_v) + "," + std::to_string(r.total) + "," + csv_field(r.objective) + "," +
           (r.certified ? "true" : "false") + "\n";
  }
  return out;
}

std::vector<BenchRow> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError(1, "missing or unexpected CSV header");
  ++number;
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    auto f = split_csv(line, number);
    if (f.size() != 10) throw ParseError(number, "expected 10 fields, got " + std::to_string(f.size()));
    BenchRow r;
    r.dataset = f[0];
    r.method = f[1];
    try {
      r.gamma = Rational::parse(f[2]);
      std::size_t used = 0;
      r.time_ms = std::stod(f[3], &used);
      if (used != f[3].size()) throw ArgumentError(f[3]);
    } catch (const std::exception&) {
      throw ParseError(number, "bad gamma or time field");
    }
    r.count = to_int(f[4], number);
    r.size_u = to_int(f[5], number);
    r.size_v = to_int(f[6], number);
    r.total = to_int(f[7], number);
    r.objective = f[8];
    if (f[9] != "true" && f[9] != "false") throw ParseError(number, "certified must be true or false");
    r.certified = f[9] == "true";
    if (r.total != r.size_u + r.size_v) throw ParseError(number, "total differs from size_u + size_v");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_markdown(const BenchConfig& config, const SuiteResult& result,
                            const std::vector<Annotation>& annotations) {
  std::string out = "# Quasi-biclique benchmark\n\n";
  out += "Gammas:";
  for (const auto& g : config.gammas) out += " " + g.to_decimal_string();
  out += ". Pool limit " + std::to_string(config.pool_limit) + ". Time limit ";
  out += config.time_limit_seconds ? fmt("%g s", *config.time_limit_seconds) : std::string("none");
  if (config.theta) out += ". Balance slack theta " + config.theta->to_decimal_string();
  out += ".\n\n";
  out += "Rows marked `*` were cut by the time limit and show the incumbent; "
         "reference sizes are feasibility witnesses, not optima.\n";

  for (const auto& ds : config.datasets) {
    out += "\n## " + ds.name + "\n\n";
    if (auto it = result.graphs.find(ds.name); it != result.graphs.end()) {
      out += std::to_string(it->second.u) + " x " + std::to_string(it->second.v) + ", " +
             std::to_string(it->second.edges) + " edges. Size bounds " +
             (ds.bounds ? ds.bounds->to_string() : std::string("(1, |U|) x (1, |V|)")) + ".\n\n";
    }
    out += "| method | gamma | size | total | count | objective | certified | time ms | reference | status | note |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const auto& r = result.rows[i];
      if (r.dataset != ds.name) continue;
      const bool timed_out = r.note.rfind("time limit", 0) == 0;
      std::string ref = "-";
      std::string status = "not-comparable";
      if (i < annotations.size()) {
        const auto& a = annotations[i];
        if (a.reference) {
          ref = a.reference->size_u ? "(" + std::to_string(*a.reference->size_u) + "," + std::to_string(*a.reference->size_v) + ")"
                                : std::to_string(a.reference->total);
          ref += " count " + std::to_string(a.reference->count);
        }
        status = to_string(a.status);
      }
      std::string note = r.note;
      if (i < annotations.size() && !annotations[i].note.empty()) {
        note += (note.empty() ? "" : "; ") + annotations[i].note;
      }
      out += "| " + r.method + " | " + r.gamma.to_decimal_string() + " | (" + std::to_string(r.size_u) + "," +
             std::to_string(r.size_v) + ")" + (timed_out ? "*" : "") + " | " + std::to_string(r.total) + " | " +
             std::to_string(r.count) + " | " + r.objective + " | " + (r.certified ? "yes" : "no") + " | " +
             fmt("%.1f", r.time_ms) + " | " + ref + " | " + status + " | " + note + " |\n";
    }
  }
  return out;
}

}  // namespace qbc
