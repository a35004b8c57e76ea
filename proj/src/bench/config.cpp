#include <fstream>
#include <sstream>

#include "qbc/bench.hpp"
#include "qbc/error.hpp"
#include "qbc/quasidef.hpp"
#include "toml.hpp"

namespace qbc {
namespace {

Rational gamma_value(const toml::node& n) {
  if (auto s = n.value_exact<std::string>()) return Rational::parse(*s);
  if (auto d = n.value<double>()) return Rational::from_double(*d);
  throw ArgumentError("gamma entries must be numbers or fraction strings");
}

std::vector<MethodSpec> method_list(const toml::array& arr) {
  std::vector<MethodSpec> out;
  for (const auto& n : arr) {
    auto s = n.value_exact<std::string>();
    if (!s) throw ArgumentError("method names must be strings");
    out.push_back(MethodSpec::parse(*s));
  }
  return out;
}

std::size_t positive(toml::node_view<toml::node> n, const char* key, std::size_t fallback) {
  if (!n) return fallback;
  auto v = n.value_exact<std::int64_t>();
  if (!v || *v < 1) throw ArgumentError(std::string(key) + " must be a positive integer");
  return static_cast<std::size_t>(*v);
}

}  // namespace

MethodSpec MethodSpec::parse(const std::string& name) {
  MethodSpec m;
  std::string base = name;
  const std::string suffix = "-quality";
  if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    base.resize(base.size() - suffix.size());
    m.objective = Objective::Quality;
  }
  if (base == "bb") {
    m.method = BenchMethod::BranchAndBound;
  } else if (base == "oracle") {
    m.method = BenchMethod::Oracle;
  } else if (base == "external-mip") {
    m.method = BenchMethod::ExternalMip;
  } else if (base == "greedy" && m.objective == Objective::Size) {
    m.method = BenchMethod::Greedy;
  } else {
    throw ArgumentError("unknown method '" + name + "' (bb, oracle, greedy, external-mip, optionally -quality)");
  }
  return m;
}

std::string MethodSpec::name() const {
  std::string base;
  switch (method) {
    case BenchMethod::BranchAndBound: base = "bb"; break;
    case BenchMethod::Oracle: base = "oracle"; break;
    case BenchMethod::Greedy: base = "greedy"; break;
    case BenchMethod::ExternalMip: base = "external-mip"; break;
  }
  return objective == Objective::Quality ? base + "-quality" : base;
}

BenchConfig BenchConfig::parse(const std::string& text, const std::filesystem::path& base_dir) {
  toml::table t;
  try {
    t = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ParseError(static_cast<std::size_t>(e.source().begin.line), std::string(e.description()));
  }
  BenchConfig c;
  if (auto arr = t["gammas"].as_array()) {
    for (const auto& n : *arr) c.gammas.push_back(gamma_value(n));
  } else {
    throw ArgumentError("config needs a 'gammas' array");
  }
  if (auto arr = t["methods"].as_array()) {
    c.methods = method_list(*arr);
  } else {
    throw ArgumentError("config needs a 'methods' array");
  }
  c.pool_limit = positive(t["pool_limit"], "pool_limit", c.pool_limit);
  c.workers = positive(t["workers"], "workers", c.workers);
  c.threads = positive(t["threads"], "threads", c.threads);
  if (auto n = t["time_limit"]) {
    auto v = n.value<double>();
    if (!v || !(*v > 0)) throw ArgumentError("time_limit must be a positive number of seconds");
    c.time_limit_seconds = *v;
  }
  if (auto n = t["theta"]) c.theta = gamma_value(*n.node());
  if (auto n = t["greedy_tau"]) {
    if (auto s = n.value_exact<std::string>(); s && *s == "sweep") {
      c.greedy_tau.reset();
    } else {
      c.greedy_tau = positive(n, "greedy_tau", 1);
    }
  }
  if (auto s = t["solver_cmd"].value<std::string>()) c.solver_cmd = *s;

  auto sets = t["dataset"].as_array();
  if (!sets || sets->empty()) throw ArgumentError("config needs at least one [[dataset]] table");
  for (const auto& node : *sets) {
    const auto* d = node.as_table();
    if (!d) throw ArgumentError("[[dataset]] entries must be tables");
    DatasetSpec ds;
    auto name = (*d)["name"].value<std::string>();
    auto path = (*d)["path"].value<std::string>();
    if (!name || !path) throw ArgumentError("every dataset needs 'name' and 'path'");
    ds.name = *name;
    ds.path = std::filesystem::path(*path).is_absolute() ? std::filesystem::path(*path) : base_dir / *path;
    if (auto f = (*d)["format"].value<std::string>()) ds.format = parse_graph_format(*f);
    if (auto b = (*d)["bounds"].as_array()) {
      std::vector<std::int64_t> v;
      for (const auto& x : *b) {
        auto i = x.value_exact<std::int64_t>();
        if (!i) throw ArgumentError("bounds must be four integers");
        v.push_back(*i);
      }
      if (v.size() != 4) throw ArgumentError("bounds must be [min_u, max_u, min_v, max_v]");
      ds.bounds = SizeBounds{v[0], v[1], v[2], v[3]};
    }
    if (auto m = (*d)["methods"].as_array()) ds.methods = method_list(*m);
    if (auto r = (*d)["reference"].value<std::string>()) ds.reference = *r;
    c.datasets.push_back(std::move(ds));
  }
  c.validate();
  return c;
}

BenchConfig BenchConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

void BenchConfig::validate() const {
  if (gammas.empty()) throw ArgumentError("gammas must not be empty");
  for (const auto& g : gammas) check_gamma(g);
  if (methods.empty()) throw ArgumentError("methods must not be empty");
  if (theta) check_theta(*theta);
  if (pool_limit < 1 || workers < 1 || threads < 1) throw ArgumentError("limits must be positive");
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (datasets[i].name == datasets[j].name) throw ArgumentError("duplicate dataset name '" + datasets[i].name + "'");
    }
  }
}

}  // namespace qbc
