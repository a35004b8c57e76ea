#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qbc/mip.hpp"
#include "qbc/quasidef.hpp"
#include "toml.hpp"

namespace qbc {
namespace {

constexpr double kTol = 1e-6;

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

std::string quote(const std::string& path) { return "'" + replace_all(path, "'", "'\\''") + "'"; }

double activity(const Constraint& c, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& t : c.linear) s += t.coef * x[t.var];
  for (const auto& q : c.quad) s += q.coef * x[q.a] * x[q.b];
  return s;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "qbc-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw MipError("cannot create a temporary directory");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

Assignment parse_solution(const std::string& text) {
  Assignment a;
  a.status = "optimal";
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value, extra;
    if (!(ls >> key)) continue;
    if (!(ls >> value) || (ls >> extra)) throw ParseError(number, "expected '<name> <value>'");
    if (key == "status") {
      a.status = value;
      continue;
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError(number, "value '" + value + "' is not a number");
    }
    if (key == "objective") {
      a.objective = v;
    } else if (!a.values.emplace(key, v).second) {
      throw ParseError(number, "variable '" + key + "' assigned twice");
    }
  }
  return a;
}

std::string format_solution(const Assignment& a) {
  std::string out = "status " + a.status + "\n";
  char buf[64];
  if (a.objective) {
    std::snprintf(buf, sizeof buf, "objective %.12g\n", *a.objective);
    out += buf;
  }
  for (const auto& [name, v] : a.values) {
    std::snprintf(buf, sizeof buf, " %.12g\n", v);
    out += name + buf;
  }
  return out;
}

void normalize_assignment(const MipInstance& mip, Assignment& a) {
  if (a.infeasible()) {
    a.values.clear();
    return;
  }
  for (const auto& v : mip.variables()) {
    auto it = a.values.find(v.name);
    if (it == a.values.end()) throw MipError("solution is missing variable '" + v.name + "'");
    if (v.kind == VarKind::Continuous) continue;
    const double r = std::round(it->second);
    if (std::abs(it->second - r) > kTol) {
      throw MipError("integer variable '" + v.name + "' has fractional value " + std::to_string(it->second));
    }
    it->second = r;
  }
  for (const auto& [name, v] : a.values) {
    if (!mip.find(name)) throw MipError("solution assigns unknown variable '" + name + "'");
  }
}

Assignment run_external_solver(const MipInstance& mip, const std::string& command_template, const LpOptions& options) {
  if (command_template.empty()) throw MipError("no solver command configured");
  TempDir dir;
  const auto lp = dir.path() / "model.lp";
  const auto sol = dir.path() / "solution.txt";
  {
    std::ofstream out(lp);
    out << emit_lp(mip, options);
    if (!out) throw MipError("cannot write " + lp.string());
  }
  std::string cmd = replace_all(replace_all(command_template, "{lp}", quote(lp.string())), "{sol}", quote(sol.string()));
  std::string captured;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) throw MipError("cannot start solver command: " + cmd);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) captured.append(buf, n);
  const int status = pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw MipError("solver command failed (status " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : status) +
                   "): " + cmd + "\n" + captured);
  }
  std::ifstream in(sol);
  if (!in) throw MipError("solver wrote no solution file\n" + captured);
  std::stringstream text;
  text << in.rdbuf();
  Assignment a;
  try {
    a = parse_solution(text.str());
    normalize_assignment(mip, a);
  } catch (const Error& e) {
    throw MipError(std::string("unusable solver output: ") + e.what() + "\n" + captured);
  }
  return a;
}

std::optional<std::string> resolve_solver_command(const std::optional<std::filesystem::path>& config) {
  if (const char* env = std::getenv("QBC_SOLVER_CMD"); env && *env) return std::string(env);
  if (!config) return std::nullopt;
  try {
    toml::table t = toml::parse_file(config->string());
    if (auto cmd = t["solver_cmd"].value<std::string>()) return *cmd;
    if (auto cmd = t["mip"]["solver_cmd"].value<std::string>()) return *cmd;
  } catch (const toml::parse_error& e) {
    throw ParseError(static_cast<std::size_t>(e.source().begin.line), std::string(e.description()));
  }
  return std::nullopt;
}

std::optional<std::string> first_violation(const MipInstance& mip, const std::map<std::string, double>& values,
                                           bool check_integrality) {
  std::vector<double> x(mip.variables().size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& v = mip.variables()[i];
    auto it = values.find(v.name);
    if (it == values.end()) return "missing " + v.name;
    x[i] = it->second;
    if (x[i] < v.lower - kTol || x[i] > v.upper + kTol) return "bound " + v.name;
    if (check_integrality && v.kind != VarKind::Continuous && std::abs(x[i] - std::round(x[i])) > kTol) {
      return "integrality " + v.name;
    }
  }
  for (const auto& c : mip.constraints()) {
    const double lhs = activity(c, x);
    const bool ok = c.rel == Relation::Le   ? lhs <= c.rhs + kTol
                    : c.rel == Relation::Ge ? lhs >= c.rhs - kTol
                                            : std::abs(lhs - c.rhs) <= kTol;
    if (!ok) return c.name;
  }
  return std::nullopt;
}

double objective_value(const MipInstance& mip, const std::map<std::string, double>& values) {
  double s = 0.0;
  for (const auto& t : mip.objective()) s += t.coef * values.at(mip.variables()[t.var].name);
  return s;
}

Selection verify_assignment(const BipartiteGraph& g, const MipInstance& mip, const Assignment& assignment,
                            const Rational& gamma) {
  if (assignment.infeasible()) throw VerificationError("solver reported the instance infeasible");
  if (auto bad = first_violation(mip, assignment.values)) throw VerificationError("violated: " + *bad);
  auto value = [&](const std::string& name) -> std::optional<double> {
    auto it = assignment.values.find(name);
    if (it == assignment.values.end()) return std::nullopt;
    return it->second;
  };
  std::vector<std::size_t> us, vs;
  for (std::size_t i = 0; i < g.u_count(); ++i) {
    auto x = value("u_" + std::to_string(i));
    if (!x) throw VerificationError("instance has no variable u_" + std::to_string(i));
    if (*x > 0.5) us.push_back(i);
  }
  for (std::size_t j = 0; j < g.v_count(); ++j) {
    auto x = value("v_" + std::to_string(j));
    if (!x) throw VerificationError("instance has no variable v_" + std::to_string(j));
    if (*x > 0.5) vs.push_back(j);
  }
  for (auto [i, j] : g.edges()) {
    const std::string y = "y_" + std::to_string(i) + "_" + std::to_string(j);
    auto x = value(y);
    if (!x) throw VerificationError("instance has no variable " + y);
    const bool want = assignment.values.at("u_" + std::to_string(i)) > 0.5 &&
                      assignment.values.at("v_" + std::to_string(j)) > 0.5;
    if ((*x > 0.5) != want) throw VerificationError("violated: link " + y + " != u_i * v_j");
  }
  Selection s = induced_stats(g, us, vs);
  if (!s.has_density()) throw VerificationError("selection has an empty side");
  if (!is_gamma_quasi_biclique(g, s, gamma)) {
    throw VerificationError("selection density " + s.density().to_string() + " is below gamma " + gamma.to_string());
  }
  return s;
}

}  // namespace qbc
