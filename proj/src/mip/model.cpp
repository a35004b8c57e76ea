#include <algorithm>
#include <cmath>
#include <limits>

#include "qbc/mip.hpp"
#include "qbc/quasidef.hpp"

namespace qbc {
namespace {

bool safe_name(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::vector<LinearTerm> merge(std::vector<LinearTerm> terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  std::vector<LinearTerm> out;
  for (const auto& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const LinearTerm& t) { return t.coef == 0.0; });
  return out;
}

std::vector<QuadTerm> merge(std::vector<QuadTerm> terms) {
  for (auto& t : terms) {
    if (t.a > t.b) std::swap(t.a, t.b);
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const QuadTerm& x, const QuadTerm& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  std::vector<QuadTerm> out;
  for (const auto& t : terms) {
    if (!out.empty() && out.back().a == t.a && out.back().b == t.b) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const QuadTerm& t) { return t.coef == 0.0; });
  return out;
}

bool close(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Variable blocks shared by both models.
struct Core {
  std::vector<std::size_t> u, v;
  std::vector<std::pair<Edge, std::size_t>> y;
};

Core add_core(MipInstance& mip, const BipartiteGraph& g) {
  Core c;
  for (std::size_t i = 0; i < g.u_count(); ++i) c.u.push_back(mip.add_variable("u_" + std::to_string(i), VarKind::Binary));
  for (std::size_t j = 0; j < g.v_count(); ++j) c.v.push_back(mip.add_variable("v_" + std::to_string(j), VarKind::Binary));
  for (auto [i, j] : g.edges()) {
    c.y.push_back({{i, j}, mip.add_variable("y_" + std::to_string(i) + "_" + std::to_string(j), VarKind::Binary)});
  }
  return c;
}

void add_links(MipInstance& mip, const Core& c) {
  for (auto [e, y] : c.y) {
    const std::string tag = std::to_string(e.first) + "_" + std::to_string(e.second);
    const std::size_t u = c.u[e.first], v = c.v[e.second];
    mip.add_constraint({"link_u_" + tag, {{y, 1}, {u, -1}}, {}, Relation::Le, 0});
    mip.add_constraint({"link_v_" + tag, {{y, 1}, {v, -1}}, {}, Relation::Le, 0});
    mip.add_constraint({"link_uv_" + tag, {{y, 1}, {u, -1}, {v, -1}}, {}, Relation::Ge, -1});
  }
}

struct PairZ {
  std::int64_t n, m;
  std::size_t var;
};

std::vector<PairZ> add_pair_z(MipInstance& mip, const Core& c, const SizeBounds& b) {
  std::vector<PairZ> z;
  for (std::int64_t n = b.min_u; n <= b.max_u; ++n) {
    for (std::int64_t m = b.min_v; m <= b.max_v; ++m) {
      z.push_back({n, m, mip.add_variable("z_" + std::to_string(n) + "_" + std::to_string(m), VarKind::Binary)});
    }
  }
  Constraint sum{"z_sum", {}, {}, Relation::Eq, 1};
  Constraint card_u{"card_u", {}, {}, Relation::Eq, 0}, card_v{"card_v", {}, {}, Relation::Eq, 0};
  for (const auto& p : z) {
    sum.linear.push_back({p.var, 1});
    card_u.linear.push_back({p.var, -static_cast<double>(p.n)});
    card_v.linear.push_back({p.var, -static_cast<double>(p.m)});
  }
  for (auto u : c.u) card_u.linear.push_back({u, 1});
  for (auto v : c.v) card_v.linear.push_back({v, 1});
  mip.add_constraint(std::move(sum));
  mip.add_constraint(std::move(card_u));
  mip.add_constraint(std::move(card_v));
  return z;
}

struct SideZ {
  std::vector<std::pair<std::int64_t, std::size_t>> z1, z2;
};

SideZ add_side_z(MipInstance& mip, const Core& c, const SizeBounds& b) {
  SideZ z;
  for (std::int64_t n = b.min_u; n <= b.max_u; ++n) {
    z.z1.push_back({n, mip.add_variable("z1_" + std::to_string(n), VarKind::Continuous, 0.0, kInf)});
  }
  for (std::int64_t m = b.min_v; m <= b.max_v; ++m) {
    z.z2.push_back({m, mip.add_variable("z2_" + std::to_string(m), VarKind::Continuous, 0.0, kInf)});
  }
  Constraint card_u{"card_u", {}, {}, Relation::Eq, 0}, card_v{"card_v", {}, {}, Relation::Eq, 0};
  Constraint sum1{"z1_sum", {}, {}, Relation::Eq, 1}, sum2{"z2_sum", {}, {}, Relation::Eq, 1};
  for (auto u : c.u) card_u.linear.push_back({u, 1});
  for (auto v : c.v) card_v.linear.push_back({v, 1});
  for (auto [n, var] : z.z1) {
    card_u.linear.push_back({var, -static_cast<double>(n)});
    sum1.linear.push_back({var, 1});
  }
  for (auto [m, var] : z.z2) {
    card_v.linear.push_back({var, -static_cast<double>(m)});
    sum2.linear.push_back({var, 1});
  }
  mip.add_constraint(std::move(card_u));
  mip.add_constraint(std::move(card_v));
  mip.add_constraint(std::move(sum1));
  mip.add_constraint(std::move(sum2));
  return z;
}

// gamma * n * m products of the bilinear density row.
std::vector<QuadTerm> density_products(const SideZ& z, double gamma) {
  std::vector<QuadTerm> q;
  for (auto [n, a] : z.z1) {
    for (auto [m, b] : z.z2) q.push_back({a, b, -gamma * static_cast<double>(n * m)});
  }
  return q;
}

}  // namespace

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Model1Bilinear: return "model1-bilinear";
    case ModelKind::Model1Linearized: return "model1-linearized";
    case ModelKind::Model2: return "model2";
    case ModelKind::Model2Bilinear: return "model2-bilinear";
    case ModelKind::Parsed: return "parsed";
  }
  return "unknown";
}

std::size_t MipInstance::add_variable(std::string name, VarKind kind, double lower, double upper) {
  if (!safe_name(name)) throw MipError("variable name '" + name + "' is not LP-safe");
  if (index_.count(name)) throw MipError("duplicate variable '" + name + "'");
  if (kind == VarKind::Binary) lower = 0.0, upper = 1.0;
  if (lower > upper) throw MipError("variable '" + name + "' has empty bounds");
  index_[name] = variables_.size();
  variables_.push_back({std::move(name), kind, lower, upper});
  return variables_.size() - 1;
}

void MipInstance::add_constraint(Constraint c) {
  if (!safe_name(c.name)) throw MipError("constraint name '" + c.name + "' is not LP-safe");
  if (constraint_names_.count(c.name)) throw MipError("duplicate constraint '" + c.name + "'");
  for (const auto& t : c.linear) {
    if (t.var >= variables_.size()) throw MipError("constraint '" + c.name + "' references an undeclared variable");
  }
  for (const auto& t : c.quad) {
    if (t.a >= variables_.size() || t.b >= variables_.size()) {
      throw MipError("constraint '" + c.name + "' references an undeclared variable");
    }
  }
  c.linear = merge(std::move(c.linear));
  c.quad = merge(std::move(c.quad));
  constraint_names_[c.name] = constraints_.size();
  constraints_.push_back(std::move(c));
}

void MipInstance::set_objective(Sense sense, std::vector<LinearTerm> terms) {
  for (const auto& t : terms) {
    if (t.var >= variables_.size()) throw MipError("objective references an undeclared variable");
  }
  sense_ = sense;
  objective_ = merge(std::move(terms));
}

std::optional<std::size_t> MipInstance::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool MipInstance::is_linear() const {
  return std::none_of(constraints_.begin(), constraints_.end(), [](const Constraint& c) { return !c.quad.empty(); });
}

std::size_t MipInstance::count(VarKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(variables_.begin(), variables_.end(), [&](const Variable& v) { return v.kind == kind; }));
}

bool structurally_equal(const MipInstance& a, const MipInstance& b) {
  if (a.variables().size() != b.variables().size() || a.constraints().size() != b.constraints().size()) return false;
  for (std::size_t i = 0; i < a.variables().size(); ++i) {
    const auto &x = a.variables()[i], &y = b.variables()[i];
    if (x.name != y.name || x.kind != y.kind || !close(x.lower, y.lower) || !close(x.upper, y.upper)) return false;
  }
  auto same_linear = [](const std::vector<LinearTerm>& p, const std::vector<LinearTerm>& q) {
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i].var != q[i].var || !close(p[i].coef, q[i].coef)) return false;
    }
    return true;
  };
  if (a.sense() != b.sense() || !same_linear(a.objective(), b.objective())) return false;
  for (std::size_t i = 0; i < a.constraints().size(); ++i) {
    const auto &c = a.constraints()[i], &d = b.constraints()[i];
    if (c.name != d.name || c.rel != d.rel || !close(c.rhs, d.rhs) || !same_linear(c.linear, d.linear)) return false;
    if (c.quad.size() != d.quad.size()) return false;
    for (std::size_t k = 0; k < c.quad.size(); ++k) {
      if (c.quad[k].a != d.quad[k].a || c.quad[k].b != d.quad[k].b || !close(c.quad[k].coef, d.quad[k].coef)) {
        return false;
      }
    }
  }
  return true;
}

MipInstance build_model1(const BipartiteGraph& g, const Rational& gamma, const SizeBounds& bounds, Model1Form form) {
  check_gamma(gamma);
  bounds.validate(g);
  MipInstance mip;
  mip.metadata = {form == Model1Form::Linearized ? ModelKind::Model1Linearized : ModelKind::Model1Bilinear, gamma,
                  bounds, {}, std::nullopt};
  const Core core = add_core(mip, g);
  const double gm = gamma.to_double();

  std::vector<LinearTerm> obj;
  for (auto u : core.u) obj.push_back({u, 1});
  for (auto v : core.v) obj.push_back({v, 1});
  mip.set_objective(Sense::Maximize, std::move(obj));

  Constraint dens{"density", {}, {}, Relation::Ge, 0};
  for (const auto& [e, y] : core.y) dens.linear.push_back({y, 1});
  if (form == Model1Form::Linearized) {
    // Declared first so the density row can reference z.
    const auto z = add_pair_z(mip, core, bounds);
    for (const auto& p : z) dens.linear.push_back({p.var, -gm * static_cast<double>(p.n * p.m)});
    mip.add_constraint(std::move(dens));
  } else {
    const auto z = add_side_z(mip, core, bounds);
    dens.quad = density_products(z, gm);
    mip.add_constraint(std::move(dens));
  }
  add_links(mip, core);
  return mip;
}

MipInstance build_model2(const BipartiteGraph& g, const Rational& gamma, const SizeBounds& bounds,
                         const Model2Options& options) {
  check_gamma(gamma);
  bounds.validate(g);
  EdgeRange k = edge_count_bounds(g, gamma, bounds);
  if (!options.tighten_k) k = {1, g.edge_count()};
  if (!k.feasible()) {
    throw InfeasibleError("edge-count range [" + std::to_string(k.k_min) + ", " + std::to_string(k.k_max) +
                          "] is empty");
  }
  MipInstance mip;
  mip.metadata = {options.bilinear ? ModelKind::Model2Bilinear : ModelKind::Model2, gamma, bounds, k, std::nullopt};
  const Core core = add_core(mip, g);
  const double gm = gamma.to_double();

  std::vector<std::pair<std::int64_t, std::size_t>> w;
  for (std::int64_t e = k.k_min; e <= k.k_max; ++e) {
    w.push_back({e, mip.add_variable("w_" + std::to_string(e), VarKind::Binary)});
  }

  std::vector<LinearTerm> obj;
  for (auto [e, var] : w) obj.push_back({var, 2.0 * std::log(static_cast<double>(e))});
  Constraint dens{"density", {}, {}, Relation::Ge, 0};
  for (auto [e, var] : w) dens.linear.push_back({var, options.unweighted_density ? 1.0 : static_cast<double>(e)});

  if (options.bilinear) {
    const auto z = add_side_z(mip, core, bounds);
    for (auto [n, var] : z.z1) obj.push_back({var, -std::log(static_cast<double>(n))});
    for (auto [m, var] : z.z2) obj.push_back({var, -std::log(static_cast<double>(m))});
    dens.quad = density_products(z, gm);
  } else {
    const auto z = add_pair_z(mip, core, bounds);
    for (const auto& p : z) {
      obj.push_back({p.var, -(std::log(static_cast<double>(p.n)) + std::log(static_cast<double>(p.m)))});
      dens.linear.push_back({p.var, -gm * static_cast<double>(p.n * p.m)});
    }
  }
  mip.set_objective(Sense::Maximize, std::move(obj));

  Constraint wsum{"w_sum", {}, {}, Relation::Eq, 1};
  Constraint edges{"edge_count", {}, {}, Relation::Eq, 0};
  for (const auto& [e, y] : core.y) edges.linear.push_back({y, 1});
  for (auto [e, var] : w) {
    wsum.linear.push_back({var, 1});
    edges.linear.push_back({var, -static_cast<double>(e)});
  }
  mip.add_constraint(std::move(wsum));
  mip.add_constraint(std::move(edges));
  mip.add_constraint(std::move(dens));
  add_links(mip, core);
  return mip;
}

void add_balance_constraints(MipInstance& mip, const Rational& theta, bool on_indicators) {
  check_theta(theta);
  const double lo = (Rational(1) - theta).to_double(), hi = (Rational(1) + theta).to_double();
  // Row sum_U coef_u(n) z - factor * sum_V coef_v(m) z over whichever z layout exists.
  auto row = [&](const std::string& name, double factor, Relation rel) {
    Constraint c{name, {}, {}, rel, 0};
    bool found = false;
    for (std::size_t i = 0; i < mip.variables().size(); ++i) {
      const std::string& nm = mip.variables()[i].name;
      long long n = 0, m = 0;
      char tail = 0;
      if (std::sscanf(nm.c_str(), "z_%lld_%lld%c", &n, &m, &tail) == 2) {
        c.linear.push_back({i, on_indicators ? 1.0 - factor : static_cast<double>(n) - factor * static_cast<double>(m)});
        found = true;
      } else if (std::sscanf(nm.c_str(), "z1_%lld%c", &n, &tail) == 1) {
        c.linear.push_back({i, on_indicators ? 1.0 : static_cast<double>(n)});
        found = true;
      } else if (std::sscanf(nm.c_str(), "z2_%lld%c", &m, &tail) == 1) {
        c.linear.push_back({i, -factor * (on_indicators ? 1.0 : static_cast<double>(m))});
        found = true;
      }
    }
    if (!found) throw ArgumentError("balance constraints need z channeling variables");
    mip.add_constraint(std::move(c));
  };
  row(on_indicators ? "balance_lo_indicator" : "balance_lo", lo, Relation::Ge);
  row(on_indicators ? "balance_hi_indicator" : "balance_hi", hi, Relation::Le);
  mip.metadata.theta = theta;
}

}  // namespace qbc
