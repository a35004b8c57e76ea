#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qbc/error.hpp"
#include "qbc/exact.hpp"
#include "qbc/quasidef.hpp"

namespace qbc {

std::string to_string(Objective o) { return o == Objective::Size ? "size" : "quality"; }

Objective parse_objective(const std::string& name) {
  if (name == "size") return Objective::Size;
  if (name == "quality") return Objective::Quality;
  throw ArgumentError("objective must be 'size' or 'quality', got '" + name + "'");
}

std::string to_string(Method m) { return m == Method::BranchAndBound ? "bb" : "oracle"; }

Method parse_method(const std::string& name) {
  if (name == "bb") return Method::BranchAndBound;
  if (name == "oracle") return Method::Oracle;
  throw ArgumentError("method must be 'bb' or 'oracle', got '" + name + "'");
}

ObjectiveValue ObjectiveValue::of(Objective kind, std::int64_t edges, std::int64_t nu, std::int64_t nv) {
  if (kind == Objective::Size) return ObjectiveValue(kind, Rational(nu + nv));
  if (nu < 1 || nv < 1) throw ArgumentError("quality objective needs nonempty sides");
  return ObjectiveValue(kind, Rational(edges * edges, nu * nv));
}

std::string ObjectiveValue::to_string() const {
  if (kind_ == Objective::Size) return value_.to_string();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value_.to_double());
  return buf;
}

double quality_objective(std::int64_t edges, std::int64_t nu, std::int64_t nv) {
  if (nu < 1 || nv < 1) throw ArgumentError("quality objective needs nonempty sides");
  if (edges < 0) throw ArgumentError("edge count must be nonnegative");
  return static_cast<double>(edges) * static_cast<double>(edges) / (static_cast<double>(nu) * static_cast<double>(nv));
}

double f_log(std::int64_t edges, std::int64_t nu, std::int64_t nv) {
  if (nu < 1 || nv < 1) throw ArgumentError("quality objective needs nonempty sides");
  if (edges <= 0) throw DomainError("log-quality undefined for a selection without edges");
  return 2.0 * std::log(static_cast<double>(edges)) - std::log(static_cast<double>(nu)) -
         std::log(static_cast<double>(nv));
}

void SearchParams::validate() const {
  check_gamma(gamma);
  if (theta) check_theta(*theta);
  if (pool_limit < 1) throw ArgumentError("pool_limit must be at least 1");
  if (time_limit_seconds && !(*time_limit_seconds > 0.0)) throw ArgumentError("time limit must be positive");
  if (threads < 1) throw ArgumentError("threads must be at least 1");
  if (oracle_cap > 30) throw ArgumentError("oracle_cap above 30 is not supported");
}

SizeBounds SearchParams::bounds_for(const BipartiteGraph& g) const {
  SizeBounds b = size_bounds ? *size_bounds : SizeBounds::unconstrained(g);
  b.validate(g);
  return b;
}

SolutionPool solve(const BipartiteGraph& g, const SearchParams& params, Method method) {
  return method == Method::Oracle ? sweep_oracle(g, params) : branch_and_bound(g, params);
}

SolutionPool enumerate_balanced(const BipartiteGraph& g, const SearchParams& params, Method method) {
  if (!params.theta) throw ArgumentError("enumerate_balanced needs theta");
  return solve(g, params, method);
}

namespace detail {

bool balanced(const std::optional<Rational>& theta, std::int64_t nu, std::int64_t nv) {
  if (!theta) return true;
  const Rational lo = Rational(1) - *theta, hi = Rational(1) + *theta;
  return at_least(nu, lo, nv) && at_least((hi.num() * nv), Rational(hi.den()), nu);
}

void check_solution(const BipartiteGraph& g, const SearchParams& params, const Solution& s) {
  Selection fresh = induced_stats(g, s.selection.u, s.selection.v);
  if (fresh != s.selection || !s.selection.has_density() || !is_gamma_quasi_biclique(g, s.selection, params.gamma) ||
      s.objective != ObjectiveValue::of(params.objective, fresh.edges, static_cast<std::int64_t>(fresh.u.size()),
                                        static_cast<std::int64_t>(fresh.v.size()))) {
    throw std::logic_error("solver returned an inconsistent solution");
  }
}

void finalize_pool(SolutionPool& pool) {
  auto& sols = pool.solutions;
  std::sort(sols.begin(), sols.end(),
            [](const Solution& a, const Solution& b) { return canonical_less(a.selection, b.selection); });
  sols.erase(std::unique(sols.begin(), sols.end(),
                         [](const Solution& a, const Solution& b) { return a.selection == b.selection; }),
             sols.end());
}

}  // namespace detail
}  // namespace qbc
