#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qbc/bigraph.hpp"
#include "qbc/bounds.hpp"
#include "qbc/rational.hpp"

namespace qbc {

// SIZE maximizes |U'| + |V'|. QUALITY maximizes rho^2 |U'| |V'|, which for
// a selection with e edges is e^2 / (|U'| |V'|).
enum class Objective { Size, Quality };

std::string to_string(Objective o);
Objective parse_objective(const std::string& name);

// Exact objective value. SIZE values are integers; QUALITY values are the
// reduced fraction e^2 / (nu nv).
class ObjectiveValue {
 public:
  ObjectiveValue() = default;
  static ObjectiveValue of(Objective kind, std::int64_t edges, std::int64_t nu, std::int64_t nv);

  Objective kind() const { return kind_; }
  const Rational& value() const { return value_; }
  double to_double() const { return value_.to_double(); }
  // Integer for SIZE, 12 significant digits for QUALITY.
  std::string to_string() const;

  friend bool operator==(const ObjectiveValue& a, const ObjectiveValue& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const ObjectiveValue& a, const ObjectiveValue& b) {
    return a.value_ <=> b.value_;
  }

 private:
  ObjectiveValue(Objective k, Rational v) : kind_(k), value_(v) {}
  Objective kind_ = Objective::Size;
  Rational value_{0};
};

// rho^2 |U'| |V'| = edges^2 / (nu nv). Requires nu, nv >= 1.
double quality_objective(std::int64_t edges, std::int64_t nu, std::int64_t nv);
// 2 log(edges) - log(nu) - log(nv) (natural log). Throws DomainError for edges = 0.
double f_log(std::int64_t edges, std::int64_t nu, std::int64_t nv);

inline constexpr std::size_t kUnlimitedPool = std::numeric_limits<std::size_t>::max();

struct SearchParams {
  Rational gamma{1};
  Objective objective = Objective::Size;
  // Unset means (1, |U|) x (1, |V|).
  std::optional<SizeBounds> size_bounds;
  // Near-balance slack: (1 - theta)|V'| <= |U'| <= (1 + theta)|V'|.
  std::optional<Rational> theta;
  // Maximum number of optimal selections retained.
  std::size_t pool_limit = 1;
  std::optional<double> time_limit_seconds;
  // Branch-and-bound workers for the optimization pass (1 = sequential).
  std::size_t threads = 1;
  // Largest smaller-side size the sweep oracle agrees to enumerate.
  std::size_t oracle_cap = 20;
  // Also prune with the degree-sum edge floor; unsound in general.
  bool use_degree_bounds = false;

  void validate() const;
  SizeBounds bounds_for(const BipartiteGraph& g) const;
};

struct Solution {
  Selection selection;
  ObjectiveValue objective;
  bool certified_optimal = false;
  double bound_at_termination = 0.0;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t pool_nodes = 0;
};

// Distinct optimal selections in canonical order (see canonical_less).
struct SolutionPool {
  std::vector<Solution> solutions;
  bool truncated = false;   // pool_limit reached before enumeration finished
  bool infeasible = false;  // search completed and no feasible selection exists
  bool certified = false;   // the shared objective value is proven optimal
  std::optional<ObjectiveValue> optimum;
  double bound_at_termination = 0.0;
  SearchStats stats;

  bool empty() const { return solutions.empty(); }
};

// Enumerates every subset S of the smaller side within the size bounds and,
// for each S, every cardinality k of the other side: the k vertices with the
// most neighbours in S maximize the edge count, and both objectives grow
// with the edge count at fixed sizes, so this is exact. A second pass lists
// all optimal selections. Throws ArgumentError if the smaller side exceeds
// params.oracle_cap.
SolutionPool sweep_oracle(const BipartiteGraph& g, const SearchParams& params);

// Include/exclude branch-and-bound over vertices, branching on the largest
// degree first. A node is pruned when no admissible (|U'|, |V'|) pair of its
// completions can be feasible or beat the incumbent; the per-pair edge cap
// comes from top-k degree sums on both sides, the edge budget of the
// subproblem, the balanced-size bound and the k range. A second pass
// enumerates the pool at the certified optimum.
SolutionPool branch_and_bound(const BipartiteGraph& g, const SearchParams& params);

enum class Method { BranchAndBound, Oracle };

std::string to_string(Method m);
Method parse_method(const std::string& name);

SolutionPool solve(const BipartiteGraph& g, const SearchParams& params, Method method = Method::BranchAndBound);

// Optimum restricted to theta-near-balanced selections; params.theta must be
// set. An infeasible result has infeasible = true and no solutions.
SolutionPool enumerate_balanced(const BipartiteGraph& g, const SearchParams& params,
                                Method method = Method::BranchAndBound);

namespace detail {

// Shared tests used by both exact methods.
bool balanced(const std::optional<Rational>& theta, std::int64_t nu, std::int64_t nv);
void check_solution(const BipartiteGraph& g, const SearchParams& params, const Solution& s);
void finalize_pool(SolutionPool& pool);

}  // namespace detail

}  // namespace qbc
