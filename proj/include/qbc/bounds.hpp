#pragma once

#include <cstdint>
#include <string>

#include "qbc/bigraph.hpp"
#include "qbc/rational.hpp"

namespace qbc {

// Per-side cardinality window for a quasi-biclique: min_u <= |U'| <= max_u
// and min_v <= |V'| <= max_v.
struct SizeBounds {
  std::int64_t min_u = 1;
  std::int64_t max_u = 1;
  std::int64_t min_v = 1;
  std::int64_t max_v = 1;

  // (1, |U|) x (1, |V|).
  static SizeBounds unconstrained(const BipartiteGraph& g);
  // "a,b,c,d" as min_u,max_u,min_v,max_v.
  static SizeBounds parse(const std::string& text);

  // Throws ArgumentError unless 1 <= min <= max <= |side| on both sides.
  void validate(const BipartiteGraph& g) const;
  bool contains(std::int64_t nu, std::int64_t nv) const {
    return nu >= min_u && nu <= max_u && nv >= min_v && nv <= max_v;
  }
  std::string to_string() const;

  friend bool operator==(const SizeBounds&, const SizeBounds&) = default;
};

// Admissible edge counts k of a quasi-biclique inside given size bounds.
struct EdgeRange {
  std::int64_t k_min = 0;
  std::int64_t k_max = 0;
  bool feasible() const { return k_min <= k_max; }
};

// Upper bound on the maximum gamma-quasi-clique size of a graph with m edges:
// (gamma + sqrt(gamma + 8 gamma m)) / (2 gamma).
double quasi_clique_upper_bound(std::int64_t m, double gamma);

// Maximum size of a balanced (|U'| = |V'|) gamma-quasi-biclique: sqrt(4m/gamma).
double balanced_biclique_upper_bound(std::int64_t m, double gamma);

// Maximum size when (1-theta)|V'| <= |U'| <= (1+theta)|V'|:
// min{(2+theta) sqrt(m/(gamma(1-theta))), (1 + 1/(1-theta)) sqrt(m(1+theta)/gamma)}.
double near_balanced_upper_bound(std::int64_t m, double gamma, double theta);

// Largest integer not exceeding a real-valued size bound. A 1e-9 slack
// absorbs rounding in the square roots (4.0000000001 and 3.9999999999 both
// mean 4).
std::int64_t floor_bound(double value);

// k_max = min(|E|, max_u * max_v). k_min = ceil(gamma * min_u * min_v) when
// that does not exceed |E|, and at least 1 since any quasi-biclique with
// gamma > 0 has an edge. With use_degree_bounds, k_min is further raised to
// gamma times the degree sum of the min_u smallest-degree U-vertices (and
// likewise for V). That refinement is not a valid bound in general and is
// kept out of the default path.
EdgeRange edge_count_bounds(const BipartiteGraph& g, const Rational& gamma, const SizeBounds& bounds,
                            bool use_degree_bounds = false);

}  // namespace qbc
