#pragma once

#include <cstdint>
#include <optional>

#include "qbc/bigraph.hpp"
#include "qbc/rational.hpp"

namespace qbc {

// Parameters shared by the three quasi-biclique definitions, the greedy
// heuristic (tau) and the balance constraint (theta).
struct QuasiParams {
  Rational gamma{1};
  std::optional<Rational> delta;
  std::optional<std::int64_t> epsilon;
  std::int64_t tau = 1;
  Rational theta{0};

  // Throws ArgumentError on any out-of-domain field.
  void validate() const;
};

void check_gamma(const Rational& gamma);  // (0, 1]
void check_delta(const Rational& delta);  // [0, 1/2]
void check_theta(const Rational& theta);  // [0, 1)

// Density of the selection is at least gamma (boundary inclusive).
bool is_gamma_quasi_biclique(const BipartiteGraph& g, const Selection& s, const Rational& gamma);

// Every u in U' sees at least (1 - delta)|V'| of V', and symmetrically.
bool is_delta_quasi_biclique(const BipartiteGraph& g, const Selection& s, const Rational& delta);

// Every vertex misses at most epsilon vertices of the opposite side.
bool is_epsilon_quasi_biclique(const BipartiteGraph& g, const Selection& s, std::int64_t epsilon);

Rational delta_to_gamma(const Rational& delta);

// 1 - epsilon / min(min_u, min_v); requires 0 <= epsilon < min(min_u, min_v).
Rational epsilon_to_gamma(std::int64_t epsilon, std::int64_t min_u, std::int64_t min_v);

}  // namespace qbc
