#include "qbc/quasidef.hpp"

#include <algorithm>

#include "qbc/error.hpp"

namespace qbc {
namespace {

void require_sides(const Selection& s) {
  if (!s.has_density()) throw UndefinedDensityError();
}

// Each vertex of `side` in the selection has at least `need(|other|)`
// neighbours among the selected vertices of the opposite side.
template <class Pred>
bool all_vertices(const BipartiteGraph& g, const Selection& s, Pred&& ok) {
  Bitset us = make_subset(g, Side::U, s.u);
  Bitset vs = make_subset(g, Side::V, s.v);
  for (auto i : s.u) {
    if (!ok(static_cast<std::int64_t>(g.row(i).count_and(vs)), static_cast<std::int64_t>(s.v.size()))) return false;
  }
  for (auto j : s.v) {
    if (!ok(static_cast<std::int64_t>(g.column(j).count_and(us)), static_cast<std::int64_t>(s.u.size()))) return false;
  }
  return true;
}

}  // namespace

void check_gamma(const Rational& gamma) {
  if (gamma <= Rational(0) || gamma > Rational(1)) throw ArgumentError("gamma must lie in (0, 1], got " + gamma.to_string());
}

void check_delta(const Rational& delta) {
  if (delta < Rational(0) || delta > Rational(1, 2)) {
    throw ArgumentError("delta must lie in [0, 0.5], got " + delta.to_string());
  }
}

void check_theta(const Rational& theta) {
  if (theta < Rational(0) || theta >= Rational(1)) throw ArgumentError("theta must lie in [0, 1), got " + theta.to_string());
}

void QuasiParams::validate() const {
  check_gamma(gamma);
  if (delta) check_delta(*delta);
  if (epsilon && *epsilon < 0) throw ArgumentError("epsilon must be nonnegative");
  if (delta && epsilon) throw ArgumentError("set at most one of delta and epsilon");
  if (tau < 1) throw ArgumentError("tau must be positive");
  check_theta(theta);
}

bool is_gamma_quasi_biclique(const BipartiteGraph& g, const Selection& s, const Rational& gamma) {
  (void)g;
  require_sides(s);
  return at_least(s.edges, gamma, static_cast<std::int64_t>(s.u.size()), static_cast<std::int64_t>(s.v.size()));
}

bool is_delta_quasi_biclique(const BipartiteGraph& g, const Selection& s, const Rational& delta) {
  require_sides(s);
  check_delta(delta);
  const Rational keep = Rational(1) - delta;
  return all_vertices(g, s, [&](std::int64_t d, std::int64_t other) { return at_least(d, keep, other); });
}

bool is_epsilon_quasi_biclique(const BipartiteGraph& g, const Selection& s, std::int64_t epsilon) {
  require_sides(s);
  if (epsilon < 0) throw ArgumentError("epsilon must be nonnegative");
  return all_vertices(g, s, [&](std::int64_t d, std::int64_t other) { return other - d <= epsilon; });
}

Rational delta_to_gamma(const Rational& delta) {
  check_delta(delta);
  return Rational(1) - delta;
}

Rational epsilon_to_gamma(std::int64_t epsilon, std::int64_t min_u, std::int64_t min_v) {
  std::int64_t m = std::min(min_u, min_v);
  if (m < 1) throw ArgumentError("size lower bounds must be positive");
  if (epsilon < 0 || epsilon >= m) {
    throw ArgumentError("epsilon must lie in [0, min(min_u, min_v)) = [0, " + std::to_string(m) + ")");
  }
  return Rational(1) - Rational(epsilon, m);
}

}  // namespace qbc
