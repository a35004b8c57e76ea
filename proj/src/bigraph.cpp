#include "qbc/bigraph.hpp"

#include <algorithm>

#include "qbc/error.hpp"

namespace qbc {
namespace {

void check_index(const BipartiteGraph& g, Side s, std::size_t x) {
  if (x >= g.side_count(s)) {
    throw ArgumentError(std::string("vertex index ") + std::to_string(x) + " out of range for side " +
                        (s == Side::U ? "U" : "V") + " of size " + std::to_string(g.side_count(s)));
  }
}

std::vector<std::size_t> normalized(std::span<const std::size_t> xs) {
  std::vector<std::size_t> out(xs.begin(), xs.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::size_t u_count, std::size_t v_count, std::span<const Edge> edges,
                               std::vector<std::string> u_labels, std::vector<std::string> v_labels)
    : rows_(u_count, Bitset(v_count)),
      cols_(v_count, Bitset(u_count)),
      u_labels_(std::move(u_labels)),
      v_labels_(std::move(v_labels)) {
  if (!u_labels_.empty() && u_labels_.size() != u_count) throw ArgumentError("U label count mismatch");
  if (!v_labels_.empty() && v_labels_.size() != v_count) throw ArgumentError("V label count mismatch");
  for (auto [i, j] : edges) {
    if (i >= u_count || j >= v_count) {
      throw ArgumentError("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
    }
    if (!rows_[i].test(j)) {
      rows_[i].set(j);
      cols_[j].set(i);
      ++edge_count_;
    }
  }
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    rows_[i].for_each([&](std::size_t j) { out.emplace_back(i, j); });
  }
  return out;
}

std::string BipartiteGraph::label(Side s, std::size_t x) const {
  const auto& names = labels(s);
  return x < names.size() ? names[x] : std::to_string(x);
}

BipartiteGraph BipartiteGraph::transposed() const {
  std::vector<Edge> flipped;
  flipped.reserve(static_cast<std::size_t>(edge_count_));
  for (auto [i, j] : edges()) flipped.emplace_back(j, i);
  return BipartiteGraph(v_count(), u_count(), flipped, v_labels_, u_labels_);
}

Rational Selection::density() const {
  if (!has_density()) throw UndefinedDensityError();
  return Rational(edges, static_cast<std::int64_t>(u.size() * v.size()));
}

bool canonical_less(const Selection& a, const Selection& b) {
  if (a.u.size() != b.u.size()) return a.u.size() > b.u.size();
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

Rational density(const BipartiteGraph& g) {
  if (g.u_count() == 0 || g.v_count() == 0) throw UndefinedDensityError();
  return Rational(g.edge_count(), static_cast<std::int64_t>(g.u_count() * g.v_count()));
}

Selection induced_stats(const BipartiteGraph& g, std::span<const std::size_t> u_set,
                        std::span<const std::size_t> v_set) {
  Selection s;
  s.u = normalized(u_set);
  s.v = normalized(v_set);
  for (auto i : s.u) check_index(g, Side::U, i);
  for (auto j : s.v) check_index(g, Side::V, j);
  Bitset vs = make_subset(g, Side::V, s.v);
  for (auto i : s.u) s.edges += static_cast<std::int64_t>(g.row(i).count_and(vs));
  return s;
}

std::size_t degree(const BipartiteGraph& g, Side side, std::size_t x) {
  check_index(g, side, x);
  return g.neighbours(side, x).count();
}

std::size_t restricted_degree(const BipartiteGraph& g, Side side, std::size_t x,
                              std::span<const std::size_t> other) {
  check_index(g, side, x);
  const Bitset& nb = g.neighbours(side, x);
  std::size_t d = 0;
  for (auto y : other) {
    check_index(g, opposite(side), y);
    d += nb.test(y) ? 1 : 0;
  }
  return d;
}

std::size_t restricted_degree(const BipartiteGraph& g, Side side, std::size_t x, const Bitset& other) {
  check_index(g, side, x);
  if (other.size() != g.side_count(opposite(side))) throw ArgumentError("subset has wrong universe size");
  return g.neighbours(side, x).count_and(other);
}

Bitset make_subset(const BipartiteGraph& g, Side s, std::span<const std::size_t> members) {
  Bitset b(g.side_count(s));
  for (auto x : members) {
    check_index(g, s, x);
    b.set(x);
  }
  return b;
}

}  // namespace qbc
