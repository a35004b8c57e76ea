#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbc/bitset.hpp"
#include "qbc/rational.hpp"

namespace qbc {

enum class Side { U, V };

inline Side opposite(Side s) { return s == Side::U ? Side::V : Side::U; }

using Edge = std::pair<std::size_t, std::size_t>;

// Immutable simple bipartite graph G = (U, V, E).
//
// Adjacency is stored twice: one bit row over V per U-vertex and one bit
// column over U per V-vertex, so restricted degrees d(x, S) on either side
// are a single intersection count. Safe to share between threads.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  // Duplicate edges collapse; any endpoint out of range throws ArgumentError.
  BipartiteGraph(std::size_t u_count, std::size_t v_count, std::span<const Edge> edges,
                 std::vector<std::string> u_labels = {}, std::vector<std::string> v_labels = {});

  std::size_t u_count() const { return rows_.size(); }
  std::size_t v_count() const { return cols_.size(); }
  std::size_t side_count(Side s) const { return s == Side::U ? u_count() : v_count(); }
  std::int64_t edge_count() const { return edge_count_; }

  // Neighbourhood of U-vertex i as a bitset over V.
  const Bitset& row(std::size_t i) const { return rows_[i]; }
  // Neighbourhood of V-vertex j as a bitset over U.
  const Bitset& column(std::size_t j) const { return cols_[j]; }
  const Bitset& neighbours(Side s, std::size_t x) const { return s == Side::U ? rows_[x] : cols_[x]; }

  bool has_edge(std::size_t i, std::size_t j) const { return rows_[i].test(j); }

  // Edges in (u, v) order, sorted.
  std::vector<Edge> edges() const;

  bool has_labels() const { return !u_labels_.empty() || !v_labels_.empty(); }
  // External name of a vertex; falls back to the decimal index.
  std::string label(Side s, std::size_t x) const;
  const std::vector<std::string>& labels(Side s) const { return s == Side::U ? u_labels_ : v_labels_; }

  // Same graph with U and V swapped (labels follow their vertices).
  BipartiteGraph transposed() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::vector<Bitset> rows_;
  std::vector<Bitset> cols_;
  std::int64_t edge_count_ = 0;
  std::vector<std::string> u_labels_;
  std::vector<std::string> v_labels_;
};

// Vertex-induced subgraph G[U', V'] with its edge count.
struct Selection {
  std::vector<std::size_t> u;  // sorted, unique
  std::vector<std::size_t> v;  // sorted, unique
  std::int64_t edges = 0;

  std::size_t size() const { return u.size() + v.size(); }
  bool has_density() const { return !u.empty() && !v.empty(); }
  // edges / (|U'| |V'|); throws UndefinedDensityError when a side is empty.
  Rational density() const;

  friend bool operator==(const Selection&, const Selection&) = default;
};

// Canonical order: larger |U'| first, then index sets lexicographically.
bool canonical_less(const Selection& a, const Selection& b);

// |E| / (|U| |V|). Throws UndefinedDensityError if a side is empty.
Rational density(const BipartiteGraph& g);

// Builds the Selection for (u_set, v_set); input need not be sorted and
// duplicates are removed. Out-of-range indices throw ArgumentError.
Selection induced_stats(const BipartiteGraph& g, std::span<const std::size_t> u_set,
                        std::span<const std::size_t> v_set);

std::size_t degree(const BipartiteGraph& g, Side side, std::size_t x);

// d(x, S): neighbours of x inside S, where S is a subset of the opposite side.
std::size_t restricted_degree(const BipartiteGraph& g, Side side, std::size_t x,
                              std::span<const std::size_t> other);
std::size_t restricted_degree(const BipartiteGraph& g, Side side, std::size_t x, const Bitset& other);

// Bitset over side s with the given members.
Bitset make_subset(const BipartiteGraph& g, Side s, std::span<const std::size_t> members);

}  // namespace qbc
