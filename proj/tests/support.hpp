#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "qbc/bigraph.hpp"
#include "qbc/rational.hpp"

namespace qbc::testing {

inline BipartiteGraph random_graph(std::mt19937_64& rng, std::size_t nu, std::size_t nv, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (coin(rng)) edges.emplace_back(i, j);
    }
  }
  return BipartiteGraph(nu, nv, edges);
}

// Graph whose edge set is the bit pattern `mask` over the nu x nv grid
// (bit i*nv + j is edge (i, j)).
inline BipartiteGraph pattern_graph(std::size_t nu, std::size_t nv, std::uint64_t mask) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (mask >> (i * nv + j) & 1) edges.emplace_back(i, j);
    }
  }
  return BipartiteGraph(nu, nv, edges);
}

inline BipartiteGraph complete(std::size_t nu, std::size_t nv) { return pattern_graph(nu, nv, (1ull << (nu * nv)) - 1); }

// 3x3 with the edge (2, 2) missing.
inline BipartiteGraph toy3x3() { return pattern_graph(3, 3, 0xff); }

struct BruteOptimum {
  bool feasible = false;
  std::int64_t best_size = 0;
  // Best e^2/(nu nv) as a fraction compared by cross-multiplication.
  std::int64_t q_num = 0, q_den = 1;
  // Every (u mask, v mask) reaching the best size / best quality.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> size_optima, quality_optima;
};

// Enumerates every pair of nonempty vertex subsets; independent of the
// library's solvers. Sides up to about 7 x 7.
inline BruteOptimum brute_force(const BipartiteGraph& g, const Rational& gamma) {
  BruteOptimum out;
  const std::size_t nu = g.u_count(), nv = g.v_count();
  std::vector<std::uint64_t> row(nu, 0);
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (g.has_edge(i, j)) row[i] |= 1ull << j;
    }
  }
  for (std::uint64_t us = 1; us < (1ull << nu); ++us) {
    for (std::uint64_t vs = 1; vs < (1ull << nv); ++vs) {
      std::int64_t e = 0;
      for (std::size_t i = 0; i < nu; ++i) {
        if (us >> i & 1) e += std::popcount(row[i] & vs);
      }
      const std::int64_t a = std::popcount(us), b = std::popcount(vs);
      // e / (a b) >= num / den
      if (e * gamma.den() < gamma.num() * a * b) continue;
      const std::int64_t size = a + b;
      if (!out.feasible || size > out.best_size) {
        out.best_size = size;
        out.size_optima.clear();
      }
      if (size == out.best_size) out.size_optima.emplace_back(us, vs);
      const std::int64_t qn = e * e, qd = a * b;
      if (!out.feasible || qn * out.q_den > out.q_num * qd) {
        out.q_num = qn;
        out.q_den = qd;
        out.quality_optima.clear();
      }
      if (qn * out.q_den == out.q_num * qd) out.quality_optima.emplace_back(us, vs);
      out.feasible = true;
    }
  }
  return out;
}

inline std::uint64_t mask_of(const std::vector<std::size_t>& xs) {
  std::uint64_t m = 0;
  for (auto x : xs) m |= 1ull << x;
  return m;
}

}  // namespace qbc::testing
