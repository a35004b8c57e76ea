#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>

#include "qbc/error.hpp"
#include "qbc/exact.hpp"

namespace qbc {
namespace {

using Clock = std::chrono::steady_clock;

struct Layout {
  Side small;
  std::size_t n_small = 0, n_other = 0;
  std::int64_t lo_small = 1, hi_small = 1, lo_other = 1, hi_other = 1;
  std::vector<std::uint64_t> masks;  // per other-side vertex: neighbours in the small side
};

struct Ranked {
  std::vector<std::size_t> order;    // other-side vertices, most neighbours in S first
  std::vector<std::int64_t> deg;     // d(order[t], S)
  std::vector<std::int64_t> prefix;  // prefix[k] = sum of the first k degrees
};

void rank(const Layout& L, std::uint64_t subset, std::int64_t s_size, Ranked& r) {
  // Counting sort by degree, descending; ties keep index order.
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(s_size) + 1);
  for (std::size_t y = 0; y < L.n_other; ++y) {
    buckets[static_cast<std::size_t>(std::popcount(L.masks[y] & subset))].push_back(y);
  }
  r.order.clear();
  r.deg.clear();
  for (std::size_t d = buckets.size(); d-- > 0;) {
    for (auto y : buckets[d]) {
      r.order.push_back(y);
      r.deg.push_back(static_cast<std::int64_t>(d));
    }
  }
  r.prefix.assign(r.order.size() + 1, 0);
  for (std::size_t t = 0; t < r.order.size(); ++t) r.prefix[t + 1] = r.prefix[t] + r.deg[t];
}

}  // namespace

SolutionPool sweep_oracle(const BipartiteGraph& g, const SearchParams& params) {
  params.validate();
  SolutionPool pool;
  if (g.u_count() == 0 || g.v_count() == 0) {
    pool.infeasible = pool.certified = true;
    return pool;
  }
  const SizeBounds b = params.bounds_for(g);

  Layout L;
  L.small = g.u_count() <= g.v_count() ? Side::U : Side::V;
  const Side other = opposite(L.small);
  L.n_small = g.side_count(L.small);
  L.n_other = g.side_count(other);
  if (L.n_small > params.oracle_cap) {
    throw ArgumentError("sweep oracle refuses a smaller side of " + std::to_string(L.n_small) + " vertices (cap " +
                        std::to_string(params.oracle_cap) + "); use branch_and_bound");
  }
  if (L.small == Side::U) {
    L.lo_small = b.min_u, L.hi_small = b.max_u, L.lo_other = b.min_v, L.hi_other = b.max_v;
  } else {
    L.lo_small = b.min_v, L.hi_small = b.max_v, L.lo_other = b.min_u, L.hi_other = b.max_u;
  }
  L.masks.assign(L.n_other, 0);
  for (std::size_t y = 0; y < L.n_other; ++y) {
    g.neighbours(other, y).for_each([&](std::size_t x) { L.masks[y] |= std::uint64_t{1} << x; });
  }

  const auto start = Clock::now();
  auto expired = [&] {
    return params.time_limit_seconds &&
           std::chrono::duration<double>(Clock::now() - start).count() > *params.time_limit_seconds;
  };
  auto sizes = [&](std::int64_t s_size, std::int64_t k) {
    return L.small == Side::U ? std::pair{s_size, k} : std::pair{k, s_size};
  };
  auto admissible = [&](std::int64_t s_size, std::int64_t k, std::int64_t edges) {
    auto [nu, nv] = sizes(s_size, k);
    return detail::balanced(params.theta, nu, nv) && at_least(edges, params.gamma, nu, nv);
  };

  // Pass 1: optimum value.
  std::optional<ObjectiveValue> best;
  Ranked r;
  const std::uint64_t full = std::uint64_t{1} << L.n_small;
  bool aborted = false;
  for (std::uint64_t subset = 1; subset < full; ++subset) {
    if ((subset & 0xff) == 0 && expired()) {
      aborted = true;
      break;
    }
    const auto s_size = static_cast<std::int64_t>(std::popcount(subset));
    if (s_size < L.lo_small || s_size > L.hi_small) continue;
    rank(L, subset, s_size, r);
    for (std::int64_t k = L.lo_other; k <= L.hi_other; ++k) {
      const std::int64_t e = r.prefix[static_cast<std::size_t>(k)];
      if (!admissible(s_size, k, e)) continue;
      auto [nu, nv] = sizes(s_size, k);
      auto val = ObjectiveValue::of(params.objective, e, nu, nv);
      if (!best || val > *best) best = val;
    }
  }
  pool.stats.nodes = full;
  if (!best) {
    pool.infeasible = !aborted;
    pool.certified = !aborted;
    return pool;
  }
  pool.optimum = best;
  pool.certified = !aborted;
  pool.bound_at_termination = best->to_double();

  // Pass 2: every selection attaining the optimum.
  const ObjectiveValue target = *best;
  std::vector<std::size_t> chosen;
  auto emit = [&](std::uint64_t subset) {
    std::vector<std::size_t> s_side;
    for (std::size_t x = 0; x < L.n_small; ++x) {
      if (subset >> x & 1) s_side.push_back(x);
    }
    std::vector<std::size_t> o_side;
    for (auto t : chosen) o_side.push_back(r.order[t]);
    Selection sel = L.small == Side::U ? induced_stats(g, s_side, o_side) : induced_stats(g, o_side, s_side);
    Solution sol{sel, target, pool.certified, target.to_double()};
    detail::check_solution(g, params, sol);
    pool.solutions.push_back(std::move(sol));
  };
  // Choose `k` more positions from [from, n) with degree sum >= need.
  auto enumerate = [&](auto&& self, std::uint64_t subset, std::size_t from, std::int64_t k, std::int64_t need) -> bool {
    ++pool.stats.pool_nodes;
    if (k == 0) {
      if (need > 0) return true;
      if (pool.solutions.size() >= params.pool_limit) {
        pool.truncated = true;
        return false;
      }
      emit(subset);
      return true;
    }
    for (std::size_t t = from; t + static_cast<std::size_t>(k) <= r.order.size(); ++t) {
      // Best completion from t onward is the next k entries (degrees descend).
      if (r.prefix[t + static_cast<std::size_t>(k)] - r.prefix[t] < need) break;
      chosen.push_back(t);
      bool go = self(self, subset, t + 1, k - 1, need - r.deg[t]);
      chosen.pop_back();
      if (!go) return false;
    }
    return true;
  };

  for (std::uint64_t subset = 1; subset < full && !pool.truncated; ++subset) {
    if ((subset & 0xff) == 0 && expired()) {
      pool.truncated = true;
      break;
    }
    const auto s_size = static_cast<std::int64_t>(std::popcount(subset));
    if (s_size < L.lo_small || s_size > L.hi_small) continue;
    rank(L, subset, s_size, r);
    for (std::int64_t k = L.lo_other; k <= L.hi_other; ++k) {
      const std::int64_t top = r.prefix[static_cast<std::size_t>(k)];
      if (!admissible(s_size, k, top)) continue;
      auto [nu, nv] = sizes(s_size, k);
      std::int64_t need = 0;
      if (params.objective == Objective::Size) {
        if (nu + nv != target.value().num()) continue;
        need = ceil_product(params.gamma, nu, nv);
      } else {
        if (ObjectiveValue::of(params.objective, top, nu, nv) != target) continue;
        need = top;
      }
      if (!enumerate(enumerate, subset, 0, k, need)) break;
    }
  }
  detail::finalize_pool(pool);
  return pool;
}

}  // namespace qbc
