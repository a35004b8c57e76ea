#include "qbc/greedy.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "qbc/quasidef.hpp"

namespace qbc {
namespace {

Selection to_selection(const BipartiteGraph& g, const Bitset& us, const Bitset& vs) {
  auto u = us.indices(), v = vs.indices();
  return induced_stats(g, u, v);
}

// Mutable (U', V') pair with the per-vertex coverage test for one delta.
class WorkingSet {
 public:
  WorkingSet(const BipartiteGraph& g, const Rational& delta)
      : g_(g), keep_(Rational(1) - delta), sets_{Bitset(g.u_count()), Bitset(g.v_count())} {}

  Bitset& set(Side s) { return sets_[idx(s)]; }
  const Bitset& set(Side s) const { return sets_[idx(s)]; }
  std::int64_t count(Side s) const { return static_cast<std::int64_t>(set(s).count()); }

  std::int64_t coverage(Side s, std::size_t x) const {
    return static_cast<std::int64_t>(g_.neighbours(s, x).count_and(set(opposite(s))));
  }
  bool covered(Side s, std::size_t x) const { return at_least(coverage(s, x), keep_, count(opposite(s))); }

  bool valid() const {
    if (!set(Side::U).any() || !set(Side::V).any()) return false;
    bool ok = true;
    for (Side s : {Side::U, Side::V}) {
      set(s).for_each([&](std::size_t x) { ok = ok && covered(s, x); });
    }
    return ok;
  }

  // Would adding x to side s keep every vertex covered?
  bool can_add(Side s, std::size_t x) const {
    const Side o = opposite(s);
    if (!at_least(coverage(s, x), keep_, count(o))) return false;
    const std::int64_t grown = count(s) + 1;
    // Opposite vertices whose coverage is tight must all be adjacent to x.
    Bitset tight(g_.side_count(o));
    set(o).for_each([&](std::size_t y) {
      if (!at_least(coverage(o, y), keep_, grown)) tight.set(y);
    });
    const Bitset& nb = g_.neighbours(s, x);
    return nb.count_and(tight) == tight.count() && [&] {
      bool ok = true;
      tight.for_each([&](std::size_t y) { ok = ok && at_least(coverage(o, y) + 1, keep_, grown); });
      return ok;
    }();
  }

  Selection selection() const { return to_selection(g_, set(Side::U), set(Side::V)); }
  const Rational& keep() const { return keep_; }

 private:
  static std::size_t idx(Side s) { return s == Side::U ? 0 : 1; }
  const BipartiteGraph& g_;
  Rational keep_;
  Bitset sets_[2];
};

// Candidates outside the current set of `side`, best first.
std::vector<std::size_t> ranked_candidates(const BipartiteGraph& g, const WorkingSet& ws, Side side,
                                           const GreedyOptions& opt) {
  struct Key {
    std::int64_t primary, secondary;
    std::size_t index;
  };
  std::vector<Key> keys;
  for (std::size_t x = 0; x < g.side_count(side); ++x) {
    if (ws.set(side).test(x)) continue;
    auto restricted = ws.coverage(side, x);
    auto global = static_cast<std::int64_t>(g.neighbours(side, x).count());
    keys.push_back({opt.restricted_degree ? restricted : global, restricted, x});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return std::tie(b.primary, b.secondary, a.index) < std::tie(a.primary, a.secondary, b.index);
  });
  std::vector<std::size_t> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(k.index);
  return out;
}

void load(WorkingSet& ws, const Selection& s) {
  for (auto i : s.u) ws.set(Side::U).set(i);
  for (auto j : s.v) ws.set(Side::V).set(j);
}

void repair(const BipartiteGraph& g, WorkingSet& ws, GreedyTrace* trace) {
  while (!ws.valid()) {
    if (!ws.set(Side::U).any() || !ws.set(Side::V).any()) {
      throw HeuristicFailure("greedy repair emptied a side", Selection{});
    }
    // Remove the least covered violating vertex (fraction d / |other|).
    bool found = false;
    Side worst_side = Side::U;
    std::size_t worst = 0;
    Rational worst_ratio{0};
    for (Side s : {Side::U, Side::V}) {
      const std::int64_t other = ws.count(opposite(s));
      ws.set(s).for_each([&](std::size_t x) {
        if (ws.covered(s, x)) return;
        Rational r(ws.coverage(s, x), other);
        if (!found || r < worst_ratio) {
          found = true;
          worst_ratio = r;
          worst_side = s;
          worst = x;
        }
      });
    }
    ws.set(worst_side).reset(worst);
    if (trace) trace->steps.push_back({GreedyStep::Phase::Repair, worst_side, worst, false, {}});
    if (!ws.set(Side::U).any() || !ws.set(Side::V).any()) {
      throw HeuristicFailure("greedy repair emptied a side", Selection{});
    }
  }
  (void)g;
}

GreedySolution run_oriented(const BipartiteGraph& g, const Rational& delta, std::size_t tau,
                            const GreedyOptions& options) {
  GreedySolution out;
  out.trace.delta = delta;
  out.trace.tau = tau;
  out.trace.options = options;
  Selection built = greedy_build(g, delta, tau, options, &out.trace);

  WorkingSet ws(g, delta);
  load(ws, built);
  repair(g, ws, &out.trace);
  out.selection = greedy_augment(g, ws.selection(), delta, options, &out.trace);
  return out;
}

void finish(const BipartiteGraph& g, GreedySolution& sol, const Rational& delta) {
  sol.size = sol.selection.size();
  sol.density = sol.selection.density();
  sol.delta_valid = is_delta_quasi_biclique(g, sol.selection, delta);
  sol.gamma_valid = is_gamma_quasi_biclique(g, sol.selection, delta_to_gamma(delta));
  sol.trace.final_selection = sol.selection;
  if (!sol.delta_valid || !sol.gamma_valid) throw std::logic_error("greedy produced an invalid quasi-biclique");
}

bool better(const GreedySolution& a, const GreedySolution& b) {
  if (a.size != b.size) return a.size > b.size;
  return a.density > b.density;
}

}  // namespace

Selection greedy_build(const BipartiteGraph& g, const Rational& delta, std::size_t tau, const GreedyOptions& options,
                       GreedyTrace* trace) {
  check_delta(delta);
  if (tau < 1 || tau > g.u_count()) {
    throw ArgumentError("tau must lie in [1, |U|] = [1, " + std::to_string(g.u_count()) + "]");
  }
  WorkingSet ws(g, delta);
  ws.set(Side::V).set_all();
  Selection last;
  while (static_cast<std::size_t>(ws.count(Side::U)) < tau) {
    std::size_t u = ranked_candidates(g, ws, Side::U, options).front();
    ws.set(Side::U).set(u);
    GreedyStep step{GreedyStep::Phase::Build, Side::U, u, true, {}};
    const std::int64_t nu = ws.count(Side::U);
    ws.set(Side::V).for_each([&](std::size_t v) {
      if (!at_least(ws.coverage(Side::V, v), ws.keep(), nu)) step.pruned.push_back(v);
    });
    for (auto v : step.pruned) ws.set(Side::V).reset(v);
    if (trace) trace->steps.push_back(step);
    if (!ws.set(Side::V).any()) {
      throw HeuristicFailure("greedy build emptied V' at |U'| = " + std::to_string(nu), last);
    }
    last = ws.selection();
  }
  return last;
}

Selection greedy_augment(const BipartiteGraph& g, const Selection& selection, const Rational& delta,
                         const GreedyOptions& options, GreedyTrace* trace) {
  if (!selection.has_density() || !is_delta_quasi_biclique(g, selection, delta)) {
    throw ArgumentError("greedy_augment needs a delta-quasi-biclique as input");
  }
  WorkingSet ws(g, delta);
  load(ws, selection);
  auto add_one = [&](Side side) {
    for (auto x : ranked_candidates(g, ws, side, options)) {
      if (ws.can_add(side, x)) {
        ws.set(side).set(x);
        if (trace) trace->steps.push_back({GreedyStep::Phase::Augment, side, x, true, {}});
        return true;
      }
    }
    return false;
  };
  for (bool grew = true; grew;) {
    grew = false;
    while (add_one(Side::U)) grew = true;
    while (add_one(Side::V)) grew = true;
  }
  return ws.selection();
}

GreedySolution greedy_quasi_biclique(const BipartiteGraph& g, const Rational& delta, std::size_t tau,
                                     const GreedyOptions& options) {
  GreedySolution best = run_oriented(g, delta, tau, options);
  finish(g, best, delta);
  if (options.both_sides && tau <= g.v_count()) {
    try {
      BipartiteGraph t = g.transposed();
      GreedySolution alt = run_oriented(t, delta, tau, options);
      alt.trace.transposed = true;
      alt.selection = induced_stats(g, alt.selection.v, alt.selection.u);
      finish(g, alt, delta);
      if (better(alt, best)) best = std::move(alt);
    } catch (const HeuristicFailure&) {
    }
  }
  return best;
}

GreedySolution greedy_tau_sweep(const BipartiteGraph& g, const Rational& delta, const GreedyOptions& options) {
  std::optional<GreedySolution> best;
  for (std::size_t tau = 1; tau <= g.u_count(); ++tau) {
    try {
      GreedySolution s = greedy_quasi_biclique(g, delta, tau, options);
      if (!best || better(s, *best)) best = std::move(s);
    } catch (const HeuristicFailure&) {
    }
  }
  if (!best) throw HeuristicFailure("greedy failed for every tau", Selection{});
  return *best;
}

std::size_t default_tau(const BipartiteGraph& g) {
  std::size_t best = 0;
  bool first = true;
  for (std::size_t i = 0; i < g.u_count(); ++i) {
    std::size_t d = g.row(i).count();
    if (first || d < best) best = d;
    first = false;
  }
  return std::max<std::size_t>(best, 1);
}

Selection replay(const BipartiteGraph& g, const GreedyTrace& trace) {
  const BipartiteGraph oriented = trace.transposed ? g.transposed() : g;
  Bitset sets[2] = {Bitset(oriented.u_count()), Bitset(oriented.v_count())};
  sets[1].set_all();
  for (const auto& step : trace.steps) {
    Bitset& target = sets[step.side == Side::U ? 0 : 1];
    if (step.added) {
      target.set(step.vertex);
    } else {
      target.reset(step.vertex);
    }
    for (auto v : step.pruned) sets[1].reset(v);
  }
  Selection s = to_selection(oriented, sets[0], sets[1]);
  if (trace.transposed) s = induced_stats(g, s.v, s.u);
  return s;
}

}  // namespace qbc
