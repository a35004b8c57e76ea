#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <string>
#include <mutex>
#include <thread>

#include "qbc/error.hpp"
#include "qbc/exact.hpp"

namespace qbc {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxRecursionVertices = 20000;

class Deadline {
 public:
  explicit Deadline(std::optional<double> seconds) : start_(Clock::now()), limit_(seconds) {}
  bool expired() {
    if (hit_.load(std::memory_order_relaxed)) return true;
    if (limit_ && std::chrono::duration<double>(Clock::now() - start_).count() > *limit_) {
      hit_.store(true, std::memory_order_relaxed);
    }
    return hit_.load(std::memory_order_relaxed);
  }
  bool hit() const { return hit_.load(std::memory_order_relaxed); }

 private:
  Clock::time_point start_;
  std::optional<double> limit_;
  std::atomic<bool> hit_{false};
};

// Best selection found so far, shared by all workers of the optimization pass.
class Incumbent {
 public:
  std::optional<ObjectiveValue> value() const {
    std::lock_guard lock(mu_);
    return value_;
  }
  std::uint64_t version() const { return version_.load(std::memory_order_acquire); }
  void offer(const ObjectiveValue& v, const Bitset& us, const Bitset& vs) {
    std::lock_guard lock(mu_);
    if (value_ && !(v > *value_)) return;
    value_ = v;
    u_ = us;
    v_ = vs;
    version_.fetch_add(1, std::memory_order_release);
  }
  std::pair<Bitset, Bitset> sets() const {
    std::lock_guard lock(mu_);
    return {u_, v_};
  }

 private:
  mutable std::mutex mu_;
  std::optional<ObjectiveValue> value_;
  Bitset u_, v_;
  std::atomic<std::uint64_t> version_{0};
};

// Subtree root handed to a worker.
struct Task {
  Bitset in[2], cand[2];
  bool fresh = false;
};

struct Shared {
  const BipartiteGraph& g;
  const SearchParams& params;
  SizeBounds bounds;
  EdgeRange k_range;
  Deadline& deadline;
};

inline std::size_t idx(Side s) { return s == Side::U ? 0 : 1; }

class Search {
 public:
  enum class Mode { Optimize, Collect, Split };

  Search(const Shared& sh, Mode mode) : sh_(sh), g_(sh.g), mode_(mode) {
    for (Side s : {Side::U, Side::V}) {
      in_[idx(s)] = Bitset(g_.side_count(s));
      cand_[idx(s)] = Bitset(g_.side_count(s));
    }
    d_in_[0].resize(g_.u_count());
    d_in_[1].resize(g_.v_count());
    d_cand_[0].resize(g_.u_count());
    d_cand_[1].resize(g_.v_count());
  }

  void set_incumbent(Incumbent* inc) { incumbent_ = inc; }
  void set_collect(ObjectiveValue target, SolutionPool* pool) {
    target_ = target;
    pool_ = pool;
  }
  void set_split(std::size_t depth, std::vector<Task>* tasks) {
    split_depth_ = depth;
    tasks_ = tasks;
  }

  void load(const Task& t) {
    for (int k = 0; k < 2; ++k) {
      in_[k] = t.in[k];
      cand_[k] = t.cand[k];
    }
  }
  void load_root() {
    cand_[0].set_all();
    cand_[1].set_all();
  }

  // Returns false when the search stopped early (deadline or full pool).
  bool run(bool fresh) { return node(fresh, 0); }

  std::uint64_t nodes() const { return nodes_; }
  // Largest bound among nodes abandoned by an early stop.
  std::optional<ObjectiveValue> residual() const { return residual_; }
  std::optional<ObjectiveValue> root_bound() const { return root_bound_; }

 private:
  bool node(bool fresh, std::size_t depth) {
    ++nodes_;
    if ((nodes_ & 255) == 0 && sh_.deadline.expired()) return false;

    compute_degrees();
    if (fresh) evaluate_in_set();
    if (stopped_) return false;

    std::optional<ObjectiveValue> bound = node_bound();
    if (depth == 0 && !root_bound_) root_bound_ = bound;
    if (!bound || pruned(*bound)) return true;

    if (mode_ == Mode::Split && depth >= split_depth_) {
      tasks_->push_back(Task{{in_[0], in_[1]}, {cand_[0], cand_[1]}, false});
      return true;
    }

    auto [side, x] = branching_vertex();
    if (side < 0) return true;
    const std::size_t s = static_cast<std::size_t>(side);
    cand_[s].reset(x);
    in_[s].set(x);
    bool ok = node(true, depth + 1);
    in_[s].reset(x);
    if (ok) ok = node(false, depth + 1);
    cand_[s].set(x);
    if (!ok) abandon(*bound);
    return ok;
  }

  void abandon(const ObjectiveValue& b) {
    if (!residual_ || b > *residual_) residual_ = b;
  }

  void compute_degrees() {
    for (int s = 0; s < 2; ++s) {
      const int o = 1 - s;
      const Side side = s == 0 ? Side::U : Side::V;
      n_in_[s] = static_cast<std::int64_t>(in_[s].count());
      n_cand_[s] = static_cast<std::int64_t>(cand_[s].count());
      auto fill = [&](std::size_t x) {
        const Bitset& nb = g_.neighbours(side, x);
        d_in_[s][x] = static_cast<std::int64_t>(nb.count_and(in_[o]));
        d_cand_[s][x] = static_cast<std::int64_t>(nb.count_and(cand_[o]));
      };
      in_[s].for_each(fill);
      cand_[s].for_each(fill);
    }
  }

  void evaluate_in_set() {
    const std::int64_t nu = n_in_[0], nv = n_in_[1];
    if (nu == 0 || nv == 0 || !sh_.bounds.contains(nu, nv)) return;
    if (!detail::balanced(sh_.params.theta, nu, nv)) return;
    std::int64_t e = 0;
    in_[0].for_each([&](std::size_t u) { e += d_in_[0][u]; });
    if (!at_least(e, sh_.params.gamma, nu, nv)) return;
    ObjectiveValue val = ObjectiveValue::of(sh_.params.objective, e, nu, nv);
    if (mode_ == Mode::Collect) {
      if (val != target_) return;
      if (pool_->solutions.size() >= sh_.params.pool_limit) {
        pool_->truncated = true;
        stopped_ = true;
        return;
      }
      Solution sol;
      sol.selection.u = in_[0].indices();
      sol.selection.v = in_[1].indices();
      sol.selection.edges = e;
      sol.objective = val;
      pool_->solutions.push_back(std::move(sol));
    } else {
      incumbent_->offer(val, in_[0], in_[1]);
    }
  }

  bool pruned(const ObjectiveValue& bound) {
    if (mode_ == Mode::Collect) return bound < target_;
    if (incumbent_->version() != seen_version_) {
      seen_version_ = incumbent_->version();
      cached_ = incumbent_->value();
    }
    return cached_ && bound <= *cached_;
  }

  // Per side s and per size of the opposite side: prefix sums of the capped
  // degrees of candidate s-vertices, sorted descending.
  void capped_prefix(int s, std::int64_t lo_o, std::int64_t hi_o) {
    const int o = 1 - s;
    const auto span = static_cast<std::size_t>(hi_o - lo_o + 1);
    const auto width = static_cast<std::size_t>(n_cand_[s] + 1);
    prefix_[s].assign(span * width, 0);
    base_[s].assign(span, 0);
    std::int64_t max_cand = 0;
    cand_[s].for_each([&](std::size_t x) { max_cand = std::max(max_cand, d_cand_[s][x]); });
    in_[s].for_each([&](std::size_t x) { max_cand = std::max(max_cand, d_cand_[s][x]); });
    std::vector<std::int64_t>& vals = scratch_;
    std::int64_t computed_for = -1;
    for (std::int64_t n_o = lo_o; n_o <= hi_o; ++n_o) {
      const std::int64_t extra = n_o - n_in_[o];
      const auto row = static_cast<std::size_t>(n_o - lo_o);
      const std::int64_t key = std::min(extra, max_cand);
      if (computed_for >= 0 && key == computed_for) {
        std::copy_n(prefix_[s].begin() + static_cast<std::ptrdiff_t>((row - 1) * width), width,
                    prefix_[s].begin() + static_cast<std::ptrdiff_t>(row * width));
        base_[s][row] = base_[s][row - 1];
        continue;
      }
      computed_for = key;
      std::int64_t base = 0;
      in_[s].for_each([&](std::size_t x) { base += d_in_[s][x] + std::min(d_cand_[s][x], extra); });
      base_[s][row] = base;
      vals.clear();
      cand_[s].for_each([&](std::size_t x) { vals.push_back(d_in_[s][x] + std::min(d_cand_[s][x], extra)); });
      std::sort(vals.begin(), vals.end(), std::greater<>());
      auto* p = &prefix_[s][row * width];
      for (std::size_t t = 0; t < vals.size(); ++t) p[t + 1] = p[t] + vals[t];
    }
  }

  std::optional<ObjectiveValue> node_bound() {
    const auto& b = sh_.bounds;
    const std::int64_t lo_u = std::max(b.min_u, n_in_[0]), hi_u = std::min(b.max_u, n_in_[0] + n_cand_[0]);
    const std::int64_t lo_v = std::max(b.min_v, n_in_[1]), hi_v = std::min(b.max_v, n_in_[1] + n_cand_[1]);
    if (lo_u > hi_u || lo_v > hi_v) return std::nullopt;

    // Edge budget of the subproblem.
    std::int64_t budget = 0;
    auto add = [&](std::size_t u) { budget += d_in_[0][u] + d_cand_[0][u]; };
    in_[0].for_each(add);
    cand_[0].for_each(add);
    if (budget < sh_.k_range.k_min) return std::nullopt;

    std::int64_t size_cap = std::numeric_limits<std::int64_t>::max();
    if (sh_.params.theta) {
      const double gamma = sh_.params.gamma.to_double(), theta = sh_.params.theta->to_double();
      size_cap = floor_bound(*sh_.params.theta == Rational(0) ? balanced_biclique_upper_bound(budget, gamma)
                                                              : near_balanced_upper_bound(budget, gamma, theta));
    }

    capped_prefix(0, lo_v, hi_v);
    capped_prefix(1, lo_u, hi_u);
    const auto width_u = static_cast<std::size_t>(n_cand_[0] + 1);
    const auto width_v = static_cast<std::size_t>(n_cand_[1] + 1);

    std::optional<ObjectiveValue> best;
    for (std::int64_t nu = hi_u; nu >= lo_u; --nu) {
      for (std::int64_t nv = hi_v; nv >= lo_v; --nv) {
        if (nu + nv > size_cap) continue;
        if (sh_.params.objective == Objective::Size && best && nu + nv <= best->value().num()) break;
        if (!detail::balanced(sh_.params.theta, nu, nv)) continue;
        const auto rv = static_cast<std::size_t>(nv - lo_v), ru = static_cast<std::size_t>(nu - lo_u);
        std::int64_t from_u = base_[0][rv] + prefix_[0][rv * width_u + static_cast<std::size_t>(nu - n_in_[0])];
        std::int64_t from_v = base_[1][ru] + prefix_[1][ru * width_v + static_cast<std::size_t>(nv - n_in_[1])];
        std::int64_t cap = std::min({from_u, from_v, budget, sh_.k_range.k_max, nu * nv});
        if (cap < sh_.k_range.k_min || !at_least(cap, sh_.params.gamma, nu, nv)) continue;
        ObjectiveValue val = ObjectiveValue::of(sh_.params.objective, cap, nu, nv);
        if (!best || val > *best) best = val;
      }
    }
    return best;
  }

  // Undecided vertex with the most neighbours still available.
  std::pair<int, std::size_t> branching_vertex() const {
    int side = -1;
    std::size_t vertex = 0;
    std::int64_t best = -1;
    for (int s = 0; s < 2; ++s) {
      cand_[s].for_each([&](std::size_t x) {
        std::int64_t d = d_in_[s][x] + d_cand_[s][x];
        if (d > best) {
          best = d;
          side = s;
          vertex = x;
        }
      });
    }
    return {side, vertex};
  }

  const Shared& sh_;
  const BipartiteGraph& g_;
  Mode mode_;
  Bitset in_[2], cand_[2];
  std::vector<std::int64_t> d_in_[2], d_cand_[2];
  std::int64_t n_in_[2] = {0, 0}, n_cand_[2] = {0, 0};
  std::vector<std::int64_t> prefix_[2], base_[2], scratch_;

  Incumbent* incumbent_ = nullptr;
  std::uint64_t seen_version_ = ~std::uint64_t{0};
  std::optional<ObjectiveValue> cached_;

  ObjectiveValue target_;
  SolutionPool* pool_ = nullptr;
  bool stopped_ = false;

  std::size_t split_depth_ = 0;
  std::vector<Task>* tasks_ = nullptr;

  std::uint64_t nodes_ = 0;
  std::optional<ObjectiveValue> residual_;
  std::optional<ObjectiveValue> root_bound_;
};

// Stars, single edges and the whole graph give cheap starting incumbents.
void seed(const Shared& sh, Incumbent& inc) {
  const auto& g = sh.g;
  auto try_sets = [&](const Bitset& us, const Bitset& vs) {
    const auto nu = static_cast<std::int64_t>(us.count()), nv = static_cast<std::int64_t>(vs.count());
    if (nu == 0 || nv == 0 || !sh.bounds.contains(nu, nv) || !detail::balanced(sh.params.theta, nu, nv)) return;
    std::int64_t e = 0;
    us.for_each([&](std::size_t u) { e += static_cast<std::int64_t>(g.row(u).count_and(vs)); });
    if (!at_least(e, sh.params.gamma, nu, nv)) return;
    inc.offer(ObjectiveValue::of(sh.params.objective, e, nu, nv), us, vs);
  };
  Bitset all_u(g.u_count()), all_v(g.v_count());
  all_u.set_all();
  all_v.set_all();
  try_sets(all_u, all_v);
  for (std::size_t u = 0; u < g.u_count(); ++u) {
    Bitset one(g.u_count());
    one.set(u);
    try_sets(one, g.row(u));
  }
  for (std::size_t v = 0; v < g.v_count(); ++v) {
    Bitset one(g.v_count());
    one.set(v);
    try_sets(g.column(v), one);
  }
}

}  // namespace

SolutionPool branch_and_bound(const BipartiteGraph& g, const SearchParams& params) {
  params.validate();
  SolutionPool pool;
  if (g.u_count() == 0 || g.v_count() == 0) {
    pool.infeasible = pool.certified = true;
    return pool;
  }
  if (g.u_count() + g.v_count() > kMaxRecursionVertices) {
    throw ArgumentError("branch_and_bound supports at most " + std::to_string(kMaxRecursionVertices) +
                        " vertices; use the greedy heuristic for larger graphs");
  }
  Deadline deadline(params.time_limit_seconds);
  Shared sh{g, params, params.bounds_for(g), {}, deadline};
  sh.k_range = edge_count_bounds(g, params.gamma, sh.bounds, params.use_degree_bounds);
  if (!sh.k_range.feasible()) {
    pool.infeasible = pool.certified = true;
    return pool;
  }

  // Pass 1: optimum value.
  Incumbent inc;
  seed(sh, inc);
  bool complete = true;
  std::optional<ObjectiveValue> residual;
  auto merge_residual = [&](const std::optional<ObjectiveValue>& r) {
    if (r && (!residual || *r > *residual)) residual = r;
  };

  if (params.threads <= 1) {
    Search s(sh, Search::Mode::Optimize);
    s.set_incumbent(&inc);
    s.load_root();
    complete = s.run(false);
    merge_residual(s.residual());
    pool.stats.nodes = s.nodes();
  } else {
    std::vector<Task> tasks;
    std::size_t depth = 2;
    while ((std::size_t{1} << depth) < 8 * params.threads) ++depth;
    Search splitter(sh, Search::Mode::Split);
    splitter.set_incumbent(&inc);
    splitter.set_split(depth, &tasks);
    splitter.load_root();
    complete = splitter.run(false);
    merge_residual(splitter.residual());
    pool.stats.nodes = splitter.nodes();

    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> all_done{true};
    std::mutex res_mu;
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < params.threads; ++w) {
      workers.emplace_back([&] {
        Search s(sh, Search::Mode::Optimize);
        s.set_incumbent(&inc);
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
          if (deadline.expired()) {
            all_done = false;
            break;
          }
          s.load(tasks[t]);
          if (!s.run(tasks[t].fresh)) all_done = false;
        }
        nodes += s.nodes();
        std::lock_guard lock(res_mu);
        merge_residual(s.residual());
      });
    }
    workers.clear();
    pool.stats.nodes += nodes.load();
    if (!all_done) {
      complete = false;
      merge_residual(splitter.root_bound());
    }
  }

  auto best = inc.value();
  if (!complete) {
    // Time limit: report the incumbent, uncertified.
    pool.certified = false;
    pool.optimum = best;
    double bound = residual ? residual->to_double() : 0.0;
    if (best) bound = std::max(bound, best->to_double());
    pool.bound_at_termination = bound;
    if (best) {
      auto [us, vs] = inc.sets();
      auto u = us.indices(), v = vs.indices();
      Solution sol{induced_stats(g, u, v), *best, false, bound};
      detail::check_solution(g, params, sol);
      pool.solutions.push_back(std::move(sol));
    }
    return pool;
  }
  if (!best) {
    pool.infeasible = pool.certified = true;
    return pool;
  }
  pool.certified = true;
  pool.optimum = best;
  pool.bound_at_termination = best->to_double();

  // Pass 2: enumerate the optimal selections, sequentially for a
  // schedule-independent pool.
  Search collect(sh, Search::Mode::Collect);
  collect.set_collect(*best, &pool);
  collect.load_root();
  if (!collect.run(false) && !pool.truncated) pool.truncated = true;
  pool.stats.pool_nodes = collect.nodes();
  for (auto& sol : pool.solutions) {
    sol.certified_optimal = true;
    sol.bound_at_termination = pool.bound_at_termination;
    detail::check_solution(g, params, sol);
  }
  detail::finalize_pool(pool);
  return pool;
}

}  // namespace qbc
