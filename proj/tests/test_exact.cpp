#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "qbc/error.hpp"
#include "qbc/exact.hpp"
#include "qbc/quasidef.hpp"
#include "support.hpp"

using namespace qbc;
using qbc::testing::brute_force;
using qbc::testing::mask_of;

namespace {

SearchParams params(const char* gamma, Objective obj = Objective::Size) {
  SearchParams p;
  p.gamma = Rational::parse(gamma);
  p.objective = obj;
  return p;
}

std::set<std::pair<std::uint64_t, std::uint64_t>> masks(const SolutionPool& pool) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& s : pool.solutions) out.emplace(mask_of(s.selection.u), mask_of(s.selection.v));
  return out;
}

}  // namespace

TEST_CASE("quality objective and its logarithm") {
  CHECK(quality_objective(6, 2, 3) == doctest::Approx(6.0));
  CHECK(f_log(6, 2, 3) == doctest::Approx(std::log(6.0)));
  CHECK(quality_objective(0, 2, 3) == 0.0);
  CHECK_THROWS_AS(f_log(0, 2, 3), DomainError);
  CHECK(quality_objective(8, 3, 3) == doctest::Approx(64.0 / 9.0));
  CHECK(std::exp(f_log(8, 3, 3)) == doctest::Approx(64.0 / 9.0));
  CHECK(ObjectiveValue::of(Objective::Quality, 8, 3, 3).value() == Rational(64, 9));
  CHECK_THROWS_AS(quality_objective(1, 0, 3), ArgumentError);
}

TEST_CASE("params validation") {
  auto p = params("0.5");
  p.pool_limit = 0;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = params("0.5");
  p.gamma = Rational(3, 2);
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = params("0.5");
  p.gamma = Rational(0);
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  CHECK_NOTHROW(params("1").validate());
}

TEST_CASE("small fixtures, both methods") {
  for (Method m : {Method::Oracle, Method::BranchAndBound}) {
    CAPTURE(to_string(m));
    auto k23 = qbc::testing::complete(2, 3);
    auto pool = solve(k23, params("1"), m);
    REQUIRE(pool.solutions.size() == 1);
    CHECK(pool.certified);
    CHECK(pool.optimum->value() == Rational(5));
    CHECK(pool.solutions[0].selection.u.size() == 2);
    CHECK(pool.solutions[0].selection.v.size() == 3);

    auto toy = qbc::testing::toy3x3();
    pool = solve(toy, params("0.9"), m);
    CHECK(pool.optimum->value() == Rational(5));
    for (const auto& s : pool.solutions) CHECK(s.selection.edges == 6);

    auto p = params("0.8");
    p.pool_limit = kUnlimitedPool;
    pool = solve(toy, p, m);
    REQUIRE(pool.solutions.size() == 1);
    CHECK(pool.optimum->value() == Rational(6));
    CHECK(pool.solutions[0].selection.density() == Rational(8, 9));
  }
}

TEST_CASE("pool at gamma 0.9 on the toy graph lists both 2x3 and 3x2 bicliques") {
  auto toy = qbc::testing::toy3x3();
  for (Method m : {Method::Oracle, Method::BranchAndBound}) {
    auto p = params("0.9");
    p.pool_limit = kUnlimitedPool;
    auto pool = solve(toy, p, m);
    REQUIRE(pool.solutions.size() == 2);
    // Canonical order: larger |U'| first.
    CHECK(pool.solutions[0].selection.u == std::vector<std::size_t>{0, 1, 2});
    CHECK(pool.solutions[0].selection.v == std::vector<std::size_t>{0, 1});
    CHECK(pool.solutions[1].selection.u == std::vector<std::size_t>{0, 1});
    CHECK(pool.solutions[1].selection.v == std::vector<std::size_t>{0, 1, 2});
    CHECK_FALSE(pool.truncated);

    p.pool_limit = 1;
    pool = solve(toy, p, m);
    CHECK(pool.solutions.size() == 1);
    CHECK(pool.truncated);
  }
}

TEST_CASE("balanced enumeration") {
  auto k23 = qbc::testing::complete(2, 3);
  for (Method m : {Method::Oracle, Method::BranchAndBound}) {
    auto p = params("1");
    p.theta = Rational(0);
    auto pool = enumerate_balanced(k23, p, m);
    CHECK(pool.optimum->value() == Rational(4));
    CHECK(pool.solutions[0].selection.u.size() == 2);
    CHECK(pool.solutions[0].selection.v.size() == 2);

    p.theta = Rational(1, 2);
    pool = enumerate_balanced(k23, p, m);
    CHECK(pool.optimum->value() == Rational(5));

    // 1 x 3 star: no square selection other than 1 x 1.
    auto star = qbc::testing::complete(1, 3);
    p.theta = Rational(0);
    pool = enumerate_balanced(star, p, m);
    CHECK(pool.optimum->value() == Rational(2));
  }
  CHECK_THROWS_AS(enumerate_balanced(k23, params("1")), ArgumentError);
}

TEST_CASE("infeasible instances report an empty certified pool") {
  BipartiteGraph empty_edges(3, 3, std::vector<Edge>{});
  for (Method m : {Method::Oracle, Method::BranchAndBound}) {
    auto pool = solve(empty_edges, params("0.5"), m);
    CHECK(pool.empty());
    CHECK(pool.infeasible);
    CHECK(pool.certified);
  }
  // Lower size bounds that no dense selection meets.
  auto g = qbc::testing::pattern_graph(3, 3, 0b100010001);
  auto p = params("0.9");
  p.size_bounds = SizeBounds{2, 3, 2, 3};
  for (Method m : {Method::Oracle, Method::BranchAndBound}) {
    auto pool = solve(g, p, m);
    CHECK(pool.infeasible);
  }
}

TEST_CASE("size bounds outside the graph are rejected") {
  auto toy = qbc::testing::toy3x3();
  auto p = params("0.5");
  p.size_bounds = SizeBounds{1, 4, 1, 3};
  CHECK_THROWS_AS(branch_and_bound(toy, p), ArgumentError);
  CHECK_THROWS_AS(sweep_oracle(toy, p), ArgumentError);
}

TEST_CASE("oracle refuses sides above its cap") {
  auto g = qbc::testing::complete(5, 6);
  auto p = params("1");
  p.oracle_cap = 4;
  CHECK_THROWS_AS(sweep_oracle(g, p), ArgumentError);
  p.oracle_cap = 5;
  CHECK(sweep_oracle(g, p).optimum->value() == Rational(11));
}

TEST_CASE("both methods match brute force, pools included") {
  std::mt19937_64 rng(7);
  const char* gammas[] = {"0.5", "0.6", "2/3", "0.75", "0.8", "1"};
  int cases = 0;
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t nu = 1 + rng() % 5, nv = 1 + rng() % 5;
    double dens = 0.2 + 0.7 * static_cast<double>(rng() % 100) / 100.0;
    auto g = qbc::testing::random_graph(rng, nu, nv, dens);
    for (const char* gs : gammas) {
      auto brute = brute_force(g, Rational::parse(gs));
      for (Objective obj : {Objective::Size, Objective::Quality}) {
        auto p = params(gs, obj);
        p.pool_limit = kUnlimitedPool;
        const auto& expect = obj == Objective::Size ? brute.size_optima : brute.quality_optima;
        std::set<std::pair<std::uint64_t, std::uint64_t>> want(expect.begin(), expect.end());
        for (Method m : {Method::Oracle, Method::BranchAndBound}) {
          CAPTURE(trial);
          CAPTURE(gs);
          CAPTURE(to_string(m));
          auto pool = solve(g, p, m);
          CHECK(pool.infeasible == !brute.feasible);
          CHECK(masks(pool) == want);
          if (brute.feasible && obj == Objective::Size) CHECK(pool.optimum->value() == Rational(brute.best_size));
          if (brute.feasible && obj == Objective::Quality)
            CHECK(pool.optimum->value() == Rational(brute.q_num, brute.q_den));
          ++cases;
        }
      }
    }
  }
  CHECK(cases > 0);
}

TEST_CASE("multi-threaded search gives the sequential optimum and pool") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = qbc::testing::random_graph(rng, 9, 11, 0.6);
    auto p = params("0.7");
    p.pool_limit = kUnlimitedPool;
    auto seq = branch_and_bound(g, p);
    p.threads = 4;
    auto par = branch_and_bound(g, p);
    CHECK(seq.optimum == par.optimum);
    CHECK(masks(seq) == masks(par));
  }
}

TEST_CASE("time-limited search returns an uncertified incumbent") {
  std::mt19937_64 rng(3);
  auto g = qbc::testing::random_graph(rng, 60, 60, 0.5);
  auto p = params("0.6");
  p.time_limit_seconds = 0.05;
  auto pool = branch_and_bound(g, p);
  CHECK_FALSE(pool.certified);
  REQUIRE_FALSE(pool.empty());
  const auto& s = pool.solutions[0];
  CHECK_FALSE(s.certified_optimal);
  CHECK(is_gamma_quasi_biclique(g, s.selection, p.gamma));
  CHECK(s.bound_at_termination >= s.objective.to_double());
}

TEST_CASE("optimum is nonincreasing in gamma") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = qbc::testing::random_graph(rng, 1 + rng() % 6, 1 + rng() % 6, 0.6);
    for (Objective obj : {Objective::Size, Objective::Quality}) {
      std::optional<ObjectiveValue> prev;
      for (const char* gs : {"0.5", "0.6", "0.7", "0.8", "0.9", "1"}) {
        auto pool = branch_and_bound(g, params(gs, obj));
        if (!pool.optimum) continue;
        if (prev) CHECK(*pool.optimum <= *prev);
        prev = pool.optimum;
      }
    }
  }
}

TEST_CASE("whole graph is optimal exactly when its density reaches gamma") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = qbc::testing::random_graph(rng, 1 + rng() % 5, 1 + rng() % 5, 0.7);
    if (g.edge_count() == 0) continue;
    // Smallest positive density any selection can have is 1 / (|U| |V|).
    for (Rational gamma : {Rational(1, static_cast<std::int64_t>(g.u_count() * g.v_count())), density(g),
                           Rational(3, 4)}) {
      SearchParams p;
      p.gamma = gamma;
      auto pool = branch_and_bound(g, p);
      const auto full = static_cast<std::int64_t>(g.u_count() + g.v_count());
      CHECK((pool.optimum->value() == Rational(full)) == (density(g) >= gamma));
    }
  }
}

TEST_CASE("optimal selections have a feasible selection one vertex smaller") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = qbc::testing::random_graph(rng, 2 + rng() % 4, 2 + rng() % 4, 0.6);
    for (const char* gs : {"0.5", "0.7", "0.9"}) {
      auto p = params(gs);
      p.pool_limit = kUnlimitedPool;
      auto pool = sweep_oracle(g, p);
      for (const auto& s : pool.solutions) {
        if (s.selection.size() <= 2) continue;
        SearchParams q = p;
        const auto nu = static_cast<std::int64_t>(s.selection.u.size());
        const auto nv = static_cast<std::int64_t>(s.selection.v.size());
        bool found = false;
        for (auto [a, b] : {std::pair{nu - 1, nv}, std::pair{nu, nv - 1}}) {
          if (a < 1 || b < 1) continue;
          q.size_bounds = SizeBounds{a, a, b, b};
          if (!sweep_oracle(g, q).infeasible) found = true;
        }
        CHECK(found);
      }
    }
  }
}
