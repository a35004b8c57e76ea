#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qbc/bounds.hpp"
#include "qbc/error.hpp"
#include "qbc/exact.hpp"
#include "qbc/io.hpp"
#include "qbc/quasidef.hpp"
#include "support.hpp"

using namespace qbc;
using qbc::testing::complete;
using qbc::testing::pattern_graph;
using qbc::testing::toy3x3;

namespace {

BipartiteGraph edge_list(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

BipartiteGraph pajek(const std::string& text) {
  std::istringstream in(text);
  return load_pajek_two_mode(in);
}

const std::string kData = QBC_DATA_DIR;

Selection sel(const BipartiteGraph& g, std::vector<std::size_t> u, std::vector<std::size_t> v) {
  return induced_stats(g, u, v);
}

}  // namespace

TEST_CASE("edge list loading") {
  auto g = edge_list("0 0\n0 1\n1 0");
  CHECK(g.u_count() == 2);
  CHECK(g.v_count() == 2);
  CHECK(g.edge_count() == 3);
  CHECK(edge_list("0 0\n0 0").edge_count() == 1);
  CHECK(edge_list("# c\n0,1\n2,0\n").u_count() == 3);
  CHECK(edge_list("0\t1\n").v_count() == 2);

  auto s = edge_list("alice x\nbob y\nalice y\n");
  CHECK(s.u_count() == 2);
  CHECK(s.label(Side::U, 1) == "bob");
  CHECK(s.label(Side::V, 0) == "x");
  CHECK(s.has_edge(0, 1));

  CHECK_THROWS_AS(edge_list("0 1\n2\n"), ParseError);
  CHECK_THROWS_AS(edge_list("0 -1\n"), ParseError);
  try {
    edge_list("0 1\n0 1 2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("Southern Women fixture") {
  auto g = load_graph(kData + "/southern_women.tsv");
  CHECK(g.u_count() == 18);
  CHECK(g.v_count() == 14);
  CHECK(g.edge_count() == 89);
  CHECK(density(g) == Rational(89, 252));
  CHECK(std::abs(density(g).to_double() - 0.353175) < 1e-6);
  CHECK(load_graph(kData + "/southern_women.tsv") == g);

  std::vector<std::size_t> all_u(18), all_v(14);
  for (std::size_t i = 0; i < 18; ++i) all_u[i] = i;
  for (std::size_t j = 0; j < 14; ++j) all_v[j] = j;
  auto full = induced_stats(g, all_u, all_v);
  CHECK(full.edges == 89);
  CHECK(is_gamma_quasi_biclique(g, full, Rational::parse("0.35")));
  CHECK_FALSE(is_gamma_quasi_biclique(g, full, Rational::parse("0.36")));
}

TEST_CASE("toy fixture matches the in-memory toy graph") {
  auto g = load_graph(kData + "/toy3x3.txt");
  CHECK(g.edges() == toy3x3().edges());
}

TEST_CASE("Pajek two-mode loading") {
  auto g = pajek("*Vertices 3 1\n1 \"a\"\n2 \"b\"\n3 \"c\"\n*Edges\n1 2\n1 3\n");
  CHECK(g.u_count() == 1);
  CHECK(g.v_count() == 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.label(Side::V, 1) == "c");

  auto l = pajek("% comment\n*Vertices 4 2\n*Edgeslist\n1 3 4\n2 3\n");
  CHECK(l.edge_count() == 3);

  CHECK_THROWS_AS(pajek("*Vertices 3 1\n*Edges\n2 3\n"), FormatError);
  CHECK_THROWS_AS(pajek("*Edges\n1 2\n"), FormatError);
  CHECK_THROWS_AS(pajek("*Vertices 3 1\n*Edges\n1 4\n"), ParseError);
}

TEST_CASE("density and induced statistics") {
  CHECK(density(complete(2, 3)) == Rational(1));
  CHECK(density(pattern_graph(2, 2, 0)) == Rational(0));
  CHECK_THROWS_AS(density(BipartiteGraph(0, 3, {})), UndefinedDensityError);

  auto g = toy3x3();
  auto s = sel(g, {0, 1}, {0, 1, 2});
  CHECK(s.edges == 6);
  CHECK(s.density() == Rational(1));
  auto e = sel(g, {}, {0});
  CHECK(e.edges == 0);
  CHECK_THROWS_AS(e.density(), UndefinedDensityError);
  CHECK_THROWS_AS(sel(g, {3}, {0}), ArgumentError);
  CHECK(sel(g, {1, 0, 1}, {2}).u == std::vector<std::size_t>{0, 1});

  CHECK(degree(complete(2, 3), Side::U, 0) == 3);
  std::vector<std::size_t> all{0, 1, 2}, none;
  CHECK(restricted_degree(g, Side::U, 2, all) == 2);
  CHECK(restricted_degree(g, Side::U, 0, none) == 0);
  CHECK_THROWS_AS(degree(g, Side::V, 5), ArgumentError);
}

TEST_CASE("graph invariants on random graphs") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto g = qbc::testing::random_graph(rng, 1 + rng() % 8, 1 + rng() % 8, 0.5);
    std::int64_t su = 0, sv = 0;
    for (std::size_t i = 0; i < g.u_count(); ++i) su += static_cast<std::int64_t>(degree(g, Side::U, i));
    for (std::size_t j = 0; j < g.v_count(); ++j) sv += static_cast<std::int64_t>(degree(g, Side::V, j));
    CHECK(su == g.edge_count());
    CHECK(sv == g.edge_count());
    const Rational d = density(g);
    CHECK(d >= Rational(0));
    CHECK(d <= Rational(1));
    CHECK((d == Rational(1)) == (g.edge_count() == static_cast<std::int64_t>(g.u_count() * g.v_count())));
    CHECK(g.transposed().transposed() == g);
  }
}

TEST_CASE("definition validators") {
  auto g = pattern_graph(2, 2, 0b0111);  // (1,1) missing
  auto s = sel(g, {0, 1}, {0, 1});
  CHECK(is_gamma_quasi_biclique(g, s, Rational::parse("0.75")));
  CHECK_FALSE(is_gamma_quasi_biclique(g, s, Rational::parse("0.76")));
  CHECK(is_delta_quasi_biclique(g, s, Rational::parse("0.5")));
  CHECK_FALSE(is_delta_quasi_biclique(g, s, Rational::parse("0.4")));
  CHECK(is_epsilon_quasi_biclique(g, s, 1));
  CHECK_FALSE(is_epsilon_quasi_biclique(g, s, 0));
  auto k = complete(3, 3);
  auto ks = sel(k, {0, 1, 2}, {0, 1, 2});
  CHECK(is_delta_quasi_biclique(k, ks, Rational(0)));
  CHECK(is_epsilon_quasi_biclique(k, ks, 0));
  CHECK_THROWS_AS(is_gamma_quasi_biclique(g, sel(g, {}, {0}), Rational(1)), UndefinedDensityError);
}

TEST_CASE("parameter conversions") {
  CHECK(delta_to_gamma(Rational::parse("0.3")) == Rational::parse("0.7"));
  CHECK(delta_to_gamma(Rational(0)) == Rational(1));
  CHECK(delta_to_gamma(Rational(1, 2)) == Rational(1, 2));
  CHECK_THROWS_AS(delta_to_gamma(Rational::parse("0.6")), ArgumentError);
  CHECK(epsilon_to_gamma(1, 5, 5) == Rational::parse("0.8"));
  CHECK(epsilon_to_gamma(0, 3, 9) == Rational(1));
  CHECK(epsilon_to_gamma(2, 4, 7) == Rational(1, 2));
  CHECK_THROWS_AS(epsilon_to_gamma(4, 4, 7), ArgumentError);
  CHECK_THROWS_AS(check_gamma(Rational(0)), ArgumentError);
  CHECK_THROWS_AS(check_gamma(Rational(3, 2)), ArgumentError);
  CHECK_THROWS_AS(check_theta(Rational(1)), ArgumentError);
  QuasiParams p;
  p.delta = Rational(1, 2);
  p.epsilon = 1;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
}

TEST_CASE("definition implications over every selection of small graphs") {
  std::mt19937_64 rng(5);
  const std::vector<Rational> deltas{Rational(0), Rational(1, 5), Rational(1, 3), Rational(1, 2)};
  for (int t = 0; t < 60; ++t) {
    const std::size_t nu = 1 + rng() % 4, nv = 1 + rng() % 4;
    auto g = qbc::testing::random_graph(rng, nu, nv, 0.6);
    for (std::uint64_t um = 1; um < (1ull << nu); ++um) {
      for (std::uint64_t vm = 1; vm < (1ull << nv); ++vm) {
        std::vector<std::size_t> u, v;
        for (std::size_t i = 0; i < nu; ++i) if (um >> i & 1) u.push_back(i);
        for (std::size_t j = 0; j < nv; ++j) if (vm >> j & 1) v.push_back(j);
        auto s = induced_stats(g, u, v);
        for (const auto& d : deltas) {
          if (is_delta_quasi_biclique(g, s, d)) CHECK(is_gamma_quasi_biclique(g, s, delta_to_gamma(d)));
        }
        const auto a = static_cast<std::int64_t>(u.size()), b = static_cast<std::int64_t>(v.size());
        for (std::int64_t eps = 0; eps < std::min(a, b); ++eps) {
          if (is_epsilon_quasi_biclique(g, s, eps)) CHECK(is_gamma_quasi_biclique(g, s, epsilon_to_gamma(eps, a, b)));
        }
        if (s.edges > 0) CHECK(is_gamma_quasi_biclique(g, s, s.density()));
        if (is_gamma_quasi_biclique(g, s, Rational(3, 5))) CHECK(is_gamma_quasi_biclique(g, s, Rational(1, 2)));
      }
    }
  }
}

TEST_CASE("size bound formulas") {
  CHECK(quasi_clique_upper_bound(3, 1.0) == doctest::Approx(3.0));
  CHECK(quasi_clique_upper_bound(0, 1.0) == doctest::Approx(1.0));
  CHECK(quasi_clique_upper_bound(89, 0.6) == doctest::Approx((0.6 + std::sqrt(427.8)) / 1.2));
  CHECK(quasi_clique_upper_bound(89, 0.6) == doctest::Approx(17.72).epsilon(1e-3));
  CHECK(balanced_biclique_upper_bound(1, 1.0) == doctest::Approx(2.0));
  CHECK(balanced_biclique_upper_bound(4, 1.0) == doctest::Approx(4.0));
  CHECK(balanced_biclique_upper_bound(89, 0.6) == doctest::Approx(24.36).epsilon(1e-3));
  CHECK(near_balanced_upper_bound(1, 1.0, 0.0) == doctest::Approx(2.0));
  CHECK(near_balanced_upper_bound(89, 0.6, 0.5) == doctest::Approx(43.06).epsilon(1e-3));
  CHECK(near_balanced_upper_bound(89, 0.6, 0.1) == doctest::Approx(26.96).epsilon(1e-3));
  CHECK_THROWS_AS(quasi_clique_upper_bound(3, 0.0), ArgumentError);
  CHECK_THROWS_AS(near_balanced_upper_bound(3, 0.5, 1.0), ArgumentError);
  CHECK(floor_bound(3.0 - 1e-12) == 3);
  CHECK(floor_bound(2.999) == 2);

  for (std::int64_t m = 0; m < 200; m += 7) {
    for (double g : {0.3, 0.5, 0.8, 1.0}) {
      CHECK(std::abs(near_balanced_upper_bound(m, g, 0.0) - balanced_biclique_upper_bound(m, g)) < 1e-12);
      CHECK(quasi_clique_upper_bound(m + 1, g) >= quasi_clique_upper_bound(m, g));
      CHECK(balanced_biclique_upper_bound(m, g) >= balanced_biclique_upper_bound(m, std::min(1.0, g + 0.1)));
    }
  }
}

TEST_CASE("edge-count range") {
  auto g = complete(4, 5);
  SizeBounds b{1, 3, 1, 4};
  CHECK(edge_count_bounds(g, Rational(1), b).k_max == 12);
  auto ten = pattern_graph(3, 4, 0b001111111111);
  auto r = edge_count_bounds(ten, Rational(1, 2), SizeBounds{2, 3, 2, 4});
  CHECK(ten.edge_count() == 10);
  CHECK(r.k_min == 2);
  auto empty = pattern_graph(2, 2, 0);
  CHECK_FALSE(edge_count_bounds(empty, Rational(1), SizeBounds{1, 2, 1, 2}).feasible());
  CHECK_THROWS_AS((SizeBounds{0, 1, 1, 1}.validate(g)), ArgumentError);
  CHECK_THROWS_AS((SizeBounds{1, 5, 1, 1}.validate(g)), ArgumentError);
  CHECK((SizeBounds::parse("1,2,3,4") == SizeBounds{1, 2, 3, 4}));
  CHECK((SizeBounds{1, 2, 3, 4}.to_string() == "[1,2]x[3,4]"));
}

TEST_CASE("degree-sum edge floor can cut off the optimum") {
  // K_{3,3} restricted to 1x1 selections: the only feasible shape has one
  // edge, but the degree floor asks for at least three.
  auto g = complete(3, 3);
  SizeBounds b{1, 1, 1, 1};
  CHECK(edge_count_bounds(g, Rational(1), b).feasible());
  CHECK_FALSE(edge_count_bounds(g, Rational(1), b, true).feasible());
  SearchParams p;
  p.size_bounds = b;
  auto res = solve(g, p, Method::Oracle);
  REQUIRE_FALSE(res.infeasible);
  CHECK(res.optimum->value() == Rational(2));
}

TEST_CASE("size bounds hold for brute-force optima") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    auto g = qbc::testing::random_graph(rng, 1 + rng() % 6, 1 + rng() % 6, 0.3 + 0.6 * (rng() % 100) / 100.0);
    for (const char* gs : {"0.5", "0.7", "1"}) {
      const Rational gamma = Rational::parse(gs);
      auto bf = qbc::testing::brute_force(g, gamma);
      if (!bf.feasible) continue;
      for (auto [um, vm] : bf.size_optima) {
        const auto a = std::popcount(um), b = std::popcount(vm);
        if (a == b) CHECK(a + b <= floor_bound(balanced_biclique_upper_bound(g.edge_count(), gamma.to_double())));
        // Smallest theta with (1 - theta) b <= a <= (1 + theta) b.
        const double theta = std::abs(a - b) / static_cast<double>(b);
        if (theta < 1) CHECK(a + b <= floor_bound(near_balanced_upper_bound(g.edge_count(), gamma.to_double(), theta)));
      }
    }
  }
}
