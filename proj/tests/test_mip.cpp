#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mip_brute.hpp"
#include "qbc/exact.hpp"
#include "qbc/mip.hpp"
#include "support.hpp"

using namespace qbc;

namespace {

std::size_t count_prefix(const MipInstance& mip, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& v : mip.variables()) n += v.name.rfind(prefix, 0) == 0;
  return n;
}

std::size_t count_rows(const MipInstance& mip, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& c : mip.constraints()) n += c.name.rfind(prefix, 0) == 0;
  return n;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Optimal assignment for a selection: u, v, y from the sets, z from the sizes.
Assignment assignment_for(const BipartiteGraph& g, const MipInstance& mip, const std::vector<std::size_t>& us,
                          const std::vector<std::size_t>& vs) {
  Assignment a;
  for (const auto& v : mip.variables()) a.values[v.name] = 0;
  for (auto i : us) a.values["u_" + std::to_string(i)] = 1;
  for (auto j : vs) a.values["v_" + std::to_string(j)] = 1;
  std::int64_t e = 0;
  for (auto [i, j] : g.edges()) {
    bool in = std::find(us.begin(), us.end(), i) != us.end() && std::find(vs.begin(), vs.end(), j) != vs.end();
    a.values["y_" + std::to_string(i) + "_" + std::to_string(j)] = in;
    e += in;
  }
  a.values["z_" + std::to_string(us.size()) + "_" + std::to_string(vs.size())] = 1;
  a.values["z1_" + std::to_string(us.size())] = 1;
  a.values["z2_" + std::to_string(vs.size())] = 1;
  a.values["w_" + std::to_string(e)] = 1;
  std::erase_if(a.values, [&](const auto& kv) { return !mip.find(kv.first); });
  return a;
}

}  // namespace

TEST_CASE("model 1 linearized counts") {
  auto k22 = qbc::testing::complete(2, 2);
  auto mip = build_model1(k22, Rational(1), SizeBounds{1, 2, 1, 2});
  CHECK(count_prefix(mip, "u_") + count_prefix(mip, "v_") == 4);
  CHECK(count_prefix(mip, "y_") == 4);
  CHECK(count_prefix(mip, "z_") == 4);
  CHECK(mip.count(VarKind::Binary) == 12);
  CHECK(count_rows(mip, "link_") == 3 * 4);
  CHECK(mip.is_linear());

  // Dense worst case: |U| + |V| binaries plus |E| + |U||V| more.
  auto k34 = qbc::testing::complete(3, 4);
  mip = build_model1(k34, Rational(1, 2), SizeBounds::unconstrained(k34));
  CHECK(mip.variables().size() == 7 + 12 + 12);
}

TEST_CASE("model 1 rejects bounds beyond the graph") {
  auto toy = qbc::testing::toy3x3();
  CHECK_THROWS_AS(build_model1(toy, Rational(1), SizeBounds{4, 4, 1, 3}), ArgumentError);
  CHECK_THROWS_AS(build_model2(toy, Rational(1), SizeBounds{1, 3, 0, 3}), ArgumentError);
}

TEST_CASE("model 1 bilinear form") {
  auto toy = qbc::testing::toy3x3();
  auto mip = build_model1(toy, Rational(4, 5), SizeBounds::unconstrained(toy), Model1Form::Bilinear);
  CHECK_FALSE(mip.is_linear());
  CHECK(count_prefix(mip, "z1_") == 3);
  CHECK(count_prefix(mip, "z2_") == 3);
  CHECK(mip.variables()[*mip.find("z1_1")].kind == VarKind::Continuous);
  CHECK_THROWS_AS(emit_lp(mip), MipError);
  auto text = emit_lp(mip, {.allow_quadratic = true});
  CHECK(text.find("[") != std::string::npos);
  CHECK(structurally_equal(parse_lp(text), mip));
}

TEST_CASE("model 2 coefficients, k range and variable count") {
  auto toy = qbc::testing::toy3x3();
  auto mip = build_model2(toy, Rational(4, 5), SizeBounds::unconstrained(toy));
  CHECK(mip.metadata.k_range.k_min == 1);
  CHECK(mip.metadata.k_range.k_max == 8);
  CHECK(count_prefix(mip, "w_") == 8);
  const auto w6 = *mip.find("w_6");
  double coef = 0;
  for (const auto& t : mip.objective()) {
    if (t.var == w6) coef = t.coef;
  }
  CHECK(coef == doctest::Approx(2 * std::log(6.0)));
  CHECK(coef == doctest::Approx(3.5835).epsilon(1e-4));

  // Untightened bilinear form has 2(|U| + |V|) + 2|E| variables.
  for (auto g : {toy, qbc::testing::complete(2, 3), qbc::testing::pattern_graph(3, 4, 0b101101100111)}) {
    auto m2 = build_model2(g, Rational(1, 2), SizeBounds::unconstrained(g), {.bilinear = true, .tighten_k = false});
    CHECK(m2.variables().size() == 2 * (g.u_count() + g.v_count()) + 2 * static_cast<std::size_t>(g.edge_count()));
  }

  BipartiteGraph none(2, 2, std::vector<Edge>{});
  CHECK_THROWS_AS(build_model2(none, Rational(1), SizeBounds::unconstrained(none)), InfeasibleError);
}

TEST_CASE("balance constraints") {
  auto k23 = qbc::testing::complete(2, 3);
  auto mip = build_model1(k23, Rational(1), SizeBounds::unconstrained(k23));
  CHECK_THROWS_AS(add_balance_constraints(mip, Rational(1)), ArgumentError);

  auto solve01 = [](const MipInstance& m) { return *qbc::testing::ZeroOneBrute(m).maximize(); };
  CHECK(solve01(mip) == doctest::Approx(5));
  auto balanced = mip;
  add_balance_constraints(balanced, Rational(0));
  CHECK(solve01(balanced) == doctest::Approx(4));
  auto half = mip;
  add_balance_constraints(half, Rational(1, 2));
  CHECK(solve01(half) == doctest::Approx(5));
  auto full = assignment_for(k23, half, {0, 1}, {0, 1, 2});
  CHECK_FALSE(first_violation(half, full.values));

  // Indicator-sum rows hold for every assignment: 1 >= (1 - theta) and 1 <= (1 + theta).
  auto indicator = mip;
  add_balance_constraints(indicator, Rational(0), true);
  CHECK(solve01(indicator) == doctest::Approx(5));
  auto star = assignment_for(k23, indicator, {0}, {0, 1, 2});
  CHECK_FALSE(first_violation(indicator, star.values));
  CHECK(first_violation(balanced, assignment_for(k23, balanced, {0}, {0, 1, 2}).values) == "balance_lo");

  auto bil = build_model1(k23, Rational(1), SizeBounds::unconstrained(k23), Model1Form::Bilinear);
  add_balance_constraints(bil, Rational(0));
  auto sq = assignment_for(k23, bil, {0, 1}, {0, 1});
  CHECK_FALSE(first_violation(bil, sq.values));
  CHECK(first_violation(bil, assignment_for(k23, bil, {0, 1}, {0, 1, 2}).values) == "balance_lo");
}

TEST_CASE("LP emission is deterministic and matches the golden file") {
  auto k11 = qbc::testing::complete(1, 1);
  auto mip = build_model1(k11, Rational(1), SizeBounds::unconstrained(k11));
  const std::string a = emit_lp(mip), b = emit_lp(build_model1(k11, Rational(1), SizeBounds::unconstrained(k11)));
  CHECK(a == b);
  CHECK(a == read_file(std::filesystem::path(QBC_TEST_DIR) / "golden" / "k11_model1lin.lp"));
}

TEST_CASE("LP round trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = qbc::testing::random_graph(rng, 1 + rng() % 6, 1 + rng() % 6, 0.6);
    if (g.edge_count() == 0) continue;
    auto b = SizeBounds::unconstrained(g);
    std::vector<MipInstance> all{build_model1(g, Rational(3, 5), b), build_model2(g, Rational(7, 10), b)};
    auto bal = build_model1(g, Rational(2, 3), b);
    add_balance_constraints(bal, Rational(1, 4));
    all.push_back(bal);
    for (const auto& m : all) {
      auto text = emit_lp(m);
      auto back = parse_lp(text);
      CHECK(structurally_equal(back, m));
      CHECK(emit_lp(back).substr(emit_lp(back).find('\n')) == text.substr(text.find('\n')));
    }
  }
}

TEST_CASE("LP reader accepts hand-written files and rejects junk") {
  auto m = parse_lp(
      "\\ comment\nmaximize\n obj: 2 x + 3 y\nsubject to\n c1: x + y <= 1\n c2: x - y\n   >= -1\nbounds\n"
      " x free\n -inf <= y <= 4\ngenerals\n y\nend\n");
  REQUIRE(m.variables().size() == 2);
  CHECK(m.variables()[0].name == "x");
  CHECK(std::isinf(m.variables()[0].lower));
  CHECK(m.variables()[1].kind == VarKind::Integer);
  CHECK(m.variables()[1].upper == 4);
  CHECK(m.constraints()[1].rhs == -1);

  auto d = parse_lp("Maximize\n x\nSubject To\n x <= 3\nEnd\n");
  CHECK(d.constraints()[0].name == "c1");
  CHECK(d.variables()[0].upper == std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(parse_lp("Maximize\n obj: x\nSubject To\n c: x <= \nEnd\n"), ParseError);
  CHECK_THROWS_AS(parse_lp("Subject To\n c: x <= 1\nEnd\n"), ParseError);
  CHECK_THROWS_AS(parse_lp("Maximize\n obj: x\n"), ParseError);
  CHECK_THROWS_AS(parse_lp("Maximize\n obj: x $ y\nEnd\n"), ParseError);
}

TEST_CASE("instance validation") {
  MipInstance m;
  m.add_variable("x", VarKind::Binary);
  CHECK_THROWS_AS(m.add_variable("x", VarKind::Binary), MipError);
  CHECK_THROWS_AS(m.add_variable("bad name", VarKind::Binary), MipError);
  CHECK_THROWS_AS(m.add_constraint({"c", {{3, 1.0}}, {}, Relation::Le, 1}), MipError);
  m.add_constraint({"c", {{0, 1.0}, {0, 2.0}}, {}, Relation::Le, 1});
  CHECK(m.constraints()[0].linear.size() == 1);
  CHECK(m.constraints()[0].linear[0].coef == 3.0);
  CHECK_THROWS_AS(m.add_constraint({"c", {{0, 1.0}}, {}, Relation::Le, 1}), MipError);
}

TEST_CASE("verify_assignment") {
  auto k23 = qbc::testing::complete(2, 3);
  auto mip = build_model1(k23, Rational(1), SizeBounds::unconstrained(k23));
  auto a = assignment_for(k23, mip, {0, 1}, {0, 1, 2});
  auto s = verify_assignment(k23, mip, a, Rational(1));
  CHECK(s.u.size() == 2);
  CHECK(s.v.size() == 3);
  CHECK(objective_value(mip, a.values) == 5);

  auto bad = a;
  bad.values["u_0"] = 0;
  bad.values["u_1"] = 0;
  bad.values["z_2_3"] = 0;
  bad.values["z_1_3"] = 0;
  bad.values["u_1"] = 1;
  bad.values["z_1_3"] = 1;
  // y_0_* still 1 while u_0 = 0.
  try {
    verify_assignment(k23, mip, bad, Rational(1));
    FAIL("expected a verification failure");
  } catch (const VerificationError& e) {
    CHECK(std::string(e.what()).find("link_u_0_") != std::string::npos);
  }

  auto missing = a;
  missing.values.erase("y_1_2");
  CHECK_THROWS_AS(verify_assignment(k23, mip, missing, Rational(1)), VerificationError);

  Assignment inf;
  inf.status = "infeasible";
  CHECK_THROWS_AS(verify_assignment(k23, mip, inf, Rational(1)), VerificationError);
}

TEST_CASE("solution files") {
  auto a = parse_solution("# solver output\nstatus optimal\nobjective 2\nu_0 1\nv_0 0.9999999\n");
  CHECK(*a.objective == 2);
  CHECK(a.values.size() == 2);
  CHECK_THROWS_AS(parse_solution("u_0 one\n"), ParseError);
  CHECK_THROWS_AS(parse_solution("u_0 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_solution("u_0 1\nu_0 0\n"), ParseError);
  auto round = parse_solution(format_solution(a));
  CHECK(round.values == a.values);
  CHECK(round.objective == a.objective);
}

TEST_CASE("external solver adapter") {
  auto k11 = qbc::testing::complete(1, 1);
  auto mip = build_model1(k11, Rational(1), SizeBounds::unconstrained(k11));
  const auto dir = std::filesystem::temp_directory_path() / "qbc_stub_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  auto good = write("good.sol", "status optimal\nobjective 2\nu_0 1\nv_0 1\ny_0_0 1\nz_1_1 1.0000001\n");
  auto a = run_external_solver(mip, "grep -q Maximize {lp} && cp '" + good + "' {sol}");
  CHECK(*a.objective == 2);
  CHECK(a.values.at("z_1_1") == 1.0);
  CHECK(verify_assignment(k11, mip, a, Rational(1)).size() == 2);

  auto inf = write("inf.sol", "status infeasible\n");
  a = run_external_solver(mip, "cp '" + inf + "' {sol}");
  CHECK(a.infeasible());
  CHECK(a.values.empty());

  auto partial = write("partial.sol", "objective 2\nu_0 1\nv_0 1\ny_0_0 1\n");
  CHECK_THROWS_AS(run_external_solver(mip, "cp '" + partial + "' {sol}"), MipError);
  CHECK_THROWS_AS(run_external_solver(mip, "echo boom; exit 3"), MipError);
  try {
    run_external_solver(mip, "echo boom; exit 3");
  } catch (const MipError& e) {
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
  CHECK_THROWS_AS(run_external_solver(mip, "true"), MipError);
  auto junk = write("junk.sol", "objective two\n");
  CHECK_THROWS_AS(run_external_solver(mip, "cp '" + junk + "' {sol}"), MipError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("solver command resolution") {
  const auto cfg = std::filesystem::temp_directory_path() / "qbc_solver_cfg.toml";
  std::ofstream(cfg) << "solver_cmd = \"from-config {lp} {sol}\"\n";
  unsetenv("QBC_SOLVER_CMD");
  CHECK(resolve_solver_command(cfg) == "from-config {lp} {sol}");
  CHECK_FALSE(resolve_solver_command());
  setenv("QBC_SOLVER_CMD", "from-env {lp} {sol}", 1);
  CHECK(resolve_solver_command(cfg) == "from-env {lp} {sol}");
  unsetenv("QBC_SOLVER_CMD");
  std::filesystem::remove(cfg);
}

TEST_CASE("0/1 optimum of both models equals the combinatorial optimum") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = qbc::testing::random_graph(rng, 1 + rng() % 3, 1 + rng() % 4, 0.6);
    for (Rational gamma : {Rational(1, 2), Rational(2, 3), Rational(3, 4), Rational(1)}) {
      auto b = SizeBounds::unconstrained(g);
      SearchParams p;
      p.gamma = gamma;
      auto pool = branch_and_bound(g, p);
      auto m1 = parse_lp(emit_lp(build_model1(g, gamma, b)));
      auto best = qbc::testing::ZeroOneBrute(m1).maximize();
      CHECK(best.has_value() == !pool.infeasible);
      if (best) CHECK(*best == doctest::Approx(pool.optimum->to_double()));
      if (g.edge_count() == 0) continue;
      p.objective = Objective::Quality;
      pool = branch_and_bound(g, p);
      auto m2 = parse_lp(emit_lp(build_model2(g, gamma, b)));
      best = qbc::testing::ZeroOneBrute(m2).maximize();
      CHECK(best.has_value() == !pool.infeasible);
      if (best) CHECK(std::exp(*best) == doctest::Approx(pool.optimum->to_double()).epsilon(1e-9));
    }
  }
}

TEST_CASE("continuous z in the bilinear model does not change the optimum") {
  // 2x2 graphs: u, v, y enumerated, z1 and z2 on a 1/20 grid of the simplex.
  for (std::uint64_t mask = 1; mask < 16; ++mask) {
    auto g = qbc::testing::pattern_graph(2, 2, mask);
    for (Rational gamma : {Rational(1, 2), Rational(3, 4), Rational(1)}) {
      auto mip = build_model1(g, gamma, SizeBounds::unconstrained(g), Model1Form::Bilinear);
      auto binary = build_model1(g, gamma, SizeBounds::unconstrained(g));
      auto target = qbc::testing::ZeroOneBrute(binary).maximize();
      std::optional<double> best;
      std::map<std::string, double> x;
      for (int us = 0; us < 4; ++us) {
        for (int vs = 0; vs < 4; ++vs) {
          x["u_0"] = us & 1, x["u_1"] = us >> 1 & 1, x["v_0"] = vs & 1, x["v_1"] = vs >> 1 & 1;
          for (auto [i, j] : g.edges()) {
            x["y_" + std::to_string(i) + "_" + std::to_string(j)] = x["u_" + std::to_string(i)] * x["v_" + std::to_string(j)];
          }
          for (int a = 0; a <= 20; ++a) {
            for (int c = 0; c <= 20; ++c) {
              x["z1_1"] = 1 - a / 20.0, x["z1_2"] = a / 20.0, x["z2_1"] = 1 - c / 20.0, x["z2_2"] = c / 20.0;
              if (first_violation(mip, x)) continue;
              double val = objective_value(mip, x);
              if (!best || val > *best) best = val;
            }
          }
        }
      }
      CHECK(best.has_value() == target.has_value());
      if (best) CHECK(*best == doctest::Approx(*target));
    }
  }
}

TEST_CASE("fractional z in the linearized model would admit a too-sparse selection") {
  // 3x3 graph; select a 2x2 block with only 2 edges (density 1/2 < 0.6).
  auto g = qbc::testing::pattern_graph(3, 3, 0b000010001);
  auto mip = build_model1(g, Rational(3, 5), SizeBounds::unconstrained(g));
  std::map<std::string, double> x;
  for (const auto& v : mip.variables()) x[v.name] = 0;
  x["u_0"] = x["u_1"] = x["v_0"] = x["v_1"] = 1;
  x["y_0_0"] = x["y_1_1"] = 1;
  // Half on (1,3), half on (3,1): the sizes average to (2,2) but sum n m z = 3.
  x["z_1_3"] = x["z_3_1"] = 0.5;
  CHECK_FALSE(first_violation(mip, x, false));
  CHECK(first_violation(mip, x, true));
  auto s = induced_stats(g, std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{0, 1});
  CHECK(s.density() < Rational(3, 5));
}
