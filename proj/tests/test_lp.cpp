#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "gsplan/builders.hpp"
#include "gsplan/error.hpp"
#include "gsplan/lp.hpp"

using namespace gsplan;

namespace {

double solve_scheme(const std::string& scheme, const QuantumNetwork& net,
                    const GraphStateSpec& spec) {
  const auto h = prune_unreachable(build_scheme(scheme, net, spec));
  const auto lp = formulate(h, net);
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.max_residual <= 1e-8);
  return sol.objective;
}

}  // namespace

TEST_CASE("trivial bound") {
  LinearProgram lp;
  lp.add_var("z", 1.0);
  lp.rows.push_back({"c", {{0, 1.0}}, RowSense::le, 5.0});
  const auto sol = solve(lp);
  CHECK(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(5.0));
}

TEST_CASE("unbounded and infeasible") {
  LinearProgram lp;
  lp.add_var("a", 1.0);
  lp.add_var("b", 0.0);
  lp.rows.push_back({"c", {{0, 1.0}, {1, -1.0}}, RowSense::le, 1.0});
  CHECK(solve(lp).status == LpStatus::unbounded);

  LinearProgram bad;
  bad.add_var("a", 1.0);
  bad.rows.push_back({"lo", {{0, 1.0}}, RowSense::ge, 3.0});
  bad.rows.push_back({"hi", {{0, 1.0}}, RowSense::le, 2.0});
  CHECK(solve(bad).status == LpStatus::infeasible);
}

TEST_CASE("two-node instance") {
  const auto net = fixtures::two_node();
  const auto spec = GraphStateSpec::path({0, 1});
  for (const char* s : {"one-stage-path", "left-path", "right-path", "two-stage-path"})
    CHECK(solve_scheme(s, net, spec) == doctest::Approx(435.6).epsilon(1e-12));
}

TEST_CASE("three-node chain") {
  const auto net = fixtures::chain3();
  const auto spec = GraphStateSpec::path({0, 2});
  CHECK(std::abs(solve_scheme("one-stage-path", net, spec) - 58.08) < 1e-6);
  CHECK(std::abs(solve_scheme("two-stage-path", net, spec) - 58.08) < 1e-6);
}

TEST_CASE("gain of a lone chain") {
  HardwareParams p;
  p.p_f = 0.5;
  const auto net = fixtures::two_node(p);
  Hypergraph h;
  h.add_target(GraphStateSpec::path({0, 1}));
  h.link(0, 1);
  const int e = h.avail(DistState::edge(0, 1), 0);
  const int mid = h.avail(DistState::path(kNoNode, 1, 2, kNoNode), 1);
  const int pr = h.prod(DistState::path(kNoNode, 1, 2, kNoNode), FusionKind::fusion1, 1, 1);
  h.add_edge({e}, pr, EdgeLabel::fusion1);
  h.add_edge({pr}, mid, EdgeLabel::produce);
  h.connect_term(mid);
  const auto sol = solve(formulate(h, net));
  CHECK(sol.objective == doctest::Approx(435.6 * (2.0 / 3.0) * 0.5));
}

TEST_CASE("capacity scaling is linear") {
  HardwareParams p;
  const auto net = fixtures::random_net(8, 5, 0.4, p);
  const auto hosts = fixtures::pick_hosts(net, 3, 2);
  const auto spec = GraphStateSpec::path(hosts);
  const double base = solve_scheme("one-stage-path", net, spec);
  p.t_g /= 3.0;
  const double scaled = solve_scheme("one-stage-path", net.with_params(p), spec);
  CHECK(scaled == doctest::Approx(3.0 * base).epsilon(1e-9));
}

TEST_CASE("lp text round trip") {
  LinearProgram empty;
  empty.add_var("e0");
  const auto text0 = export_lp_text(empty);
  CHECK(text0.find("Maximize\n obj: 0") != std::string::npos);

  const auto net = fixtures::chain3();
  const auto h = prune_unreachable(build_scheme("one-stage-path", net, GraphStateSpec::path({0, 2})));
  const auto lp = formulate(h, net);
  const auto back = parse_lp_text(export_lp_text(lp));
  REQUIRE(back.num_vars() == lp.num_vars());
  CHECK(back.var_names == lp.var_names);
  CHECK(back.objective == lp.objective);
  REQUIRE(back.rows.size() == lp.rows.size());
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    CHECK(back.rows[r].name == lp.rows[r].name);
    CHECK(back.rows[r].sense == lp.rows[r].sense);
    CHECK(back.rows[r].rhs == lp.rows[r].rhs);
    CHECK(back.rows[r].coeffs == lp.rows[r].coeffs);
  }
  CHECK(solve(back).objective == doctest::Approx(58.08).epsilon(1e-12));
}

TEST_CASE("lp text parse errors carry the line") {
  try {
    parse_lp_text("Maximize\n obj: x\nSubject To\n c: x 3\nEnd\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("solution json round trip") {
  const auto net = fixtures::two_node();
  const auto h = prune_unreachable(build_scheme("one-stage-path", net, GraphStateSpec::path({0, 1})));
  const auto sol = solve(formulate(h, net));
  const auto back = solution_from_json(solution_to_json(sol), h.num_edges());
  CHECK(back.objective == sol.objective);
  CHECK(back.x == sol.x);
}

TEST_CASE("simplex agrees with vertex enumeration") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 40; ++k) {
    const auto lp = oracles::random_lp(rng);
    const auto brute = oracles::brute_force_lp(lp);
    const auto sol = solve(lp);
    CAPTURE(k);
    if (!brute.feasible) {
      CHECK(sol.status == LpStatus::infeasible);
      continue;
    }
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(std::abs(sol.objective - brute.objective) <= 1e-6);
    CHECK(sol.max_residual <= 1e-8);
  }
}

TEST_CASE("presolve does not change the optimum") {
  const auto net = fixtures::random_net(7, 11, 0.4);
  const auto spec = GraphStateSpec::path(fixtures::pick_hosts(net, 3, 4));
  const auto lp = formulate(prune_unreachable(build_scheme("one-stage-path", net, spec)), net);
  SimplexOptions raw;
  raw.presolve = false;
  const auto a = solve(lp);
  const auto b = solve(lp, raw);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  CHECK(b.max_residual <= 1e-8);
}
