#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gsplan/error.hpp"
#include "gsplan/gstate.hpp"

using namespace gsplan;

TEST_CASE("canonical forms") {
  const auto p = DistState::path(7, 0, 0, 3);
  CHECK(p.x == 3);
  CHECK(p.y == 7);
  CHECK(state_key(p) == "P(x=3|-|y=7)");
  const auto e = DistState::edge(5, 2);
  CHECK(e.x == 2);
  CHECK(e.y == 5);
  const auto s = DistState::path(kNoNode, 2, 4, kNoNode);
  CHECK(canonicalize(s) == s);
  CHECK(canonicalize(canonicalize(p)) == canonicalize(p));
  // single-terminal segments hold a lone extension on the left
  CHECK(DistState::path(kNoNode, 3, 3, 5) == DistState::path(5, 3, 3, kNoNode));
  CHECK(DistState::path(9, 3, 3, 5) == DistState::path(5, 3, 3, 9));
  CHECK(DistState::path(9, 3, 4, 5) != DistState::path(5, 3, 4, 9));
}

TEST_CASE("malformed states") {
  CHECK_THROWS_AS(DistState::path(kNoNode, 2, 2, kNoNode), Error);
  CHECK_THROWS_AS(DistState::path(4, 1, 3, 4), Error);
  CHECK_THROWS_AS(DistState::path(1, 3, 2, kNoNode), Error);
  CHECK_THROWS_AS(DistState::edge(3, 3), Error);
  CHECK_THROWS_AS(DistState::tree(kNoNode, 1, 2, 1), Error);
  const auto spec = GraphStateSpec::path({10, 11, 12});
  CHECK_THROWS_AS(check_state(DistState::path(kNoNode, 1, 4, kNoNode), spec), Error);
}

TEST_CASE("keys round trip") {
  const std::vector<DistState> states = {
      DistState::edge(2, 5),          DistState::path(7, 2, 4, kNoNode),
      DistState::path(3, 0, 0, 7),    DistState::tree(12, 3, 1, 2),
      DistState::tree(kNoNode, 1, 1, 3), DistState::grid(1, 3, 2, 2),
      DistState::grid_corner(2, 1, 3), DistState::bipartite(1, 2, 1, 1),
      DistState::star(2, 1, 3)};
  for (const auto& s : states) CHECK(parse_state_key(state_key(s)) == s);
  CHECK(state_key(DistState::path(7, 2, 4, kNoNode)) == "P(x=7|2..4|y=-)");
  CHECK(state_key(DistState::tree(12, 3, 1, 2)) == "T(x=12|p=3|1..2)");
  CHECK(state_key(DistState::edge(5, 2)) == "E(2,5)");
  CHECK_THROWS_AS(parse_state_key("Q(1,2)"), Error);
}

TEST_CASE("state nodes") {
  // identity-like placement: terminal t on node 100 + t
  const auto spec = GraphStateSpec::path({101, 102, 103, 104, 105, 106, 107});
  const auto nodes = state_nodes(DistState::path(1, 3, 6, 2), spec);
  CHECK(nodes == std::vector<NodeId>{1, 103, 104, 105, 106, 2});
  CHECK(state_nodes(DistState::edge(2, 5), spec) == std::vector<NodeId>{2, 5});

  const auto tree = GraphStateSpec::tree({{2, 3}, {4, 5}, {}, {}, {}}, {20, 21, 22, 23, 24});
  auto all = state_nodes(DistState::tree(kNoNode, 1, 1, 2), tree);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<NodeId>{20, 21, 22, 23, 24});
  auto part = state_nodes(DistState::tree(9, 2, 2, 2), tree);
  std::sort(part.begin(), part.end());
  CHECK(part == std::vector<NodeId>{9, 21, 24});
}
