#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gsplan/netmodel.hpp"

namespace gsplan {

inline constexpr NodeId kNoNode = -1;

enum class StateKind : std::uint8_t {
  edge,
  path,
  tree,
  grid,
  grid_corner,
  bipartite,
  star,
};

/// Distributed intermediate state. Field use per kind:
///   edge         x < y network nodes
///   path         <x, i..j, y>; x/y may be kNoNode
///   tree         Tree(x, p, i..j); x may be kNoNode
///   grid         columns i..j, rows r..s
///   grid_corner  unit cell with lower-left (i, r), corner index p in 0..3
///   bipartite    A range i..j, B range r..s
///   star         centre p, leaf range i..j (leaves renumbered without p)
struct DistState {
  StateKind kind = StateKind::edge;
  NodeId x = kNoNode;
  NodeId y = kNoNode;
  int i = 0, j = 0;
  int r = 0, s = 0;
  int p = 0;

  static DistState edge(NodeId a, NodeId b);
  static DistState path(NodeId x, int i, int j, NodeId y);
  static DistState tree(NodeId x, int p, int i, int j);
  static DistState grid(int c0, int c1, int r0, int r1);
  static DistState grid_corner(int col, int row, int corner);
  static DistState bipartite(int a0, int a1, int b0, int b1);
  static DistState star(int centre, int l0, int l1);

  friend bool operator==(const DistState&, const DistState&) = default;
  friend auto operator<=>(const DistState&, const DistState&) = default;
};

struct DistStateHash {
  std::size_t operator()(const DistState& s) const noexcept;
};

/// Canonical form (edge endpoints ordered, symmetric single-terminal path
/// segments with the extension on the left or x < y). Throws invalid-state
/// for malformed states.
DistState canonicalize(DistState s);

/// Structural range checks against the target; throws invalid-state.
void check_state(const DistState& s, const GraphStateSpec& spec);

std::string state_key(const DistState& s);
DistState parse_state_key(const std::string& key);

/// Network nodes holding qubits of s, in notation order.
std::vector<NodeId> state_nodes(const DistState& s, const GraphStateSpec& spec);

/// Target vertices of a star state: centre first, then leaves.
std::vector<int> star_vertices(const DistState& s);
/// Target vertices of a grid corner: the corner vertex and its two cell
/// neighbours.
std::vector<int> corner_vertices(const DistState& s, const GraphStateSpec& spec);

}  // namespace gsplan
