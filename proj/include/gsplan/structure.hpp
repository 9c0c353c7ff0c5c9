#pragma once

#include <string>
#include <vector>

#include "gsplan/hypergraph.hpp"
#include "gsplan/lp.hpp"

namespace gsplan {

enum class StructNodeKind : std::uint8_t { state, term };

struct StructNode {
  StructNodeKind kind = StructNodeKind::state;
  DistState state{};
  int scope = 0;
  int target = -1;  // term nodes only
  std::string key;  // state label, or "term" / "term#k"
  double rate = 0.0;  // total production into the node (1/s)
};

/// One way of producing a node: a link generation (no tails), a relabel or a
/// fusion. `rate` is the output rate into `head`; every tail is consumed at
/// `rate / gain`.
struct Production {
  int head = -1;
  std::vector<int> tails;
  EdgeLabel kind = EdgeLabel::link;
  int boundary = 1;
  double rate = 0.0;
  double gain = 1.0;
  double success = 1.0;
  double latency = 0.0;        // operation latency (t_op + t_c)
  double distance_km = 0.0;    // classical signalling distance
  Link link{-1, -1};           // link productions only
};

struct LeafAlloc {
  Link link;
  double attempts = 0.0;  // attempts per second at each endpoint
  double ep_rate = 0.0;
};

/// Rate-annotated level-based structure extracted from an LP solution.
struct LevelStructure {
  std::vector<StructNode> nodes;
  std::vector<Production> productions;
  std::vector<LeafAlloc> leaf_alloc;
  std::vector<Target> targets;
  double objective = 0.0;
  std::string network_signature;

  std::vector<int> producers(int node) const;
  std::vector<int> consumers(int node) const;  // productions with node as a tail
  double term_inflow() const;                  // weighted, comparable to the objective
  /// Largest |production - consumption| over state nodes.
  double conservation_residual() const;
  /// Node ids bottom-up (operands before results). Throws extraction when
  /// the production graph has a cycle.
  std::vector<int> topological_order() const;
};

struct ExtractOptions {
  double eps = -1.0;  // negative: 1e-9 * objective
};

/// "a-b" with a < b.
std::string link_key(const Link& l);
Link parse_link_key(const std::string& key);

/// True when the edges carrying at least `eps` contain a directed cycle.
bool flow_has_cycle(const Hypergraph& h, const std::vector<double>& x, double eps = 0.0);

/// Solves the flow LP of `h`. An optimum whose support is cyclic is replaced
/// by the least-flow optimum, which wastes nothing on cycles.
LpSolution solve_flow(const Hypergraph& h, const QuantumNetwork& net, const SimplexOptions& opts = {});

LevelStructure extract(const Hypergraph& h, const LpSolution& sol, const QuantumNetwork& net,
                       const ExtractOptions& opts = {});

nlohmann::json to_json(const LevelStructure& s);
LevelStructure structure_from_json(const nlohmann::json& j);
std::string to_dot(const LevelStructure& s);

// ---------------------------------------------------------------------------
// Fusion trees and the latency estimate

struct FusionTree {
  struct Node {
    bool leaf = true;
    FusionKind kind = FusionKind::relabel;
    int boundary = 1;
    double latency = 0.0;      // leaves: generation latency (s)
    double distance_km = 0.0;  // internal: classical signalling distance
    int left = -1, right = -1; // right == -1 for relabel nodes
    std::string label;
  };
  std::vector<Node> nodes;
  int root = -1;

  int add_leaf(double latency, std::string label = {});
  int add_join(FusionKind kind, int left, int right, double distance_km = 0.0, int boundary = 1);
  int add_relabel(int child);
  int leaf_count() const;
  std::string to_dot() const;
};

/// Bottom-up expected latency: L = (1.5 max(L_l, L_r) + t_op + t_c) / p_op;
/// relabel nodes pass their child's latency through.
double estimate_latency(const FusionTree& tree, const HardwareParams& params);
double estimate_latency(const FusionTree& tree, int node, const HardwareParams& params);

/// Rate view of one fusion: (2/3) min(G_l, G_r) p.
double combine_rates(double left, double right, double p);

}  // namespace gsplan
