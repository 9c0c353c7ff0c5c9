#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsplan/gstate.hpp"
#include "gsplan/netmodel.hpp"

namespace gsplan {

enum class VertexKind : std::uint8_t { start, term, avail, prod };

enum class EdgeLabel : std::uint8_t {
  link,
  produce,
  term,
  relabel,
  retain,
  discard,
  fusion1,
  fusion2,
  row,
  column,
  star,
};

const char* to_string(VertexKind kind);
const char* to_string(EdgeLabel label);
EdgeLabel edge_label_from_string(const std::string& s);
EdgeLabel fusion_label(FusionKind kind);

struct HyperVertex {
  VertexKind kind = VertexKind::avail;
  DistState state{};
  FusionKind fusion = FusionKind::relabel;  // prod only
  int boundary = 1;                          // prod only, shared-boundary size
  int scope = 0;  // 0: network-level (edge states, Start); k: target scope k
};

struct HyperEdge {
  std::array<int, 2> tail{-1, -1};  // tail[1] == -1 for single-tail edges
  int head = -1;
  EdgeLabel label = EdgeLabel::link;

  int tail_size() const { return tail[1] < 0 ? 1 : 2; }
};

/// One target graph state carried by the hypergraph. Targets with identical
/// specs share a scope (their intermediate states coincide) but keep their
/// own Term vertex and weight.
struct Target {
  GraphStateSpec spec;
  std::string tag;
  int scope = 1;
  int term = -1;
  double weight = 1.0;
};

class Hypergraph {
 public:
  Hypergraph();

  int start() const { return 0; }
  const std::vector<HyperVertex>& vertices() const { return vertices_; }
  const std::vector<HyperEdge>& edges() const { return edges_; }
  const std::vector<Target>& targets() const { return targets_; }
  const std::vector<int>& in(int v) const { return in_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& out(int v) const { return out_[static_cast<std::size_t>(v)]; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Process-wide cap on hyperedges per hypergraph; exceeding it throws a
  /// resource error instead of exhausting memory. 0 disables the cap.
  static void set_edge_limit(std::size_t limit);
  static std::size_t edge_limit();

  const std::string& network_signature() const { return network_signature_; }
  void set_network_signature(std::string sig) { network_signature_ = std::move(sig); }

  /// Adds a target and its Term vertex; returns the target index.
  int add_target(const GraphStateSpec& spec, double weight = 1.0);
  int add_target(const GraphStateSpec& spec, const std::string& tag, int scope,
                 double weight);
  int term(int target = 0) const { return targets_.at(static_cast<std::size_t>(target)).term; }
  int target_scope(int target) const {
    return targets_.at(static_cast<std::size_t>(target)).scope;
  }

  /// Find-or-insert; edge states always live in scope 0.
  int add_vertex(const HyperVertex& v);
  int avail(const DistState& s, int scope);
  int prod(const DistState& s, FusionKind kind, int boundary, int scope);
  int find_avail(const DistState& s, int scope) const;

  /// Find-or-insert. Throws invalid-edge on |tail| not in {1,2}, head in
  /// tail, or unknown vertex ids.
  int add_edge(const std::vector<int>& tail, int head, EdgeLabel label);

  // Builder conveniences.
  int link(NodeId a, NodeId b);
  int fuse(int a, int b, const DistState& result, FusionKind kind, int scope,
           int boundary = 1);
  int relabel(int from, int to);
  int connect_term(int avail_vertex, int target = 0);

  /// Display key, e.g. "avail:P(x=-|1..3|y=-)" or "prod:retain:E(1,2)".
  std::string vertex_key(int v) const;
  /// State key with a target tag suffix when several scopes coexist.
  std::string state_label(int v) const;

  void check_invariants() const;

 private:
  struct VKey {
    DistState state;
    VertexKind kind;
    FusionKind fusion;
    int scope;
    bool operator==(const VKey&) const = default;
  };
  struct VKeyHash {
    std::size_t operator()(const VKey& k) const noexcept;
  };
  struct EKey {
    int t0, t1, head;
    EdgeLabel label;
    bool operator==(const EKey&) const = default;
  };
  struct EKeyHash {
    std::size_t operator()(const EKey& k) const noexcept;
  };

  std::vector<HyperVertex> vertices_;
  std::vector<HyperEdge> edges_;
  std::vector<std::vector<int>> in_, out_;
  std::vector<Target> targets_;
  std::unordered_map<VKey, int, VKeyHash> vindex_;
  std::unordered_map<EKey, int, EKeyHash> eindex_;
  std::string network_signature_;
  int scopes_ = 0;
};

/// Removes every vertex that is not both forward-reachable from Start
/// (an edge fires once all of its tails are reachable) and backward-
/// reachable from some Term. Throws infeasible when a Term is cut off.
Hypergraph prune_unreachable(const Hypergraph& h);

struct HyperCounts {
  std::size_t vertices = 0;
  std::size_t edges = 0;
};
HyperCounts counts(const Hypergraph& h);

/// Stable short tag for a target spec (hash of its JSON form).
std::string spec_tag(const GraphStateSpec& spec);
/// Fingerprint of a network (hash of its JSON form).
std::string network_signature(const QuantumNetwork& net);

/// Union by canonical keys. Targets with identical specs share states; each
/// input target keeps its own Term vertex with weight scaled by the input
/// weight.
Hypergraph merge_hypergraphs(const std::vector<std::pair<Hypergraph, double>>& parts);

nlohmann::json to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const nlohmann::json& j);

}  // namespace gsplan
