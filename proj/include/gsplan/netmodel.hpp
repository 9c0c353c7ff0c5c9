#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gsplan {

using NodeId = int;
using Link = std::pair<NodeId, NodeId>;  // stored with first < second

inline Link make_link(NodeId a, NodeId b) {
  return a < b ? Link{a, b} : Link{b, a};
}

enum class ClassicalMode { constant, distance };

enum class FusionKind : std::uint8_t {
  retain,
  discard,
  fusion1,
  fusion2,
  row,
  column,
  star,
  relabel,
};

const char* to_string(FusionKind kind);
FusionKind fusion_kind_from_string(const std::string& s);

/// Hardware model shared by every node unless overridden. Units: seconds,
/// kilometres, probabilities in (0,1].
struct HardwareParams {
  double t_g = 50e-6;   // atom-photon attempt interval
  double p_g = 0.33;    // atom-photon success
  double p_ob = 0.2;    // optical BSM success
  double p_b = 0.4;     // atomic BSM success
  double t_b = 10e-6;   // atomic BSM latency
  double p_f = 0.4;     // fusion success
  double t_f = 10e-6;   // fusion latency
  std::optional<double> p_r;  // fusion-retain override, defaults to p_f
  std::optional<double> p_d;  // fusion-discard override, defaults to p_b
  ClassicalMode t_c_mode = ClassicalMode::constant;
  double t_c = 0.0;                 // constant-mode classical latency
  double signal_speed_km_s = 2e5;   // distance-mode propagation speed
  double l_att = 20.0;              // channel attenuation length
  double tau_d = 2.0;               // decoherence threshold

  double retain_prob() const { return p_r.value_or(p_f); }
  double discard_prob() const { return p_d.value_or(p_b); }

  /// Success probability and latency of one operation of the given kind.
  /// `boundary` is the number of simultaneous fusions (row/column merges).
  double op_success(FusionKind kind, int boundary = 1) const;
  double op_latency(FusionKind kind) const;
  /// Flow gain used by the LP: (2/3) p for fusions, 1 for relabels.
  double op_gain(FusionKind kind, int boundary = 1) const;
  double classical_latency(double distance_km) const;

  void validate() const;
};

/// p_f sweep point: p_f = p_b = pf and p_ob = p_b / 2.
HardwareParams sweep_fusion_success(HardwareParams p, double pf);

struct NodeOverride {
  std::optional<double> t_g;
  std::optional<double> p_g;
};

struct NetNode {
  NodeId id;
  Eigen::Vector2d pos;  // km
};

/// Undirected quantum network. Immutable after construction.
class QuantumNetwork {
 public:
  QuantumNetwork() = default;
  QuantumNetwork(std::vector<NetNode> nodes, std::vector<Link> links,
                 HardwareParams params = {},
                 std::map<NodeId, NodeOverride> overrides = {});

  const std::vector<NetNode>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const HardwareParams& params() const { return params_; }
  const std::map<NodeId, NodeOverride>& overrides() const { return overrides_; }

  std::size_t size() const { return nodes_.size(); }
  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  std::size_t index_of(NodeId id) const;
  const Eigen::Vector2d& position(NodeId id) const;
  bool has_link(NodeId a, NodeId b) const;
  const std::vector<NodeId>& neighbors(NodeId id) const;
  std::vector<NodeId> node_ids() const;

  double distance(NodeId a, NodeId b) const;
  double t_g(NodeId id) const;
  double p_g(NodeId id) const;
  bool is_connected() const;
  double density() const;

  /// Same topology and positions, new parameters.
  QuantumNetwork with_params(const HardwareParams& params) const;

 private:
  std::vector<NetNode> nodes_;
  std::vector<Link> links_;
  HardwareParams params_;
  std::map<NodeId, NodeOverride> overrides_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// e^(-d / (2 L_att)) for the half-link transmission.
double photon_success(const QuantumNetwork& net, const Link& link);
/// Probability that one synchronized attempt on the link yields an EP.
double link_success(const QuantumNetwork& net, const Link& link);
double link_ep_rate(const QuantumNetwork& net, const Link& link,
                    double attempt_rate);
double node_capacity(const QuantumNetwork& net, NodeId node);

struct WaxmanOptions {
  int n = 100;
  double beta = 0.4;
  double alpha = 0.4;
  double area_km = 100.0;
  std::optional<double> target_density;
  std::uint64_t seed = 1;
  HardwareParams params{};
};

QuantumNetwork waxman_generate(const WaxmanOptions& opts);

// ---------------------------------------------------------------------------
// Target graph states

enum class GraphKind { path, tree, grid, bipartite, complete, star };

const char* to_string(GraphKind kind);

/// Target graph state plus its placement. Vertices are 1-based; `tau[v-1]`
/// is the host of vertex v. For trees vertex 1 is the root and
/// `children[v-1]` lists v's children in numbering order. Grids are
/// row-major: vertex (c, r) has index (r-1)*mx + c. Bipartite vertices are
/// A_1..A_ma followed by B_1..B_mb. Stars are centred on vertex 1.
struct GraphStateSpec {
  GraphKind kind = GraphKind::path;
  int size = 0;
  std::vector<std::vector<int>> children;
  int mx = 0, my = 0;
  int ma = 0, mb = 0;
  std::vector<NodeId> tau;

  static GraphStateSpec path(std::vector<NodeId> hosts);
  static GraphStateSpec tree(std::vector<std::vector<int>> children,
                             std::vector<NodeId> hosts);
  static GraphStateSpec grid(int mx, int my, std::vector<NodeId> hosts);
  static GraphStateSpec bipartite(int ma, int mb, std::vector<NodeId> hosts);
  static GraphStateSpec complete(std::vector<NodeId> hosts);
  static GraphStateSpec star(std::vector<NodeId> hosts);

  NodeId host(int v) const { return tau.at(static_cast<std::size_t>(v - 1)); }
  int child_count(int v) const;
  int parent(int v) const;       // 0 for the root
  int child_number(int v) const; // 1-based position among parent's children
  bool is_leaf(int v) const { return child_count(v) == 0; }
  /// Hosts of p and the descendants of its children first..last.
  std::vector<NodeId> subtree_hosts(int p, int first, int last) const;
  int grid_vertex(int col, int row) const { return (row - 1) * mx + col; }

  void validate(const QuantumNetwork& net) const;
};

// JSON

nlohmann::json to_json(const HardwareParams& p);
HardwareParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QuantumNetwork& net);
QuantumNetwork network_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GraphStateSpec& spec);
GraphStateSpec spec_from_json(const nlohmann::json& j);

}  // namespace gsplan
