#pragma once

#include <map>
#include <string>
#include <vector>

#include "gsplan/netmodel.hpp"
#include "gsplan/structure.hpp"

namespace gsplan {

enum class SplitPolicy { equal, proportional };

const char* to_string(SplitPolicy p);
SplitPolicy split_policy_from_string(const std::string& s);

struct DpResult {
  double latency = 0.0;  // seconds
  FusionTree tree;
  std::vector<NodeId> chain;          // network route, terminals included
  std::vector<int> terminal_pos;      // chain index of each terminal
  std::vector<std::pair<int, int>> spans;  // chain positions covered by each tree node
  std::map<Link, double> attempts;    // per-link attempt rate after splitting
  SplitPolicy policy = SplitPolicy::equal;
  bool oversubscribed = false;
  bool shared_links = false;
};

/// Optimal swapping tree over consecutive links: S[a,b] = min_k
/// (1.5 max(S[a,k], S[k,b]) + t_b + t_c) / p_b. Classical latency is taken
/// at distance 0.
std::pair<double, FusionTree> swapping_tree_dp(const std::vector<double>& link_latencies,
                                               const HardwareParams& params);
/// Same recurrence along `route` in `net`, with classical latency by distance.
std::pair<double, FusionTree> swapping_tree_dp(const QuantumNetwork& net,
                                               const std::vector<NodeId>& route,
                                               const std::vector<double>& link_latencies);

struct DisjointChain {
  std::vector<NodeId> nodes;
  std::vector<int> terminal_pos;
  std::vector<std::vector<NodeId>> legs;
  std::map<Link, int> uses;
  std::map<Link, double> share;  // 1 / uses for links used more than once
  bool disjoint = true;
};

/// Shortest routes (physical distance) between consecutive hosts, deleting
/// used links after each leg. When some leg cannot be routed, all legs are
/// recomputed without deletion and multiply-used links are shared equally.
DisjointChain find_disjoint_chain(const QuantumNetwork& net, const std::vector<NodeId>& hosts);

/// Shortest route between two nodes by physical distance, avoiding `banned`.
/// Empty when unreachable.
std::vector<NodeId> shortest_route(const QuantumNetwork& net, NodeId from, NodeId to,
                                   const std::map<Link, int>& banned = {});

/// Per-link attempt rates when every use of a link asks for the full
/// capacity of both endpoints and oversubscribed nodes split their capacity.
std::map<Link, double> allocate_attempts(const QuantumNetwork& net,
                                         const std::vector<Link>& usages, SplitPolicy policy,
                                         bool* oversubscribed = nullptr);

DpResult dp_two_step(const QuantumNetwork& net, const GraphStateSpec& spec,
                     SplitPolicy policy = SplitPolicy::equal);
DpResult dp_one_step(const QuantumNetwork& net, const GraphStateSpec& spec,
                     SplitPolicy policy = SplitPolicy::equal);

/// The DP fusion tree as a level structure with one production per tree node,
/// runnable by the simulator. Node rates follow (2/3) min(children) p.
LevelStructure dp_structure(const QuantumNetwork& net, const GraphStateSpec& spec, const DpResult& r);

nlohmann::json to_json(const DpResult& r);

}  // namespace gsplan
