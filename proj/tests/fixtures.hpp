#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gsplan/netmodel.hpp"

namespace fixtures {

using namespace gsplan;

// All nodes co-located: p_e = 1 on every link.
inline QuantumNetwork two_node(HardwareParams p = {}) {
  return QuantumNetwork({{0, {0, 0}}, {1, {0, 0}}}, {{0, 1}}, p);
}

inline QuantumNetwork chain3(HardwareParams p = {}) {
  return QuantumNetwork({{0, {0, 0}}, {1, {0, 0}}, {2, {0, 0}}}, {{0, 1}, {1, 2}}, p);
}

inline QuantumNetwork complete(int n, double spread = 0.0, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, spread);
  std::vector<NetNode> nodes;
  std::vector<Link> links;
  for (int a = 0; a < n; ++a) {
    nodes.push_back({a, {u(rng), u(rng)}});
    for (int b = a + 1; b < n; ++b) links.emplace_back(a, b);
  }
  return QuantumNetwork(nodes, links);
}

inline QuantumNetwork random_net(int n, std::uint64_t seed, double density = 0.3,
                                 HardwareParams p = {}) {
  WaxmanOptions o;
  o.n = n;
  o.area_km = 30.0;
  o.target_density = density;
  o.seed = seed;
  o.params = p;
  return waxman_generate(o);
}

// Distinct hosts drawn without replacement.
inline std::vector<NodeId> pick_hosts(const QuantumNetwork& net, int k, std::uint64_t seed) {
  auto ids = net.node_ids();
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(k));
  return ids;
}

}  // namespace fixtures
