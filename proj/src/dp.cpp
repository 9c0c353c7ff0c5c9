#include "gsplan/dp.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>

#include "gsplan/error.hpp"

namespace gsplan {

using nlohmann::json;

const char* to_string(SplitPolicy p) {
  return p == SplitPolicy::equal ? "equal" : "proportional";
}

SplitPolicy split_policy_from_string(const std::string& s) {
  if (s == "equal") return SplitPolicy::equal;
  if (s == "proportional") return SplitPolicy::proportional;
  fail(ErrorKind::invalid_argument, "unknown split policy '" + s + "' (equal, proportional)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interval DP over positions 0..L of a route. base[a] is the latency of the
// link (a, a+1); kind(a, m, b) is the fusion used to join [a,m] and [m,b],
// or nullopt when that split is not allowed; dist(a, m, b) is the signalling
// distance of that fusion.
struct IntervalDp {
  int L = 0;
  std::vector<double> S;
  std::vector<int> arg;
  std::vector<FusionKind> kinds;
  std::vector<double> dists;

  double& s(int a, int b) { return S[static_cast<std::size_t>(a * (L + 1) + b)]; }
  int& k(int a, int b) { return arg[static_cast<std::size_t>(a * (L + 1) + b)]; }
  std::size_t at(int a, int b) const { return static_cast<std::size_t>(a * (L + 1) + b); }

  IntervalDp(const std::vector<double>& base, const HardwareParams& params,
             const std::function<std::optional<FusionKind>(int, int, int)>& kind,
             const std::function<double(int, int, int)>& dist) {
    L = static_cast<int>(base.size());
    const std::size_t cells = static_cast<std::size_t>((L + 1) * (L + 1));
    S.assign(cells, kInf);
    arg.assign(cells, -1);
    kinds.assign(cells, FusionKind::relabel);
    dists.assign(cells, 0.0);
    for (int a = 0; a < L; ++a) s(a, a + 1) = base[static_cast<std::size_t>(a)];
    for (int span = 2; span <= L; ++span)
      for (int a = 0; a + span <= L; ++a) {
        const int b = a + span;
        for (int m = a + 1; m < b; ++m) {
          const auto fk = kind(a, m, b);
          if (!fk) continue;
          const double worse = std::max(s(a, m), s(m, b));
          if (worse == kInf) continue;
          const double d = dist(a, m, b);
          const double v = (1.5 * worse + params.op_latency(*fk) + params.classical_latency(d)) /
                           params.op_success(*fk);
          if (v < s(a, b)) {
            s(a, b) = v;
            k(a, b) = m;
            kinds[at(a, b)] = *fk;
            dists[at(a, b)] = d;
          }
        }
      }
  }

  // `spans`, when given, receives the position span of every added node,
  // shifted by `offset`.
  int build(FusionTree& t, int a, int b, const std::function<std::string(int)>& leaf_label,
            std::vector<std::pair<int, int>>* spans = nullptr, int offset = 0) {
    int id;
    if (b == a + 1) {
      id = t.add_leaf(s(a, b), leaf_label(a));
    } else {
      const int m = k(a, b);
      const int l = build(t, a, m, leaf_label, spans, offset);
      const int r = build(t, m, b, leaf_label, spans, offset);
      id = t.add_join(kinds[at(a, b)], l, r, dists[at(a, b)]);
    }
    if (spans) spans->emplace_back(a + offset, b + offset);
    return id;
  }
};

IntervalDp route_dp(const QuantumNetwork& net, const std::vector<NodeId>& route,
                    const std::vector<double>& link_latencies) {
  auto node = [&](int p) { return route[static_cast<std::size_t>(p)]; };
  return IntervalDp(link_latencies, net.params(),
                    [](int, int, int) { return std::optional<FusionKind>(FusionKind::discard); },
                    [&](int a, int m, int b) {
                      return std::max(net.distance(node(m), node(a)), net.distance(node(m), node(b)));
                    });
}

std::string link_label(NodeId a, NodeId b) {
  return "E(" + std::to_string(std::min(a, b)) + "," + std::to_string(std::max(a, b)) + ")";
}

void check_path_spec(const QuantumNetwork& net, const GraphStateSpec& spec) {
  if (spec.kind != GraphKind::path)
    fail(ErrorKind::invalid_spec, "DP schemes handle path graph states only");
  spec.validate(net);
  if (spec.tau.size() < 2) fail(ErrorKind::invalid_spec, "path needs at least two terminals");
}

double link_latency(const QuantumNetwork& net, const std::map<Link, double>& attempts, NodeId a,
                    NodeId b) {
  const Link l = make_link(a, b);
  return 1.0 / (attempts.at(l) * link_success(net, l));
}

}  // namespace

std::pair<double, FusionTree> swapping_tree_dp(const std::vector<double>& link_latencies,
                                               const HardwareParams& params) {
  if (link_latencies.empty()) fail(ErrorKind::invalid_argument, "swapping tree needs a link");
  for (double l : link_latencies)
    if (!(l > 0.0)) fail(ErrorKind::invalid_argument, "link latencies must be positive");
  IntervalDp dp(link_latencies, params,
                [](int, int, int) { return std::optional<FusionKind>(FusionKind::discard); },
                [](int, int, int) { return 0.0; });
  FusionTree t;
  dp.build(t, 0, dp.L, [](int a) { return "link" + std::to_string(a); });
  return {dp.s(0, dp.L), std::move(t)};
}

std::pair<double, FusionTree> swapping_tree_dp(const QuantumNetwork& net,
                                               const std::vector<NodeId>& route,
                                               const std::vector<double>& link_latencies) {
  if (route.size() != link_latencies.size() + 1)
    fail(ErrorKind::invalid_argument, "route must have one more node than links");
  if (link_latencies.empty()) fail(ErrorKind::invalid_argument, "swapping tree needs a link");
  auto node = [&](int p) { return route[static_cast<std::size_t>(p)]; };
  IntervalDp dp = route_dp(net, route, link_latencies);
  FusionTree t;
  dp.build(t, 0, dp.L, [&](int a) { return link_label(node(a), node(a + 1)); });
  return {dp.s(0, dp.L), std::move(t)};
}

// ---------------------------------------------------------------------------
// Routing

std::vector<NodeId> shortest_route(const QuantumNetwork& net, NodeId from, NodeId to,
                                   const std::map<Link, int>& banned) {
  if (!net.has_node(from) || !net.has_node(to))
    fail(ErrorKind::invalid_argument, "route endpoint is not a network node");
  if (from == to) return {from};
  std::map<NodeId, double> dist;
  std::map<NodeId, NodeId> prev;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[from] = 0.0;
  pq.push({0.0, from});
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    if (v == to) break;
    for (NodeId w : net.neighbors(v)) {
      const auto ban = banned.find(make_link(v, w));
      if (ban != banned.end() && ban->second > 0) continue;
      const double nd = d + net.distance(v, w);
      const auto it = dist.find(w);
      if (it == dist.end() || nd < it->second) {
        dist[w] = nd;
        prev[w] = v;
        pq.push({nd, w});
      }
    }
  }
  if (!dist.count(to)) return {};
  std::vector<NodeId> route{to};
  while (route.back() != from) route.push_back(prev.at(route.back()));
  std::reverse(route.begin(), route.end());
  return route;
}

DisjointChain find_disjoint_chain(const QuantumNetwork& net, const std::vector<NodeId>& hosts) {
  if (hosts.empty()) fail(ErrorKind::invalid_argument, "no hosts");
  auto route_all = [&](bool remove) {
    DisjointChain c;
    std::map<Link, int> used;
    for (std::size_t t = 0; t + 1 < hosts.size(); ++t) {
      auto leg = shortest_route(net, hosts[t], hosts[t + 1], remove ? used : std::map<Link, int>{});
      if (leg.empty()) return std::optional<DisjointChain>{};
      for (std::size_t k = 0; k + 1 < leg.size(); ++k) ++used[make_link(leg[k], leg[k + 1])];
      c.legs.push_back(std::move(leg));
    }
    c.uses = used;
    return std::optional<DisjointChain>{std::move(c)};
  };
  auto chain = route_all(true);
  if (!chain) {
    chain = route_all(false);
    if (!chain) fail(ErrorKind::infeasible, "no network route between consecutive terminals");
  }
  DisjointChain c = std::move(*chain);
  c.nodes.push_back(hosts.front());
  c.terminal_pos.push_back(0);
  for (const auto& leg : c.legs) {
    c.nodes.insert(c.nodes.end(), leg.begin() + 1, leg.end());
    c.terminal_pos.push_back(static_cast<int>(c.nodes.size()) - 1);
  }
  for (const auto& [link, n] : c.uses)
    if (n > 1) {
      c.share[link] = 1.0 / n;
      c.disjoint = false;
    }
  return c;
}

std::map<Link, double> allocate_attempts(const QuantumNetwork& net, const std::vector<Link>& usages,
                                         SplitPolicy policy, bool* oversubscribed) {
  std::map<NodeId, double> total_weight;
  std::map<NodeId, int> count;
  auto weight = [&](const Link& l) {
    return policy == SplitPolicy::equal ? 1.0 : 1.0 / link_success(net, l);
  };
  for (const auto& l : usages)
    for (NodeId v : {l.first, l.second}) {
      total_weight[v] += weight(l);
      ++count[v];
    }
  bool over = false;
  for (const auto& [v, n] : count) over = over || n > 1;
  if (oversubscribed) *oversubscribed = over;
  std::map<Link, double> out;
  for (const auto& l : usages) {
    double rate = kInf;
    for (NodeId v : {l.first, l.second})
      rate = std::min(rate, node_capacity(net, v) * weight(l) / total_weight.at(v));
    out[l] = rate;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Path schemes

DpResult dp_two_step(const QuantumNetwork& net, const GraphStateSpec& spec, SplitPolicy policy) {
  check_path_spec(net, spec);
  const auto& hosts = spec.tau;
  const int n = static_cast<int>(hosts.size());
  DpResult r;
  r.policy = policy;
  std::vector<std::vector<NodeId>> legs;
  std::vector<Link> usages;
  for (int t = 0; t + 1 < n; ++t) {
    auto leg = shortest_route(net, hosts[static_cast<std::size_t>(t)], hosts[static_cast<std::size_t>(t + 1)]);
    if (leg.empty()) fail(ErrorKind::infeasible, "no network route between consecutive terminals");
    for (std::size_t k = 0; k + 1 < leg.size(); ++k) usages.push_back(make_link(leg[k], leg[k + 1]));
    legs.push_back(std::move(leg));
  }
  std::map<Link, int> uses;
  for (const auto& l : usages) r.shared_links = ++uses[l] > 1 || r.shared_links;
  r.attempts = allocate_attempts(net, usages, policy, &r.oversubscribed);

  // step 1: one swapping tree per adjacent terminal pair
  std::vector<IntervalDp> leg_dps;
  std::vector<double> base;
  r.chain.push_back(hosts.front());
  r.terminal_pos.push_back(0);
  for (const auto& leg : legs) {
    std::vector<double> lat;
    for (std::size_t k = 0; k + 1 < leg.size(); ++k) lat.push_back(link_latency(net, r.attempts, leg[k], leg[k + 1]));
    leg_dps.push_back(route_dp(net, leg, lat));
    base.push_back(leg_dps.back().s(0, leg_dps.back().L));
    r.chain.insert(r.chain.end(), leg.begin() + 1, leg.end());
    r.terminal_pos.push_back(static_cast<int>(r.chain.size()) - 1);
  }

  // step 2: retain fusions at terminals over the leg results
  auto host = [&](int t) { return hosts[static_cast<std::size_t>(t)]; };
  IntervalDp dp(base, net.params(),
                [](int, int, int) { return std::optional<FusionKind>(FusionKind::retain); },
                [&](int a, int m, int b) {
                  double d = 0.0;
                  for (int t = a; t <= b; ++t) d = std::max(d, net.distance(host(m), host(t)));
                  return d;
                });
  r.latency = dp.s(0, dp.L);
  std::function<int(int, int)> build = [&](int a, int b) -> int {
    if (b == a + 1) {
      auto& leg = leg_dps[static_cast<std::size_t>(a)];
      const int start = r.terminal_pos[static_cast<std::size_t>(a)];
      return leg.build(r.tree, 0, leg.L,
                       [&](int p) { return link_label(r.chain[static_cast<std::size_t>(start + p)],
                                                      r.chain[static_cast<std::size_t>(start + p + 1)]); },
                       &r.spans, start);
    }
    const int m = dp.k(a, b);
    const int left = build(a, m);
    const int right = build(m, b);
    r.spans.emplace_back(r.terminal_pos[static_cast<std::size_t>(a)], r.terminal_pos[static_cast<std::size_t>(b)]);
    return r.tree.add_join(FusionKind::retain, left, right, dp.dists[dp.at(a, b)]);
  };
  build(0, dp.L);
  return r;
}

DpResult dp_one_step(const QuantumNetwork& net, const GraphStateSpec& spec, SplitPolicy policy) {
  check_path_spec(net, spec);
  const auto chain = find_disjoint_chain(net, spec.tau);
  DpResult r;
  r.policy = policy;
  r.chain = chain.nodes;
  r.terminal_pos = chain.terminal_pos;
  r.shared_links = !chain.disjoint;
  std::vector<Link> usages;
  for (std::size_t k = 0; k + 1 < r.chain.size(); ++k) usages.push_back(make_link(r.chain[k], r.chain[k + 1]));
  r.attempts = allocate_attempts(net, usages, policy, &r.oversubscribed);

  const int L = static_cast<int>(r.chain.size()) - 1;
  std::vector<char> terminal(static_cast<std::size_t>(L + 1), 0);
  for (int p : r.terminal_pos) terminal[static_cast<std::size_t>(p)] = 1;
  auto node = [&](int p) { return r.chain[static_cast<std::size_t>(p)]; };
  std::vector<double> base;
  for (int a = 0; a < L; ++a) base.push_back(link_latency(net, r.attempts, node(a), node(a + 1)));

  // A span is a state only when its end qubits and the terminals inside sit
  // on distinct nodes; shared chains can revisit a node.
  auto admissible = [&](int a, int b) {
    std::vector<NodeId> held{node(a), node(b)};
    for (int p = a + 1; p < b; ++p)
      if (terminal[static_cast<std::size_t>(p)]) held.push_back(node(p));
    std::sort(held.begin(), held.end());
    return std::adjacent_find(held.begin(), held.end()) == held.end();
  };
  IntervalDp dp(
      base, net.params(),
      [&](int a, int m, int b) -> std::optional<FusionKind> {
        if (!admissible(a, m) || !admissible(m, b)) return std::nullopt;
        return terminal[static_cast<std::size_t>(m)] ? FusionKind::retain : FusionKind::discard;
      },
      [&](int a, int m, int b) {
        // qubits of the merged state: both ends and every terminal between
        double d = std::max(net.distance(node(m), node(a)), net.distance(node(m), node(b)));
        for (int p = a + 1; p < b; ++p)
          if (terminal[static_cast<std::size_t>(p)]) d = std::max(d, net.distance(node(m), node(p)));
        return d;
      });
  r.latency = dp.s(0, L);
  if (r.latency == kInf) fail(ErrorKind::infeasible, "no admissible fusion order along the shared chain");
  dp.build(r.tree, 0, L, [&](int a) { return link_label(node(a), node(a + 1)); }, &r.spans);
  return r;
}

LevelStructure dp_structure(const QuantumNetwork& net, const GraphStateSpec& spec, const DpResult& r) {
  if (r.spans.size() != r.tree.nodes.size())
    fail(ErrorKind::invalid_argument, "DP result has no span for every tree node");
  const auto& params = net.params();
  LevelStructure s;
  Target target;
  target.spec = spec;
  target.tag = spec_tag(spec);
  s.targets.push_back(target);
  s.network_signature = network_signature(net);

  // terminal index (1-based) by chain position
  std::map<int, int> term_at;
  for (std::size_t t = 0; t < r.terminal_pos.size(); ++t) term_at[r.terminal_pos[t]] = static_cast<int>(t) + 1;
  auto state_of = [&](int a, int b) {
    const auto lo = term_at.lower_bound(a), hi = term_at.upper_bound(b);
    const NodeId ca = r.chain[static_cast<std::size_t>(a)], cb = r.chain[static_cast<std::size_t>(b)];
    if (lo == hi) return DistState::edge(ca, cb);
    const int i = lo->second, j = std::prev(hi)->second;
    const NodeId x = term_at.count(a) ? kNoNode : ca;
    const NodeId y = term_at.count(b) ? kNoNode : cb;
    return canonicalize(DistState::path(x, i, j, y));
  };

  std::map<Link, double> alloc;
  for (std::size_t k = 0; k < r.tree.nodes.size(); ++k) {
    const auto& tn = r.tree.nodes[k];
    const auto [a, b] = r.spans[k];
    StructNode n;
    n.state = state_of(a, b);
    n.scope = n.state.kind == StateKind::edge ? 0 : 1;
    n.key = state_key(n.state) + "@" + std::to_string(a) + ".." + std::to_string(b);
    Production p;
    p.head = static_cast<int>(k);
    if (tn.leaf) {
      p.kind = EdgeLabel::link;
      p.link = make_link(r.chain[static_cast<std::size_t>(a)], r.chain[static_cast<std::size_t>(b)]);
      const double attempts = r.attempts.at(p.link);
      p.rate = attempts * link_success(net, p.link);
      alloc[p.link] += attempts;
    } else {
      p.kind = fusion_label(tn.kind);
      p.tails = {tn.left, tn.right};
      p.success = params.op_success(tn.kind, tn.boundary);
      p.gain = 1.0;
      p.latency = params.op_latency(tn.kind) + params.classical_latency(tn.distance_km);
      p.distance_km = tn.distance_km;
      p.rate = combine_rates(s.nodes[static_cast<std::size_t>(tn.left)].rate,
                             s.nodes[static_cast<std::size_t>(tn.right)].rate, p.success);
    }
    n.rate = p.rate;
    s.nodes.push_back(std::move(n));
    s.productions.push_back(std::move(p));
  }
  StructNode term;
  term.kind = StructNodeKind::term;
  term.target = 0;
  term.key = "term";
  term.rate = s.nodes[static_cast<std::size_t>(r.tree.root)].rate;
  s.nodes.push_back(term);
  Production tp;
  tp.head = static_cast<int>(s.nodes.size()) - 1;
  tp.tails = {r.tree.root};
  tp.kind = EdgeLabel::term;
  tp.rate = term.rate;
  s.productions.push_back(tp);
  s.objective = term.rate;
  for (const auto& [link, attempts] : alloc)
    s.leaf_alloc.push_back({link, attempts, attempts * link_success(net, link)});
  return s;
}

json to_json(const DpResult& r) {
  json attempts = json::object();
  for (const auto& [link, a] : r.attempts) attempts[link_key(link)] = a;
  return {{"latency", r.latency},
          {"rate", r.latency > 0.0 ? 1.0 / r.latency : 0.0},
          {"chain", r.chain},
          {"terminal_pos", r.terminal_pos},
          {"attempts_per_s", attempts},
          {"policy", to_string(r.policy)},
          {"oversubscribed", r.oversubscribed},
          {"shared_links", r.shared_links},
          {"fusions", static_cast<int>(r.tree.nodes.size()) - r.tree.leaf_count()},
          {"tree_dot", r.tree.to_dot()}};
}

}  // namespace gsplan
