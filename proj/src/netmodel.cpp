#include "gsplan/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "gsplan/error.hpp"

namespace gsplan {

using nlohmann::json;

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_state: return "invalid-state";
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::invalid_edge: return "invalid-edge";
    case ErrorKind::invalid_merge: return "invalid-merge";
    case ErrorKind::infeasible: return "infeasible-instance";
    case ErrorKind::extraction: return "extraction-error";
    case ErrorKind::numerical: return "numerical-failure";
    case ErrorKind::io: return "io-error";
    case ErrorKind::resource: return "resource-limit";
  }
  return "error";
}

const char* to_string(FusionKind kind) {
  switch (kind) {
    case FusionKind::retain: return "retain";
    case FusionKind::discard: return "discard";
    case FusionKind::fusion1: return "fusion1";
    case FusionKind::fusion2: return "fusion2";
    case FusionKind::row: return "row";
    case FusionKind::column: return "column";
    case FusionKind::star: return "star";
    case FusionKind::relabel: return "relabel";
  }
  return "?";
}

FusionKind fusion_kind_from_string(const std::string& s) {
  static const std::pair<const char*, FusionKind> table[] = {
      {"retain", FusionKind::retain},   {"discard", FusionKind::discard},
      {"fusion1", FusionKind::fusion1}, {"fusion2", FusionKind::fusion2},
      {"row", FusionKind::row},         {"column", FusionKind::column},
      {"star", FusionKind::star},       {"relabel", FusionKind::relabel},
  };
  for (const auto& [name, kind] : table)
    if (s == name) return kind;
  fail(ErrorKind::invalid_argument, "unknown fusion kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// HardwareParams

double HardwareParams::op_success(FusionKind kind, int boundary) const {
  switch (kind) {
    case FusionKind::retain: return retain_prob();
    case FusionKind::discard: return discard_prob();
    case FusionKind::fusion1:
    case FusionKind::fusion2:
    case FusionKind::star: return p_f;
    case FusionKind::row:
    case FusionKind::column: return std::pow(p_f, boundary);
    case FusionKind::relabel: return 1.0;
  }
  return 1.0;
}

double HardwareParams::op_latency(FusionKind kind) const {
  switch (kind) {
    case FusionKind::discard: return t_b;
    case FusionKind::relabel: return 0.0;
    default: return t_f;
  }
}

double HardwareParams::op_gain(FusionKind kind, int boundary) const {
  if (kind == FusionKind::relabel) return 1.0;
  return (2.0 / 3.0) * op_success(kind, boundary);
}

double HardwareParams::classical_latency(double distance_km) const {
  if (t_c_mode == ClassicalMode::constant) return t_c;
  return distance_km / signal_speed_km_s;
}

namespace {

void check_prob(double p, const char* name) {
  if (!(p > 0.0 && p <= 1.0))
    fail(ErrorKind::invalid_argument,
         std::string(name) + " must be in (0,1], got " + std::to_string(p));
}

void check_nonneg(double v, const char* name) {
  if (!(v >= 0.0))
    fail(ErrorKind::invalid_argument, std::string(name) + " must be >= 0");
}

}  // namespace

HardwareParams sweep_fusion_success(HardwareParams p, double pf) {
  p.p_f = pf;
  p.p_b = pf;
  p.p_ob = pf / 2.0;
  p.validate();
  return p;
}

void HardwareParams::validate() const {
  check_prob(p_g, "p_g");
  check_prob(p_ob, "p_ob");
  check_prob(p_b, "p_b");
  check_prob(p_f, "p_f");
  if (p_r) check_prob(*p_r, "p_r");
  if (p_d) check_prob(*p_d, "p_d");
  check_nonneg(t_g, "t_g");
  check_nonneg(t_b, "t_b");
  check_nonneg(t_f, "t_f");
  check_nonneg(t_c, "t_c");
  if (!(t_g > 0)) fail(ErrorKind::invalid_argument, "t_g must be > 0");
  if (!(l_att > 0)) fail(ErrorKind::invalid_argument, "L_att must be > 0");
  if (!(tau_d > 0)) fail(ErrorKind::invalid_argument, "tau_d must be > 0");
  if (!(signal_speed_km_s > 0))
    fail(ErrorKind::invalid_argument, "signal speed must be > 0");
}

// ---------------------------------------------------------------------------
// QuantumNetwork

QuantumNetwork::QuantumNetwork(std::vector<NetNode> nodes,
                               std::vector<Link> links, HardwareParams params,
                               std::map<NodeId, NodeOverride> overrides)
    : nodes_(std::move(nodes)),
      params_(std::move(params)),
      overrides_(std::move(overrides)) {
  params_.validate();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id < 0)
      fail(ErrorKind::invalid_argument, "node ids must be non-negative");
    if (!index_.emplace(nodes_[i].id, i).second)
      fail(ErrorKind::invalid_argument,
           "duplicate node id " + std::to_string(nodes_[i].id));
  }
  adjacency_.resize(nodes_.size());
  std::set<Link> seen;
  for (auto [a, b] : links) {
    if (a == b)
      fail(ErrorKind::invalid_argument,
           "self-loop on node " + std::to_string(a));
    if (!has_node(a) || !has_node(b))
      fail(ErrorKind::invalid_argument, "link references unknown node");
    Link l = make_link(a, b);
    if (!seen.insert(l).second) continue;
    links_.push_back(l);
  }
  std::sort(links_.begin(), links_.end());
  for (auto [a, b] : links_) {
    adjacency_[index_.at(a)].push_back(b);
    adjacency_[index_.at(b)].push_back(a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  for (const auto& [id, ov] : overrides_) {
    if (!has_node(id))
      fail(ErrorKind::invalid_argument, "override for unknown node");
    if (ov.p_g) check_prob(*ov.p_g, "p_g override");
    if (ov.t_g && !(*ov.t_g > 0))
      fail(ErrorKind::invalid_argument, "t_g override must be > 0");
  }
}

std::size_t QuantumNetwork::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    fail(ErrorKind::invalid_argument, "unknown node " + std::to_string(id));
  return it->second;
}

const Eigen::Vector2d& QuantumNetwork::position(NodeId id) const {
  return nodes_[index_of(id)].pos;
}

bool QuantumNetwork::has_link(NodeId a, NodeId b) const {
  return std::binary_search(links_.begin(), links_.end(), make_link(a, b));
}

const std::vector<NodeId>& QuantumNetwork::neighbors(NodeId id) const {
  return adjacency_[index_of(id)];
}

std::vector<NodeId> QuantumNetwork::node_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(nodes_.size());
  for (const auto& n : nodes_) ids.push_back(n.id);
  return ids;
}

double QuantumNetwork::distance(NodeId a, NodeId b) const {
  return (position(a) - position(b)).norm();
}

double QuantumNetwork::t_g(NodeId id) const {
  auto it = overrides_.find(id);
  if (it != overrides_.end() && it->second.t_g) return *it->second.t_g;
  return params_.t_g;
}

double QuantumNetwork::p_g(NodeId id) const {
  auto it = overrides_.find(id);
  if (it != overrides_.end() && it->second.p_g) return *it->second.p_g;
  return params_.p_g;
}

bool QuantumNetwork::is_connected() const {
  if (nodes_.empty()) return true;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (NodeId v : adjacency_[u]) {
      std::size_t iv = index_.at(v);
      if (!seen[iv]) {
        seen[iv] = 1;
        ++count;
        stack.push_back(iv);
      }
    }
  }
  return count == nodes_.size();
}

double QuantumNetwork::density() const {
  double n = static_cast<double>(nodes_.size());
  if (n < 2) return 0.0;
  return static_cast<double>(links_.size()) / (n * (n - 1) / 2.0);
}

QuantumNetwork QuantumNetwork::with_params(const HardwareParams& params) const {
  return QuantumNetwork(nodes_, links_, params, overrides_);
}

double photon_success(const QuantumNetwork& net, const Link& link) {
  double d = net.distance(link.first, link.second);
  return std::exp(-d / (2.0 * net.params().l_att));
}

double link_success(const QuantumNetwork& net, const Link& link) {
  double pe = photon_success(net, link);
  return net.p_g(link.first) * net.p_g(link.second) * pe * pe *
         net.params().p_ob;
}

double link_ep_rate(const QuantumNetwork& net, const Link& link,
                    double attempt_rate) {
  return attempt_rate * link_success(net, link);
}

double node_capacity(const QuantumNetwork& net, NodeId node) {
  return 1.0 / net.t_g(node);
}

// ---------------------------------------------------------------------------
// Waxman

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

struct WaxmanDraw {
  std::vector<Eigen::Vector2d> pos;
  std::vector<Link> links;
};

WaxmanDraw draw_waxman(const WaxmanOptions& o, std::uint64_t stream) {
  std::mt19937_64 rng(o.seed * 0x9E3779B97F4A7C15ULL + stream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WaxmanDraw d;
  d.pos.resize(static_cast<std::size_t>(o.n));
  for (auto& p : d.pos) {
    double x = unit(rng) * o.area_km;
    double y = unit(rng) * o.area_km;
    p = {x, y};
  }
  double dmax = 0.0;
  for (int i = 0; i < o.n; ++i)
    for (int j = i + 1; j < o.n; ++j)
      dmax = std::max(dmax, (d.pos[i] - d.pos[j]).norm());
  if (dmax <= 0) dmax = 1.0;

  // A pair (i,j) is linked iff u_ij < beta * w_ij, i.e. iff its threshold
  // u_ij / w_ij is below beta. Sorting thresholds makes the beta search exact.
  struct Pair {
    double threshold;
    Link link;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < o.n; ++i) {
    for (int j = i + 1; j < o.n; ++j) {
      double w = std::exp(-(d.pos[i] - d.pos[j]).norm() / (o.alpha * dmax));
      pairs.push_back({unit(rng) / w, {i, j}});
    }
  }
  double beta = o.beta;
  if (o.target_density) {
    std::size_t target = static_cast<std::size_t>(
        std::llround(*o.target_density * static_cast<double>(pairs.size())));
    target = std::min(target, pairs.size());
    // Bisection on beta against the monotone link count.
    double lo = 0.0, hi = 1.0;
    auto count_at = [&](double b) {
      return static_cast<std::size_t>(std::count_if(
          pairs.begin(), pairs.end(),
          [b](const Pair& p) { return p.threshold < b; }));
    };
    while (count_at(hi) < target && hi < 1e300) hi *= 2.0;
    for (int it = 0; it < 200 && lo < hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (count_at(mid) >= target)
        hi = mid;
      else
        lo = mid;
    }
    beta = hi;
  }
  for (const auto& p : pairs)
    if (p.threshold < beta) d.links.push_back(p.link);
  return d;
}

bool connected(int n, const std::vector<Link>& links) {
  DisjointSets ds(static_cast<std::size_t>(n));
  int comps = n;
  for (auto [a, b] : links)
    if (ds.unite(a, b)) --comps;
  return comps <= 1;
}

}  // namespace

QuantumNetwork waxman_generate(const WaxmanOptions& o) {
  if (o.n < 2) fail(ErrorKind::invalid_argument, "waxman needs n >= 2");
  if (!(o.area_km > 0)) fail(ErrorKind::invalid_argument, "area must be > 0");
  if (!(o.alpha > 0)) fail(ErrorKind::invalid_argument, "alpha must be > 0");
  if (o.target_density && !(*o.target_density > 0 && *o.target_density <= 1))
    fail(ErrorKind::invalid_argument, "density must be in (0,1]");

  constexpr int kRetries = 8;
  WaxmanDraw draw;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    draw = draw_waxman(o, static_cast<std::uint64_t>(attempt));
    if (connected(o.n, draw.links)) break;
  }

  // Bridge remaining components by repeatedly adding the globally shortest
  // link between two different components.
  DisjointSets ds(static_cast<std::size_t>(o.n));
  for (auto [a, b] : draw.links) ds.unite(a, b);
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    Link best_link{-1, -1};
    for (int i = 0; i < o.n; ++i)
      for (int j = i + 1; j < o.n; ++j) {
        if (ds.find(i) == ds.find(j)) continue;
        double dist = (draw.pos[i] - draw.pos[j]).norm();
        if (dist < best) {
          best = dist;
          best_link = {i, j};
        }
      }
    if (best_link.first < 0) break;
    draw.links.push_back(best_link);
    ds.unite(best_link.first, best_link.second);
  }

  std::vector<NetNode> nodes;
  for (int i = 0; i < o.n; ++i) nodes.push_back({i, draw.pos[i]});
  return QuantumNetwork(std::move(nodes), std::move(draw.links), o.params);
}

// ---------------------------------------------------------------------------
// GraphStateSpec

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::path: return "path";
    case GraphKind::tree: return "tree";
    case GraphKind::grid: return "grid";
    case GraphKind::bipartite: return "bipartite";
    case GraphKind::complete: return "complete";
    case GraphKind::star: return "star";
  }
  return "?";
}

GraphStateSpec GraphStateSpec::path(std::vector<NodeId> hosts) {
  GraphStateSpec s;
  s.kind = GraphKind::path;
  s.size = static_cast<int>(hosts.size());
  s.tau = std::move(hosts);
  return s;
}

GraphStateSpec GraphStateSpec::tree(std::vector<std::vector<int>> children,
                                    std::vector<NodeId> hosts) {
  GraphStateSpec s;
  s.kind = GraphKind::tree;
  s.size = static_cast<int>(hosts.size());
  s.children = std::move(children);
  s.children.resize(hosts.size());
  s.tau = std::move(hosts);
  return s;
}

GraphStateSpec GraphStateSpec::grid(int mx, int my, std::vector<NodeId> hosts) {
  GraphStateSpec s;
  s.kind = GraphKind::grid;
  s.mx = mx;
  s.my = my;
  s.size = mx * my;
  s.tau = std::move(hosts);
  return s;
}

GraphStateSpec GraphStateSpec::bipartite(int ma, int mb,
                                         std::vector<NodeId> hosts) {
  GraphStateSpec s;
  s.kind = GraphKind::bipartite;
  s.ma = ma;
  s.mb = mb;
  s.size = ma + mb;
  s.tau = std::move(hosts);
  return s;
}

GraphStateSpec GraphStateSpec::complete(std::vector<NodeId> hosts) {
  GraphStateSpec s;
  s.kind = GraphKind::complete;
  s.size = static_cast<int>(hosts.size());
  s.tau = std::move(hosts);
  return s;
}

GraphStateSpec GraphStateSpec::star(std::vector<NodeId> hosts) {
  GraphStateSpec s = complete(std::move(hosts));
  s.kind = GraphKind::star;
  return s;
}

int GraphStateSpec::child_count(int v) const {
  if (kind != GraphKind::tree) return 0;
  return static_cast<int>(children.at(static_cast<std::size_t>(v - 1)).size());
}

int GraphStateSpec::parent(int v) const {
  for (int p = 1; p <= size; ++p)
    for (int c : children[static_cast<std::size_t>(p - 1)])
      if (c == v) return p;
  return 0;
}

int GraphStateSpec::child_number(int v) const {
  int p = parent(v);
  if (p == 0) return 0;
  const auto& ch = children[static_cast<std::size_t>(p - 1)];
  return static_cast<int>(std::find(ch.begin(), ch.end(), v) - ch.begin()) + 1;
}

std::vector<NodeId> GraphStateSpec::subtree_hosts(int p, int first,
                                                  int last) const {
  std::vector<NodeId> out{host(p)};
  const auto& ch = children.at(static_cast<std::size_t>(p - 1));
  std::vector<int> stack;
  for (int i = first; i <= last; ++i)
    stack.push_back(ch.at(static_cast<std::size_t>(i - 1)));
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(host(v));
    for (int c : children[static_cast<std::size_t>(v - 1)]) stack.push_back(c);
  }
  return out;
}

void GraphStateSpec::validate(const QuantumNetwork& net) const {
  if (static_cast<int>(tau.size()) != size)
    fail(ErrorKind::invalid_spec, "tau must list one host per vertex");
  std::set<NodeId> seen;
  for (NodeId h : tau) {
    if (!net.has_node(h))
      fail(ErrorKind::invalid_spec,
           "terminal host " + std::to_string(h) + " not in network");
    if (!seen.insert(h).second)
      fail(ErrorKind::invalid_spec, "tau must be injective");
  }
  switch (kind) {
    case GraphKind::path:
    case GraphKind::complete:
    case GraphKind::star:
      if (size < 2) fail(ErrorKind::invalid_spec, "need at least 2 vertices");
      break;
    case GraphKind::tree: {
      if (size < 2)
        fail(ErrorKind::invalid_spec, "tree with a single vertex has no edges");
      if (static_cast<int>(children.size()) != size)
        fail(ErrorKind::invalid_spec, "children list size mismatch");
      std::vector<int> parents(static_cast<std::size_t>(size + 1), 0);
      for (int p = 1; p <= size; ++p) {
        for (int c : children[static_cast<std::size_t>(p - 1)]) {
          if (c < 2 || c > size)
            fail(ErrorKind::invalid_spec, "bad child index (root is vertex 1)");
          if (parents[static_cast<std::size_t>(c)] != 0)
            fail(ErrorKind::invalid_spec, "vertex has two parents");
          parents[static_cast<std::size_t>(c)] = p;
        }
      }
      for (int v = 2; v <= size; ++v)
        if (parents[static_cast<std::size_t>(v)] == 0)
          fail(ErrorKind::invalid_spec, "tree is not connected");
      // Walking up from every vertex must reach the root.
      for (int v = 2; v <= size; ++v) {
        int u = v, steps = 0;
        while (u != 1 && steps++ <= size) u = parents[static_cast<std::size_t>(u)];
        if (u != 1) fail(ErrorKind::invalid_spec, "tree has a cycle");
      }
      break;
    }
    case GraphKind::grid:
      if (mx < 1 || my < 1 || mx * my < 2)
        fail(ErrorKind::invalid_spec, "degenerate grid");
      if (size != mx * my) fail(ErrorKind::invalid_spec, "grid size mismatch");
      break;
    case GraphKind::bipartite:
      if (ma < 1 || mb < 1)
        fail(ErrorKind::invalid_spec, "bipartite partitions must be non-empty");
      if (size != ma + mb)
        fail(ErrorKind::invalid_spec, "bipartite size mismatch");
      break;
  }
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const HardwareParams& p) {
  json j;
  j["t_g"] = p.t_g;
  j["p_g"] = p.p_g;
  j["p_ob"] = p.p_ob;
  j["p_b"] = p.p_b;
  j["t_b"] = p.t_b;
  j["p_f"] = p.p_f;
  j["t_f"] = p.t_f;
  if (p.p_r) j["p_r"] = *p.p_r;
  if (p.p_d) j["p_d"] = *p.p_d;
  j["t_c_mode"] = p.t_c_mode == ClassicalMode::constant ? "constant" : "distance";
  j["t_c"] = p.t_c;
  j["signal_speed"] = p.signal_speed_km_s;
  j["L_att"] = p.l_att;
  j["tau_d"] = p.tau_d;
  return j;
}

HardwareParams params_from_json(const json& j) {
  HardwareParams p;
  auto get = [&](const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
  };
  get("t_g", p.t_g);
  get("p_g", p.p_g);
  get("p_ob", p.p_ob);
  get("p_b", p.p_b);
  get("t_b", p.t_b);
  get("p_f", p.p_f);
  get("t_f", p.t_f);
  get("t_c", p.t_c);
  get("signal_speed", p.signal_speed_km_s);
  get("L_att", p.l_att);
  get("tau_d", p.tau_d);
  if (j.contains("p_r")) p.p_r = j.at("p_r").get<double>();
  if (j.contains("p_d")) p.p_d = j.at("p_d").get<double>();
  if (j.contains("t_c_mode")) {
    auto mode = j.at("t_c_mode").get<std::string>();
    if (mode == "constant")
      p.t_c_mode = ClassicalMode::constant;
    else if (mode == "distance")
      p.t_c_mode = ClassicalMode::distance;
    else
      fail(ErrorKind::invalid_argument, "unknown t_c_mode '" + mode + "'");
  }
  p.validate();
  return p;
}

json to_json(const QuantumNetwork& net) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : net.nodes())
    j["nodes"].push_back({{"id", n.id}, {"x", n.pos.x()}, {"y", n.pos.y()}});
  j["links"] = json::array();
  for (auto [a, b] : net.links()) j["links"].push_back({a, b});
  j["params"] = to_json(net.params());
  if (!net.overrides().empty()) {
    j["overrides"] = json::array();
    for (const auto& [id, ov] : net.overrides()) {
      json o{{"id", id}};
      if (ov.t_g) o["t_g"] = *ov.t_g;
      if (ov.p_g) o["p_g"] = *ov.p_g;
      j["overrides"].push_back(o);
    }
  }
  return j;
}

QuantumNetwork network_from_json(const json& j) {
  std::vector<NetNode> nodes;
  for (const auto& n : j.at("nodes"))
    nodes.push_back({n.at("id").get<NodeId>(),
                     {n.at("x").get<double>(), n.at("y").get<double>()}});
  std::vector<Link> links;
  for (const auto& l : j.at("links"))
    links.emplace_back(l.at(0).get<NodeId>(), l.at(1).get<NodeId>());
  HardwareParams params =
      j.contains("params") ? params_from_json(j.at("params")) : HardwareParams{};
  std::map<NodeId, NodeOverride> overrides;
  if (j.contains("overrides")) {
    for (const auto& o : j.at("overrides")) {
      NodeOverride ov;
      if (o.contains("t_g")) ov.t_g = o.at("t_g").get<double>();
      if (o.contains("p_g")) ov.p_g = o.at("p_g").get<double>();
      overrides[o.at("id").get<NodeId>()] = ov;
    }
  }
  return QuantumNetwork(std::move(nodes), std::move(links), params,
                        std::move(overrides));
}

json to_json(const GraphStateSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["tau"] = s.tau;
  switch (s.kind) {
    case GraphKind::tree: j["children"] = s.children; break;
    case GraphKind::grid:
      j["mx"] = s.mx;
      j["my"] = s.my;
      break;
    case GraphKind::bipartite:
      j["ma"] = s.ma;
      j["mb"] = s.mb;
      break;
    default: break;
  }
  return j;
}

GraphStateSpec spec_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  auto tau = j.at("tau").get<std::vector<NodeId>>();
  if (kind == "path") return GraphStateSpec::path(std::move(tau));
  if (kind == "tree")
    return GraphStateSpec::tree(
        j.at("children").get<std::vector<std::vector<int>>>(), std::move(tau));
  if (kind == "grid")
    return GraphStateSpec::grid(j.at("mx").get<int>(), j.at("my").get<int>(),
                                std::move(tau));
  if (kind == "bipartite")
    return GraphStateSpec::bipartite(j.at("ma").get<int>(),
                                     j.at("mb").get<int>(), std::move(tau));
  if (kind == "complete") return GraphStateSpec::complete(std::move(tau));
  if (kind == "star") return GraphStateSpec::star(std::move(tau));
  fail(ErrorKind::invalid_spec, "unknown graph kind '" + kind + "'");
}

}  // namespace gsplan
