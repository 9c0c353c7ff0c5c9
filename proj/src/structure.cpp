#include "gsplan/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gsplan/error.hpp"

namespace gsplan {

using nlohmann::json;

namespace {

FusionKind kind_of(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::retain: return FusionKind::retain;
    case EdgeLabel::discard: return FusionKind::discard;
    case EdgeLabel::fusion1: return FusionKind::fusion1;
    case EdgeLabel::fusion2: return FusionKind::fusion2;
    case EdgeLabel::row: return FusionKind::row;
    case EdgeLabel::column: return FusionKind::column;
    case EdgeLabel::star: return FusionKind::star;
    default: return FusionKind::relabel;
  }
}

const GraphStateSpec* spec_for_scope(const std::vector<Target>& targets, int scope) {
  for (const auto& t : targets)
    if (t.scope == scope) return &t.spec;
  return nullptr;
}

std::vector<NodeId> hosts_of(const StructNode& n, const std::vector<Target>& targets) {
  if (n.state.kind == StateKind::edge) return {n.state.x, n.state.y};
  const auto* spec = spec_for_scope(targets, n.scope);
  if (!spec) return {};
  return state_nodes(n.state, *spec);
}

// Longest distance from a node shared by the operands to any operand qubit.
double signalling_distance(const QuantumNetwork& net, const std::vector<std::vector<NodeId>>& ops) {
  if (ops.size() < 2) return 0.0;
  double best = 0.0;
  for (NodeId s : ops[0]) {
    if (std::find(ops[1].begin(), ops[1].end(), s) == ops[1].end()) continue;
    for (const auto& op : ops)
      for (NodeId v : op)
        if (net.has_node(s) && net.has_node(v)) best = std::max(best, net.distance(s, v));
  }
  return best;
}

}  // namespace

std::string link_key(const Link& l) {
  return std::to_string(l.first) + "-" + std::to_string(l.second);
}

Link parse_link_key(const std::string& key) {
  const auto dash = key.find('-', 1);
  try {
    if (dash == std::string::npos) throw std::invalid_argument(key);
    std::size_t used = 0;
    const int a = std::stoi(key.substr(0, dash), &used);
    if (used != dash) throw std::invalid_argument(key);
    const std::string rest = key.substr(dash + 1);
    const int b = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(key);
    return make_link(a, b);
  } catch (const std::logic_error&) {
    fail(ErrorKind::invalid_argument, "bad link key '" + key + "' (expected a-b)");
  }
}

std::vector<int> LevelStructure::producers(int node) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < productions.size(); ++k)
    if (productions[k].head == node) out.push_back(static_cast<int>(k));
  return out;
}

std::vector<int> LevelStructure::consumers(int node) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < productions.size(); ++k)
    for (int t : productions[k].tails)
      if (t == node) {
        out.push_back(static_cast<int>(k));
        break;
      }
  return out;
}

double LevelStructure::term_inflow() const {
  double total = 0.0;
  for (const auto& n : nodes)
    if (n.kind == StructNodeKind::term)
      total += targets.at(static_cast<std::size_t>(n.target)).weight * n.rate;
  return total;
}

double LevelStructure::conservation_residual() const {
  std::vector<double> in(nodes.size(), 0.0), out(nodes.size(), 0.0);
  for (const auto& p : productions) {
    in[static_cast<std::size_t>(p.head)] += p.rate;
    for (int t : p.tails) out[static_cast<std::size_t>(t)] += p.rate / p.gain;
  }
  double worst = 0.0;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].kind == StructNodeKind::term) continue;
    worst = std::max(worst, std::abs(in[v] - out[v]));
  }
  return worst;
}

std::vector<int> LevelStructure::topological_order() const {
  const std::size_t n = nodes.size();
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (const auto& p : productions)
    for (int t : p.tails) {
      succ[static_cast<std::size_t>(t)].push_back(p.head);
      ++indeg[static_cast<std::size_t>(p.head)];
    }
  std::vector<int> order, stack;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int w : succ[static_cast<std::size_t>(v)])
      if (--indeg[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
  }
  if (order.size() != n) fail(ErrorKind::extraction, "production graph has a cycle");
  return order;
}

bool flow_has_cycle(const Hypergraph& h, const std::vector<double>& x, double eps) {
  const std::size_t n = h.num_vertices();
  std::vector<int> indeg(n, 0);
  auto active = [&](std::size_t e) { return x[e] > 0.0 && x[e] >= eps; };
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    if (!active(e)) continue;
    const auto& edge = h.edges()[e];
    indeg[static_cast<std::size_t>(edge.head)] += edge.tail_size();
  }
  std::vector<int> stack;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
  std::size_t seen = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int e : h.out(v)) {
      if (!active(static_cast<std::size_t>(e))) continue;
      const auto& edge = h.edges()[static_cast<std::size_t>(e)];
      // out(v) lists a two-tail edge once per tail
      if (--indeg[static_cast<std::size_t>(edge.head)] == 0) stack.push_back(edge.head);
    }
  }
  return seen != n;
}

LpSolution solve_flow(const Hypergraph& h, const QuantumNetwork& net, const SimplexOptions& opts) {
  const auto lp = formulate(h, net);
  LpSolution sol = solve(lp, opts);
  if (sol.status != LpStatus::optimal) return sol;
  if (!flow_has_cycle(h, sol.x, 1e-9 * std::abs(sol.objective))) return sol;
  LpSolution least = solve_least_flow(lp, sol.objective, opts);
  if (least.status != LpStatus::optimal)
    fail(ErrorKind::numerical, "least-flow re-solve failed after a cyclic optimum");
  least.iterations += sol.iterations;
  return least;
}

LevelStructure extract(const Hypergraph& h, const LpSolution& sol, const QuantumNetwork& net,
                       const ExtractOptions& opts) {
  if (sol.status != LpStatus::optimal) fail(ErrorKind::extraction, "solution is not optimal");
  if (sol.x.size() != h.num_edges())
    fail(ErrorKind::extraction, "solution does not match the hypergraph");
  if (!h.network_signature().empty() && h.network_signature() != network_signature(net))
    fail(ErrorKind::extraction, "hypergraph was built for a different network");
  const auto& params = net.params();
  const double eps = opts.eps >= 0.0 ? opts.eps : 1e-9 * std::abs(sol.objective);

  LevelStructure s;
  s.objective = sol.objective;
  s.targets = h.targets();
  s.network_signature = h.network_signature();

  std::vector<int> node_of(h.num_vertices(), -1);
  auto node = [&](int v) {
    auto& id = node_of[static_cast<std::size_t>(v)];
    if (id >= 0) return id;
    const auto& hv = h.vertices()[static_cast<std::size_t>(v)];
    StructNode n;
    if (hv.kind == VertexKind::term) {
      n.kind = StructNodeKind::term;
      n.target = hv.scope;
      n.key = h.vertex_key(v);
    } else {
      n.state = hv.state;
      n.scope = hv.scope;
      n.key = h.state_label(v);
    }
    id = static_cast<int>(s.nodes.size());
    s.nodes.push_back(std::move(n));
    return id;
  };

  std::map<Link, LeafAlloc> leaves;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    const double z = sol.x[e];
    if (z < eps || z <= 0.0) continue;
    const auto& edge = h.edges()[e];
    const auto& head = h.vertices()[static_cast<std::size_t>(edge.head)];
    if (head.kind == VertexKind::prod) continue;  // folded into the produce edge below
    Production p;
    if (edge.label == EdgeLabel::produce) {
      // the fusion edges into this Prod vertex
      const int pv = edge.tail[0];
      const auto& prod = h.vertices()[static_cast<std::size_t>(pv)];
      const double gain = params.op_gain(prod.fusion, prod.boundary);
      for (int fe : h.in(pv)) {
        const double zf = sol.x[static_cast<std::size_t>(fe)];
        if (zf < eps || zf <= 0.0) continue;
        const auto& f = h.edges()[static_cast<std::size_t>(fe)];
        Production q;
        q.head = node(edge.head);
        for (int k = 0; k < f.tail_size(); ++k) q.tails.push_back(node(f.tail[static_cast<std::size_t>(k)]));
        q.kind = f.label;
        q.boundary = prod.boundary;
        q.gain = gain;
        q.success = params.op_success(prod.fusion, prod.boundary);
        q.rate = gain * zf;
        s.productions.push_back(std::move(q));
      }
      continue;
    }
    p.head = node(edge.head);
    p.kind = edge.label;
    p.rate = z;
    if (edge.label == EdgeLabel::link) {
      const auto& st = head.state;
      p.link = make_link(st.x, st.y);
      auto& leaf = leaves[p.link];
      leaf.link = p.link;
      leaf.ep_rate += z;
      leaf.attempts += z / link_success(net, p.link);
    } else {
      p.tails.push_back(node(edge.tail[0]));
    }
    s.productions.push_back(std::move(p));
  }
  for (auto& [link, leaf] : leaves) s.leaf_alloc.push_back(leaf);

  for (auto& p : s.productions) {
    s.nodes[static_cast<std::size_t>(p.head)].rate += p.rate;
    if (p.kind == EdgeLabel::link || p.kind == EdgeLabel::relabel || p.kind == EdgeLabel::term) continue;
    std::vector<std::vector<NodeId>> ops;
    for (int t : p.tails) ops.push_back(hosts_of(s.nodes[static_cast<std::size_t>(t)], s.targets));
    p.distance_km = signalling_distance(net, ops);
    p.latency = params.op_latency(kind_of(p.kind)) + params.classical_latency(p.distance_km);
  }

  if (s.term_inflow() <= 0.0)
    fail(ErrorKind::extraction, "no flow reaches a target after dropping flows below " +
                                    std::to_string(eps));
  const double tol = 1e-8 * std::max(1.0, std::abs(sol.objective));
  // flows dropped below eps may leave an imbalance of at most their sum
  double dropped = 0.0;
  for (double z : sol.x)
    if (z > 0.0 && z < eps) dropped += z;
  const double worst = s.conservation_residual();
  if (worst > tol + dropped)
    fail(ErrorKind::extraction, "rate conservation violated (worst residual " +
                                    std::to_string(worst) + ")");
  s.topological_order();
  return s;
}

// ---------------------------------------------------------------------------
// JSON and DOT

json to_json(const LevelStructure& s) {
  json j;
  j["objective"] = s.objective;
  j["network"] = s.network_signature;
  json targets = json::array();
  for (const auto& t : s.targets)
    targets.push_back({{"spec", to_json(t.spec)}, {"tag", t.tag}, {"scope", t.scope},
                       {"weight", t.weight}});
  j["targets"] = std::move(targets);
  json nodes = json::array();
  for (std::size_t v = 0; v < s.nodes.size(); ++v) {
    const auto& n = s.nodes[v];
    json jn = {{"id", v}, {"rate", n.rate}};
    if (n.kind == StructNodeKind::term) {
      jn["kind"] = "term";
      jn["target"] = n.target;
    } else {
      jn["kind"] = "state";
      jn["state_key"] = state_key(n.state);
      jn["scope"] = n.scope;
    }
    jn["label"] = n.key;
    nodes.push_back(std::move(jn));
  }
  j["nodes"] = std::move(nodes);
  json prods = json::array();
  for (const auto& p : s.productions) {
    json jp = {{"head", p.head}, {"tail", p.tails}, {"kind", to_string(p.kind)},
               {"rate", p.rate},  {"gain", p.gain},  {"success", p.success},
               {"latency", p.latency}, {"distance_km", p.distance_km}};
    if (p.boundary != 1) jp["boundary"] = p.boundary;
    if (p.kind == EdgeLabel::link) jp["link"] = {p.link.first, p.link.second};
    prods.push_back(std::move(jp));
  }
  j["productions"] = std::move(prods);
  json leaves = json::object();
  for (const auto& l : s.leaf_alloc) leaves[link_key(l.link)] = l.attempts;
  j["leaf_alloc"] = std::move(leaves);
  return j;
}

LevelStructure structure_from_json(const json& j) {
  LevelStructure s;
  s.objective = j.at("objective").get<double>();
  s.network_signature = j.value("network", std::string{});
  for (const auto& jt : j.at("targets")) {
    Target t;
    t.spec = spec_from_json(jt.at("spec"));
    t.tag = jt.at("tag").get<std::string>();
    t.scope = jt.at("scope").get<int>();
    t.weight = jt.at("weight").get<double>();
    s.targets.push_back(std::move(t));
  }
  for (const auto& jn : j.at("nodes")) {
    StructNode n;
    n.rate = jn.at("rate").get<double>();
    n.key = jn.value("label", std::string{});
    if (jn.at("kind").get<std::string>() == "term") {
      n.kind = StructNodeKind::term;
      n.target = jn.at("target").get<int>();
      if (n.target < 0 || n.target >= static_cast<int>(s.targets.size()))
        fail(ErrorKind::invalid_argument, "term node refers to an unknown target");
    } else {
      n.state = parse_state_key(jn.at("state_key").get<std::string>());
      n.scope = jn.at("scope").get<int>();
    }
    s.nodes.push_back(std::move(n));
  }
  const int count = static_cast<int>(s.nodes.size());
  for (const auto& jp : j.at("productions")) {
    Production p;
    p.head = jp.at("head").get<int>();
    p.tails = jp.at("tail").get<std::vector<int>>();
    p.kind = edge_label_from_string(jp.at("kind").get<std::string>());
    p.rate = jp.at("rate").get<double>();
    p.gain = jp.at("gain").get<double>();
    p.success = jp.at("success").get<double>();
    p.latency = jp.value("latency", 0.0);
    p.distance_km = jp.value("distance_km", 0.0);
    p.boundary = jp.value("boundary", 1);
    if (jp.contains("link")) {
      const auto l = jp.at("link").get<std::vector<int>>();
      if (l.size() != 2) fail(ErrorKind::invalid_argument, "link must have two endpoints");
      p.link = make_link(l[0], l[1]);
    }
    if (p.head < 0 || p.head >= count) fail(ErrorKind::invalid_argument, "production head out of range");
    for (int t : p.tails)
      if (t < 0 || t >= count) fail(ErrorKind::invalid_argument, "production tail out of range");
    if (!(p.gain > 0.0)) fail(ErrorKind::invalid_argument, "production gain must be positive");
    s.productions.push_back(std::move(p));
  }
  for (const auto& [key, attempts] : j.at("leaf_alloc").items()) {
    LeafAlloc l;
    l.link = parse_link_key(key);
    l.attempts = attempts.get<double>();
    for (const auto& p : s.productions)
      if (p.kind == EdgeLabel::link && p.link == l.link) l.ep_rate += p.rate;
    s.leaf_alloc.push_back(l);
  }
  return s;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

std::string to_dot(const LevelStructure& s) {
  std::ostringstream out;
  out << "digraph structure {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n";
  out << "  start [shape=circle, label=\"start\"];\n";
  for (std::size_t v = 0; v < s.nodes.size(); ++v) {
    const auto& n = s.nodes[v];
    out << "  n" << v << " [label=\"" << dot_escape(n.key) << "\\n" << fmt(n.rate) << "/s\"";
    if (n.kind == StructNodeKind::term) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (std::size_t k = 0; k < s.productions.size(); ++k) {
    const auto& p = s.productions[k];
    const std::string label = std::string(to_string(p.kind)) + " " + fmt(p.rate);
    if (p.tails.empty()) {
      out << "  start -> n" << p.head << " [label=\"" << label << "\"];\n";
    } else if (p.tails.size() == 1) {
      out << "  n" << p.tails[0] << " -> n" << p.head << " [label=\"" << label << "\"];\n";
    } else {
      out << "  f" << k << " [shape=point];\n";
      for (int t : p.tails) out << "  n" << t << " -> f" << k << " [arrowhead=none];\n";
      out << "  f" << k << " -> n" << p.head << " [label=\"" << label << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Fusion trees

int FusionTree::add_leaf(double latency, std::string label) {
  Node n;
  n.latency = latency;
  n.label = std::move(label);
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int FusionTree::add_join(FusionKind kind, int left, int right, double distance_km, int boundary) {
  const int size = static_cast<int>(nodes.size());
  if (left < 0 || left >= size || right < 0 || right >= size)
    fail(ErrorKind::invalid_argument, "fusion tree child out of range");
  Node n;
  n.leaf = false;
  n.kind = kind;
  n.left = left;
  n.right = right;
  n.distance_km = distance_km;
  n.boundary = boundary;
  nodes.push_back(std::move(n));
  root = size;
  return root;
}

int FusionTree::add_relabel(int child) {
  if (child < 0 || child >= static_cast<int>(nodes.size()))
    fail(ErrorKind::invalid_argument, "fusion tree child out of range");
  Node n;
  n.leaf = false;
  n.kind = FusionKind::relabel;
  n.left = child;
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int FusionTree::leaf_count() const {
  int c = 0;
  for (const auto& n : nodes) c += n.leaf;
  return c;
}

std::string FusionTree::to_dot() const {
  std::ostringstream out;
  out << "digraph fusion_tree {\n  node [fontsize=10];\n";
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& n = nodes[k];
    if (n.leaf) {
      out << "  t" << k << " [shape=box, label=\"" << dot_escape(n.label.empty() ? "link" : n.label)
          << "\\n" << fmt(n.latency) << " s\"];\n";
    } else {
      out << "  t" << k << " [shape=ellipse, label=\"" << to_string(n.kind) << "\"];\n";
      out << "  t" << k << " -> t" << n.left << ";\n";
      if (n.right >= 0) out << "  t" << k << " -> t" << n.right << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

double estimate_latency(const FusionTree& tree, int node, const HardwareParams& params) {
  const auto& n = tree.nodes.at(static_cast<std::size_t>(node));
  if (n.leaf) return n.latency;
  const double l = estimate_latency(tree, n.left, params);
  if (n.right < 0) return l;
  const double r = estimate_latency(tree, n.right, params);
  return (1.5 * std::max(l, r) + params.op_latency(n.kind) + params.classical_latency(n.distance_km)) /
         params.op_success(n.kind, n.boundary);
}

double estimate_latency(const FusionTree& tree, const HardwareParams& params) {
  if (tree.root < 0) fail(ErrorKind::invalid_argument, "empty fusion tree");
  return estimate_latency(tree, tree.root, params);
}

double combine_rates(double left, double right, double p) {
  return (2.0 / 3.0) * std::min(left, right) * p;
}

}  // namespace gsplan
