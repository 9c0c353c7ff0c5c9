#include "gsplan/hypergraph.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <deque>

#include "gsplan/error.hpp"

namespace gsplan {

using nlohmann::json;

const char* to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::start: return "start";
    case VertexKind::term: return "term";
    case VertexKind::avail: return "avail";
    case VertexKind::prod: return "prod";
  }
  return "?";
}

const char* to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::link: return "link";
    case EdgeLabel::produce: return "produce";
    case EdgeLabel::term: return "term";
    case EdgeLabel::relabel: return "relabel";
    case EdgeLabel::retain: return "retain";
    case EdgeLabel::discard: return "discard";
    case EdgeLabel::fusion1: return "fusion1";
    case EdgeLabel::fusion2: return "fusion2";
    case EdgeLabel::row: return "row";
    case EdgeLabel::column: return "column";
    case EdgeLabel::star: return "star";
  }
  return "?";
}

EdgeLabel edge_label_from_string(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(EdgeLabel::star); ++k) {
    auto label = static_cast<EdgeLabel>(k);
    if (s == to_string(label)) return label;
  }
  fail(ErrorKind::invalid_edge, "unknown edge label '" + s + "'");
}

EdgeLabel fusion_label(FusionKind kind) {
  switch (kind) {
    case FusionKind::retain: return EdgeLabel::retain;
    case FusionKind::discard: return EdgeLabel::discard;
    case FusionKind::fusion1: return EdgeLabel::fusion1;
    case FusionKind::fusion2: return EdgeLabel::fusion2;
    case FusionKind::row: return EdgeLabel::row;
    case FusionKind::column: return EdgeLabel::column;
    case FusionKind::star: return EdgeLabel::star;
    case FusionKind::relabel: return EdgeLabel::relabel;
  }
  return EdgeLabel::relabel;
}

std::size_t Hypergraph::VKeyHash::operator()(const VKey& k) const noexcept {
  std::size_t h = DistStateHash{}(k.state);
  h ^= (static_cast<std::size_t>(k.kind) << 8 | static_cast<std::size_t>(k.fusion)) +
       0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  h ^= static_cast<std::size_t>(k.scope) + 0x9E3779B97F4A7C15ULL + (h << 6) +
       (h >> 2);
  return h;
}

std::size_t Hypergraph::EKeyHash::operator()(const EKey& k) const noexcept {
  std::uint64_t h = static_cast<std::uint32_t>(k.t0);
  h = h * 0x100000001B3ULL ^ static_cast<std::uint32_t>(k.t1);
  h = h * 0x100000001B3ULL ^ static_cast<std::uint32_t>(k.head);
  h = h * 0x100000001B3ULL ^ static_cast<std::uint64_t>(k.label);
  h ^= h >> 29;
  return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
}

Hypergraph::Hypergraph() {
  vertices_.push_back({VertexKind::start, {}, FusionKind::relabel, 1, 0});
  in_.emplace_back();
  out_.emplace_back();
}

int Hypergraph::add_target(const GraphStateSpec& spec, double weight) {
  std::string tag = spec_tag(spec);
  for (const auto& t : targets_)
    if (t.tag == tag) return add_target(spec, tag, t.scope, weight);
  return add_target(spec, tag, scopes_ + 1, weight);
}

int Hypergraph::add_target(const GraphStateSpec& spec, const std::string& tag,
                           int scope, double weight) {
  if (!(weight >= 0))
    fail(ErrorKind::invalid_argument, "target weights must be >= 0");
  scopes_ = std::max(scopes_, scope);
  Target t;
  t.spec = spec;
  t.tag = tag;
  t.scope = scope;
  t.weight = weight;
  t.term = static_cast<int>(vertices_.size());
  // Term vertices are never deduplicated; the scope field records the target.
  vertices_.push_back({VertexKind::term, {}, FusionKind::relabel, 1,
                       static_cast<int>(targets_.size())});
  in_.emplace_back();
  out_.emplace_back();
  targets_.push_back(std::move(t));
  return static_cast<int>(targets_.size()) - 1;
}

int Hypergraph::add_vertex(const HyperVertex& v0) {
  HyperVertex v = v0;
  if (v.kind == VertexKind::start || v.kind == VertexKind::term)
    fail(ErrorKind::invalid_argument, "Start/Term are created implicitly");
  if (v.state.kind == StateKind::edge) v.scope = 0;
  if (v.kind == VertexKind::avail) {
    v.fusion = FusionKind::relabel;
    v.boundary = 1;
  }
  VKey key{v.state, v.kind, v.fusion, v.scope};
  auto [it, inserted] = vindex_.try_emplace(key, static_cast<int>(vertices_.size()));
  if (inserted) {
    vertices_.push_back(v);
    in_.emplace_back();
    out_.emplace_back();
  }
  return it->second;
}

int Hypergraph::avail(const DistState& s, int scope) {
  return add_vertex({VertexKind::avail, s, FusionKind::relabel, 1, scope});
}

int Hypergraph::prod(const DistState& s, FusionKind kind, int boundary, int scope) {
  return add_vertex({VertexKind::prod, s, kind, boundary, scope});
}

int Hypergraph::find_avail(const DistState& s, int scope) const {
  if (s.kind == StateKind::edge) scope = 0;
  auto it = vindex_.find({s, VertexKind::avail, FusionKind::relabel, scope});
  return it == vindex_.end() ? -1 : it->second;
}

namespace {
std::atomic<std::size_t> g_edge_limit{20'000'000};
}  // namespace

void Hypergraph::set_edge_limit(std::size_t limit) { g_edge_limit = limit; }
std::size_t Hypergraph::edge_limit() { return g_edge_limit; }

int Hypergraph::add_edge(const std::vector<int>& tail, int head, EdgeLabel label) {
  const int n = static_cast<int>(vertices_.size());
  if (tail.empty() || tail.size() > 2)
    fail(ErrorKind::invalid_edge, "hyperedges need one or two tails");
  if (head < 0 || head >= n)
    fail(ErrorKind::invalid_edge, "unknown head vertex");
  for (int t : tail) {
    if (t < 0 || t >= n) fail(ErrorKind::invalid_edge, "unknown tail vertex");
    if (t == head) fail(ErrorKind::invalid_edge, "head is a tail member");
  }
  if (tail.size() == 2 && tail[0] == tail[1])
    fail(ErrorKind::invalid_edge, "repeated tail vertex");
  if (vertices_[static_cast<std::size_t>(head)].kind == VertexKind::start)
    fail(ErrorKind::invalid_edge, "Start has no incoming edges");
  for (int t : tail)
    if (vertices_[static_cast<std::size_t>(t)].kind == VertexKind::term)
      fail(ErrorKind::invalid_edge, "Term has no outgoing edges");

  HyperEdge e;
  e.tail[0] = tail[0];
  if (tail.size() == 2) {
    e.tail[0] = std::min(tail[0], tail[1]);
    e.tail[1] = std::max(tail[0], tail[1]);
  }
  e.head = head;
  e.label = label;
  EKey key{e.tail[0], e.tail[1], head, label};
  auto [it, inserted] = eindex_.try_emplace(key, static_cast<int>(edges_.size()));
  if (!inserted) return it->second;

  if (vertices_[static_cast<std::size_t>(e.tail[0])].kind == VertexKind::prod &&
      !out_[static_cast<std::size_t>(e.tail[0])].empty())
    fail(ErrorKind::invalid_edge, "Prod vertices have exactly one out-edge");
  const std::size_t limit = g_edge_limit;
  if (limit != 0 && edges_.size() >= limit) {
    eindex_.erase(it);
    fail(ErrorKind::resource, "hypergraph exceeds " + std::to_string(limit) +
                                  " hyperedges; use a filtered scheme (left-path, right-path, two-stage-path,"
                                  " distance-path:<c>) or raise the limit");
  }
  const int id = static_cast<int>(edges_.size());
  edges_.push_back(e);
  for (int k = 0; k < e.tail_size(); ++k)
    out_[static_cast<std::size_t>(e.tail[static_cast<std::size_t>(k)])].push_back(id);
  in_[static_cast<std::size_t>(head)].push_back(id);
  return id;
}

int Hypergraph::link(NodeId a, NodeId b) {
  return add_edge({start()}, avail(DistState::edge(a, b), 0), EdgeLabel::link);
}

int Hypergraph::fuse(int a, int b, const DistState& result, FusionKind kind,
                     int scope, int boundary) {
  int av = avail(result, scope);
  int pv = prod(result, kind, boundary, scope);
  if (out_[static_cast<std::size_t>(pv)].empty())
    add_edge({pv}, av, EdgeLabel::produce);
  return add_edge({a, b}, pv, fusion_label(kind));
}

int Hypergraph::relabel(int from, int to) {
  return add_edge({from}, to, EdgeLabel::relabel);
}

int Hypergraph::connect_term(int avail_vertex, int target) {
  return add_edge({avail_vertex}, term(target), EdgeLabel::term);
}

std::string Hypergraph::state_label(int v) const {
  const auto& hv = vertices_.at(static_cast<std::size_t>(v));
  std::string key = state_key(hv.state);
  if (hv.scope > 0 && scopes_ > 1) {
    for (const auto& t : targets_)
      if (t.scope == hv.scope) return key + "@" + t.tag;
  }
  return key;
}

std::string Hypergraph::vertex_key(int v) const {
  const auto& hv = vertices_.at(static_cast<std::size_t>(v));
  switch (hv.kind) {
    case VertexKind::start: return "start";
    case VertexKind::term:
      return targets_.size() > 1 ? "term#" + std::to_string(hv.scope) : "term";
    case VertexKind::avail: return "avail:" + state_label(v);
    case VertexKind::prod:
      return std::string("prod:") + to_string(hv.fusion) + ":" + state_label(v);
  }
  return "?";
}

void Hypergraph::check_invariants() const {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const auto& hv = vertices_[v];
    if (hv.kind == VertexKind::start && !in_[v].empty())
      fail(ErrorKind::invalid_edge, "Start has an in-edge");
    if (hv.kind == VertexKind::term && !out_[v].empty())
      fail(ErrorKind::invalid_edge, "Term has an out-edge");
    if (hv.kind == VertexKind::prod) {
      if (out_[v].size() != 1)
        fail(ErrorKind::invalid_edge, "Prod vertex without a single out-edge");
      const auto& e = edges_[static_cast<std::size_t>(out_[v][0])];
      const auto& head = vertices_[static_cast<std::size_t>(e.head)];
      if (head.kind != VertexKind::avail || !(head.state == hv.state) ||
          e.tail_size() != 1)
        fail(ErrorKind::invalid_edge, "Prod out-edge must feed its own state");
    }
  }
}

Hypergraph prune_unreachable(const Hypergraph& h) {
  const std::size_t nv = h.num_vertices(), ne = h.num_edges();
  const auto& E = h.edges();

  std::vector<char> fwd(nv, 0), usable(ne, 0);
  std::vector<int> missing(ne);
  for (std::size_t e = 0; e < ne; ++e) missing[e] = E[e].tail_size();
  std::deque<int> queue{h.start()};
  fwd[static_cast<std::size_t>(h.start())] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : h.out(v)) {
      if (--missing[static_cast<std::size_t>(e)] > 0) continue;
      usable[static_cast<std::size_t>(e)] = 1;
      int head = E[static_cast<std::size_t>(e)].head;
      if (!fwd[static_cast<std::size_t>(head)]) {
        fwd[static_cast<std::size_t>(head)] = 1;
        queue.push_back(head);
      }
    }
  }

  std::vector<char> bwd(nv, 0);
  for (const auto& t : h.targets()) {
    if (!fwd[static_cast<std::size_t>(t.term)])
      fail(ErrorKind::infeasible,
           "target state cannot be generated from the available links");
    bwd[static_cast<std::size_t>(t.term)] = 1;
    queue.push_back(t.term);
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : h.in(v)) {
      if (!usable[static_cast<std::size_t>(e)]) continue;
      const auto& edge = E[static_cast<std::size_t>(e)];
      for (int k = 0; k < edge.tail_size(); ++k) {
        int t = edge.tail[static_cast<std::size_t>(k)];
        if (!bwd[static_cast<std::size_t>(t)]) {
          bwd[static_cast<std::size_t>(t)] = 1;
          queue.push_back(t);
        }
      }
    }
  }

  Hypergraph out;
  out.set_network_signature(h.network_signature());
  std::vector<int> remap(nv, -1);
  remap[static_cast<std::size_t>(h.start())] = out.start();
  for (const auto& t : h.targets()) {
    int k = out.add_target(t.spec, t.tag, t.scope, t.weight);
    remap[static_cast<std::size_t>(t.term)] = out.term(k);
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& hv = h.vertices()[v];
    if (hv.kind != VertexKind::avail && hv.kind != VertexKind::prod) continue;
    if (fwd[v] && bwd[v]) remap[v] = out.add_vertex(hv);
  }
  for (std::size_t e = 0; e < ne; ++e) {
    if (!usable[e]) continue;
    const auto& edge = E[e];
    int head = remap[static_cast<std::size_t>(edge.head)];
    if (head < 0 || !bwd[static_cast<std::size_t>(edge.head)]) continue;
    std::vector<int> tail;
    for (int k = 0; k < edge.tail_size(); ++k)
      tail.push_back(remap[static_cast<std::size_t>(edge.tail[static_cast<std::size_t>(k)])]);
    out.add_edge(tail, head, edge.label);
  }
  return out;
}

HyperCounts counts(const Hypergraph& h) {
  return {h.num_vertices(), h.num_edges()};
}

namespace {

std::string fnv_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 8);
}

}  // namespace

std::string spec_tag(const GraphStateSpec& spec) {
  return fnv_hex(to_json(spec).dump());
}

std::string network_signature(const QuantumNetwork& net) {
  json j = to_json(net);
  j.erase("params");
  return fnv_hex(j.dump());
}

Hypergraph merge_hypergraphs(const std::vector<std::pair<Hypergraph, double>>& parts) {
  if (parts.empty()) fail(ErrorKind::invalid_merge, "nothing to merge");
  Hypergraph out;
  out.set_network_signature(parts.front().first.network_signature());
  std::unordered_map<std::string, int> scope_of_tag;
  int next_scope = 1;

  for (const auto& [h, weight] : parts) {
    if (h.network_signature() != out.network_signature())
      fail(ErrorKind::invalid_merge, "hypergraphs were built over different networks");
    if (!(weight >= 0))
      fail(ErrorKind::invalid_merge, "merge weights must be >= 0");
    std::unordered_map<int, int> scope_map;  // input scope -> merged scope
    std::vector<int> remap(h.num_vertices(), -1);
    remap[static_cast<std::size_t>(h.start())] = out.start();
    for (const auto& t : h.targets()) {
      auto [it, fresh] = scope_of_tag.try_emplace(t.tag, next_scope);
      if (fresh) ++next_scope;
      scope_map[t.scope] = it->second;
      int k = out.add_target(t.spec, t.tag, it->second, t.weight * weight);
      remap[static_cast<std::size_t>(t.term)] = out.term(k);
    }
    for (std::size_t v = 0; v < h.num_vertices(); ++v) {
      HyperVertex hv = h.vertices()[v];
      if (hv.kind != VertexKind::avail && hv.kind != VertexKind::prod) continue;
      if (hv.scope > 0) hv.scope = scope_map.at(hv.scope);
      remap[v] = out.add_vertex(hv);
    }
    for (const auto& e : h.edges()) {
      std::vector<int> tail;
      for (int k = 0; k < e.tail_size(); ++k)
        tail.push_back(remap[static_cast<std::size_t>(e.tail[static_cast<std::size_t>(k)])]);
      out.add_edge(tail, remap[static_cast<std::size_t>(e.head)], e.label);
    }
  }
  return out;
}

json to_json(const Hypergraph& h) {
  json j;
  j["network"] = h.network_signature();
  j["targets"] = json::array();
  for (const auto& t : h.targets())
    j["targets"].push_back({{"spec", to_json(t.spec)},
                            {"tag", t.tag},
                            {"scope", t.scope},
                            {"term", t.term},
                            {"weight", t.weight}});
  j["vertices"] = json::array();
  for (std::size_t v = 0; v < h.num_vertices(); ++v) {
    const auto& hv = h.vertices()[v];
    json jv{{"id", v}, {"kind", to_string(hv.kind)}};
    if (hv.kind == VertexKind::avail || hv.kind == VertexKind::prod) {
      jv["state_key"] = state_key(hv.state);
      jv["target"] = hv.scope;
    }
    if (hv.kind == VertexKind::term) jv["target"] = hv.scope;
    if (hv.kind == VertexKind::prod) {
      jv["fusion"] = to_string(hv.fusion);
      if (hv.boundary != 1) jv["boundary"] = hv.boundary;
    }
    j["vertices"].push_back(std::move(jv));
  }
  j["edges"] = json::array();
  for (const auto& e : h.edges()) {
    json tail = json::array();
    for (int k = 0; k < e.tail_size(); ++k) tail.push_back(e.tail[static_cast<std::size_t>(k)]);
    j["edges"].push_back({{"tail", tail}, {"head", e.head}, {"label", to_string(e.label)}});
  }
  return j;
}

Hypergraph hypergraph_from_json(const json& j) {
  Hypergraph h;
  h.set_network_signature(j.value("network", std::string{}));
  const auto& jv = j.at("vertices");
  std::vector<int> remap(jv.size(), -1);
  std::vector<int> term_vertex;
  for (const auto& t : j.at("targets"))
    term_vertex.push_back(t.at("term").get<int>());
  std::size_t k = 0;
  for (const auto& t : j.at("targets")) {
    int idx = h.add_target(spec_from_json(t.at("spec")), t.at("tag").get<std::string>(),
                           t.at("scope").get<int>(), t.at("weight").get<double>());
    int v = term_vertex[k++];
    if (v < 0 || static_cast<std::size_t>(v) >= jv.size())
      fail(ErrorKind::invalid_argument, "target term vertex out of range");
    remap[static_cast<std::size_t>(v)] = h.term(idx);
  }
  for (std::size_t v = 0; v < jv.size(); ++v) {
    const auto& x = jv[v];
    if (x.at("id").get<std::size_t>() != v)
      fail(ErrorKind::invalid_argument, "vertex ids must be dense and ordered");
    std::string kind = x.at("kind").get<std::string>();
    if (kind == "start") {
      remap[v] = h.start();
    } else if (kind == "term") {
      if (remap[v] < 0) fail(ErrorKind::invalid_argument, "term vertex without target");
    } else if (kind == "avail" || kind == "prod") {
      HyperVertex hv;
      hv.kind = kind == "avail" ? VertexKind::avail : VertexKind::prod;
      hv.state = parse_state_key(x.at("state_key").get<std::string>());
      hv.scope = x.value("target", 0);
      if (hv.kind == VertexKind::prod) {
        hv.fusion = fusion_kind_from_string(x.at("fusion").get<std::string>());
        hv.boundary = x.value("boundary", 1);
      }
      remap[v] = h.add_vertex(hv);
    } else {
      fail(ErrorKind::invalid_argument, "unknown vertex kind '" + kind + "'");
    }
  }
  auto mapped = [&](int v) {
    if (v < 0 || static_cast<std::size_t>(v) >= remap.size() || remap[static_cast<std::size_t>(v)] < 0)
      fail(ErrorKind::invalid_edge, "edge references unknown vertex");
    return remap[static_cast<std::size_t>(v)];
  };
  for (const auto& e : j.at("edges")) {
    std::vector<int> tail;
    for (const auto& t : e.at("tail")) tail.push_back(mapped(t.get<int>()));
    h.add_edge(tail, mapped(e.at("head").get<int>()),
               edge_label_from_string(e.at("label").get<std::string>()));
  }
  return h;
}

}  // namespace gsplan
