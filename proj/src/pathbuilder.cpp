#include <algorithm>
#include <cmath>

#include "gsplan/builders.hpp"
#include "gsplan/error.hpp"

namespace gsplan {

void add_link_layer(Hypergraph& h, const QuantumNetwork& net) {
  for (auto [a, b] : net.links()) h.link(a, b);
  const auto ids = net.node_ids();
  const std::size_t n = ids.size();
  // Edge states for every node pair exist before any swap so that vertex
  // ids do not depend on the loop order below.
  std::vector<std::vector<int>> ev(n, std::vector<int>(n, -1));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      ev[a][b] = ev[b][a] = h.avail(DistState::edge(ids[a], ids[b]), 0);
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == z) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (b == z) continue;
        h.fuse(ev[a][z], ev[z][b], DistState::edge(ids[a], ids[b]),
               FusionKind::discard, 0);
      }
    }
}

namespace {

void require_kind(const GraphStateSpec& spec, GraphKind kind, const QuantumNetwork& net) {
  if (spec.kind != kind)
    fail(ErrorKind::invalid_spec, std::string("scheme expects a ") + to_string(kind) +
                                      " target, got " + to_string(spec.kind));
  spec.validate(net);
}

// Enumerates the one-stage path grammar restricted to segments accepted by
// the filter. Network nodes are addressed by index; index V stands for a
// missing extension.
class PathGrammar {
 public:
  PathGrammar(const QuantumNetwork& net, const GraphStateSpec& spec, const PathFilter& keep)
      : net_(net), spec_(spec), keep_(keep), ids_(net.node_ids()) {
    V_ = static_cast<int>(ids_.size());
    n_ = spec.size;
    term_of_.assign(static_cast<std::size_t>(V_ + 1), 0);
    for (int t = 1; t <= n_; ++t)
      term_of_[net.index_of(spec.host(t))] = t;
  }

  Hypergraph build() {
    Hypergraph h;
    h.set_network_signature(network_signature(net_));
    const int scope = h.target_scope(h.add_target(spec_));
    add_link_layer(h, net_);
    h_ = &h;
    scope_ = scope;
    index_states();

    // relabels from edge states into terminal-indexed segments
    for (int t = 1; t <= n_; ++t) {
      int ht = host_index(t);
      for (int x = 0; x < V_; ++x) {
        if (x == ht || !valid(x, t, t, V_)) continue;
        h.relabel(edge_vertex(x, ht), seg(x, t, t, V_));
      }
      if (t < n_ && valid(V_, t, t + 1, V_))
        h.relabel(edge_vertex(ht, host_index(t + 1)), seg(V_, t, t + 1, V_));
    }

    for (int i = 1; i <= n_; ++i)
      for (int j = i; j <= n_; ++j) {
        extend_with_edges(i, j);
        for (int k = j + 1; k <= n_; ++k) swap_join(i, j, k);
        for (int k = j; k <= n_; ++k) retain_join(i, j, k);
      }

    if (valid(V_, 1, n_, V_)) h.connect_term(seg(V_, 1, n_, V_));
    return h;
  }

 private:
  const QuantumNetwork& net_;
  const GraphStateSpec& spec_;
  const PathFilter& keep_;
  std::vector<NodeId> ids_;
  int V_ = 0, n_ = 0;
  std::vector<int> term_of_;
  Hypergraph* h_ = nullptr;
  int scope_ = 1;
  // by_right[range][z]: left ends x of admissible <x, i..j, z>
  // by_left[range][z]:  right ends y of admissible <z, i..j, y>
  std::vector<std::vector<std::vector<int>>> by_right_, by_left_;

  int host_index(int t) const { return static_cast<int>(net_.index_of(spec_.host(t))); }
  NodeId node(int idx) const { return idx == V_ ? kNoNode : ids_[static_cast<std::size_t>(idx)]; }
  int range_id(int i, int j) const { return (i - 1) * n_ + (j - 1); }
  bool hosted(int x, int i, int j) const {
    int t = term_of_[static_cast<std::size_t>(x)];
    return t >= i && t <= j && t != 0;
  }

  bool valid(int x, int i, int j, int y) const {
    if (x == V_ && y == V_ && i == j) return false;
    if (x != V_ && x == y) return false;
    if (x != V_ && hosted(x, i, j)) return false;
    if (y != V_ && hosted(y, i, j)) return false;
    return keep_(DistState::path(node(x), i, j, node(y)));
  }

  DistState state(int x, int i, int j, int y) const {
    return DistState::path(node(x), i, j, node(y));
  }
  int seg(int x, int i, int j, int y) { return h_->avail(state(x, i, j, y), scope_); }
  int edge_vertex(int a, int b) { return h_->avail(DistState::edge(node(a), node(b)), 0); }

  void index_states() {
    by_right_.assign(static_cast<std::size_t>(n_ * n_), {});
    by_left_.assign(static_cast<std::size_t>(n_ * n_), {});
    for (int i = 1; i <= n_; ++i)
      for (int j = i; j <= n_; ++j) {
        auto& R = by_right_[static_cast<std::size_t>(range_id(i, j))];
        auto& L = by_left_[static_cast<std::size_t>(range_id(i, j))];
        R.assign(static_cast<std::size_t>(V_ + 1), {});
        L.assign(static_cast<std::size_t>(V_ + 1), {});
        for (int x = 0; x <= V_; ++x)
          for (int y = 0; y <= V_; ++y) {
            if (!valid(x, i, j, y)) continue;
            R[static_cast<std::size_t>(y)].push_back(x);
            L[static_cast<std::size_t>(x)].push_back(y);
          }
      }
  }

  const std::vector<int>& right_of(int i, int j, int z) const {
    return by_right_[static_cast<std::size_t>(range_id(i, j))][static_cast<std::size_t>(z)];
  }
  const std::vector<int>& left_of(int i, int j, int z) const {
    return by_left_[static_cast<std::size_t>(range_id(i, j))][static_cast<std::size_t>(z)];
  }

  // Edge(x,z) + <z,i..j,y> -> <x,i..j,y> and <x,i..j,z> + Edge(z,y) -> <x,i..j,y>
  void extend_with_edges(int i, int j) {
    for (int z = 0; z < V_; ++z) {
      for (int y : left_of(i, j, z)) {
        int tail = seg(z, i, j, y);
        for (int x = 0; x < V_; ++x) {
          if (x == z || !valid(x, i, j, y)) continue;
          h_->fuse(edge_vertex(x, z), tail, state(x, i, j, y), FusionKind::discard, scope_);
        }
      }
      for (int x : right_of(i, j, z)) {
        int tail = seg(x, i, j, z);
        for (int y = 0; y < V_; ++y) {
          if (y == z || !valid(x, i, j, y)) continue;
          h_->fuse(tail, edge_vertex(z, y), state(x, i, j, y), FusionKind::discard, scope_);
        }
      }
    }
  }

  // <x,i..j,z> + <z,(j+1)..k,y> -> <x,i..k,y>, swap at the shared node z
  void swap_join(int i, int j, int k) {
    for (int z = 0; z < V_; ++z) {
      const auto& xs = right_of(i, j, z);
      if (xs.empty()) continue;
      const auto& ys = left_of(j + 1, k, z);
      for (int x : xs) {
        int a = seg(x, i, j, z);
        for (int y : ys) {
          if (!valid(x, i, k, y)) continue;
          h_->fuse(a, seg(z, j + 1, k, y), state(x, i, k, y), FusionKind::discard, scope_);
        }
      }
    }
  }

  // <x,i..j,-> + <-,j..k,y> -> <x,i..k,y>, retain at terminal j
  void retain_join(int i, int j, int k) {
    const auto& xs = right_of(i, j, V_);
    const auto& ys = left_of(j, k, V_);
    for (int x : xs) {
      int a = seg(x, i, j, V_);
      for (int y : ys) {
        if (!valid(x, i, k, y)) continue;
        int b = seg(V_, j, k, y);
        if (a == b) continue;
        h_->fuse(a, b, state(x, i, k, y), FusionKind::retain, scope_);
      }
    }
  }
};

double terminal_spacing(const QuantumNetwork& net, const GraphStateSpec& spec, int t) {
  double best = 0.0;
  if (t > 1) best = std::max(best, net.distance(spec.host(t - 1), spec.host(t)));
  if (t < spec.size) best = std::max(best, net.distance(spec.host(t), spec.host(t + 1)));
  return best;
}

}  // namespace

bool left_sided_state(const DistState& s) {
  return s.kind != StateKind::path || s.y == kNoNode;
}

bool right_sided_state(const DistState& s) {
  if (s.kind != StateKind::path) return true;
  // single-terminal states keep their only extension in x
  return s.x == kNoNode || (s.i == s.j && s.y == kNoNode);
}

bool two_stage_state(const DistState& s) {
  return s.kind != StateKind::path || (s.x == kNoNode && s.y == kNoNode);
}

PathFilter distance_filter(const QuantumNetwork& net, const GraphStateSpec& spec, double c) {
  if (!(c > 0.5))
    fail(ErrorKind::invalid_argument, "distance multiplier must exceed 0.5");
  std::vector<double> limit(static_cast<std::size_t>(spec.size + 1), 0.0);
  for (int t = 1; t <= spec.size; ++t)
    limit[static_cast<std::size_t>(t)] = c * terminal_spacing(net, spec, t);
  return [&net, &spec, limit](const DistState& s) {
    if (s.kind != StateKind::path) return true;
    if (s.x != kNoNode &&
        net.distance(s.x, spec.host(s.i)) > limit[static_cast<std::size_t>(s.i)])
      return false;
    if (s.y != kNoNode &&
        net.distance(s.y, spec.host(s.j)) > limit[static_cast<std::size_t>(s.j)])
      return false;
    return true;
  };
}

Hypergraph build_path_filtered(const QuantumNetwork& net, const GraphStateSpec& spec,
                               const PathFilter& keep) {
  require_kind(spec, GraphKind::path, net);
  return PathGrammar(net, spec, keep).build();
}

Hypergraph build_path_one_stage(const QuantumNetwork& net, const GraphStateSpec& spec) {
  return build_path_filtered(net, spec, [](const DistState&) { return true; });
}

Hypergraph build_path_distance_filtered(const QuantumNetwork& net,
                                        const GraphStateSpec& spec, double c) {
  require_kind(spec, GraphKind::path, net);
  return build_path_filtered(net, spec, distance_filter(net, spec, c));
}

Hypergraph build_path_left_sided(const QuantumNetwork& net, const GraphStateSpec& spec) {
  return build_path_filtered(net, spec, left_sided_state);
}

Hypergraph build_path_right_sided(const QuantumNetwork& net, const GraphStateSpec& spec) {
  return build_path_filtered(net, spec, right_sided_state);
}

Hypergraph build_path_two_stage(const QuantumNetwork& net, const GraphStateSpec& spec) {
  return build_path_filtered(net, spec, two_stage_state);
}

}  // namespace gsplan
