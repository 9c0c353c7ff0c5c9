#include <algorithm>

#include "gsplan/builders.hpp"
#include "gsplan/error.hpp"

namespace gsplan {

namespace {

class TreeGrammar {
 public:
  TreeGrammar(const QuantumNetwork& net, const GraphStateSpec& spec, bool one_stage)
      : net_(net), spec_(spec), one_stage_(one_stage), ids_(net.node_ids()) {}

  Hypergraph build() {
    if (spec_.kind != GraphKind::tree)
      fail(ErrorKind::invalid_spec, std::string("scheme expects a tree target, got ") +
                                        to_string(spec_.kind));
    spec_.validate(net_);
    Hypergraph h;
    h_ = &h;
    h.set_network_signature(network_signature(net_));
    scope_ = h.target_scope(h.add_target(spec_));
    add_link_layer(h, net_);

    for (int p = 1; p <= spec_.size; ++p) {
      const int c = spec_.child_count(p);
      if (c == 0) continue;
      for (int i = 1; i <= c; ++i) {
        int u = spec_.children[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(i - 1)];
        if (spec_.is_leaf(u)) bootstrap_leaf(p, i, u);
        else complete_child(p, i, u);
      }
      for (int i = 1; i <= c; ++i)
        for (int j = i; j < c; ++j)
          for (int k = j + 1; k <= c; ++k) merge_ranges(p, i, j, k);
      if (one_stage_) extend(p, c);
    }
    h.connect_term(tree(kNoNode, 1, 1, spec_.child_count(1)));
    return h;
  }

 private:
  const QuantumNetwork& net_;
  const GraphStateSpec& spec_;
  bool one_stage_;
  std::vector<NodeId> ids_;
  Hypergraph* h_ = nullptr;
  int scope_ = 1;

  int tree(NodeId x, int p, int i, int j) {
    return h_->avail(DistState::tree(x, p, i, j), scope_);
  }
  int edge(NodeId a, NodeId b) { return h_->avail(DistState::edge(a, b), 0); }

  std::vector<char> excluded(int p, int i, int j) const {
    std::vector<char> out(ids_.size(), 0);
    for (NodeId v : spec_.subtree_hosts(p, i, j)) out[net_.index_of(v)] = 1;
    return out;
  }

  void bootstrap_leaf(int p, int i, int u) {
    const NodeId tp = spec_.host(p), tu = spec_.host(u);
    h_->relabel(edge(tp, tu), tree(kNoNode, p, i, i));
    if (!one_stage_) return;
    for (NodeId x : ids_) {
      if (x == tp || x == tu) continue;
      h_->fuse(edge(x, tp), edge(tp, tu), DistState::tree(x, p, i, i), FusionKind::retain,
               scope_);
    }
  }

  // child u (i-th of p) is internal: its complete subtree joins p
  void complete_child(int p, int i, int u) {
    const NodeId tp = spec_.host(p), tu = spec_.host(u);
    const int cu = spec_.child_count(u);
    h_->fuse(tree(kNoNode, u, 1, cu), edge(tu, tp), DistState::tree(kNoNode, p, i, i),
             FusionKind::fusion2, scope_);
    if (!one_stage_) return;
    // a complete subtree whose extension sits at the parent's host is the
    // parent's single-child state
    auto ex = excluded(u, 1, cu);
    if (!ex[net_.index_of(tp)]) h_->relabel(tree(tp, u, 1, cu), tree(kNoNode, p, i, i));
  }

  void merge_ranges(int p, int i, int j, int k) {
    const auto head = DistState::tree(kNoNode, p, i, k);
    h_->fuse(tree(kNoNode, p, i, j), tree(kNoNode, p, j + 1, k), head, FusionKind::fusion1,
             scope_);
    if (!one_stage_) return;
    auto ex = excluded(p, i, k);
    for (std::size_t xi = 0; xi < ids_.size(); ++xi) {
      if (ex[xi]) continue;
      const NodeId x = ids_[xi];
      const auto ext = DistState::tree(x, p, i, k);
      h_->fuse(tree(x, p, i, j), tree(kNoNode, p, j + 1, k), ext, FusionKind::fusion1, scope_);
      h_->fuse(tree(kNoNode, p, i, j), tree(x, p, j + 1, k), ext, FusionKind::fusion1, scope_);
    }
  }

  // Tree(x,p,i..j) + Edge(y,x) -> Tree(y,p,i..j), a swap at x
  void extend(int p, int c) {
    for (int i = 1; i <= c; ++i)
      for (int j = i; j <= c; ++j) {
        auto ex = excluded(p, i, j);
        for (std::size_t xi = 0; xi < ids_.size(); ++xi) {
          if (ex[xi]) continue;
          const int from = tree(ids_[xi], p, i, j);
          for (std::size_t yi = 0; yi < ids_.size(); ++yi) {
            if (ex[yi] || yi == xi) continue;
            h_->fuse(from, edge(ids_[xi], ids_[yi]), DistState::tree(ids_[yi], p, i, j),
                     FusionKind::discard, scope_);
          }
        }
      }
  }
};

}  // namespace

Hypergraph build_tree_two_stage(const QuantumNetwork& net, const GraphStateSpec& spec) {
  return TreeGrammar(net, spec, false).build();
}

Hypergraph build_tree_one_stage(const QuantumNetwork& net, const GraphStateSpec& spec) {
  return TreeGrammar(net, spec, true).build();
}

}  // namespace gsplan
