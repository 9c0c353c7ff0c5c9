#include <algorithm>
#include <initializer_list>
#include <cstdlib>
#include <string>

#include "gsplan/builders.hpp"
#include "gsplan/error.hpp"

namespace gsplan {

namespace {

struct Prepared {
  Hypergraph h;
  int scope = 1;
};

Prepared prepare(const QuantumNetwork& net, const GraphStateSpec& spec,
                 std::initializer_list<GraphKind> kinds) {
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end())
    fail(ErrorKind::invalid_spec,
         std::string("scheme does not accept a ") + to_string(spec.kind) + " target");
  spec.validate(net);
  Prepared p;
  p.h.set_network_signature(network_signature(net));
  p.scope = p.h.target_scope(p.h.add_target(spec));
  add_link_layer(p.h, net);
  return p;
}

}  // namespace

Hypergraph build_grid_two_stage(const QuantumNetwork& net, const GraphStateSpec& spec) {
  Prepared prep = prepare(net, spec, {GraphKind::grid});
  Hypergraph& h = prep.h;
  const int scope = prep.scope;
  const int mx = spec.mx, my = spec.my;
  auto host = [&](int c, int r) { return spec.host(spec.grid_vertex(c, r)); };
  auto edge = [&](NodeId a, NodeId b) { return h.avail(DistState::edge(a, b), 0); };
  auto grid = [&](int c0, int c1, int r0, int r1) {
    return h.avail(DistState::grid(c0, c1, r0, r1), scope);
  };

  for (int r = 1; r <= my; ++r)
    for (int c = 1; c <= mx; ++c) {
      if (c < mx) h.relabel(edge(host(c, r), host(c + 1, r)), grid(c, c + 1, r, r));
      if (r < my) h.relabel(edge(host(c, r), host(c, r + 1)), grid(c, c, r, r + 1));
    }

  // Unit cells: an L-shaped corner is grown by a retain at its corner vertex,
  // and two opposite corners close the 4-cycle.
  for (int r = 1; r < my; ++r)
    for (int c = 1; c < mx; ++c) {
      int corner[4];
      for (int k = 0; k < 4; ++k) {
        const auto gc = DistState::grid_corner(c, r, k);
        const auto vs = corner_vertices(gc, spec);
        const NodeId a = spec.host(vs[0]), v = spec.host(vs[1]), b = spec.host(vs[2]);
        h.fuse(edge(a, v), edge(v, b), gc, FusionKind::retain, scope);
        corner[k] = h.avail(gc, scope);
      }
      const auto cell = DistState::grid(c, c + 1, r, r + 1);
      h.fuse(corner[0], corner[2], cell, FusionKind::row, scope, 2);
      h.fuse(corner[1], corner[3], cell, FusionKind::row, scope, 2);
    }

  for (int r0 = 1; r0 <= my; ++r0)
    for (int r1 = r0; r1 <= my; ++r1)
      for (int c0 = 1; c0 <= mx; ++c0)
        for (int c1 = c0; c1 <= mx; ++c1) {
          // row fusion: columns c0..j and j..c1 share column j
          for (int j = c0 + 1; j < c1; ++j)
            h.fuse(grid(c0, j, r0, r1), grid(j, c1, r0, r1),
                   DistState::grid(c0, c1, r0, r1), FusionKind::row, scope, r1 - r0 + 1);
          // column fusion: rows r0..s and s..r1 share row s
          for (int s = r0 + 1; s < r1; ++s)
            h.fuse(grid(c0, c1, r0, s), grid(c0, c1, s, r1),
                   DistState::grid(c0, c1, r0, r1), FusionKind::column, scope, c1 - c0 + 1);
        }

  h.connect_term(grid(1, mx, 1, my));
  return std::move(prep.h);
}

Hypergraph build_bipartite(const QuantumNetwork& net, const GraphStateSpec& spec) {
  Prepared prep = prepare(net, spec, {GraphKind::bipartite});
  Hypergraph& h = prep.h;
  const int scope = prep.scope;
  const int ma = spec.ma, mb = spec.mb;
  auto bip = [&](int a0, int a1, int b0, int b1) {
    return h.avail(DistState::bipartite(a0, a1, b0, b1), scope);
  };
  for (int a = 1; a <= ma; ++a)
    for (int b = 1; b <= mb; ++b)
      h.relabel(h.avail(DistState::edge(spec.host(a), spec.host(ma + b)), 0),
                bip(a, a, b, b));

  for (int a0 = 1; a0 <= ma; ++a0)
    for (int a1 = a0; a1 <= ma; ++a1)
      for (int b0 = 1; b0 <= mb; ++b0)
        for (int b1 = b0; b1 <= mb; ++b1) {
          const auto head = DistState::bipartite(a0, a1, b0, b1);
          // split the A range; every B vertex is fused
          for (int j = a0; j < a1; ++j)
            h.fuse(bip(a0, j, b0, b1), bip(j + 1, a1, b0, b1), head, FusionKind::row, scope,
                   b1 - b0 + 1);
          // split the B range; every A vertex is fused
          for (int s = b0; s < b1; ++s)
            h.fuse(bip(a0, a1, b0, s), bip(a0, a1, s + 1, b1), head, FusionKind::column,
                   scope, a1 - a0 + 1);
        }
  h.connect_term(bip(1, ma, 1, mb));
  return std::move(prep.h);
}

Hypergraph build_complete_star(const QuantumNetwork& net, const GraphStateSpec& spec) {
  Prepared prep = prepare(net, spec, {GraphKind::complete, GraphKind::star});
  Hypergraph& h = prep.h;
  const int scope = prep.scope;
  const int n = spec.size, leaves = n - 1;
  // A star state centred anywhere is equivalent to the complete graph up to
  // local Cliffords, so every centre can serve a complete target.
  const int centres = spec.kind == GraphKind::complete ? n : 1;
  for (int k = 1; k <= centres; ++k) {
    auto star = [&](int l0, int l1) { return h.avail(DistState::star(k, l0, l1), scope); };
    for (int l = 1; l <= leaves; ++l) {
      const int v = l < k ? l : l + 1;
      h.relabel(h.avail(DistState::edge(spec.host(k), spec.host(v)), 0), star(l, l));
    }
    for (int len = 2; len <= leaves; ++len)
      for (int i = 1; i + len - 1 <= leaves; ++i) {
        const int l = i + len - 1;
        for (int j = i; j < l; ++j)
          h.fuse(star(i, j), star(j + 1, l), DistState::star(k, i, l), FusionKind::star, scope);
      }
    h.connect_term(star(1, leaves));
  }
  return std::move(prep.h);
}

std::vector<std::string> scheme_names() {
  return {"one-stage-path", "distance-path:<c>", "left-path",    "right-path",
          "two-stage-path", "two-stage-tree",    "one-stage-tree", "grid",
          "bipartite",      "complete",          "star",         "dp-two-step",
          "dp-one-step"};
}

bool is_dp_scheme(const std::string& name) {
  return name == "dp-two-step" || name == "dp-one-step";
}

namespace {

[[noreturn]] void unknown_scheme(const std::string& name) {
  std::string list;
  for (const auto& s : scheme_names()) list += (list.empty() ? "" : ", ") + s;
  fail(ErrorKind::invalid_argument, "unknown scheme '" + name + "'; valid schemes: " + list);
}

}  // namespace

Hypergraph build_scheme(const std::string& name, const QuantumNetwork& net,
                        const GraphStateSpec& spec) {
  if (name == "one-stage-path") return build_path_one_stage(net, spec);
  if (name == "left-path") return build_path_left_sided(net, spec);
  if (name == "right-path") return build_path_right_sided(net, spec);
  if (name == "two-stage-path") return build_path_two_stage(net, spec);
  if (name.rfind("distance-path:", 0) == 0) {
    const std::string arg = name.substr(14);
    char* end = nullptr;
    double c = std::strtod(arg.c_str(), &end);
    if (arg.empty() || end != arg.c_str() + arg.size())
      fail(ErrorKind::invalid_argument, "bad distance multiplier in '" + name + "'");
    return build_path_distance_filtered(net, spec, c);
  }
  if (name == "two-stage-tree") return build_tree_two_stage(net, spec);
  if (name == "one-stage-tree") return build_tree_one_stage(net, spec);
  if (name == "grid") return build_grid_two_stage(net, spec);
  if (name == "bipartite") return build_bipartite(net, spec);
  if (name == "complete" || name == "star") {
    const auto want = name == "complete" ? GraphKind::complete : GraphKind::star;
    if (spec.kind != want)
      fail(ErrorKind::invalid_spec, "scheme '" + name + "' expects a " + name + " target");
    return build_complete_star(net, spec);
  }
  if (is_dp_scheme(name))
    fail(ErrorKind::invalid_argument, "'" + name + "' is a DP baseline and builds no hypergraph");
  unknown_scheme(name);
}

Hypergraph build_concurrent(const std::string& name, const QuantumNetwork& net,
                            const std::vector<std::pair<GraphStateSpec, double>>& specs) {
  std::vector<std::pair<Hypergraph, double>> parts;
  for (const auto& [spec, w] : specs) parts.emplace_back(build_scheme(name, net, spec), w);
  if (parts.size() == 1 && parts.front().second == 1.0) return std::move(parts.front().first);
  return merge_hypergraphs(parts);
}

}  // namespace gsplan
