#pragma once

// Independent reference computations used by the unit tests and the
// acceptance runner. Nothing here calls into the solver or the builders.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "gsplan/lp.hpp"

namespace oracles {

using gsplan::LinearProgram;
using gsplan::RowSense;

struct BruteLp {
  bool feasible = false;
  double objective = -std::numeric_limits<double>::infinity();
};

// Maximum over all basic feasible solutions: every choice of n active
// constraints among the rows and the bounds x >= 0 that contains all
// equalities. Valid for bounded problems only.
inline BruteLp brute_force_lp(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.num_vars());
  const int m = static_cast<int>(lp.rows.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + n);
  for (int r = 0; r < m; ++r) {
    for (auto [j, v] : lp.rows[static_cast<std::size_t>(r)].coeffs) A(r, j) += v;
    b(r) = lp.rows[static_cast<std::size_t>(r)].rhs;
  }
  for (int j = 0; j < n; ++j) A(m + j, j) = 1.0;

  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < n; ++j)
      if (x(j) < -1e-9) return false;
    for (int r = 0; r < m; ++r) {
      const double lhs = A.row(r).dot(x);
      const double tol = 1e-9 * (1.0 + std::abs(b(r)));
      switch (lp.rows[static_cast<std::size_t>(r)].sense) {
        case RowSense::le: if (lhs > b(r) + tol) return false; break;
        case RowSense::ge: if (lhs < b(r) - tol) return false; break;
        case RowSense::eq: if (std::abs(lhs - b(r)) > tol) return false; break;
      }
    }
    return true;
  };

  BruteLp best;
  std::vector<int> forced;
  for (int r = 0; r < m; ++r)
    if (lp.rows[static_cast<std::size_t>(r)].sense == RowSense::eq) forced.push_back(r);
  std::vector<int> pool;
  for (int k = 0; k < m + n; ++k)
    if (k >= m || lp.rows[static_cast<std::size_t>(k)].sense != RowSense::eq) pool.push_back(k);
  const int need = n - static_cast<int>(forced.size());
  if (need < 0) return best;

  std::vector<int> idx(static_cast<std::size_t>(need));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == need) {
      std::vector<int> act = forced;
      for (int d = 0; d < need; ++d) act.push_back(pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])]);
      Eigen::MatrixXd M(n, n);
      Eigen::VectorXd rhs(n);
      for (int k = 0; k < n; ++k) {
        M.row(k) = A.row(act[static_cast<std::size_t>(k)]);
        rhs(k) = b(act[static_cast<std::size_t>(k)]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if (!feasible(x)) return;
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += lp.objective[static_cast<std::size_t>(j)] * x(j);
      best.feasible = true;
      best.objective = std::max(best.objective, obj);
      return;
    }
    for (int k = start; k < static_cast<int>(pool.size()); ++k) {
      idx[static_cast<std::size_t>(depth)] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

// Bounded random LP with at most 12 variables: the first row caps the sum of
// all variables; further rows mix signs, and some are >= or = rows.
inline LinearProgram random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(2, 12), nr(1, 5), kind(0, 5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 1.0);
  LinearProgram lp;
  const int n = nv(rng);
  for (int j = 0; j < n; ++j) lp.add_var("x" + std::to_string(j), u(rng));
  gsplan::LpRow cap{"cap", {}, RowSense::le, 5.0 + 5.0 * pos(rng)};
  for (int j = 0; j < n; ++j) cap.coeffs.emplace_back(j, pos(rng));
  lp.rows.push_back(cap);
  const int extra = nr(rng);
  for (int r = 0; r < extra; ++r) {
    gsplan::LpRow row{"r" + std::to_string(r), {}, RowSense::le, 0.0};
    const int k = kind(rng);
    for (int j = 0; j < n; ++j)
      if (pos(rng) < 0.7) row.coeffs.emplace_back(j, k >= 4 ? pos(rng) : u(rng));
    if (row.coeffs.empty()) row.coeffs.emplace_back(0, 1.0);
    if (k == 4) {
      row.sense = RowSense::ge;
      row.rhs = 0.5 * pos(rng);
    } else if (k == 5) {
      row.sense = RowSense::eq;
      row.rhs = 1.0 + pos(rng);
    } else {
      row.rhs = 2.0 * u(rng) + 1.0;
    }
    lp.rows.push_back(row);
  }
  return lp;
}

// ---------------------------------------------------------------------------
// Path grammar by nested loops over every (x, i, j, y) tuple.

struct NaivePath {
  // Canonical path state; -1 stands for a missing extension.
  using State = std::tuple<int, int, int, int>;
  std::set<State> path_states;
  std::set<std::pair<int, int>> edge_states;
  std::set<std::pair<State, int>> prods;  // (state, 0 retain / 1 discard)
  std::size_t link_edges = 0, swap_edges = 0, relabel_edges = 0, fusion_edges = 0;

  std::size_t edge_prods = 0;

  std::size_t vertices() const {
    return 2 + edge_states.size() + path_states.size() + prods.size() + edge_prods;
  }
  std::size_t edges() const {
    return link_edges + swap_edges + edge_prods + relabel_edges + fusion_edges + prods.size() + 1;
  }
};

// `nodes` are network node ids; `hosts[t-1]` hosts terminal t; `links` are
// the network links; `keep` filters canonical states.
template <typename Keep>
NaivePath naive_path(const std::vector<int>& nodes, const std::vector<std::pair<int, int>>& links,
                     const std::vector<int>& hosts, Keep keep) {
  NaivePath out;
  const int n = static_cast<int>(hosts.size());
  std::vector<int> ext = nodes;
  ext.push_back(-1);
  auto hosted = [&](int v, int i, int j) {
    for (int t = i; t <= j; ++t)
      if (hosts[static_cast<std::size_t>(t - 1)] == v) return true;
    return false;
  };
  auto canon = [&](int x, int i, int j, int y) -> NaivePath::State {
    if (i == j) {
      if (x == -1 || (y != -1 && y < x)) std::swap(x, y);
    }
    return {x, i, j, y};
  };
  auto valid = [&](int x, int i, int j, int y) {
    if (x == -1 && y == -1 && i == j) return false;
    if (x != -1 && x == y) return false;
    if (x != -1 && hosted(x, i, j)) return false;
    if (y != -1 && hosted(y, i, j)) return false;
    return static_cast<bool>(keep(canon(x, i, j, y)));
  };
  auto E = [](int a, int b) { return std::pair<int, int>{std::min(a, b), std::max(a, b)}; };

  for (int a : nodes)
    for (int b : nodes)
      if (a < b) out.edge_states.insert({a, b});
  out.link_edges = links.size();
  std::set<std::pair<int, int>> edge_heads;
  for (int z : nodes)
    for (int a : nodes)
      for (int b : nodes)
        if (a < b && a != z && b != z) {
          ++out.swap_edges;
          edge_heads.insert({a, b});
        }
  out.edge_prods = edge_heads.size();

  std::set<std::pair<std::pair<int, int>, NaivePath::State>> relabels;
  for (int t = 1; t <= n; ++t) {
    const int ht = hosts[static_cast<std::size_t>(t - 1)];
    for (int x : nodes)
      if (x != ht && valid(x, t, t, -1)) relabels.insert({E(x, ht), canon(x, t, t, -1)});
    if (t < n && valid(-1, t, t + 1, -1))
      relabels.insert({E(ht, hosts[static_cast<std::size_t>(t)]), canon(-1, t, t + 1, -1)});
  }
  out.relabel_edges = relabels.size();
  for (const auto& [e, s] : relabels) out.path_states.insert(s);

  // A fusion edge is identified by its (unordered) tails, head and kind.
  using Key = std::tuple<int, NaivePath::State, NaivePath::State, NaivePath::State>;
  std::set<Key> fused;
  auto add = [&](int kind, NaivePath::State a, NaivePath::State b, NaivePath::State head) {
    if (b < a) std::swap(a, b);
    fused.insert({kind, a, b, head});
    out.path_states.insert(head);
    out.prods.insert({head, kind});
  };
  auto edge_state = [&](int a, int b) {
    auto [p, q] = E(a, b);
    return NaivePath::State{-2, p, q, 0};
  };

  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int x : ext)
        for (int y : ext)
          for (int z : nodes) {
            // extension growth with an edge state on either side
            if (valid(z, i, j, y) && x != -1 && x != z && valid(x, i, j, y)) {
              out.path_states.insert(canon(z, i, j, y));
              add(1, edge_state(x, z), canon(z, i, j, y), canon(x, i, j, y));
            }
            if (valid(x, i, j, z) && y != -1 && y != z && valid(x, i, j, y)) {
              out.path_states.insert(canon(x, i, j, z));
              add(1, canon(x, i, j, z), edge_state(z, y), canon(x, i, j, y));
            }
            // swap join at z
            for (int k = j + 1; k <= n; ++k)
              if (valid(x, i, j, z) && valid(z, j + 1, k, y) && valid(x, i, k, y)) {
                out.path_states.insert(canon(x, i, j, z));
                out.path_states.insert(canon(z, j + 1, k, y));
                add(1, canon(x, i, j, z), canon(z, j + 1, k, y), canon(x, i, k, y));
              }
          }
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int k = j; k <= n; ++k)
        for (int x : ext)
          for (int y : ext)
            if (valid(x, i, j, -1) && valid(-1, j, k, y) && valid(x, i, k, y) &&
                canon(x, i, j, -1) != canon(-1, j, k, y)) {
              out.path_states.insert(canon(x, i, j, -1));
              out.path_states.insert(canon(-1, j, k, y));
              add(0, canon(x, i, j, -1), canon(-1, j, k, y), canon(x, i, k, y));
            }
  out.fusion_edges = fused.size();
  return out;
}

// ---------------------------------------------------------------------------
// Every full binary tree over leaves lo..hi-1, evaluated bottom-up with
// join(l, r) = (1.5 max(l, r) + t) / p. Returns the minimum root value.

struct Shape {
  int leaf = -1;
  std::shared_ptr<Shape> left, right;
};

inline std::vector<std::shared_ptr<Shape>> all_shapes(int lo, int hi) {
  std::vector<std::shared_ptr<Shape>> out;
  if (hi - lo == 1) {
    auto s = std::make_shared<Shape>();
    s->leaf = lo;
    out.push_back(s);
    return out;
  }
  for (int m = lo + 1; m < hi; ++m)
    for (const auto& l : all_shapes(lo, m))
      for (const auto& r : all_shapes(m, hi)) {
        auto s = std::make_shared<Shape>();
        s->left = l;
        s->right = r;
        out.push_back(s);
      }
  return out;
}

inline double eval_shape(const Shape& s, const std::vector<double>& leaves, double t, double p) {
  if (s.leaf >= 0) return leaves[static_cast<std::size_t>(s.leaf)];
  return (1.5 * std::max(eval_shape(*s.left, leaves, t, p), eval_shape(*s.right, leaves, t, p)) + t) / p;
}

inline double brute_force_tree(const std::vector<double>& leaves, double t, double p,
                               std::size_t* count = nullptr) {
  const auto shapes = all_shapes(0, static_cast<int>(leaves.size()));
  if (count) *count = shapes.size();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : shapes) best = std::min(best, eval_shape(*s, leaves, t, p));
  return best;
}

// ---------------------------------------------------------------------------
// Simple paths by DFS.

inline void simple_paths(const std::map<int, std::vector<int>>& adj, int from, int to,
                         const std::set<std::pair<int, int>>& banned,
                         std::vector<std::vector<int>>& out, std::vector<int>& cur) {
  cur.push_back(from);
  if (from == to) {
    out.push_back(cur);
  } else {
    for (int w : adj.at(from)) {
      if (std::find(cur.begin(), cur.end(), w) != cur.end()) continue;
      if (banned.count({std::min(from, w), std::max(from, w)})) continue;
      simple_paths(adj, w, to, banned, out, cur);
    }
  }
  cur.pop_back();
}

}  // namespace oracles
