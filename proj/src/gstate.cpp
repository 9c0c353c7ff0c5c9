#include "gsplan/gstate.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "gsplan/error.hpp"

namespace gsplan {

DistState DistState::edge(NodeId a, NodeId b) {
  DistState s;
  s.kind = StateKind::edge;
  s.x = a;
  s.y = b;
  return canonicalize(s);
}

DistState DistState::path(NodeId x, int i, int j, NodeId y) {
  DistState s;
  s.kind = StateKind::path;
  s.x = x;
  s.y = y;
  s.i = i;
  s.j = j;
  return canonicalize(s);
}

DistState DistState::tree(NodeId x, int p, int i, int j) {
  DistState s;
  s.kind = StateKind::tree;
  s.x = x;
  s.p = p;
  s.i = i;
  s.j = j;
  return canonicalize(s);
}

DistState DistState::grid(int c0, int c1, int r0, int r1) {
  DistState s;
  s.kind = StateKind::grid;
  s.i = c0;
  s.j = c1;
  s.r = r0;
  s.s = r1;
  return canonicalize(s);
}

DistState DistState::grid_corner(int col, int row, int corner) {
  DistState s;
  s.kind = StateKind::grid_corner;
  s.i = col;
  s.r = row;
  s.p = corner;
  return canonicalize(s);
}

DistState DistState::bipartite(int a0, int a1, int b0, int b1) {
  DistState s;
  s.kind = StateKind::bipartite;
  s.i = a0;
  s.j = a1;
  s.r = b0;
  s.s = b1;
  return canonicalize(s);
}

DistState DistState::star(int centre, int l0, int l1) {
  DistState s;
  s.kind = StateKind::star;
  s.p = centre;
  s.i = l0;
  s.j = l1;
  return canonicalize(s);
}

std::size_t DistStateHash::operator()(const DistState& s) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(s.kind) + 0x9E3779B97F4A7C15ULL;
  auto mix = [&h](std::int64_t v) {
    h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) +
         (h >> 2);
  };
  mix(s.x);
  mix(s.y);
  mix(s.i);
  mix(s.j);
  mix(s.r);
  mix(s.s);
  mix(s.p);
  return static_cast<std::size_t>(h);
}

namespace {

[[noreturn]] void bad_state(const std::string& why) {
  fail(ErrorKind::invalid_state, why);
}

void check_range(int lo, int hi, const char* what) {
  if (lo < 1 || hi < lo)
    bad_state(std::string("bad ") + what + " range " + std::to_string(lo) +
              ".." + std::to_string(hi));
}

}  // namespace

DistState canonicalize(DistState s) {
  switch (s.kind) {
    case StateKind::edge:
      if (s.x == kNoNode || s.y == kNoNode || s.x == s.y)
        bad_state("edge state needs two distinct nodes");
      if (s.x > s.y) std::swap(s.x, s.y);
      s.i = s.j = s.r = s.s = s.p = 0;
      break;
    case StateKind::path:
      if (s.i == 0 && s.j == 0) {
        if (s.x == kNoNode || s.y == kNoNode || s.x == s.y)
          bad_state("null-range path state needs two distinct extensions");
        if (s.y < s.x) std::swap(s.x, s.y);
        s.r = s.s = s.p = 0;
        break;
      }
      check_range(s.i, s.j, "terminal");
      if (s.x != kNoNode && s.x == s.y) bad_state("path extensions coincide");
      if (s.i == s.j) {
        if (s.x == kNoNode && s.y == kNoNode)
          bad_state("single-qubit path state");
        if (s.x == kNoNode || (s.y != kNoNode && s.y < s.x))
          std::swap(s.x, s.y);
      }
      s.r = s.s = s.p = 0;
      break;
    case StateKind::tree:
      check_range(s.i, s.j, "child");
      if (s.p < 1) bad_state("tree anchor must be a target vertex");
      s.y = kNoNode;
      s.r = s.s = 0;
      break;
    case StateKind::grid:
      check_range(s.i, s.j, "column");
      check_range(s.r, s.s, "row");
      if (s.i == s.j && s.r == s.s) bad_state("single-qubit grid state");
      s.x = s.y = kNoNode;
      s.p = 0;
      break;
    case StateKind::grid_corner:
      if (s.i < 1 || s.r < 1 || s.p < 0 || s.p > 3)
        bad_state("bad grid corner");
      s.x = s.y = kNoNode;
      s.j = s.s = 0;
      break;
    case StateKind::bipartite:
      check_range(s.i, s.j, "A");
      check_range(s.r, s.s, "B");
      s.x = s.y = kNoNode;
      s.p = 0;
      break;
    case StateKind::star:
      check_range(s.i, s.j, "leaf");
      if (s.p < 1) bad_state("star centre must be a target vertex");
      s.x = s.y = kNoNode;
      s.r = s.s = 0;
      break;
  }
  return s;
}

void check_state(const DistState& s, const GraphStateSpec& spec) {
  auto within = [](int v, int hi) { return v >= 1 && v <= hi; };
  switch (s.kind) {
    case StateKind::edge: return;
    case StateKind::path:
      if (spec.kind != GraphKind::path || (s.i != 0 && !within(s.j, spec.size)))
        bad_state("path range outside target");
      return;
    case StateKind::tree:
      if (spec.kind != GraphKind::tree || !within(s.p, spec.size) ||
          s.j > spec.child_count(s.p))
        bad_state("tree range outside target");
      return;
    case StateKind::grid:
      if (spec.kind != GraphKind::grid || s.j > spec.mx || s.s > spec.my)
        bad_state("grid range outside target");
      return;
    case StateKind::grid_corner:
      if (spec.kind != GraphKind::grid || s.i >= spec.mx || s.r >= spec.my)
        bad_state("grid corner outside target");
      return;
    case StateKind::bipartite:
      if (spec.kind != GraphKind::bipartite || s.j > spec.ma || s.s > spec.mb)
        bad_state("bipartite range outside target");
      return;
    case StateKind::star:
      if ((spec.kind != GraphKind::complete && spec.kind != GraphKind::star) ||
          !within(s.p, spec.size) || s.j > spec.size - 1)
        bad_state("star range outside target");
      return;
  }
}

namespace {

std::string node_str(NodeId n) { return n == kNoNode ? "-" : std::to_string(n); }

std::string range_str(int a, int b) {
  return std::to_string(a) + ".." + std::to_string(b);
}

}  // namespace

std::string state_key(const DistState& s) {
  switch (s.kind) {
    case StateKind::edge:
      return "E(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
    case StateKind::path:
      return "P(x=" + node_str(s.x) + "|" +
             (s.i == 0 ? std::string("-") : range_str(s.i, s.j)) +
             "|y=" + node_str(s.y) + ")";
    case StateKind::tree:
      return "T(x=" + node_str(s.x) + "|p=" + std::to_string(s.p) + "|" +
             range_str(s.i, s.j) + ")";
    case StateKind::grid:
      return "G(" + range_str(s.i, s.j) + "|" + range_str(s.r, s.s) + ")";
    case StateKind::grid_corner:
      return "GC(" + std::to_string(s.i) + "," + std::to_string(s.r) + "|" +
             std::to_string(s.p) + ")";
    case StateKind::bipartite:
      return "B(" + range_str(s.i, s.j) + "|" + range_str(s.r, s.s) + ")";
    case StateKind::star:
      return "S(k=" + std::to_string(s.p) + "|" + range_str(s.i, s.j) + ")";
  }
  return "?";
}

namespace {

// Minimal cursor over a key string.
struct KeyReader {
  const std::string& text;
  std::size_t pos = 0;

  void expect(const char* lit) {
    for (const char* c = lit; *c; ++c) {
      if (pos >= text.size() || text[pos] != *c)
        bad_state("malformed state key '" + text + "'");
      ++pos;
    }
  }
  int number() {
    int v = 0;
    auto [ptr, ec] =
        std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc{}) bad_state("malformed state key '" + text + "'");
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  }
  NodeId node() {
    if (pos < text.size() && text[pos] == '-') {
      ++pos;
      return kNoNode;
    }
    return number();
  }
  void range(int& a, int& b) {
    if (pos < text.size() && text[pos] == '-') {
      ++pos;
      a = b = 0;
      return;
    }
    a = number();
    expect("..");
    b = number();
  }
  void done() {
    if (pos != text.size()) bad_state("trailing text in key '" + text + "'");
  }
};

}  // namespace

DistState parse_state_key(const std::string& key) {
  KeyReader in{key};
  DistState s;
  if (key.rfind("GC(", 0) == 0) {
    in.expect("GC(");
    s.kind = StateKind::grid_corner;
    s.i = in.number();
    in.expect(",");
    s.r = in.number();
    in.expect("|");
    s.p = in.number();
  } else if (key.rfind("E(", 0) == 0) {
    in.expect("E(");
    s.kind = StateKind::edge;
    s.x = in.number();
    in.expect(",");
    s.y = in.number();
  } else if (key.rfind("P(", 0) == 0) {
    in.expect("P(x=");
    s.kind = StateKind::path;
    s.x = in.node();
    in.expect("|");
    in.range(s.i, s.j);
    in.expect("|y=");
    s.y = in.node();
  } else if (key.rfind("T(", 0) == 0) {
    in.expect("T(x=");
    s.kind = StateKind::tree;
    s.x = in.node();
    in.expect("|p=");
    s.p = in.number();
    in.expect("|");
    in.range(s.i, s.j);
  } else if (key.rfind("G(", 0) == 0 || key.rfind("B(", 0) == 0) {
    s.kind = key[0] == 'G' ? StateKind::grid : StateKind::bipartite;
    in.pos = 2;
    in.range(s.i, s.j);
    in.expect("|");
    in.range(s.r, s.s);
  } else if (key.rfind("S(", 0) == 0) {
    in.expect("S(k=");
    s.kind = StateKind::star;
    s.p = in.number();
    in.expect("|");
    in.range(s.i, s.j);
  } else {
    bad_state("unknown state key '" + key + "'");
  }
  in.expect(")");
  in.done();
  return canonicalize(s);
}

std::vector<int> star_vertices(const DistState& s) {
  std::vector<int> out{s.p};
  for (int l = s.i; l <= s.j; ++l) out.push_back(l < s.p ? l : l + 1);
  return out;
}

std::vector<int> corner_vertices(const DistState& s, const GraphStateSpec& spec) {
  // cell corners in cyclic order: (c,r), (c+1,r), (c+1,r+1), (c,r+1)
  const int c = s.i, r = s.r;
  const int cyc[4] = {spec.grid_vertex(c, r), spec.grid_vertex(c + 1, r),
                      spec.grid_vertex(c + 1, r + 1),
                      spec.grid_vertex(c, r + 1)};
  return {cyc[(s.p + 3) % 4], cyc[s.p], cyc[(s.p + 1) % 4]};
}

std::vector<NodeId> state_nodes(const DistState& s, const GraphStateSpec& spec) {
  std::vector<NodeId> out;
  switch (s.kind) {
    case StateKind::edge: return {s.x, s.y};
    case StateKind::path:
      if (s.x != kNoNode) out.push_back(s.x);
      for (int v = s.i; v >= 1 && v <= s.j; ++v) out.push_back(spec.host(v));
      if (s.y != kNoNode) out.push_back(s.y);
      return out;
    case StateKind::tree:
      if (s.x != kNoNode) out.push_back(s.x);
      for (NodeId h : spec.subtree_hosts(s.p, s.i, s.j)) out.push_back(h);
      return out;
    case StateKind::grid:
      for (int row = s.r; row <= s.s; ++row)
        for (int col = s.i; col <= s.j; ++col)
          out.push_back(spec.host(spec.grid_vertex(col, row)));
      return out;
    case StateKind::grid_corner:
      for (int v : corner_vertices(s, spec)) out.push_back(spec.host(v));
      return out;
    case StateKind::bipartite:
      for (int a = s.i; a <= s.j; ++a) out.push_back(spec.host(a));
      for (int b = s.r; b <= s.s; ++b) out.push_back(spec.host(spec.ma + b));
      return out;
    case StateKind::star:
      for (int v : star_vertices(s)) out.push_back(spec.host(v));
      return out;
  }
  return out;
}

}  // namespace gsplan
