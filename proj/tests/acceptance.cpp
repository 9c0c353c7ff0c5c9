// Acceptance runner: one PASS/FAIL line per criterion, details indented above.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fixtures.hpp"
#include "gsplan/builders.hpp"
#include "gsplan/dp.hpp"
#include "gsplan/error.hpp"
#include "gsplan/lp.hpp"
#include "gsplan/sim.hpp"
#include "gsplan/structure.hpp"
#include "oracles.hpp"
#include "sim_fixtures.hpp"

#ifndef GSPLAN_LP_CROSSCHECK
#define GSPLAN_LP_CROSSCHECK "tests/lp_crosscheck.py"
#endif

using namespace gsplan;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void detail(const std::string& s) { std::cout << "    " << s << "\n"; }

std::string fmt(double v, int prec = 6) {
  std::ostringstream ss;
  ss << std::setprecision(prec) << v;
  return ss.str();
}

struct Outcome {
  bool pass = false;
  std::string summary;
};

// Flow-law bookkeeping over every LP solved here.
struct FlowLaws {
  int instances = 0;
  double worst_residual = 0.0;
  double worst_inflow_gap = 0.0;

  LevelStructure solve_extract(const Hypergraph& raw, const QuantumNetwork& net, double* objective) {
    const auto h = prune_unreachable(raw);
    const auto sol = solve_flow(h, net);
    if (sol.status != LpStatus::optimal) fail(ErrorKind::infeasible, std::string("LP ") + to_string(sol.status));
    auto s = extract(h, sol, net);
    ++instances;
    worst_residual = std::max(worst_residual, sol.max_residual);
    worst_inflow_gap = std::max(worst_inflow_gap, std::abs(s.term_inflow() - sol.objective));
    if (objective) *objective = sol.objective;
    return s;
  }

  double objective(const Hypergraph& raw, const QuantumNetwork& net) {
    double obj = 0.0;
    solve_extract(raw, net, &obj);
    return obj;
  }
};

FlowLaws laws;

std::set<std::string> avail_keys(const Hypergraph& h) {
  std::set<std::string> out;
  for (const auto& v : h.vertices())
    if (v.kind == VertexKind::avail) out.insert(state_key(v.state));
  return out;
}

bool includes(const std::set<std::string>& big, const std::set<std::string>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

GraphStateSpec six_node_tree(const std::vector<NodeId>& hosts) {
  return GraphStateSpec::tree({{2, 3}, {4, 5}, {6}, {}, {}, {}}, hosts);
}

GraphStateSpec default_tree(const std::vector<NodeId>& hosts) {
  return GraphStateSpec::tree({{2, 3}, {4, 5, 6}, {7, 8, 9}, {}, {}, {}, {}, {}, {}}, hosts);
}

GraphStateSpec first_hosts_path(int m) {
  std::vector<NodeId> h;
  for (int i = 0; i < m; ++i) h.push_back(i);
  return GraphStateSpec::path(h);
}

GraphStateSpec first_hosts_star(int m) {
  std::vector<std::vector<int>> c(static_cast<std::size_t>(m));
  for (int v = 2; v <= m; ++v) c[0].push_back(v);
  std::vector<NodeId> h;
  for (int i = 0; i < m; ++i) h.push_back(i);
  return GraphStateSpec::tree(c, h);
}

double slope(double x0, double y0, double x1, double y1) { return std::log(y1 / y0) / std::log(x1 / x0); }

// ---------------------------------------------------------------------------

Outcome solver_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  int agree = 0, bounded = 0;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto lp = oracles::random_lp(rng);
    const auto brute = oracles::brute_force_lp(lp);
    const auto sol = solve(lp);
    if (!brute.feasible) {
      if (sol.status == LpStatus::infeasible) ++agree;
      continue;
    }
    ++bounded;
    if (sol.status != LpStatus::optimal) continue;
    const double gap = std::abs(sol.objective - brute.objective);
    worst = std::max(worst, gap);
    if (gap <= 1e-6) ++agree;
  }
  const double dt = seconds_since(t0);
  detail("20 LPs (" + std::to_string(bounded) + " feasible), agreeing " + std::to_string(agree) +
         ", worst |simplex - enumeration| " + fmt(worst) + ", " + fmt(dt, 3) + " s");
  return {agree == 20 && dt < 5.0, "simplex vs vertex enumeration on 20 random LPs"};
}

// Solves an exported LP with the external HiGHS script; NaN when unavailable.
double external_optimum(const std::string& lp_text, const std::string& tag) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("gsplan_acceptance_" + std::to_string(::getpid()) + "_" + tag + ".lp");
  {
    std::ofstream out(path);
    out << lp_text;
  }
  const std::string cmd = "python3 \"" GSPLAN_LP_CROSSCHECK "\" \"" + path.string() + "\" 2>&1";
  std::string output;
  if (FILE* p = ::popen(cmd.c_str(), "r")) {
    char buf[256];
    while (std::fgets(buf, sizeof buf, p)) output += buf;
    ::pclose(p);
  }
  std::filesystem::remove(path);
  std::istringstream in(output);
  std::string word;
  double v = std::nan("");
  if (in >> word && word == "optimal") in >> v;
  if (std::isnan(v)) detail("cross-check output: " + output.substr(0, 200));
  return v;
}

Outcome closed_forms() {
  bool ok = true;
  double solve_time = 0.0;
  struct Case {
    std::string name;
    QuantumNetwork net;
    GraphStateSpec spec;
    double expected;
  };
  const std::vector<Case> cases{{"two-node", fixtures::two_node(), GraphStateSpec::path({0, 1}), 435.6},
                                {"chain", fixtures::chain3(), GraphStateSpec::path({0, 2}), 58.08}};
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const auto h = build_scheme("one-stage-path", c.net, c.spec);
    const double embedded = laws.objective(h, c.net);
    const auto lp = formulate(prune_unreachable(h), c.net);
    const std::string text = export_lp_text(lp);
    const auto reparsed = solve(parse_lp_text(text));
    solve_time += seconds_since(t0);
    const double external = external_optimum(text, c.name);
    const bool case_ok = std::abs(embedded - c.expected) <= 1e-6 &&
                         reparsed.status == LpStatus::optimal &&
                         std::abs(reparsed.objective - c.expected) <= 1e-6 && !std::isnan(external) &&
                         std::abs(external - c.expected) <= 1e-6;
    detail(c.name + ": expected " + fmt(c.expected, 10) + ", embedded " + fmt(embedded, 12) + ", re-parsed " +
           fmt(reparsed.objective, 12) + ", HiGHS " + fmt(external, 12) + (case_ok ? "" : "  <-- mismatch"));
    ok = ok && case_ok;
  }
  detail("embedded build+solve+export time " + fmt(solve_time, 3) + " s");
  return {ok && solve_time < 1.0, "closed-form optima 435.6 and 58.08 (embedded, re-parsed, HiGHS)"};
}

Outcome monotonicity() {
  const auto t0 = Clock::now();
  int violations = 0, inclusion_failures = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 12 + static_cast<int>(seed % 4);
    const auto net = fixtures::random_net(n, seed, 0.3);
    const auto path = GraphStateSpec::path(fixtures::pick_hosts(net, 4, seed + 100));
    const auto tree = six_node_tree(fixtures::pick_hosts(net, 6, seed + 200));
    const auto h_one = build_scheme("one-stage-path", net, path);
    const auto h_left = build_scheme("left-path", net, path);
    const auto h_tone = build_scheme("one-stage-tree", net, tree);
    const auto h_ttwo = build_scheme("two-stage-tree", net, tree);
    const bool incl = includes(avail_keys(h_one), avail_keys(h_left)) &&
                      includes(avail_keys(h_tone), avail_keys(h_ttwo));
    const double one = laws.objective(h_one, net), left = laws.objective(h_left, net);
    const double tone = laws.objective(h_tone, net), ttwo = laws.objective(h_ttwo, net);
    const bool ok = left <= one + 1e-9 && ttwo <= tone + 1e-9;
    violations += !ok;
    inclusion_failures += !incl;
    detail("seed " + std::to_string(seed) + " n=" + std::to_string(n) + ": left " + fmt(left) + " <= one-stage " +
           fmt(one) + "; two-stage-tree " + fmt(ttwo) + " <= one-stage-tree " + fmt(tone) +
           (incl ? "" : "  <-- vertex inclusion broken") + (ok ? "" : "  <-- objective order broken"));
  }
  const double dt = seconds_since(t0);
  detail("runtime " + fmt(dt, 3) + " s");
  return {violations == 0 && inclusion_failures == 0 && dt < 600.0,
          "induced sub-hypergraph objectives on 10 seeded 12-15 node instances"};
}

Outcome renewal() {
  const auto net = fixtures::renewal_net();
  const auto s = fixtures::single_fusion(net, 100.0);
  const double expected = 2.0 / 3.0 * 100.0 * 0.4;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig cfg;
    cfg.duration = 200.0;
    cfg.seed = seed;
    cfg.links = LinkProcess::poisson;
    const auto r = simulate(net, s, cfg);
    const double dev = std::abs(r.term_rate - expected) / expected;
    ok = ok && dev <= 0.15;
    detail("seed " + std::to_string(seed) + ": rate " + fmt(r.term_rate) + " vs " + fmt(expected) + " (" +
           fmt(100 * dev, 3) + "% off)");
  }
  return {ok, "single fusion of Poisson operands at 100/s, p_f = 0.4, 200 s, 5 seeds"};
}

// Pairs with LP rates more than 5% apart must keep their order in simulation.
bool rank_preserved(const std::vector<CompareRow>& rows) {
  for (const auto& a : rows)
    for (const auto& b : rows) {
      if (a.lp_rate <= b.lp_rate * 1.05) continue;
      if (a.sim_rate <= b.sim_rate) return false;
    }
  return true;
}

Outcome lp_vs_sim() {
  bool fixtures_ok = true;
  struct Case {
    std::string name;
    QuantumNetwork net;
    GraphStateSpec spec;
  };
  const std::vector<Case> cases{{"two-node", fixtures::two_node(), GraphStateSpec::path({0, 1})},
                                {"chain", fixtures::chain3(), GraphStateSpec::path({0, 2})}};
  for (const auto& c : cases) {
    double lp = 0.0;
    const auto s = laws.solve_extract(build_scheme("one-stage-path", c.net, c.spec), c.net, &lp);
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SimConfig cfg;
      cfg.seed = seed;
      const double ratio = simulate(c.net, s, cfg).term_rate / lp;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    fixtures_ok = fixtures_ok && lo >= 0.5 && hi <= 2.0;
    detail(c.name + ": LP " + fmt(lp) + ", sim/LP over 5 seeds in [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "]");
  }

  // Rank order is judged over the LP-planned schemes; DP rows carry a latency
  // estimate rather than an LP objective and are listed for reference.
  const std::vector<std::string> schemes{"one-stage-path", "left-path", "two-stage-path", "distance-path:0.75",
                                         "dp-two-step", "dp-one-step"};
  int preserved = 0, with_dp = 0, strict_pairs = 0;
  std::map<std::string, std::pair<double, int>> ratio;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto net = fixtures::random_net(10, seed, 0.3);
    const auto spec = GraphStateSpec::path(fixtures::pick_hosts(net, 4, seed + 300));
    for (const auto& scheme : schemes)
      if (!is_dp_scheme(scheme)) laws.objective(build_scheme(scheme, net, spec), net);
    const auto rows = compare_schemes(net, spec, schemes, {seed}, SimConfig{});
    std::vector<CompareRow> lp_rows;
    for (const auto& r : rows)
      if (!is_dp_scheme(r.scheme)) lp_rows.push_back(r);
    for (const auto& a : lp_rows)
      for (const auto& b : lp_rows) strict_pairs += a.lp_rate > b.lp_rate * 1.05;
    const bool kept = rank_preserved(lp_rows);
    preserved += kept;
    with_dp += rank_preserved(rows);
    std::string line = "seed " + std::to_string(seed) + " (LP/sim):";
    for (const auto& r : rows) {
      line += " " + r.scheme + " " + fmt(r.lp_rate, 4) + "/" + fmt(r.sim_rate, 4);
      ratio[r.scheme].first += r.sim_rate / r.lp_rate;
      ratio[r.scheme].second += 1;
    }
    detail(line + (kept ? "" : "  <-- order changed"));
  }
  std::string direction = "mean sim/predicted:";
  for (const auto& [scheme, acc] : ratio) direction += " " + scheme + " " + fmt(acc.first / acc.second, 4);
  detail(direction);
  detail("LP schemes: rank preserved in " + std::to_string(preserved) + "/10 seeds over " +
         std::to_string(strict_pairs) + " separated pairs; with DP rows included " + std::to_string(with_dp) + "/10");
  return {fixtures_ok && preserved >= 8, "sim within [0.5x, 2x] of LP on fixtures; rank kept in >= 8/10 seeds"};
}

Outcome dp_oracles() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.001, 0.05), pb(0.2, 1.0), tb(0.0, 1e-3);
  double worst_tree = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<double> lat;
    for (int i = 0; i < n; ++i) lat.push_back(u(rng));
    HardwareParams p;
    p.p_b = pb(rng);
    p.t_b = tb(rng);
    p.t_c = tb(rng);
    const auto [dp, tree] = swapping_tree_dp(lat, p);
    const double brute = oracles::brute_force_tree(lat, p.t_b + p.t_c, p.p_b);
    worst_tree = std::max({worst_tree, std::abs(dp - brute) / brute,
                           std::abs(estimate_latency(tree, p) - dp) / dp});
  }
  detail("swapping trees, 60 trials up to 6 leaves: worst relative gap to exhaustive/re-score " + fmt(worst_tree));

  double worst_rescore = 0.0;
  int shared = 0, one_better_or_equal = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto net = fixtures::random_net(10, seed);
    const auto spec = GraphStateSpec::path(fixtures::pick_hosts(net, 3 + static_cast<int>(seed % 2), seed * 7));
    const auto one = dp_one_step(net, spec);
    const auto two = dp_two_step(net, spec);
    for (const auto* r : {&one, &two})
      worst_rescore = std::max(worst_rescore,
                               std::abs(estimate_latency(r->tree, net.params()) - r->latency) / r->latency);
    if (one.chain == two.chain) {
      ++shared;
      one_better_or_equal += one.latency <= two.latency * (1 + 1e-12);
    }
  }
  detail("25 routed instances: worst relative re-score gap " + fmt(worst_rescore) + "; one-step <= two-step on " +
         std::to_string(one_better_or_equal) + "/" + std::to_string(shared) + " shared-chain instances");
  return {worst_tree <= 1e-9 && worst_rescore <= 1e-9 && shared > 0 && one_better_or_equal == shared,
          "swapping-tree DP exact, re-scores, one-step <= two-step"};
}

Outcome scaling() {
  bool ok = true;
  std::map<std::pair<int, int>, HyperCounts> path, tree;
  for (int n : {10, 20, 40})
    for (int m : {3, 5}) {
      const auto net = fixtures::complete(n);
      path[{n, m}] = counts(build_scheme("one-stage-path", net, first_hosts_path(m)));
      tree[{n, m}] = counts(build_scheme("one-stage-tree", net, first_hosts_star(m)));
    }
  auto V = [](const std::map<std::pair<int, int>, HyperCounts>& t, int n, int m) {
    return static_cast<double>(t.at({n, m}).vertices);
  };

  // one-stage path against n^2 m^2
  for (int m : {3, 5})
    for (auto [a, b] : {std::pair{10, 20}, std::pair{20, 40}}) {
      const double s = slope(a, V(path, a, m), b, V(path, b, m));
      const bool fine = std::abs(s - 2.0) <= 0.5;
      ok = ok && fine;
      detail("path n-slope m=" + std::to_string(m) + " n " + std::to_string(a) + "->" + std::to_string(b) + ": " +
             fmt(s, 3) + " (model 2)" + (fine ? "" : "  <--"));
    }
  for (int n : {10, 20, 40}) {
    const double s = slope(3, V(path, n, 3), 5, V(path, n, 5));
    const bool fine = std::abs(s - 2.0) <= 0.5;
    ok = ok && fine;
    detail("path m-slope n=" + std::to_string(n) + " m 3->5: " + fmt(s, 3) + " (model 2)" + (fine ? "" : "  <--"));
  }

  // one-stage tree against n^2 + n m^3, read as an upper growth order
  auto f = [](double n, double m) { return n * n + n * m * m * m; };
  for (int m : {3, 5})
    for (auto [a, b] : {std::pair{10, 20}, std::pair{20, 40}}) {
      const double s = slope(a, V(tree, a, m), b, V(tree, b, m));
      const double model = slope(a, f(a, m), b, f(b, m));
      const bool fine = std::abs(s - model) <= 0.5;
      ok = ok && fine;
      detail("tree n-slope m=" + std::to_string(m) + " n " + std::to_string(a) + "->" + std::to_string(b) + ": " +
             fmt(s, 3) + " (model " + fmt(model, 3) + ")" + (fine ? "" : "  <--"));
    }
  for (int n : {10, 20, 40}) {
    const double s = slope(3, V(tree, n, 3), 5, V(tree, n, 5));
    const double model = slope(3, f(n, 3), 5, f(n, 5));
    const bool fine = s > 0.0 && s <= model + 0.5;
    ok = ok && fine;
    detail("tree m-slope n=" + std::to_string(n) + " m 3->5: " + fmt(s, 3) + " (model " + fmt(model, 3) +
           ", upper)" + (fine ? "" : "  <--"));
  }

  // Default scale: 100 nodes, density 0.1, 9 terminals.
  WaxmanOptions o;
  o.n = 100;
  o.area_km = 100.0;
  o.target_density = 0.1;
  o.seed = 1;
  const auto net = waxman_generate(o);
  const auto hosts = fixtures::pick_hosts(net, 9, 1);
  auto order_ok = [](double ours, double reference) { return std::abs(std::log10(ours / reference)) <= 1.0; };
  struct Ref {
    std::string scheme;
    GraphStateSpec spec;
    double v, e;
  };
  const std::vector<Ref> refs{{"two-stage-tree", default_tree(hosts), 10444, 491105},
                              {"one-stage-tree", default_tree(hosts), 14007, 634970}};
  for (const auto& r : refs) {
    const auto c = counts(build_scheme(r.scheme, net, r.spec));
    const bool fine = order_ok(static_cast<double>(c.vertices), r.v) && order_ok(static_cast<double>(c.edges), r.e);
    ok = ok && fine;
    detail("default scale " + r.scheme + ": " + std::to_string(c.vertices) + " vertices / " +
           std::to_string(c.edges) + " edges (reference " + fmt(r.v, 7) + " / " + fmt(r.e, 7) + ")" +
           (fine ? "" : "  <--"));
  }
  for (const std::string scheme : {"left-path", "two-stage-path"}) {
    const auto c = counts(build_scheme(scheme, net, GraphStateSpec::path(hosts)));
    detail("default scale " + scheme + ": " + std::to_string(c.vertices) + " vertices / " +
           std::to_string(c.edges) + " edges (informational)");
  }
  // The full one-stage path hypergraph does not fit in memory at this scale;
  // extrapolate from the complete-graph grid with the measured slopes.
  auto extrapolate = [&](auto get) {
    const double bn = slope(20, get(path.at({20, 5})), 40, get(path.at({40, 5})));
    const double bm = slope(3, get(path.at({40, 3})), 5, get(path.at({40, 5})));
    return get(path.at({40, 5})) * std::pow(100.0 / 40.0, bn) * std::pow(9.0 / 5.0, bm);
  };
  const double v_est = extrapolate([](const HyperCounts& c) { return static_cast<double>(c.vertices); });
  const double e_est = extrapolate([](const HyperCounts& c) { return static_cast<double>(c.edges); });
  const bool path_fine = order_ok(v_est, 25808) && order_ok(e_est, 814475);
  ok = ok && path_fine;
  detail("default scale one-stage-path: not materialized; extrapolated ~" + fmt(v_est, 3) + " vertices / ~" +
         fmt(e_est, 3) + " edges (reference 25808 / 814475)" + (path_fine ? "" : "  <--"));
  return {ok, "vertex growth slopes and default-scale counts"};
}

Outcome pf_sweep() {
  const auto t0 = Clock::now();
  const std::vector<std::string> schemes{"one-stage-path", "two-stage-path", "one-stage-tree", "dp-two-step"};
  const std::vector<double> pfs{0.2, 0.4, 0.6};
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto base = fixtures::random_net(10, 4, 0.3);
  const auto path = GraphStateSpec::path(fixtures::pick_hosts(base, 3, 41));
  const auto tree = GraphStateSpec::tree({{2, 3}, {4}, {}, {}}, fixtures::pick_hosts(base, 4, 42));
  bool ok = true;
  for (const auto& scheme : schemes) {
    const auto& spec = scheme.find("tree") != std::string::npos ? tree : path;
    std::vector<double> lp;
    std::vector<std::vector<double>> sim;
    for (double pf : pfs) {
      const auto net = base.with_params(sweep_fusion_success(base.params(), pf));
      if (!is_dp_scheme(scheme)) laws.objective(build_scheme(scheme, net, spec), net);
      const auto rows = compare_schemes(net, spec, {scheme}, seeds, SimConfig{});
      lp.push_back(rows.front().lp_rate);
      sim.emplace_back();
      for (const auto& r : rows) sim.back().push_back(r.sim_rate);
    }
    bool mono = true;
    for (std::size_t k = 1; k < pfs.size(); ++k) {
      mono = mono && lp[k] >= lp[k - 1] - 1e-12;
      for (std::size_t s = 0; s < seeds.size(); ++s) mono = mono && sim[k][s] >= sim[k - 1][s];
    }
    ok = ok && mono;
    std::string line = scheme + ":";
    for (std::size_t k = 0; k < pfs.size(); ++k) {
      line += " p_f=" + fmt(pfs[k], 2) + " LP " + fmt(lp[k], 4) + " sim";
      for (double v : sim[k]) line += " " + fmt(v, 4);
      line += ";";
    }
    detail(line + (mono ? "" : "  <-- not monotone"));
  }
  const double dt = seconds_since(t0);
  detail("runtime " + fmt(dt, 3) + " s");
  return {ok && dt < 900.0, "LP and simulated rates nondecreasing in p_f (p_b = p_f, p_ob = p_b/2)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::pair<int, std::function<Outcome()>>> checks{
      {1, solver_oracle}, {2, closed_forms}, {4, monotonicity}, {5, renewal},
      {6, lp_vs_sim},     {7, dp_oracles},   {8, scaling},      {9, pf_sweep}};
  std::array<Outcome, 10> results;
  for (const auto& [id, fn] : checks) {
    if (!only.empty() && !only.count(id)) continue;
    std::cout << "criterion " << id << "\n";
    const auto t0 = Clock::now();
    try {
      results[static_cast<std::size_t>(id)] = fn();
    } catch (const std::exception& e) {
      results[static_cast<std::size_t>(id)] = {false, std::string("exception: ") + e.what()};
    }
    detail("(" + fmt(seconds_since(t0), 3) + " s)");
    std::cout.flush();
  }
  std::cout << "criterion 3\n";
  detail(std::to_string(laws.instances) + " solved instances: worst residual " + fmt(laws.worst_residual) +
         ", worst |term inflow - objective| " + fmt(laws.worst_inflow_gap));
  results[3] = {laws.instances > 0 && laws.worst_residual <= 1e-8 && laws.worst_inflow_gap <= 1e-8,
                "constraint residual and term inflow on every solved instance"};

  std::cout << "\n";
  int failed = 0;
  for (int id = 1; id <= 9; ++id) {
    if (!only.empty() && !only.count(id)) continue;
    const auto& r = results[static_cast<std::size_t>(id)];
    failed += !r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << r.summary << "\n";
  }
  return failed == 0 ? 0 : 1;
}
