// gsplan command-line front end.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gsplan/builders.hpp"
#include "gsplan/dp.hpp"
#include "gsplan/error.hpp"
#include "gsplan/hypergraph.hpp"
#include "gsplan/lp.hpp"
#include "gsplan/netmodel.hpp"
#include "gsplan/sim.hpp"
#include "gsplan/structure.hpp"

using namespace gsplan;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::io, "write failed for " + path);
}

json read_json(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
    fail(ErrorKind::io, path + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
}

// Runs a schema decoder, tagging failures with the file they came from.
template <class F>
auto decode(const std::string& path, const char* what, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  } catch (const json::exception& e) {
    fail(ErrorKind::io, path + ": invalid " + std::string(what) + " (" + e.what() + ")");
  } catch (const std::exception& e) {
    fail(ErrorKind::io, path + ": invalid " + std::string(what) + " (" + e.what() + ")");
  }
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

QuantumNetwork load_network(const std::string& path) {
  const json j = read_json(path);
  return decode(path, "network", [&] { return network_from_json(j); });
}

std::vector<std::pair<GraphStateSpec, double>> load_specs(const std::string& path) {
  const json j = read_json(path);
  return decode(path, "spec", [&] {
    std::vector<std::pair<GraphStateSpec, double>> out;
    if (j.is_object() && j.contains("targets")) {
      for (const auto& t : j.at("targets"))
        out.emplace_back(spec_from_json(t.at("spec")), t.value("weight", 1.0));
    } else {
      out.emplace_back(spec_from_json(j), 1.0);
    }
    if (out.empty()) fail(ErrorKind::invalid_spec, "no targets");
    return out;
  });
}

std::vector<NodeId> random_hosts(const QuantumNetwork& net, int k, std::uint64_t seed) {
  auto ids = net.node_ids();
  if (k < 2 || static_cast<std::size_t>(k) > ids.size())
    fail(ErrorKind::invalid_argument, "--random-terminals must be in [2, " + std::to_string(ids.size()) + "]");
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(k));
  return ids;
}

struct TargetArgs {
  std::string spec_path;
  int random_terminals = 0;
  std::uint64_t terminal_seed = 1;

  void add(CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "target spec JSON");
    cmd->add_option("--random-terminals", random_terminals,
                    "pick K hosts uniformly (path target unless --spec gives the shape)");
    cmd->add_option("--terminal-seed", terminal_seed, "seed for --random-terminals");
  }

  std::vector<std::pair<GraphStateSpec, double>> resolve(const QuantumNetwork& net) const {
    if (spec_path.empty() && random_terminals == 0)
      fail(ErrorKind::invalid_argument, "one of --spec or --random-terminals is required");
    if (spec_path.empty()) return {{GraphStateSpec::path(random_hosts(net, random_terminals, terminal_seed)), 1.0}};
    auto specs = load_specs(spec_path);
    if (random_terminals > 0) {
      if (specs.size() != 1) fail(ErrorKind::invalid_argument, "--random-terminals needs a single target");
      auto& s = specs.front().first;
      if (static_cast<int>(s.tau.size()) != random_terminals)
        fail(ErrorKind::invalid_argument, "--random-terminals " + std::to_string(random_terminals) +
                                              " does not match the spec size " + std::to_string(s.tau.size()));
      s.tau = random_hosts(net, random_terminals, terminal_seed);
    }
    for (const auto& [s, w] : specs) s.validate(net);
    return specs;
  }

  GraphStateSpec single(const QuantumNetwork& net) const {
    auto specs = resolve(net);
    if (specs.size() != 1) fail(ErrorKind::invalid_argument, "this command takes a single target");
    return specs.front().first;
  }
};

void check_scheme(const std::string& name) {
  const auto names = scheme_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return;
  if (name.rfind("distance-path:", 0) == 0) return;
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  fail(ErrorKind::invalid_argument, "unknown scheme '" + name + "'; valid schemes: " + list);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct SimArgs {
  double duration = 100.0;
  std::string routing = "deficit-round-robin";
  std::string links = "fixed";
  bool no_decoherence = false;
  int fifo_cap = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--duration", duration, "simulated seconds");
    cmd->add_option("--routing", routing, "weighted-random | deficit-round-robin");
    cmd->add_option("--links", links, "fixed | poisson");
    cmd->add_flag("--no-decoherence", no_decoherence, "disable the storage-age cutoff");
    cmd->add_option("--fifo-cap", fifo_cap, "queued operands per consumer slot");
  }

  SimConfig config(std::uint64_t seed) const {
    SimConfig c;
    c.duration = duration;
    c.seed = seed;
    c.routing = routing_policy_from_string(routing);
    c.links = link_process_from_string(links);
    c.decoherence = !no_decoherence;
    c.fifo_cap = fifo_cap;
    c.validate();
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-state distribution planner"};
  app.require_subcommand(1);
  std::size_t max_edges = Hypergraph::edge_limit();
  app.add_option("--max-edges", max_edges, "hyperedge cap per hypergraph (0: none)");

  // gen-net
  auto* gen = app.add_subcommand("gen-net", "random Waxman topology");
  int gen_nodes = 100;
  double gen_density = 0.1, gen_area = 100.0, gen_alpha = 0.4, gen_beta = 0.4;
  std::uint64_t gen_seed = 1;
  std::string gen_params, gen_out;
  gen->add_option("--nodes", gen_nodes, "node count");
  gen->add_option("--density", gen_density, "target edge density");
  gen->add_option("--area", gen_area, "square side in km");
  gen->add_option("--alpha", gen_alpha, "Waxman alpha");
  gen->add_option("--beta", gen_beta, "Waxman beta");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--params", gen_params, "hardware parameter JSON");
  gen->add_option("-o,--out", gen_out, "output network JSON")->required();

  // params
  auto* params_cmd = app.add_subcommand("params", "write the default hardware parameters");
  std::string params_out;
  params_cmd->add_option("-o,--out", params_out, "output JSON")->required();

  // plan
  auto* plan = app.add_subcommand("plan", "build the scheme hypergraph");
  std::string plan_net, plan_scheme, plan_out;
  bool plan_prune = false;
  TargetArgs plan_target;
  plan->add_option("--net", plan_net, "network JSON")->required();
  plan_target.add(plan);
  plan->add_option("--scheme", plan_scheme, "scheme name")->required();
  plan->add_flag("--prune", plan_prune, "drop vertices that cannot carry flow");
  plan->add_option("-o,--out", plan_out, "output hypergraph JSON");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve the flow LP");
  std::string solve_hyper, solve_net, solve_out, solve_lp;
  solve_cmd->add_option("--hyper", solve_hyper, "hypergraph JSON")->required();
  solve_cmd->add_option("--net", solve_net, "network JSON")->required();
  solve_cmd->add_option("-o,--out", solve_out, "output solution JSON")->required();
  solve_cmd->add_option("--export-lp", solve_lp, "write the LP in text form");

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "level structure from a solution");
  std::string ex_solution, ex_out, ex_dot;
  extract_cmd->add_option("--solution", ex_solution, "solution JSON")->required();
  extract_cmd->add_option("-o,--out", ex_out, "output structure JSON")->required();
  extract_cmd->add_option("--dot", ex_dot, "write a DOT rendering");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "discrete-event run of a structure");
  std::string sim_net, sim_structure, sim_out, sim_json, sim_label = "structure";
  std::uint64_t sim_seed = 1;
  SimArgs sim_args;
  sim_cmd->add_option("--net", sim_net, "network JSON")->required();
  sim_cmd->add_option("--structure", sim_structure, "structure JSON")->required();
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->add_option("--label", sim_label, "scheme column value");
  sim_args.add(sim_cmd);
  sim_cmd->add_option("-o,--out", sim_out, "output CSV")->required();
  sim_cmd->add_option("--json", sim_json, "full result JSON");

  // dp
  auto* dp_cmd = app.add_subcommand("dp", "swapping-tree dynamic program");
  std::string dp_net, dp_variant = "two-step", dp_policy = "equal", dp_out, dp_structure_out;
  TargetArgs dp_target;
  dp_cmd->add_option("--net", dp_net, "network JSON")->required();
  dp_target.add(dp_cmd);
  dp_cmd->add_option("--variant", dp_variant, "two-step | one-step")->check(CLI::IsMember({"two-step", "one-step"}));
  dp_cmd->add_option("--policy", dp_policy, "equal | proportional");
  dp_cmd->add_option("-o,--out", dp_out, "result JSON");
  dp_cmd->add_option("--structure", dp_structure_out, "write the tree as a structure JSON");

  // compare
  auto* cmp = app.add_subcommand("compare", "plan, solve and simulate several schemes");
  std::string cmp_net, cmp_schemes, cmp_out, cmp_json;
  int cmp_seeds = 1;
  std::uint64_t cmp_first_seed = 1;
  double cmp_pf = 0.0;
  TargetArgs cmp_target;
  SimArgs cmp_args;
  cmp->add_option("--net", cmp_net, "network JSON")->required();
  cmp_target.add(cmp);
  cmp->add_option("--schemes", cmp_schemes, "comma-separated scheme names")->required();
  cmp->add_option("--seeds", cmp_seeds, "number of seeds")->check(CLI::PositiveNumber);
  cmp->add_option("--first-seed", cmp_first_seed, "first seed");
  cmp->add_option("--pf", cmp_pf, "override p_f (p_b = p_f, p_ob = p_b/2)");
  cmp_args.add(cmp);
  cmp->add_option("-o,--out", cmp_out, "output CSV")->required();
  cmp->add_option("--json", cmp_json, "JSON mirror with rankings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    Hypergraph::set_edge_limit(max_edges);
    if (*gen) {
      WaxmanOptions o;
      o.n = gen_nodes;
      o.area_km = gen_area;
      o.alpha = gen_alpha;
      o.beta = gen_beta;
      o.target_density = gen_density;
      o.seed = gen_seed;
      if (!gen_params.empty()) {
        const json j = read_json(gen_params);
        o.params = decode(gen_params, "parameters", [&] { return params_from_json(j); });
      }
      const auto net = waxman_generate(o);
      write_json(gen_out, to_json(net));
      std::cout << "nodes " << net.size() << " links " << net.links().size() << " density " << net.density()
                << "\n";
    } else if (*params_cmd) {
      write_json(params_out, to_json(HardwareParams{}));
    } else if (*plan) {
      check_scheme(plan_scheme);
      if (is_dp_scheme(plan_scheme))
        fail(ErrorKind::invalid_argument, "scheme " + plan_scheme + " has no hypergraph; use the dp command");
      const auto net = load_network(plan_net);
      const auto specs = plan_target.resolve(net);
      Hypergraph h = specs.size() == 1 ? build_scheme(plan_scheme, net, specs.front().first)
                                       : build_concurrent(plan_scheme, net, specs);
      if (plan_prune) h = prune_unreachable(h);
      const auto c = counts(h);
      std::cout << "vertices " << c.vertices << " edges " << c.edges << "\n";
      if (!plan_out.empty()) write_json(plan_out, to_json(h));
    } else if (*solve_cmd) {
      const auto net = load_network(solve_net);
      const json hj = read_json(solve_hyper);
      const auto h = decode(solve_hyper, "hypergraph", [&] { return hypergraph_from_json(hj); });
      if (!h.network_signature().empty() && h.network_signature() != network_signature(net))
        fail(ErrorKind::invalid_argument, solve_hyper + ": hypergraph was built for a different network");
      const auto pruned = prune_unreachable(h);
      if (!solve_lp.empty()) write_text(solve_lp, export_lp_text(formulate(pruned, net)));
      const auto sol = solve_flow(pruned, net);
      json out{{"solution", solution_to_json(sol)}, {"hypergraph", to_json(pruned)}, {"network", to_json(net)}};
      write_json(solve_out, out);
      std::cout << "status " << to_string(sol.status) << " objective " << sol.objective << " residual "
                << sol.max_residual << " iterations " << sol.iterations << "\n";
      if (sol.status != LpStatus::optimal) return kExitInfeasible;
    } else if (*extract_cmd) {
      const json j = read_json(ex_solution);
      auto [h, net, sol] = decode(ex_solution, "solution", [&] {
        auto hg = hypergraph_from_json(j.at("hypergraph"));
        auto nw = network_from_json(j.at("network"));
        auto s = solution_from_json(j.at("solution"), hg.num_edges());
        return std::tuple{std::move(hg), std::move(nw), std::move(s)};
      });
      if (sol.status != LpStatus::optimal)
        fail(ErrorKind::infeasible, ex_solution + ": solution status is " + to_string(sol.status));
      const auto s = extract(h, sol, net);
      write_json(ex_out, to_json(s));
      if (!ex_dot.empty()) write_text(ex_dot, to_dot(s));
      std::cout << "nodes " << s.nodes.size() << " productions " << s.productions.size() << " rate "
                << s.objective << "\n";
    } else if (*sim_cmd) {
      const auto net = load_network(sim_net);
      const json sj = read_json(sim_structure);
      const auto s = decode(sim_structure, "structure", [&] { return structure_from_json(sj); });
      const auto r = simulate(net, s, sim_args.config(sim_seed));
      CompareRow row;
      row.scheme = sim_label;
      row.seed = sim_seed;
      row.lp_rate = s.objective;
      row.sim_rate = r.term_rate;
      row.sim_latency_mean = r.latency_mean;
      row.fusion_success_frac = r.fusion_success_frac();
      row.max_qubit_age = r.max_qubit_age;
      row.discards_decoherence = r.discards_decoherence;
      write_text(sim_out, compare_csv({row}));
      if (!sim_json.empty()) write_json(sim_json, to_json(r));
      std::cout << "sim_rate " << r.term_rate << " lp_rate " << s.objective << "\n";
    } else if (*dp_cmd) {
      const auto net = load_network(dp_net);
      const auto spec = dp_target.single(net);
      const auto policy = split_policy_from_string(dp_policy);
      const auto r = dp_variant == "one-step" ? dp_one_step(net, spec, policy) : dp_two_step(net, spec, policy);
      std::cout << "latency " << r.latency << " rate " << 1.0 / r.latency << "\n" << r.tree.to_dot();
      if (!dp_out.empty()) write_json(dp_out, to_json(r));
      if (!dp_structure_out.empty()) write_json(dp_structure_out, to_json(dp_structure(net, spec, r)));
    } else if (*cmp) {
      auto net = load_network(cmp_net);
      if (cmp_pf > 0.0) net = net.with_params(sweep_fusion_success(net.params(), cmp_pf));
      const auto spec = cmp_target.single(net);
      const auto schemes = split_csv(cmp_schemes);
      if (schemes.empty()) fail(ErrorKind::invalid_argument, "--schemes is empty");
      for (const auto& s : schemes) check_scheme(s);
      std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cmp_seeds));
      std::iota(seeds.begin(), seeds.end(), cmp_first_seed);
      const auto rows = compare_schemes(net, spec, schemes, seeds, cmp_args.config(cmp_first_seed));
      write_text(cmp_out, compare_csv(rows));
      if (!cmp_json.empty()) write_json(cmp_json, to_json(rows));
      for (const auto& name : rank_schemes(rows, true)) std::cout << name << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::infeasible ? kExitInfeasible : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
