#include "gsplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <future>
#include <limits>
#include <numeric>
#include <queue>

#include "gsplan/builders.hpp"
#include "gsplan/dp.hpp"
#include "gsplan/error.hpp"

namespace gsplan {

using nlohmann::json;

const char* to_string(RoutingPolicy p) {
  return p == RoutingPolicy::weighted_random ? "weighted-random" : "deficit-round-robin";
}

RoutingPolicy routing_policy_from_string(const std::string& s) {
  if (s == "weighted-random") return RoutingPolicy::weighted_random;
  if (s == "deficit-round-robin" || s == "drr") return RoutingPolicy::deficit_round_robin;
  fail(ErrorKind::invalid_argument,
       "unknown routing policy '" + s + "' (weighted-random, deficit-round-robin)");
}

const char* to_string(LinkProcess p) { return p == LinkProcess::fixed_cadence ? "fixed" : "poisson"; }

LinkProcess link_process_from_string(const std::string& s) {
  if (s == "fixed") return LinkProcess::fixed_cadence;
  if (s == "poisson") return LinkProcess::poisson;
  fail(ErrorKind::invalid_argument, "unknown link process '" + s + "' (fixed, poisson)");
}

void SimConfig::validate() const {
  if (!(duration > 0.0)) fail(ErrorKind::invalid_argument, "duration must be > 0");
  if (fifo_cap < 0) fail(ErrorKind::invalid_argument, "fifo cap must be >= 0");
}

ShareRouter::ShareRouter(std::vector<double> shares, RoutingPolicy policy)
    : shares_(std::move(shares)), credit_(shares_.size(), 0.0), policy_(policy) {
  double total = 0.0;
  for (double s : shares_) total += std::max(0.0, s);
  for (double& s : shares_) s = total > 0.0 ? std::max(0.0, s) / total : 1.0 / static_cast<double>(shares_.size());
  pick_ = std::discrete_distribution<int>(shares_.begin(), shares_.end());
}

int ShareRouter::next(std::mt19937_64& rng) {
  if (shares_.size() == 1) return 0;
  if (policy_ == RoutingPolicy::weighted_random) return pick_(rng);
  int best = 0;
  for (std::size_t c = 0; c < shares_.size(); ++c) {
    credit_[c] += shares_[c];
    if (credit_[c] > credit_[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  credit_[static_cast<std::size_t>(best)] -= 1.0;
  return best;
}

namespace {

enum class EvType : std::uint8_t { link, fusion_done, expire };

struct Event {
  double t;
  long seq;
  EvType type;
  int a;  // production (link, fusion_done) or token (expire)
  int b;  // pending fusion slot

  bool operator>(const Event& o) const { return t != o.t ? t > o.t : seq > o.seq; }
};

struct Token {
  int node = -1;
  double birth = 0.0;
  int leaves = 1;
  bool alive = true;
  int prod = -1, slot = -1;  // buffer location while queued
};

struct Pending {
  std::vector<int> operands;
};

class Simulator {
 public:
  Simulator(const QuantumNetwork& net, const LevelStructure& s, const SimConfig& cfg)
      : net_(net), s_(s), cfg_(cfg), rng_(cfg.seed) {}

  SimResult run();

 private:
  void push(double t, EvType type, int a, int b = -1) { queue_.push({t, seq_++, type, a, b}); }
  void schedule_link(int k, double from);
  void deliver(int token);
  void try_fire(int k);
  void finish(int k, int pending);
  void discard(int token, long& count, long& leaves);
  double age(int token) const { return now_ - tokens_[static_cast<std::size_t>(token)].birth; }
  void observe_age(double a) { res_.max_qubit_age = std::max(res_.max_qubit_age, a); }

  const QuantumNetwork& net_;
  const LevelStructure& s_;
  SimConfig cfg_;
  std::mt19937_64 rng_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  long seq_ = 0;
  double now_ = 0.0;

  std::vector<Token> tokens_;
  std::vector<Pending> pending_;
  std::vector<int> free_pending_;
  std::vector<std::vector<std::deque<int>>> slots_;  // per production, per tail
  std::vector<std::vector<int>> consumers_;          // per node: productions
  std::vector<ShareRouter> routers_;
  std::vector<double> attempt_rate_, link_p_, next_attempt_;
  std::vector<double> ages_;
  double last_completion_ = 0.0;
  SimResult res_;
};

void Simulator::schedule_link(int k, double from) {
  const double rate = attempt_rate_[static_cast<std::size_t>(k)];
  const double p = link_p_[static_cast<std::size_t>(k)];
  if (!(rate > 0.0) || !(p > 0.0)) return;
  double t;
  if (cfg_.links == LinkProcess::poisson) {
    t = from + std::exponential_distribution<double>(rate * p)(rng_);
  } else {
    const long failures = p >= 1.0 ? 0 : std::geometric_distribution<long>(p)(rng_);
    t = next_attempt_[static_cast<std::size_t>(k)] + static_cast<double>(failures) / rate;
    next_attempt_[static_cast<std::size_t>(k)] = t + 1.0 / rate;
  }
  push(t, EvType::link, k);
}

void Simulator::discard(int token, long& count, long& leaves) {
  auto& tk = tokens_[static_cast<std::size_t>(token)];
  if (!tk.alive) return;
  observe_age(age(token));
  tk.alive = false;
  ++count;
  leaves += tk.leaves;
}

void Simulator::deliver(int token) {
  const int v = tokens_[static_cast<std::size_t>(token)].node;
  ++res_.node_counts[static_cast<std::size_t>(v)];
  const auto& node = s_.nodes[static_cast<std::size_t>(v)];
  if (node.kind == StructNodeKind::term) {
    auto& tk = tokens_[static_cast<std::size_t>(token)];
    ++res_.term_counts[static_cast<std::size_t>(node.target)];
    res_.leaves_completed += tk.leaves;
    ++res_.leaf_counts[tk.leaves];
    const double a = age(token);
    observe_age(a);
    ages_.push_back(a);
    last_completion_ = now_;
    tk.alive = false;
    return;
  }
  const auto& cons = consumers_[static_cast<std::size_t>(v)];
  if (cons.empty()) {
    discard(token, res_.discards_overflow, res_.leaves_discarded_overflow);
    return;
  }
  const int k = cons[static_cast<std::size_t>(routers_[static_cast<std::size_t>(v)].next(rng_))];
  const auto& tails = s_.productions[static_cast<std::size_t>(k)].tails;
  auto& sl = slots_[static_cast<std::size_t>(k)];
  int slot = -1;
  for (std::size_t t = 0; t < tails.size(); ++t)
    if (tails[t] == v && (slot < 0 || sl[t].size() < sl[static_cast<std::size_t>(slot)].size()))
      slot = static_cast<int>(t);
  auto& q = sl[static_cast<std::size_t>(slot)];
  auto& tk = tokens_[static_cast<std::size_t>(token)];
  tk.prod = k;
  tk.slot = slot;
  q.push_back(token);
  if (static_cast<int>(q.size()) > 1 + cfg_.fifo_cap) {
    const int old = q.front();
    q.pop_front();
    discard(old, res_.discards_overflow, res_.leaves_discarded_overflow);
  }
  if (cfg_.decoherence) push(tk.birth + net_.params().tau_d, EvType::expire, token);
  try_fire(k);
}

void Simulator::try_fire(int k) {
  auto& sl = slots_[static_cast<std::size_t>(k)];
  const auto& prod = s_.productions[static_cast<std::size_t>(k)];
  for (;;) {
    for (const auto& q : sl)
      if (q.empty()) return;
    std::vector<int> ops;
    for (auto& q : sl) {
      ops.push_back(q.front());
      q.pop_front();
      tokens_[static_cast<std::size_t>(ops.back())].prod = -1;
    }
    const bool instant = prod.tails.size() == 1 && prod.latency == 0.0 && prod.success >= 1.0;
    if (instant) {
      tokens_[static_cast<std::size_t>(ops[0])].node = prod.head;
      deliver(ops[0]);
      continue;
    }
    ++res_.fusion_attempts;
    for (int op : ops) observe_age(age(op));
    int id;
    if (!free_pending_.empty()) {
      id = free_pending_.back();
      free_pending_.pop_back();
    } else {
      id = static_cast<int>(pending_.size());
      pending_.emplace_back();
    }
    pending_[static_cast<std::size_t>(id)].operands = std::move(ops);
    push(now_ + prod.latency, EvType::fusion_done, k, id);
  }
}

void Simulator::finish(int k, int pid) {
  auto ops = std::move(pending_[static_cast<std::size_t>(pid)].operands);
  pending_[static_cast<std::size_t>(pid)].operands.clear();
  free_pending_.push_back(pid);
  const auto& prod = s_.productions[static_cast<std::size_t>(k)];
  double birth = now_;
  int leaves = 0;
  for (int op : ops) {
    birth = std::min(birth, tokens_[static_cast<std::size_t>(op)].birth);
    leaves += tokens_[static_cast<std::size_t>(op)].leaves;
    observe_age(age(op));
  }
  auto drop_all = [&](long& count, long& leaf_count) {
    ++count;
    leaf_count += leaves;
    for (int op : ops) tokens_[static_cast<std::size_t>(op)].alive = false;
  };
  if (cfg_.decoherence && now_ - birth > net_.params().tau_d) {
    drop_all(res_.discards_decoherence, res_.leaves_discarded_decoherence);
    return;
  }
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) >= prod.success) {
    drop_all(res_.discards_failure, res_.leaves_discarded_failure);
    return;
  }
  ++res_.fusion_successes;
  for (int op : ops) tokens_[static_cast<std::size_t>(op)].alive = false;
  const int id = static_cast<int>(tokens_.size());
  tokens_.push_back({prod.head, birth, leaves, true, -1, -1});
  deliver(id);
}

SimResult Simulator::run() {
  cfg_.validate();
  if (!s_.network_signature.empty() && s_.network_signature != network_signature(net_))
    fail(ErrorKind::invalid_argument, "structure was planned for a different network");
  const std::size_t nn = s_.nodes.size(), np = s_.productions.size();
  for (const auto& p : s_.productions) {
    if (p.head < 0 || static_cast<std::size_t>(p.head) >= nn)
      fail(ErrorKind::invalid_argument, "production head out of range");
    for (int t : p.tails)
      if (t < 0 || static_cast<std::size_t>(t) >= nn)
        fail(ErrorKind::invalid_argument, "production tail out of range");
  }

  // leaf allocations against node capacity
  attempt_rate_.assign(np, 0.0);
  link_p_.assign(np, 0.0);
  next_attempt_.assign(np, 0.0);
  std::map<NodeId, double> load;
  for (std::size_t k = 0; k < np; ++k) {
    const auto& p = s_.productions[k];
    if (p.kind != EdgeLabel::link) continue;
    if (!net_.has_link(p.link.first, p.link.second))
      fail(ErrorKind::invalid_argument, "link production on a pair that is not a network link");
    link_p_[k] = link_success(net_, p.link);
    attempt_rate_[k] = p.rate / link_p_[k];
    load[p.link.first] += attempt_rate_[k];
    load[p.link.second] += attempt_rate_[k];
  }
  for (const auto& [v, a] : load)
    if (a > node_capacity(net_, v) * (1.0 + 1e-9))
      fail(ErrorKind::invalid_argument, "leaf allocation at node " + std::to_string(v) + " (" +
                                            std::to_string(a) + " attempts/s) exceeds capacity " +
                                            std::to_string(node_capacity(net_, v)));

  // consumers and routing shares
  consumers_.assign(nn, {});
  std::vector<std::vector<double>> shares(nn);
  slots_.assign(np, {});
  for (std::size_t k = 0; k < np; ++k) {
    const auto& p = s_.productions[k];
    slots_[k].resize(p.tails.size());
    for (std::size_t t = 0; t < p.tails.size(); ++t) {
      const auto v = static_cast<std::size_t>(p.tails[t]);
      auto& cons = consumers_[v];
      const double share = p.gain > 0.0 ? p.rate / p.gain : 0.0;
      const auto it = std::find(cons.begin(), cons.end(), static_cast<int>(k));
      if (it == cons.end()) {
        cons.push_back(static_cast<int>(k));
        shares[v].push_back(share);
      } else {
        shares[v][static_cast<std::size_t>(it - cons.begin())] += share;
      }
    }
  }
  routers_.clear();
  for (std::size_t v = 0; v < nn; ++v)
    routers_.emplace_back(shares[v].empty() ? std::vector<double>{1.0} : shares[v], cfg_.routing);

  res_ = SimResult{};
  res_.duration = cfg_.duration;
  res_.node_counts.assign(nn, 0);
  res_.term_counts.assign(s_.targets.size(), 0);

  std::uniform_real_distribution<double> phase(0.0, 1.0);
  for (std::size_t k = 0; k < np; ++k) {
    if (!(attempt_rate_[k] > 0.0)) continue;
    next_attempt_[k] = phase(rng_) / attempt_rate_[k];
    schedule_link(static_cast<int>(k), 0.0);
  }

  while (!queue_.empty()) {
    const Event ev = queue_.top();
    if (ev.t > cfg_.duration) break;
    queue_.pop();
    now_ = ev.t;
    ++res_.events;
    switch (ev.type) {
      case EvType::link: {
        const int id = static_cast<int>(tokens_.size());
        tokens_.push_back({s_.productions[static_cast<std::size_t>(ev.a)].head, now_, 1, true, -1, -1});
        ++res_.leaves_created;
        schedule_link(ev.a, now_);
        deliver(id);
        break;
      }
      case EvType::fusion_done:
        finish(ev.a, ev.b);
        break;
      case EvType::expire: {
        auto& tk = tokens_[static_cast<std::size_t>(ev.a)];
        if (!tk.alive || tk.prod < 0) break;
        auto& q = slots_[static_cast<std::size_t>(tk.prod)][static_cast<std::size_t>(tk.slot)];
        q.erase(std::find(q.begin(), q.end(), ev.a));
        tk.prod = -1;
        discard(ev.a, res_.discards_decoherence, res_.leaves_discarded_decoherence);
        break;
      }
    }
  }

  for (const auto& per_prod : slots_)
    for (const auto& q : per_prod)
      for (int t : q) res_.leaves_in_flight += tokens_[static_cast<std::size_t>(t)].leaves;
  for (const auto& p : pending_)
    for (int t : p.operands) res_.leaves_in_flight += tokens_[static_cast<std::size_t>(t)].leaves;

  res_.node_rates.resize(nn);
  for (std::size_t v = 0; v < nn; ++v)
    res_.node_rates[v] = static_cast<double>(res_.node_counts[v]) / cfg_.duration;
  long completions = 0;
  for (std::size_t t = 0; t < res_.term_counts.size(); ++t) {
    completions += res_.term_counts[t];
    res_.term_rate += s_.targets[t].weight * static_cast<double>(res_.term_counts[t]) / cfg_.duration;
  }
  if (completions > 0) {
    res_.latency_mean = last_completion_ / static_cast<double>(completions);
    std::sort(ages_.begin(), ages_.end());
    res_.age_mean = std::accumulate(ages_.begin(), ages_.end(), 0.0) / static_cast<double>(ages_.size());
    auto pct = [&](double q) {
      return ages_[static_cast<std::size_t>(std::floor(q * static_cast<double>(ages_.size() - 1)))];
    };
    res_.age_p50 = pct(0.5);
    res_.age_p95 = pct(0.95);
  } else {
    res_.latency_mean = std::numeric_limits<double>::infinity();
  }
  return res_;
}

}  // namespace

SimResult simulate(const QuantumNetwork& net, const LevelStructure& s, const SimConfig& cfg) {
  Simulator sim(net, s, cfg);
  return sim.run();
}

json to_json(const SimResult& r) {
  json leaf_counts = json::object();
  for (const auto& [leaves, n] : r.leaf_counts) leaf_counts[std::to_string(leaves)] = n;
  auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"duration", r.duration},
          {"term_rate", r.term_rate},
          {"term_counts", r.term_counts},
          {"latency_mean", finite(r.latency_mean)},
          {"age_mean", r.age_mean},
          {"age_p50", r.age_p50},
          {"age_p95", r.age_p95},
          {"fusion_attempts", r.fusion_attempts},
          {"fusion_successes", r.fusion_successes},
          {"fusion_success_frac", r.fusion_success_frac()},
          {"max_qubit_age", r.max_qubit_age},
          {"discards", {{"fusion_failure", r.discards_failure},
                        {"decoherence", r.discards_decoherence},
                        {"overflow", r.discards_overflow}}},
          {"leaf_counts", leaf_counts},
          {"ledger", {{"created", r.leaves_created},
                      {"completed", r.leaves_completed},
                      {"in_flight", r.leaves_in_flight},
                      {"discarded_failure", r.leaves_discarded_failure},
                      {"discarded_decoherence", r.leaves_discarded_decoherence},
                      {"discarded_overflow", r.leaves_discarded_overflow}}},
          {"node_counts", r.node_counts},
          {"node_rates", r.node_rates},
          {"events", r.events}};
}

// ---------------------------------------------------------------------------
// Scheme comparison

std::vector<CompareRow> compare_schemes(const QuantumNetwork& net, const GraphStateSpec& spec,
                                        const std::vector<std::string>& schemes,
                                        const std::vector<std::uint64_t>& seeds, const SimConfig& cfg) {
  cfg.validate();
  struct Plan {
    LevelStructure structure;
    double lp_rate = 0.0;
    double dp_latency = 0.0;
  };
  std::vector<Plan> plans;
  for (const auto& scheme : schemes) {
    Plan plan;
    if (is_dp_scheme(scheme)) {
      const auto r = scheme == "dp-two-step" ? dp_two_step(net, spec) : dp_one_step(net, spec);
      plan.structure = dp_structure(net, spec, r);
      plan.dp_latency = r.latency;
      plan.lp_rate = 1.0 / r.latency;
    } else {
      const auto h = prune_unreachable(build_scheme(scheme, net, spec));
      const auto sol = solve_flow(h, net);
      if (sol.status != LpStatus::optimal)
        fail(ErrorKind::infeasible, "scheme " + scheme + ": LP is " + to_string(sol.status));
      plan.structure = extract(h, sol, net);
      plan.lp_rate = sol.objective;
    }
    plans.push_back(std::move(plan));
  }

  std::vector<std::future<SimResult>> runs;
  for (const auto& plan : plans)
    for (auto seed : seeds) {
      SimConfig c = cfg;
      c.seed = seed;
      runs.push_back(std::async(std::launch::async,
                                [&net, &plan, c] { return simulate(net, plan.structure, c); }));
    }
  std::vector<CompareRow> rows;
  std::size_t r = 0;
  for (std::size_t k = 0; k < schemes.size(); ++k)
    for (auto seed : seeds) {
      const SimResult res = runs[r++].get();
      CompareRow row;
      row.scheme = schemes[k];
      row.seed = seed;
      row.lp_rate = plans[k].lp_rate;
      row.dp_latency = plans[k].dp_latency;
      row.sim_rate = res.term_rate;
      row.sim_latency_mean = res.latency_mean;
      row.fusion_success_frac = res.fusion_success_frac();
      row.max_qubit_age = res.max_qubit_age;
      row.discards_decoherence = res.discards_decoherence;
      rows.push_back(row);
    }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out =
      "scheme,seed,lp_rate,sim_rate,sim_latency_mean,fusion_success_frac,max_qubit_age,discards_decoherence\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%llu,%.10g,%.10g,%.10g,%.10g,%.10g,%ld\n", r.scheme.c_str(),
                  static_cast<unsigned long long>(r.seed), r.lp_rate, r.sim_rate, r.sim_latency_mean,
                  r.fusion_success_frac, r.max_qubit_age, r.discards_decoherence);
    out += buf;
  }
  return out;
}

json to_json(const std::vector<CompareRow>& rows) {
  json j = json::array();
  for (const auto& r : rows) {
    json row = {{"scheme", r.scheme},
                {"seed", r.seed},
                {"lp_rate", r.lp_rate},
                {"sim_rate", r.sim_rate},
                {"sim_latency_mean", std::isfinite(r.sim_latency_mean) ? json(r.sim_latency_mean) : json(nullptr)},
                {"fusion_success_frac", r.fusion_success_frac},
                {"max_qubit_age", r.max_qubit_age},
                {"discards_decoherence", r.discards_decoherence}};
    if (r.dp_latency > 0.0) row["dp_latency"] = r.dp_latency;
    j.push_back(std::move(row));
  }
  return {{"rows", j}, {"rank_lp", rank_schemes(rows, false)}, {"rank_sim", rank_schemes(rows, true)}};
}

std::vector<std::string> rank_schemes(const std::vector<CompareRow>& rows, bool simulated) {
  std::map<std::string, std::pair<double, int>> sums;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!sums.count(r.scheme)) order.push_back(r.scheme);
    auto& [sum, n] = sums[r.scheme];
    sum += simulated ? r.sim_rate : r.lp_rate;
    ++n;
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return sums[a].first / sums[a].second > sums[b].first / sums[b].second;
  });
  return order;
}

}  // namespace gsplan
