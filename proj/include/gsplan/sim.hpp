#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gsplan/structure.hpp"

namespace gsplan {

enum class RoutingPolicy { weighted_random, deficit_round_robin };
enum class LinkProcess { fixed_cadence, poisson };

const char* to_string(RoutingPolicy p);
RoutingPolicy routing_policy_from_string(const std::string& s);
const char* to_string(LinkProcess p);
LinkProcess link_process_from_string(const std::string& s);

struct SimConfig {
  double duration = 100.0;  // simulated seconds
  std::uint64_t seed = 1;
  RoutingPolicy routing = RoutingPolicy::deficit_round_robin;
  LinkProcess links = LinkProcess::fixed_cadence;
  bool decoherence = true;
  // Operand instances queued behind the one ready instance per (state,
  // consumer); an arrival beyond the cap replaces the oldest queued one.
  int fifo_cap = 0;

  void validate() const;
};

/// Splits a stream of instances across consumers according to shares.
class ShareRouter {
 public:
  ShareRouter() = default;
  ShareRouter(std::vector<double> shares, RoutingPolicy policy);
  int next(std::mt19937_64& rng);
  std::size_t size() const { return shares_.size(); }

 private:
  std::vector<double> shares_;
  std::vector<double> credit_;
  RoutingPolicy policy_ = RoutingPolicy::deficit_round_robin;
  std::discrete_distribution<int> pick_;
};

struct SimResult {
  double duration = 0.0;
  std::vector<long> node_counts;          // instances produced per structure node
  std::vector<double> node_rates;         // node_counts / duration
  std::vector<long> term_counts;          // per target
  double term_rate = 0.0;                 // weighted completions per second
  double latency_mean = 0.0;              // mean gap between completions (s)
  double age_mean = 0.0;                  // completion time minus oldest leaf birth
  double age_p50 = 0.0, age_p95 = 0.0;
  long fusion_attempts = 0, fusion_successes = 0;
  double max_qubit_age = 0.0;
  long discards_failure = 0, discards_decoherence = 0, discards_overflow = 0;
  std::map<int, long> leaf_counts;        // leaves per completed instance
  // leaf-EP ledger: created = completed + in_flight + discarded (all causes)
  long leaves_created = 0, leaves_completed = 0, leaves_in_flight = 0;
  long leaves_discarded_failure = 0, leaves_discarded_decoherence = 0, leaves_discarded_overflow = 0;
  long events = 0;

  double fusion_success_frac() const {
    return fusion_attempts ? static_cast<double>(fusion_successes) / static_cast<double>(fusion_attempts)
                           : 0.0;
  }
};

/// Discrete-event run of `s` on `net`. Throws invalid_argument when the leaf
/// allocations exceed some node's capacity.
SimResult simulate(const QuantumNetwork& net, const LevelStructure& s, const SimConfig& cfg);

nlohmann::json to_json(const SimResult& r);

// ---------------------------------------------------------------------------
// Scheme comparison

struct CompareRow {
  std::string scheme;
  std::uint64_t seed = 0;
  double lp_rate = 0.0;   // LP objective, or 1/latency for DP schemes
  double sim_rate = 0.0;
  double sim_latency_mean = 0.0;
  double fusion_success_frac = 0.0;
  double max_qubit_age = 0.0;
  long discards_decoherence = 0;
  double dp_latency = 0.0;  // DP schemes only
};

/// plan -> solve -> extract -> simulate for every scheme and seed. DP schemes
/// simulate their fusion tree.
std::vector<CompareRow> compare_schemes(const QuantumNetwork& net, const GraphStateSpec& spec,
                                        const std::vector<std::string>& schemes,
                                        const std::vector<std::uint64_t>& seeds, const SimConfig& cfg);

std::string compare_csv(const std::vector<CompareRow>& rows);
nlohmann::json to_json(const std::vector<CompareRow>& rows);
/// Schemes ordered by decreasing mean rate; `simulated` picks sim or LP rates.
std::vector<std::string> rank_schemes(const std::vector<CompareRow>& rows, bool simulated);

}  // namespace gsplan
