#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gsplan/hypergraph.hpp"

namespace gsplan {

/// Predicate over canonical path segments; edge states are always kept.
using PathFilter = std::function<bool(const DistState&)>;

/// Start -> Edge for every link, plus swap (fusion-discard) closure over all
/// node-pair edge states.
void add_link_layer(Hypergraph& h, const QuantumNetwork& net);

// Path graph states. All variants are induced sub-hypergraphs of the one-stage
// hypergraph, obtained by restricting the admissible path segments.
Hypergraph build_path_one_stage(const QuantumNetwork& net, const GraphStateSpec& spec);
Hypergraph build_path_filtered(const QuantumNetwork& net, const GraphStateSpec& spec,
                               const PathFilter& keep);
Hypergraph build_path_distance_filtered(const QuantumNetwork& net,
                                        const GraphStateSpec& spec, double c);
Hypergraph build_path_left_sided(const QuantumNetwork& net, const GraphStateSpec& spec);
Hypergraph build_path_right_sided(const QuantumNetwork& net, const GraphStateSpec& spec);
Hypergraph build_path_two_stage(const QuantumNetwork& net, const GraphStateSpec& spec);

bool left_sided_state(const DistState& s);
bool right_sided_state(const DistState& s);
bool two_stage_state(const DistState& s);
PathFilter distance_filter(const QuantumNetwork& net, const GraphStateSpec& spec, double c);

// Tree graph states.
Hypergraph build_tree_two_stage(const QuantumNetwork& net, const GraphStateSpec& spec);
Hypergraph build_tree_one_stage(const QuantumNetwork& net, const GraphStateSpec& spec);

// Grid, bipartite, complete and star graph states.
Hypergraph build_grid_two_stage(const QuantumNetwork& net, const GraphStateSpec& spec);
Hypergraph build_bipartite(const QuantumNetwork& net, const GraphStateSpec& spec);
Hypergraph build_complete_star(const QuantumNetwork& net, const GraphStateSpec& spec);

/// Scheme dispatch by CLI name (e.g. "left-path", "distance-path:1.5").
/// The result is not pruned.
Hypergraph build_scheme(const std::string& name, const QuantumNetwork& net,
                        const GraphStateSpec& spec);
/// Builds every (spec, weight) pair with the scheme and merges them.
Hypergraph build_concurrent(const std::string& name, const QuantumNetwork& net,
                            const std::vector<std::pair<GraphStateSpec, double>>& specs);
std::vector<std::string> scheme_names();
bool is_dp_scheme(const std::string& name);

}  // namespace gsplan
