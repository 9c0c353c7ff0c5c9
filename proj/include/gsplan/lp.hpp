#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gsplan/hypergraph.hpp"

namespace gsplan {

enum class RowSense : std::uint8_t { le, ge, eq };

struct LpRow {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  RowSense sense = RowSense::eq;
  double rhs = 0.0;
};

/// max c^T z subject to rows, z >= 0.
struct LinearProgram {
  std::vector<std::string> var_names;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  std::size_t num_vars() const { return var_names.size(); }
  int add_var(std::string name, double obj = 0.0);
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  double max_residual = 0.0;
  int iterations = 0;
  double condition_estimate = 0.0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-9;
  int refactor_every = 100;
  int degenerate_before_bland = 50;
  long max_iterations = 0;  // 0: automatic
  bool presolve = true;
};

/// One variable per hyperedge (named e<id>); one equality row per Avail and
/// Prod vertex; one capacity row per node with incident links.
LinearProgram formulate(const Hypergraph& h, const QuantumNetwork& net);

/// Revised simplex (two phases, Dantzig pricing with a switch to Bland's
/// rule on long degenerate runs).
LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts = {});

/// Among the solutions reaching `optimum`, one with the least total flow.
LpSolution solve_least_flow(const LinearProgram& lp, double optimum, const SimplexOptions& opts = {});

double max_residual(const LinearProgram& lp, const std::vector<double>& x);

std::string export_lp_text(const LinearProgram& lp);
LinearProgram parse_lp_text(const std::string& text);

nlohmann::json solution_to_json(const LpSolution& sol);
LpSolution solution_from_json(const nlohmann::json& j, std::size_t num_edges);

}  // namespace gsplan
