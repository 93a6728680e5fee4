#ifndef SFCR_EXACT_HPP
#define SFCR_EXACT_HPP

#include <vector>

#include "sfcr/constraints.hpp"
#include "sfcr/model.hpp"
#include "sfcr/solution.hpp"

namespace sfcr {

struct solver_config {
  problem_mode mode = problem_mode::sfra;
  double alpha = 0.0;            // reallocation blend weight
  double time_budget = 60.0;     // seconds; <= 0 means unlimited
  long node_limit = -1;          // search nodes; < 0 means unlimited
  bool enforce_delay = true;
  double stand_in_rate = kUnknownRate;  // used where a flow's rate is unknown
};

enum class solve_status { optimal, feasible_timeout, infeasible };

const char* to_string(solve_status s);

struct solve_result {
  routing_solution solution;
  double objective = kInf;
  solve_status status = solve_status::infeasible;
  long nodes_explored = 0;
  double wall_time = 0.0;
};

// minimum-hop routing of one flow across supporting servers, capacities
// checked against the background loads in `st`; first feasible path in
// (hop count, lexicographic) order is the optimum, placements tie-broken
// by smallest server indices
solve_result solve_sfra(const network& net, const network_state& st, const flow_spec& flow,
                        const solver_config& cfg);

// minimum switch-on cost for one flow; cfg.mode picks the context: long-term
// counts absolute draw of powered-off servers being switched on, short-term
// counts the active-minus-idle difference and only powered servers are usable
solve_result solve_energy_sfra(const network& net, const network_state& st,
                               const flow_spec& flow, const solver_config& cfg);

// joint reallocation of all flows from scratch: branch-and-bound over
// per-flow (path, placement) candidates ordered deterministically, blending
// forwarding-entry changes against switchable energy via cfg.alpha
solve_result solve_grr(const network& net, const network_state& st,
                       const std::vector<flow_spec>& flows, const solver_config& cfg);

// all simple paths src -> dst, sorted by (hop count, lexicographic sequence);
// exposed for the oracle-style cross checks
std::vector<std::vector<int>> simple_paths(const topology& topo, int src, int dst);

} // namespace sfcr

#endif
