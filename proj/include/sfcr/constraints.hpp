#ifndef SFCR_CONSTRAINTS_HPP
#define SFCR_CONSTRAINTS_HPP

#include <map>
#include <string>
#include <vector>

#include "sfcr/model.hpp"
#include "sfcr/solution.hpp"

namespace sfcr {

// optimization contexts; short-term toggles ACTIVE/IDLE among powered servers,
// long-term toggles ON/OFF across the board
enum class problem_mode { sfra, energy_sfra, grr_short, grr_long };

inline bool is_long_term(problem_mode m) {
  return m == problem_mode::energy_sfra || m == problem_mode::grr_long;
}
inline bool is_grr(problem_mode m) {
  return m == problem_mode::grr_short || m == problem_mode::grr_long;
}

// switchable-energy vector: absolute draw long-term, active-minus-idle
// difference short-term
std::vector<double> context_energy(const std::vector<server_spec>& servers, problem_mode m);

// three-valued states to the 0/1 vector the constraint rows use
std::vector<std::uint8_t> binary_states(const std::vector<server_state>& st, problem_mode m);

// one offending row of one constraint family; indices already 1-based for
// reporting, -1 = not applicable
struct violation {
  std::string eq;
  int flow = -1;
  int i = -1;
  int j = -1;
  int x = -1;
  double slack = 0.0;  // rhs - lhs for inequalities, -|lhs - rhs| for equalities
};

struct constraint_report {
  // key present = family was evaluated; empty vector = clean pass
  std::map<std::string, std::vector<violation>> checked;

  void mark(const std::string& eq);
  void add(violation v);
  bool pass(const std::string& eq) const;
  bool all_pass() const;
  int violation_count() const;
  void merge(const constraint_report& other);
  std::string to_csv() const;  // eq,flow,i,j,x,status,slack
};

struct check_options {
  double stand_in_rate = kUnknownRate;  // substituted where a flow's rate is unknown
  bool walk_mode = false;  // heuristic routes: per-segment structure instead of matrix rows
  bool check_delay = true;
};

// vnf-to-server membership: complete chains on supporting, crossed servers,
// at most one chain vnf per server
constraint_report check_chain_membership(const network& net, const std::vector<flow_spec>& flows,
                                         const routing_solution& sol);

// link and processing budgets; reallocation modes drop the background loads
constraint_report check_capacity(const network& net, const network_state& st,
                                 const std::vector<flow_spec>& flows, const routing_solution& sol,
                                 problem_mode mode, const check_options& opts);

// conservation, single outgoing entry, delay budget
constraint_report check_flow_conservation(const network& net, const std::vector<flow_spec>& flows,
                                          const routing_solution& sol, const check_options& opts);

// step-number structure plus chain ordering, in both the product form and the
// big-M form (both reported)
constraint_report check_ordering(const network& net, const std::vector<flow_spec>& flows,
                                 const routing_solution& sol, const check_options& opts);

// server on/off consistency vs deliveries, product and big-M forms
constraint_report check_energy(const network& net, const std::vector<flow_spec>& flows,
                               const routing_solution& sol, problem_mode mode);

// objective under the given mode; throws bad_alpha outside [0,1]
double objective_value(const network& net, const network_state& st,
                       const std::vector<flow_spec>& flows, const routing_solution& sol,
                       problem_mode mode, double alpha);

// every check family appropriate to the mode, merged
constraint_report validate(const network& net, const network_state& st,
                            const std::vector<flow_spec>& flows, const routing_solution& sol,
                            problem_mode mode, const check_options& opts);

// states after a (re)allocation: delivering servers go active; the rest stay
// powered-but-idle short-term and are switched off long-term
std::vector<server_state> settle_states(const std::vector<server_state>& prev,
                                        const routing_solution& sol, problem_mode mode);

} // namespace sfcr

#endif
