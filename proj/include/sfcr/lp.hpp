#ifndef SFCR_LP_HPP
#define SFCR_LP_HPP

#include <string>
#include <vector>

#include "sfcr/constraints.hpp"
#include "sfcr/model.hpp"

namespace sfcr {

struct lp_options {
  problem_mode mode = problem_mode::sfra;
  double alpha = 0.5;                   // reallocation blend weight
  bool enforce_delay = true;            // emit the per-flow delay rows
  double stand_in_rate = kUnknownRate;  // substituted where a flow's rate is unknown
};

// render the complete linearized mixed-integer model as an LP-format text
// document. variables are named R_f_i_j, Q_f_i_j, U_f_i_x, O_i with 1-based
// indices (f is the flow id); rows are named after the constraint families
// of the validator (eq2..eq28). allocation modes keep the background loads
// in the capacity rows, reallocation modes rebuild from scratch; short-term
// reallocation pins the variables of powered-off servers to zero. big-M
// factors are the documented N, 2N-1 and 1+F*X, untightened.
std::string export_lp(const network& net, const network_state& st,
                      const std::vector<flow_spec>& flows, const lp_options& opts);

} // namespace sfcr

#endif
