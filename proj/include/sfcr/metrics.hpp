#ifndef SFCR_METRICS_HPP
#define SFCR_METRICS_HPP

#include <vector>

#include "sfcr/model.hpp"
#include "sfcr/solution.hpp"

namespace sfcr {

struct flow_metrics {
  int flow = -1;
  bool allocated = false;
  int path_length = 0;  // traversed links
  double delay = 0.0;
  bool qos_ok = true;
};

struct metrics_report {
  double total_energy = 0.0;  // summed server draw at the solution states
  int reconf_overhead = 0;    // forwarding entries changed vs installed state
  double max_link_util = 0.0;
  double avg_link_util = 0.0;
  double max_server_util = 0.0;
  double avg_server_util = 0.0;
  int rejected = 0;
  int qos_misses = 0;
  std::vector<flow_metrics> per_flow;
};

// reads loads/utilization from the state, energy from the solution's server
// states, and overhead from the delta against state.installed
metrics_report compute_metrics(const network& net, const network_state& st,
                               const std::vector<flow_spec>& flows,
                               const routing_solution& sol);

} // namespace sfcr

#endif
