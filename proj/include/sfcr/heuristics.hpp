#ifndef SFCR_HEURISTICS_HPP
#define SFCR_HEURISTICS_HPP

#include <vector>

#include "sfcr/constraints.hpp"
#include "sfcr/model.hpp"
#include "sfcr/solution.hpp"

namespace sfcr {

// nearest-provider lookup result; a miss is an ordinary outcome, not an error
struct provider_result {
  bool found = false;
  int node = -1;
  std::vector<int> path;  // from the query node to the provider, inclusive;
                          // empty when the provider is the query node itself
  double cost = 0.0;      // accumulated propagation delay
};

// shortest delay-cost route to a server that supports the vnf and has the
// processing headroom for `rate`; links whose residual capacity is below
// `rate` are pruned. power states are not consulted: the arrival-time
// allocator works before any switching decision.
provider_result find_nearest_provider(const network& net, const network_state& st, int from,
                                      int vnf, double rate);

// arrival-time allocation of one flow with an unknown rate: chain the
// nearest providers using the median flow size as the stand-in, shrinking
// link residuals by it after every chosen segment, then append the shortest
// path to the destination on the unpruned fabric. the returned walk may
// revisit nodes; a miss reports the failing chain position (the chain
// length stands for the final leg).
flow_routing nsf(const network& net, const network_state& st, const flow_spec& flow, double mfs);

// one-by-one reallocation: re-solve each flow with the switch-on-cost
// model at its true rate, then carry the consumed capacity and the woken
// servers into the next flow's context. long-term mode may power anything
// on; short-term mode only toggles powered servers. failed flows are
// recorded and the remainder continues.
routing_solution rrr(const network& net, const network_state& st,
                     const std::vector<flow_spec>& flows,
                     problem_mode mode = problem_mode::energy_sfra);

// short-term walk rebuilder: per flow and per chained vnf, pick the
// provider with the least extra activation energy (active servers are
// free, idle ones cost the active-minus-idle difference), ties by path
// delay then node index; routes avoid nodes the flow already crossed and
// links without headroom for its rate. powered-off servers are untouchable.
routing_solution st_ensf(const network& net, const network_state& st,
                         const std::vector<flow_spec>& flows);

struct ensf_config {
  int placement_cap = -1;  // max vnf types one server may host when
                           // instantiating; negative = uncapped
};

struct lt_result {
  routing_solution solution;
  std::vector<server_spec> servers;  // hosting after instantiations, states settled
};

// long-term walk rebuilder: provider precedence is active first (nearest),
// then the cheapest idle server, then the nearest eligible powered-off
// server, which is switched on — instantiating the vnf there when absent,
// subject to the per-server placement cap. unused servers end up off.
lt_result lt_ensf(const network& net, const network_state& st,
                  const std::vector<flow_spec>& flows, const ensf_config& cfg = {});

} // namespace sfcr

#endif
