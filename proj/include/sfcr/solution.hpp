#ifndef SFCR_SOLUTION_HPP
#define SFCR_SOLUTION_HPP

#include <vector>

#include "sfcr/model.hpp"

namespace sfcr {

// heuristic routes are concatenations of simple sub-paths and may revisit
// nodes; each segment ends at the server delivering one chain vnf
struct segmented_walk {
  struct segment {
    std::vector<int> nodes;  // simple path; first node = previous segment's last
    int vnf = -1;            // vnf consumed at nodes.back(); -1 on the final leg
  };
  std::vector<segment> segments;

  bool empty() const { return segments.empty(); }
  std::vector<int> flatten() const;  // full node sequence, joints deduplicated
  int hops() const;                  // traversed links, with multiplicity
  bool simple() const;               // no node visited twice
};

struct flow_routing {
  int flow = -1;
  bool allocated = false;
  int failed_vnf = -1;  // chain position that found no provider, when rejected
  mat_i r;              // forwarding entries (union of traversed links)
  mat_i q;              // step numbers; q[dst][dst] = crossed switches
  bool q_valid = false; // q only encodes walks that never revisit a node
  mat_i u;              // placement: u[node][vnf]
  segmented_walk walk;

  int hops() const;  // walk hops when present, else set forwarding entries
};

struct routing_solution {
  std::vector<flow_routing> flows;
  std::vector<server_state> server_next;  // states after applying the solution

  const flow_routing* find(int flow_id) const;
};

struct link_encoding {
  mat_i r;
  mat_i q;
  bool q_valid = false;
};

// decode a step matrix into its node sequence; throws malformed_q when the
// steps do not describe one contiguous walk from src ending at dst with a
// correct crossed-switch register
std::vector<int> walk_from_q(const mat_i& q, int src, int dst);

// encode a node sequence; q is filled only when the walk is simple (repeats
// cannot be step-numbered); throws not_a_link on unlinked consecutive pairs
link_encoding routing_from_walk(const topology& topo, const std::vector<int>& walk);

// accumulate `amount` of traffic on every traversed link, with multiplicity
void add_walk_load(mat_d& load, const std::vector<int>& walk, double amount);

double walk_delay(const topology& topo, const std::vector<int>& walk);

// assemble a complete per-flow routing from a node path plus (node, vnf)
// placements
flow_routing route_from_path(const network& net, int flow_id, const std::vector<int>& path,
                             const std::vector<std::pair<int, int>>& anchors);

// same from a segmented walk; placements are read off the segment anchors
flow_routing route_from_segments(const network& net, int flow_id, const segmented_walk& walk);

} // namespace sfcr

#endif
