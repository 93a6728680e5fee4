#ifndef SFCR_TRAFFICGEN_HPP
#define SFCR_TRAFFICGEN_HPP

#include <cstdint>
#include <vector>

#include "sfcr/model.hpp"

namespace sfcr {

// knobs of the reproducible scenario generator; defaults follow the first
// study column
struct gen_params {
  double b_f = 0.3;      // mean flow rate as a fraction of link capacity
  double gamma = 1.0;    // fraction of servers that may host vnfs
  double v_f_avg = 2.0;  // mean chain length before truncation
  double x_gamma = 0.7;  // fraction of vnf types one hosting server carries
  int v_f_min = 2;       // chain length bounds after truncation
  int v_f_max = 5;
  double tau = 1.0;    // fraction of switches that are edge switches
  double tau_s = 1.0;  // fraction of edge switches acting as sources
  double tau_d = 1.0;  // fraction of edge switches acting as destinations
  double beta = 0.4;   // per-source flow-count coefficient
  int f_m = 10;        // hard cap on flows per source
  int x = 10;          // number of vnf types
  double delay_budget_factor = 1.0;  // budgets = factor * n * max link delay
  std::uint64_t seed = 0;

  void check() const;  // throws bad_params on an invariant breach
};

// the five study parameter columns; presets 2 and 4 share inputs (their
// published flow counts differ only through the draw). throws bad_params
// for ids outside 1..5
gen_params preset_params(int scenario);

// mark ceil(gamma*n) servers eligible and give each a uniform random set of
// exactly floor(x_gamma*x) vnf types, resampling until every type is hosted
// somewhere; throws uncoverable when the pigeonhole makes that impossible
void generate_hosting(network& net, const gen_params& p);

// per-source truncated-geometric flow counts, uniform rates in
// (0, 2*b_f*link capacity), truncated-geometric chain lengths with distinct
// uniformly ordered vnf types; same seed, same flows
std::vector<flow_spec> generate_flows(const network& net, const gen_params& p);

// one growth step: every rate is multiplied by (1 + u), u ~ Uniform(0, 0.2)
std::vector<flow_spec> evolve_rates(const std::vector<flow_spec>& flows, std::uint64_t seed);

// substrate finishing for `auto` server fields: processing capacity as a
// theta fraction of the node's incoming link capacity, and energy draw
// spread linearly over the capacity rank (ties broken by node index)
void auto_capacities(network& net, double theta);
void auto_energies(network& net, double e_min = 200.0, double e_max = 400.0);

} // namespace sfcr

#endif
