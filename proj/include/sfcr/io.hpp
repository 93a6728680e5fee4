#ifndef SFCR_IO_HPP
#define SFCR_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sfcr/constraints.hpp"
#include "sfcr/model.hpp"
#include "sfcr/solution.hpp"
#include "sfcr/trafficgen.hpp"

namespace sfcr {

// resolution knobs for `auto` server fields; literal numbers in the file are
// taken as-is and never rescaled
struct load_options {
  double theta = 0.1;    // auto capacity = theta * incident link capacity
  double e_min = 200.0;  // auto energies spread linearly over the capacity rank
  double e_max = 400.0;
  double delta = -1.0;   // idle-fraction override for every server; <0 keeps each default
};

// topology text: `N <n>`, then one line per directed link `i j capacity delay`
// and one line per server `server <node> <capacity|auto> <energy|auto>
// <vnf-list|-> <state>`; 1-based indices, `#` comments, `inf` tokens allowed
network parse_topology(const std::string& text, const load_options& opts = {},
                       const std::string& origin = "<topology>");
network load_topology(const std::string& path, const load_options& opts = {});
std::string format_topology(const network& net);
void save_topology(const network& net, const std::string& path);

// scenario text: flow lines `id src dst rate delay_budget chain` (rate `?` for
// unknown, budget `inf`, chain a comma list or `-`) plus optional keyword
// lines `vnfs`, `host`, `eligible`, `placement_cap`, `mu_l`, `mu_s`, `seed`
struct scenario_data {
  std::vector<flow_spec> flows;
  int vnf_count = -1;                  // -1: keep the topology's catalog
  std::vector<double> vnf_processing;  // per type when the vnfs line carries them
  std::vector<std::pair<int, std::vector<int>>> host_lines;  // node -> installed types
  bool eligible_given = false;
  std::vector<int> eligible;  // nodes allowed to receive placements
  int placement_cap = -1;
  double mu_l = -1.0;  // <0: not present
  double mu_s = -1.0;
  bool seed_given = false;
  std::uint64_t seed = 0;
};

scenario_data parse_scenario(const std::string& text,
                             const std::string& origin = "<scenario>");
scenario_data load_scenario(const std::string& path);
std::string format_scenario(const scenario_data& sc);
void save_scenario(const scenario_data& sc, const std::string& path);

// fold the scenario's substrate overrides (vnf catalog, hosting, eligibility)
// into the network; flows and run-level knobs stay with the caller
void apply_scenario(network& net, const scenario_data& sc);

// generator parameter files: `<field> <value>` lines over the gen_params
// field names, unknown keys rejected
gen_params parse_gen_params(const std::string& text,
                            const std::string& origin = "<params>");
gen_params load_gen_params(const std::string& path);
std::string format_gen_params(const gen_params& p);

// per-flow routing dump under dir/: flow_<id>.txt (status, walk segments or
// path plus placements) and servers.txt (post-solution states)
void save_solution(const network& net, const std::vector<flow_spec>& flows,
                   const routing_solution& sol, const std::string& dir);
routing_solution load_solution(const network& net, const std::vector<flow_spec>& flows,
                               const std::string& dir);

// human-readable pass/fail rendering of a validation report
std::string render_report(const constraint_report& report);

} // namespace sfcr

#endif
