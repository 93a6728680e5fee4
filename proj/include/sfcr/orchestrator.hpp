#ifndef SFCR_ORCHESTRATOR_HPP
#define SFCR_ORCHESTRATOR_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sfcr/exact.hpp"
#include "sfcr/heuristics.hpp"
#include "sfcr/metrics.hpp"
#include "sfcr/model.hpp"
#include "sfcr/solution.hpp"

namespace sfcr {

// monitoring history: per-flow rate samples plus link-load snapshots, both
// bounded by `window` (newest kept)
struct knowledge_base {
  struct sample {
    double t = 0.0;
    double value = 0.0;
  };
  struct load_snapshot {
    double t = 0.0;
    mat_d link_load;
  };

  int window = 8;
  double initial_mfs = 0.3;  // cold-start stand-in before any sample lands
  std::map<int, std::vector<sample>> flow_rates;
  std::vector<load_snapshot> load_history;

  // median of the latest rate sample of every observed flow; the mean of the
  // middle pair when their count is even, initial_mfs when no flow has been
  // observed yet
  double mfs() const;

  // straight-line continuation of the last two load snapshots; empty until
  // two snapshots exist
  mat_d extrapolated_load() const;
};

// records flows with a measurable rate and snapshots the link loads
void update_knowledge_base(knowledge_base& kb, double t, const std::vector<flow_spec>& flows,
                           const network_state& st);

struct event_config {
  double long_term_period = 10.0;
  double grr_period = 1.0;
  double update_period = 1.0;
  double congestion_threshold = 0.9;  // instantaneous utilization trigger
  double prediction_threshold = 0.9;  // trigger on extrapolated utilization
  double initial_mfs = 0.3;
  double mu_link = 1.0;    // usable fraction of link capacity
  double mu_server = 1.0;  // usable fraction of processing capacity
  bool detect = true;   // master switches for the two congestion branches
  bool predict = true;
  int kb_window = 8;

  void check() const;  // throws bad_params on an invariant breach
};

struct congestion_report {
  bool congested = false;
  std::vector<std::pair<int, int>> links;  // offending directed links, ascending
};

// flags links whose utilization exceeds the threshold (strictly)
congestion_report detect_congestion(const network& net, const mat_d& link_load, double threshold);

// same test on the knowledge-base extrapolation; silent until two snapshots
congestion_report predict_congestion(const network& net, const knowledge_base& kb,
                                     double threshold);

// one timeline row, emitted after every reconfiguration
struct metrics_row {
  double t = 0.0;
  std::string event;      // arrival | congestion_detected | congestion_predicted |
                          // grr_timer | long_term_timer
  std::string algorithm;  // nsf | 3r | st-ensf | lt-ensf | exact-*
  double total_energy = 0.0;
  int reconf_overhead = 0;
  double max_link_util = 0.0;
  double avg_link_util = 0.0;
  double max_srv_util = 0.0;
  double avg_srv_util = 0.0;
  int rejected_flows = 0;  // flows present but unrouted at this instant
  int qos_misses = 0;      // routed flows whose walk exceeds the delay budget

  void fill(const metrics_report& rep);
};

struct metrics_timeline {
  std::vector<metrics_row> rows;
  std::vector<std::string> log;  // line-oriented event journal

  static const char* csv_header();
  std::string to_csv() const;  // header plus one line per row
};

enum class algo_kind {
  nsf,
  rrr,  // "3r": one-by-one switch-on-cost reallocation
  st_ensf,
  lt_ensf,
  exact_sfra,
  exact_energy_sfra,
  exact_grr,
};

const char* algo_name(algo_kind a);
algo_kind algo_from_string(const std::string& s);  // throws bad_params

// which algorithm the Long_Term_timer branch dispatches; the other branches
// are fixed by the workflow (arrivals -> nsf, detected congestion -> lt-ensf,
// grr timer -> st-ensf, avoidance alarm -> short-term 3r)
struct algo_config {
  algo_kind long_term = algo_kind::rrr;
  double alpha = 0.0;       // reconfiguration blend of the joint solver
  int placement_cap = -1;   // lt-ensf instantiation cap
  double time_budget = 60.0;
  long node_limit = -1;
};

enum class sim_event_kind { arrival, rate_change };

struct sim_event {
  double t = 0.0;
  sim_event_kind kind = sim_event_kind::arrival;
  flow_spec flow;                            // arrival payload
  std::vector<std::pair<int, double>> rates;  // rate_change payload: id -> rate
};

struct sim_scenario {
  std::vector<sim_event> events;  // non-decreasing timestamps
  double horizon = 0.0;           // 0 = last event time; timers fire up to here
};

struct orchestrator_result {
  metrics_timeline timeline;
  network net;                   // substrate after instantiations
  network_state state;           // final loads, states, installed entries
  std::vector<flow_spec> flows;  // arrived flows at their final rates
  routing_solution solution;     // the configuration installed at the end
};

// event loop over the scenario: timestamp order, and at equal times
// rate changes, then the long-term timer, arrivals, the grr timer, and the
// knowledge-base refresh (where the avoidance alarm is evaluated) last.
// rejections are recorded in the timeline; the run never aborts on them.
orchestrator_result run(const network& net, const sim_scenario& scenario,
                        const event_config& ev = {}, const algo_config& algos = {});

// growth study: flows arrive at t=0, then one long-term reallocation per
// period over `iterations` periods, every rate scaled by (1 + Uniform(0,0.2))
// just before each boundary after the first. congestion branches and the
// knowledge-base refresh are disabled so each period holds exactly one row.
orchestrator_result replay(const network& net, const std::vector<flow_spec>& flows,
                           int iterations, std::uint64_t growth_seed,
                           const algo_config& algos = {}, event_config ev = {});

} // namespace sfcr

#endif
