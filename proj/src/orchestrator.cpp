#include "sfcr/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "sfcr/constraints.hpp"
#include "sfcr/errors.hpp"
#include "sfcr/trafficgen.hpp"

namespace sfcr {

namespace {

constexpr double kTimeTol = 1e-9;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return std::string(buf);
}

} // namespace

double knowledge_base::mfs() const {
  std::vector<double> latest;
  for (const auto& [id, samples] : flow_rates) {
    (void)id;
    if (!samples.empty()) latest.push_back(samples.back().value);
  }
  if (latest.empty()) return initial_mfs;
  std::sort(latest.begin(), latest.end());
  size_t n = latest.size();
  if (n % 2 == 1) return latest[n / 2];
  return 0.5 * (latest[n / 2 - 1] + latest[n / 2]);
}

mat_d knowledge_base::extrapolated_load() const {
  if (load_history.size() < 2) return {};
  const mat_d& prev = load_history[load_history.size() - 2].link_load;
  const mat_d& last = load_history.back().link_load;
  if (prev.size() != last.size()) return {};
  mat_d out = last;
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out[i].size(); ++j) out[i][j] = 2.0 * last[i][j] - prev[i][j];
  return out;
}

void update_knowledge_base(knowledge_base& kb, double t, const std::vector<flow_spec>& flows,
                           const network_state& st) {
  size_t keep = kb.window < 1 ? 1 : static_cast<size_t>(kb.window);
  for (const auto& f : flows) {
    if (!f.rate_known()) continue;
    auto& samples = kb.flow_rates[f.id];
    samples.push_back({t, f.rate});
    if (samples.size() > keep) samples.erase(samples.begin(), samples.end() - keep);
  }
  kb.load_history.push_back({t, st.link_load});
  if (kb.load_history.size() > keep)
    kb.load_history.erase(kb.load_history.begin(), kb.load_history.end() - keep);
}

void event_config::check() const {
  if (!(long_term_period > 0.0) || !(grr_period > 0.0) || !(update_period > 0.0))
    throw bad_params("event periods must be positive");
  if (!(congestion_threshold > 0.0) || congestion_threshold > 1.0)
    throw bad_params("congestion threshold outside (0,1]");
  if (!(prediction_threshold > 0.0) || prediction_threshold > 1.0)
    throw bad_params("prediction threshold outside (0,1]");
  if (!(initial_mfs > 0.0)) throw bad_params("initial mfs must be positive");
  if (!(mu_link > 0.0) || mu_link > 1.0) throw bad_params("mu_link outside (0,1]");
  if (!(mu_server > 0.0) || mu_server > 1.0) throw bad_params("mu_server outside (0,1]");
  if (kb_window < 1) throw bad_params("knowledge-base window must hold a sample");
}

namespace {

congestion_report scan_loads(const network& net, const mat_d& load, double threshold) {
  congestion_report rep;
  const topology& topo = net.topo;
  if (static_cast<int>(load.size()) != topo.n) return rep;
  for (int i = 0; i < topo.n; ++i) {
    for (int j = 0; j < topo.n; ++j) {
      if (!topo.has_link(i, j) || !std::isfinite(topo.cap[i][j])) continue;
      if (load[i][j] / topo.cap[i][j] > threshold) rep.links.push_back({i, j});
    }
  }
  rep.congested = !rep.links.empty();
  return rep;
}

} // namespace

congestion_report detect_congestion(const network& net, const mat_d& link_load,
                                    double threshold) {
  return scan_loads(net, link_load, threshold);
}

congestion_report predict_congestion(const network& net, const knowledge_base& kb,
                                     double threshold) {
  mat_d ex = kb.extrapolated_load();
  if (ex.empty()) return {};
  return scan_loads(net, ex, threshold);
}

void metrics_row::fill(const metrics_report& rep) {
  total_energy = rep.total_energy;
  reconf_overhead = rep.reconf_overhead;
  max_link_util = rep.max_link_util;
  avg_link_util = rep.avg_link_util;
  max_srv_util = rep.max_server_util;
  avg_srv_util = rep.avg_server_util;
  rejected_flows = rep.rejected;
  qos_misses = rep.qos_misses;
}

const char* metrics_timeline::csv_header() {
  return "t,event,algorithm,total_energy,reconf_overhead,max_link_util,avg_link_util,"
         "max_srv_util,avg_srv_util,rejected_flows,qos_misses";
}

std::string metrics_timeline::to_csv() const {
  std::string out = csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += strf("%.17g,%s,%s,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.t, r.event.c_str(),
                r.algorithm.c_str(), r.total_energy, r.reconf_overhead, r.max_link_util,
                r.avg_link_util, r.max_srv_util, r.avg_srv_util, r.rejected_flows,
                r.qos_misses);
  }
  return out;
}

const char* algo_name(algo_kind a) {
  switch (a) {
    case algo_kind::nsf: return "nsf";
    case algo_kind::rrr: return "3r";
    case algo_kind::st_ensf: return "st-ensf";
    case algo_kind::lt_ensf: return "lt-ensf";
    case algo_kind::exact_sfra: return "exact-sfra";
    case algo_kind::exact_energy_sfra: return "exact-energy-sfra";
    case algo_kind::exact_grr: return "exact-grr";
  }
  return "?";
}

algo_kind algo_from_string(const std::string& s) {
  static const std::pair<const char*, algo_kind> table[] = {
      {"nsf", algo_kind::nsf},
      {"3r", algo_kind::rrr},
      {"st-ensf", algo_kind::st_ensf},
      {"lt-ensf", algo_kind::lt_ensf},
      {"exact-sfra", algo_kind::exact_sfra},
      {"exact-energy-sfra", algo_kind::exact_energy_sfra},
      {"exact-grr", algo_kind::exact_grr},
  };
  for (const auto& [name, kind] : table)
    if (s == name) return kind;
  throw bad_params("unknown algorithm: " + s);
}

namespace {

// single-threaded event loop; owns every piece of mutable run state
struct engine {
  const event_config& ev;
  const algo_config& algos;
  network net;
  network_state st;
  std::vector<flow_spec> flows;
  routing_solution live;  // flow records of the installed configuration
  knowledge_base kb;
  metrics_timeline tl;
  double next_lt = 0.0, next_grr = 0.0, next_upd = 0.0;

  engine(const network& base, const event_config& e, const algo_config& a)
      : ev(e), algos(a), net(base), st(network_state::fresh(base)) {
    st.mu_link = ev.mu_link;
    st.mu_server = ev.mu_server;
    kb.window = ev.kb_window;
    kb.initial_mfs = ev.initial_mfs;
    live.server_next = st.state;
    next_lt = ev.long_term_period;
    next_grr = ev.grr_period;
    next_upd = ev.update_period;
  }

  flow_spec* flow_by_id(int id) {
    for (auto& f : flows)
      if (f.id == id) return &f;
    return nullptr;
  }

  double eff_rate(const flow_spec& f) const { return f.rate_known() ? f.rate : kb.mfs(); }

  // reallocators need measurable rates; unmeasured flows go in at the
  // current median stand-in
  std::vector<flow_spec> flows_eff() const {
    std::vector<flow_spec> out = flows;
    for (auto& f : out)
      if (!f.rate_known()) f.rate = kb.mfs();
    return out;
  }

  std::vector<int> walk_of(const flow_routing& fr, const flow_spec& f) const {
    if (!fr.walk.empty()) return fr.walk.flatten();
    if (fr.q_valid) return walk_from_q(fr.q, f.src, f.dst);
    return {};
  }

  // loads always describe the full installed configuration at current rates
  void rebuild_loads() {
    st.link_load = make_mat_d(net.topo.n, net.topo.n, 0.0);
    st.proc_load = make_mat_d(net.topo.n, net.vnfs.count, 0.0);
    for (const auto& fr : live.flows) {
      if (!fr.allocated) continue;
      const flow_spec* f = flow_by_id(fr.flow);
      if (!f) continue;
      double rate = eff_rate(*f);
      add_walk_load(st.link_load, walk_of(fr, *f), rate);
      for (int i = 0; i < net.topo.n; ++i)
        for (int x = 0; x < net.vnfs.count; ++x)
          if (!fr.u.empty() && fr.u[i][x]) st.proc_load[i][x] += net.vnfs.processing[x] * rate;
    }
  }

  void set_live_flow(flow_routing fr) {
    for (auto& cur : live.flows) {
      if (cur.flow == fr.flow) {
        cur = std::move(fr);
        return;
      }
    }
    live.flows.push_back(std::move(fr));
  }

  void sync_installed() {
    st.installed.clear();
    for (const auto& fr : live.flows)
      if (fr.allocated) st.installed[fr.flow] = fr.r;
  }

  // row emission reads the overhead against the previous entries, then the
  // new configuration becomes the installed one
  void emit(double t, const char* event, const char* algo) {
    metrics_report rep = compute_metrics(net, st, flows, live);
    metrics_row row;
    row.t = t;
    row.event = event;
    row.algorithm = algo;
    row.fill(rep);
    tl.rows.push_back(row);
    tl.log.push_back(strf("t=%g %s %s energy=%g overhead=%d rejected=%d qos=%d", t, event,
                          algo, rep.total_energy, rep.reconf_overhead, rep.rejected,
                          rep.qos_misses));
    sync_installed();
  }

  void commit(routing_solution sol) {
    live = std::move(sol);
    if (live.server_next.empty()) live.server_next = st.state;
    st.state = live.server_next;
    rebuild_loads();
  }

  void handle_arrival(double t, const flow_spec& f) {
    flows.push_back(f);
    flow_routing fr = nsf(net, st, f, kb.mfs());
    if (fr.allocated) {
      for (int i = 0; i < net.topo.n; ++i)
        for (int x = 0; x < net.vnfs.count; ++x)
          if (fr.u[i][x]) st.state[i] = server_state::active;
      tl.log.push_back(strf("t=%g arrival flow=%d nsf allocated hops=%d", t, f.id, fr.hops()));
    } else {
      tl.log.push_back(
          strf("t=%g arrival flow=%d nsf rejected vnf=%d", t, f.id, fr.failed_vnf));
    }
    set_live_flow(std::move(fr));
    live.server_next = st.state;
    rebuild_loads();
    emit(t, "arrival", "nsf");
    check_detect(t);
  }

  void handle_rate_change(double t, const std::vector<std::pair<int, double>>& rates) {
    for (const auto& [id, rate] : rates) {
      flow_spec* f = flow_by_id(id);
      if (f) f->rate = rate;
    }
    rebuild_loads();
    tl.log.push_back(strf("t=%g rate_change flows=%d", t, static_cast<int>(rates.size())));
    check_detect(t);
  }

  // instantaneous trigger, evaluated after externally caused load changes;
  // our own reallocations do not re-trigger it
  void check_detect(double t) {
    if (!ev.detect) return;
    congestion_report rep = detect_congestion(net, st.link_load, ev.congestion_threshold);
    if (!rep.congested) return;
    tl.log.push_back(strf("t=%g congestion_detected links=%d", t,
                          static_cast<int>(rep.links.size())));
    run_lt_ensf();
    emit(t, "congestion_detected", "lt-ensf");
    next_grr = t + ev.grr_period;
  }

  void run_lt_ensf() {
    lt_result lr = lt_ensf(net, st, flows_eff(), ensf_config{algos.placement_cap});
    net.servers = lr.servers;
    commit(std::move(lr.solution));
  }

  // sequential minimum-hop pass, consumed capacity carried flow to flow
  routing_solution seq_sfra_pass() {
    network_state acc = st;
    acc.link_load = make_mat_d(net.topo.n, net.topo.n, 0.0);
    acc.proc_load = make_mat_d(net.topo.n, net.vnfs.count, 0.0);
    routing_solution sol;
    solver_config cfg;
    cfg.mode = problem_mode::sfra;
    cfg.time_budget = algos.time_budget;
    cfg.node_limit = algos.node_limit;
    for (const auto& f : flows_eff()) {
      solve_result res = solve_sfra(net, acc, f, cfg);
      if (res.status == solve_status::infeasible || res.solution.flows.empty()) {
        flow_routing miss;
        miss.flow = f.id;
        sol.flows.push_back(miss);
        continue;
      }
      flow_routing fr = res.solution.flows.front();
      add_walk_load(acc.link_load, walk_from_q(fr.q, f.src, f.dst), f.rate);
      for (int i = 0; i < net.topo.n; ++i)
        for (int x = 0; x < net.vnfs.count; ++x)
          if (fr.u[i][x]) acc.proc_load[i][x] += net.vnfs.processing[x] * f.rate;
      sol.flows.push_back(std::move(fr));
    }
    sol.server_next = settle_states(st.state, sol, problem_mode::sfra);
    return sol;
  }

  // arrival-style pass over every flow: nearest providers at the rolling
  // median stand-in, loads installed at the measured rates
  routing_solution nsf_pass() {
    network_state acc = st;
    acc.link_load = make_mat_d(net.topo.n, net.topo.n, 0.0);
    acc.proc_load = make_mat_d(net.topo.n, net.vnfs.count, 0.0);
    routing_solution sol;
    std::vector<double> seen;
    for (const auto& f : flows_eff()) {
      double median = kb.initial_mfs;
      if (!seen.empty()) {
        std::vector<double> tmp = seen;
        std::sort(tmp.begin(), tmp.end());
        size_t n = tmp.size();
        median = n % 2 == 1 ? tmp[n / 2] : 0.5 * (tmp[n / 2 - 1] + tmp[n / 2]);
      }
      flow_routing fr = nsf(net, acc, f, median);
      if (fr.allocated) {
        add_walk_load(acc.link_load, fr.walk.flatten(), f.rate);
        for (int i = 0; i < net.topo.n; ++i)
          for (int x = 0; x < net.vnfs.count; ++x)
            if (fr.u[i][x]) {
              acc.proc_load[i][x] += net.vnfs.processing[x] * f.rate;
              acc.state[i] = server_state::active;
            }
        seen.push_back(f.rate);
      }
      sol.flows.push_back(std::move(fr));
    }
    sol.server_next = acc.state;
    return sol;
  }

  void dispatch_long_term(double t) {
    switch (algos.long_term) {
      case algo_kind::nsf:
        commit(nsf_pass());
        break;
      case algo_kind::rrr:
        commit(rrr(net, st, flows_eff(), problem_mode::energy_sfra));
        break;
      case algo_kind::st_ensf:
        commit(st_ensf(net, st, flows_eff()));
        break;
      case algo_kind::lt_ensf:
        run_lt_ensf();
        break;
      case algo_kind::exact_sfra:
        commit(seq_sfra_pass());
        break;
      case algo_kind::exact_energy_sfra:
        commit(rrr(net, st, flows_eff(), problem_mode::energy_sfra));
        break;
      case algo_kind::exact_grr: {
        solver_config cfg;
        cfg.mode = problem_mode::grr_long;
        cfg.alpha = algos.alpha;
        cfg.time_budget = algos.time_budget;
        cfg.node_limit = algos.node_limit;
        solve_result res = solve_grr(net, st, flows_eff(), cfg);
        if (res.status == solve_status::infeasible) {
          tl.log.push_back(strf("t=%g long_term_timer exact-grr infeasible", t));
          break;  // keep the running configuration
        }
        commit(std::move(res.solution));
        break;
      }
    }
    emit(t, "long_term_timer", algo_name(algos.long_term));
  }

  void tick_update(double t) {
    update_knowledge_base(kb, t, flows, st);
    tl.log.push_back(strf("t=%g update_kb flows=%d mfs=%g", t,
                          static_cast<int>(kb.flow_rates.size()), kb.mfs()));
    if (!ev.predict) return;
    congestion_report rep = predict_congestion(net, kb, ev.prediction_threshold);
    if (!rep.congested) return;
    tl.log.push_back(strf("t=%g congestion_predicted links=%d", t,
                          static_cast<int>(rep.links.size())));
    commit(rrr(net, st, flows_eff(), problem_mode::grr_short));
    emit(t, "congestion_predicted", "3r");
    next_lt = t + ev.long_term_period;
  }
};

} // namespace

orchestrator_result run(const network& net, const sim_scenario& scenario,
                        const event_config& ev, const algo_config& algos) {
  ev.check();
  net.check_dims();
  for (size_t k = 1; k < scenario.events.size(); ++k)
    if (scenario.events[k].t < scenario.events[k - 1].t - kTimeTol)
      throw bad_params("scenario events out of order");

  double horizon = scenario.horizon;
  if (!scenario.events.empty()) horizon = std::max(horizon, scenario.events.back().t);

  engine eng(net, ev, algos);
  size_t ei = 0;
  const auto& events = scenario.events;

  while (true) {
    double t_event = ei < events.size() ? events[ei].t : kInf;
    double t = std::min(t_event, std::min({eng.next_lt, eng.next_grr, eng.next_upd}));
    if (t > horizon + kTimeTol) break;

    size_t batch_end = ei;
    while (batch_end < events.size() && events[batch_end].t <= t + kTimeTol) ++batch_end;

    // same-instant order: external rate changes, the long-term branch,
    // arrivals, the grr branch, the knowledge-base refresh with its alarm
    for (size_t k = ei; k < batch_end; ++k)
      if (events[k].kind == sim_event_kind::rate_change)
        eng.handle_rate_change(t, events[k].rates);

    if (eng.next_lt <= t + kTimeTol) {
      eng.dispatch_long_term(t);
      eng.next_lt = t + ev.long_term_period;
    }

    std::vector<const sim_event*> arrivals;
    for (size_t k = ei; k < batch_end; ++k)
      if (events[k].kind == sim_event_kind::arrival) arrivals.push_back(&events[k]);
    std::stable_sort(arrivals.begin(), arrivals.end(),
                     [](const sim_event* a, const sim_event* b) {
                       return a->flow.id < b->flow.id;
                     });
    for (const sim_event* e : arrivals) eng.handle_arrival(t, e->flow);

    if (eng.next_grr <= t + kTimeTol) {
      eng.commit(st_ensf(eng.net, eng.st, eng.flows_eff()));
      eng.emit(t, "grr_timer", "st-ensf");
      eng.next_grr = t + ev.grr_period;
    }

    if (eng.next_upd <= t + kTimeTol) {
      eng.tick_update(t);
      eng.next_upd = t + ev.update_period;
    }

    ei = batch_end;
  }

  orchestrator_result out;
  out.timeline = std::move(eng.tl);
  out.net = std::move(eng.net);
  out.state = std::move(eng.st);
  out.flows = std::move(eng.flows);
  out.solution = std::move(eng.live);
  return out;
}

orchestrator_result replay(const network& net, const std::vector<flow_spec>& flows,
                           int iterations, std::uint64_t growth_seed,
                           const algo_config& algos, event_config ev) {
  if (iterations < 1) throw bad_params("replay needs at least one iteration");
  for (const auto& f : flows)
    if (!f.rate_known()) throw rates_unknown("replay flows need measured rates");

  double period = ev.long_term_period;
  ev.grr_period = ev.update_period = (iterations + 1) * period;
  ev.detect = ev.predict = false;

  sim_scenario sc;
  sc.horizon = iterations * period;
  std::vector<flow_spec> ordered = flows;
  std::sort(ordered.begin(), ordered.end(),
            [](const flow_spec& a, const flow_spec& b) { return a.id < b.id; });
  for (const auto& f : ordered) {
    sim_event e;
    e.t = 0.0;
    e.kind = sim_event_kind::arrival;
    e.flow = f;
    sc.events.push_back(std::move(e));
  }

  std::vector<flow_spec> cur = ordered;
  for (int k = 1; k < iterations; ++k) {
    cur = evolve_rates(cur, growth_seed + static_cast<std::uint64_t>(k));
    sim_event e;
    e.t = (k + 1) * period;
    e.kind = sim_event_kind::rate_change;
    for (const auto& f : cur) e.rates.push_back({f.id, f.rate});
    sc.events.push_back(std::move(e));
  }

  return run(net, sc, ev, algos);
}

} // namespace sfcr
