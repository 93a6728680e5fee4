#include "sfcr/metrics.hpp"

#include <cmath>

namespace sfcr {

metrics_report compute_metrics(const network& net, const network_state& st,
                               const std::vector<flow_spec>& flows,
                               const routing_solution& sol) {
  const topology& topo = net.topo;
  metrics_report rep;

  const std::vector<server_state>& states = sol.server_next.empty() ? st.state : sol.server_next;
  for (int i = 0; i < topo.n; ++i)
    if (net.servers[i].exists()) rep.total_energy += net.servers[i].power(states[i]);

  double util_sum = 0.0;
  int links = 0;
  for (int i = 0; i < topo.n; ++i) {
    for (int j = 0; j < topo.n; ++j) {
      if (!topo.has_link(i, j)) continue;
      double u = st.link_load[i][j] / topo.cap[i][j];
      rep.max_link_util = std::max(rep.max_link_util, u);
      util_sum += u;
      ++links;
    }
  }
  rep.avg_link_util = links ? util_sum / links : 0.0;

  double srv_sum = 0.0;
  int srvs = 0;
  for (int i = 0; i < topo.n; ++i) {
    const auto& s = net.servers[i];
    if (!s.exists() || s.capacity <= 0.0) continue;
    double load = 0.0;
    for (int x = 0; x < net.vnfs.count; ++x) load += st.proc_load[i][x];
    double u = load / s.capacity;
    rep.max_server_util = std::max(rep.max_server_util, u);
    srv_sum += u;
    ++srvs;
  }
  rep.avg_server_util = srvs ? srv_sum / srvs : 0.0;

  static const mat_i empty;
  for (const auto& f : flows) {
    const flow_routing* fr = sol.find(f.id);
    flow_metrics fm;
    fm.flow = f.id;
    fm.allocated = fr && fr->allocated;
    if (!fm.allocated) {
      ++rep.rejected;
      rep.per_flow.push_back(fm);
      continue;
    }
    auto it = st.installed.find(f.id);
    const mat_i& m = it == st.installed.end() ? empty : it->second;
    for (int i = 0; i < topo.n; ++i) {
      for (int j = 0; j < topo.n; ++j) {
        int was = m.empty() ? 0 : m[i][j];
        int now = fr->r.empty() ? 0 : fr->r[i][j];
        rep.reconf_overhead += std::abs(now - was);
      }
    }
    fm.path_length = fr->hops();
    auto seq = fr->walk.empty() ? (fr->q_valid ? walk_from_q(fr->q, f.src, f.dst)
                                               : std::vector<int>{})
                                : fr->walk.flatten();
    fm.delay = seq.empty() ? 0.0 : walk_delay(topo, seq);
    fm.qos_ok = fm.delay <= f.delay_budget;
    if (!fm.qos_ok) ++rep.qos_misses;
    rep.per_flow.push_back(fm);
  }
  return rep;
}

} // namespace sfcr
