#include "sfcr/heuristics.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

#include "sfcr/errors.hpp"
#include "sfcr/exact.hpp"

namespace sfcr {

namespace {

constexpr double kEps = 1e-9;

double link_residual(const network& net, const network_state& st, int i, int j) {
  return st.mu_link * net.topo.cap[i][j] - st.link_load[i][j];
}

double proc_available(const network& net, const network_state& st, int i) {
  double used = 0.0;
  for (double v : st.proc_load[i]) used += v;
  return st.mu_server * net.servers[i].capacity - used;
}

// delay-cost shortest-path tree over the links `link_ok` admits; equal-cost
// alternatives keep the lowest predecessor index, so paths are deterministic
struct sp_tree {
  std::vector<double> dist;
  std::vector<int> prev;
};

sp_tree shortest_from(const topology& topo, int from,
                      const std::function<bool(int, int)>& link_ok) {
  sp_tree t{std::vector<double>(topo.n, kInf), std::vector<int>(topo.n, -1)};
  std::vector<char> done(topo.n, 0);
  t.dist[from] = 0.0;
  for (int round = 0; round < topo.n; ++round) {
    int at = -1;
    double best = kInf;
    for (int i = 0; i < topo.n; ++i)
      if (!done[i] && t.dist[i] < best) {
        best = t.dist[i];
        at = i;
      }
    if (at < 0) break;
    done[at] = 1;
    for (int j = 0; j < topo.n; ++j) {
      if (done[j] || !topo.has_link(at, j) || !link_ok(at, j)) continue;
      double cand = t.dist[at] + topo.delay[at][j];
      if (cand < t.dist[j] || (cand == t.dist[j] && at < t.prev[j])) {
        t.dist[j] = cand;
        t.prev[j] = at;
      }
    }
  }
  return t;
}

std::vector<int> tree_path(const sp_tree& t, int from, int to) {
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(t.prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

flow_routing rejection(int flow_id, int failed_vnf) {
  flow_routing fr;
  fr.flow = flow_id;
  fr.failed_vnf = failed_vnf;
  return fr;
}

void require_rate(const flow_spec& f) {
  if (f.rate_known()) return;
  std::ostringstream err;
  err << "flow " << f.id << " has no measured rate";
  throw rates_unknown(err.str());
}

void clear_loads(network_state& st) {
  for (auto& row : st.link_load) std::fill(row.begin(), row.end(), 0.0);
  for (auto& row : st.proc_load) std::fill(row.begin(), row.end(), 0.0);
}

// walk builder shared by the two rebuilders; differs only in how providers
// are ranked and in whether powered-off servers may be woken
flow_routing ensf_flow(network& net, network_state& work, const flow_spec& flow, bool long_term,
                       int placement_cap) {
  const double rate = flow.rate;
  std::vector<char> visited(net.topo.n, 0);
  visited[flow.src] = 1;
  int current = flow.src;
  segmented_walk walk;

  for (std::size_t c = 0; c < flow.chain.size(); ++c) {
    const int x = flow.chain[c];
    const double need = net.vnfs.processing[x] * rate;
    auto admit = [&](int i, int j) {
      if (visited[j]) return false;
      return link_residual(net, work, i, j) + kEps >= rate;
    };
    sp_tree t = shortest_from(net.topo, current, admit);

    // tiers: 0 = already active, 1 = powered idle, 2 = off (long-term only)
    int pick = -1;
    int pick_tier = 3;
    double pick_cost = kInf;
    double pick_energy = kInf;
    for (int i = 0; i < net.topo.n; ++i) {
      if (t.dist[i] == kInf) continue;
      const server_spec& s = net.servers[i];
      if (proc_available(net, work, i) + kEps < need) continue;
      const bool hosts_x = x < static_cast<int>(s.hosts.size()) && s.hosts[x];
      int tier;
      double energy;
      switch (work.state[i]) {
        case server_state::active:
          if (!hosts_x) continue;
          tier = 0;
          energy = 0.0;
          break;
        case server_state::idle:
          if (!hosts_x) continue;
          tier = 1;
          // the draw a wake-up adds: the whole budget long-term, the
          // active-minus-idle difference short-term
          energy = long_term ? s.energy : s.energy * (1.0 - s.idle_fraction);
          break;
        case server_state::off:
        default:
          if (!long_term) continue;
          if (!hosts_x) {
            if (!s.eligible) continue;
            if (placement_cap >= 0 && s.hosted_count() >= placement_cap) continue;
          }
          tier = 2;
          energy = 0.0;  // the off tier ranks by distance alone
          break;
      }
      bool better;
      if (long_term) {
        // categorical precedence: active, then cheapest idle, then nearest off
        better = std::tie(tier, energy, t.dist[i], i) <
                 std::tie(pick_tier, pick_energy, pick_cost, pick);
      } else {
        // one blended score: least extra draw, then distance, then index
        better = std::tie(energy, t.dist[i], i) < std::tie(pick_energy, pick_cost, pick);
      }
      if (pick < 0 || better) {
        pick = i;
        pick_tier = tier;
        pick_cost = t.dist[i];
        pick_energy = energy;
      }
    }
    if (pick < 0) return rejection(flow.id, static_cast<int>(c));

    std::vector<int> path =
        pick == current ? std::vector<int>{current} : tree_path(t, current, pick);
    for (int node : path) visited[node] = 1;
    if (path.size() > 1) add_walk_load(work.link_load, path, rate);
    work.proc_load[pick][x] += need;
    if (work.state[pick] != server_state::active) work.state[pick] = server_state::active;
    if (long_term && !net.servers[pick].hosts[x]) net.servers[pick].hosts[x] = 1;

    segmented_walk::segment seg;
    seg.nodes = std::move(path);
    seg.vnf = x;
    walk.segments.push_back(std::move(seg));
    current = pick;
  }

  // final leg under the same pruning; only the destination may be re-entered
  auto tail_ok = [&](int, int j) {
    if (visited[j] && j != flow.dst) return false;
    return true;
  };
  auto tail_admit = [&](int i, int j) {
    if (!tail_ok(i, j)) return false;
    return link_residual(net, work, i, j) + kEps >= rate;
  };
  sp_tree t = shortest_from(net.topo, current, tail_admit);
  if (current != flow.dst && t.dist[flow.dst] == kInf)
    return rejection(flow.id, static_cast<int>(flow.chain.size()));
  segmented_walk::segment tail;
  tail.nodes = current == flow.dst ? std::vector<int>{current} : tree_path(t, current, flow.dst);
  if (tail.nodes.size() > 1) add_walk_load(work.link_load, tail.nodes, rate);
  walk.segments.push_back(std::move(tail));
  return route_from_segments(net, flow.id, walk);
}

routing_solution ensf_run(const network& net, const network_state& st,
                          const std::vector<flow_spec>& flows, bool long_term, int placement_cap,
                          std::vector<server_spec>* servers_out) {
  for (const flow_spec& f : flows) require_rate(f);
  network work_net = net;
  network_state work = st;
  clear_loads(work);  // the rebuild owns every flow, so it starts from empty

  routing_solution out;
  for (const flow_spec& f : flows) {
    network_state before = work;
    std::vector<server_spec> before_servers = work_net.servers;
    flow_routing fr = ensf_flow(work_net, work, f, long_term, placement_cap);
    if (!fr.allocated) {  // a rejected flow leaves no footprint
      work = std::move(before);
      work_net.servers = std::move(before_servers);
    }
    out.flows.push_back(std::move(fr));
  }
  out.server_next = settle_states(
      st.state, out, long_term ? problem_mode::grr_long : problem_mode::grr_short);
  if (servers_out) {
    *servers_out = work_net.servers;
    for (int i = 0; i < net.topo.n; ++i) (*servers_out)[i].state = out.server_next[i];
  }
  return out;
}

} // namespace

provider_result find_nearest_provider(const network& net, const network_state& st, int from,
                                      int vnf, double rate) {
  auto admit = [&](int i, int j) { return link_residual(net, st, i, j) + kEps >= rate; };
  sp_tree t = shortest_from(net.topo, from, admit);
  const double need = net.vnfs.processing[vnf] * rate;

  provider_result best;
  for (int i = 0; i < net.topo.n; ++i) {
    const server_spec& s = net.servers[i];
    if (vnf >= static_cast<int>(s.hosts.size()) || !s.hosts[vnf]) continue;
    if (proc_available(net, st, i) + kEps < need) continue;
    if (t.dist[i] == kInf) continue;
    if (!best.found || t.dist[i] < best.cost || (t.dist[i] == best.cost && i < best.node)) {
      best.found = true;
      best.node = i;
      best.cost = t.dist[i];
    }
  }
  if (best.found && best.node != from) best.path = tree_path(t, from, best.node);
  return best;
}

flow_routing nsf(const network& net, const network_state& st, const flow_spec& flow, double mfs) {
  network_state work = st;  // local residual bookkeeping across segments
  segmented_walk walk;
  int current = flow.src;

  for (std::size_t c = 0; c < flow.chain.size(); ++c) {
    provider_result p = find_nearest_provider(net, work, current, flow.chain[c], mfs);
    if (!p.found) return rejection(flow.id, static_cast<int>(c));
    segmented_walk::segment seg;
    seg.nodes = p.path.empty() ? std::vector<int>{current} : p.path;
    seg.vnf = flow.chain[c];
    if (!p.path.empty()) add_walk_load(work.link_load, p.path, mfs);
    walk.segments.push_back(std::move(seg));
    current = p.node;
  }

  // the closing leg rides the full fabric: capacity is not re-checked here
  sp_tree t = shortest_from(net.topo, current, [](int, int) { return true; });
  if (current != flow.dst && t.dist[flow.dst] == kInf)
    return rejection(flow.id, static_cast<int>(flow.chain.size()));
  segmented_walk::segment tail;
  tail.nodes = current == flow.dst ? std::vector<int>{current} : tree_path(t, current, flow.dst);
  walk.segments.push_back(std::move(tail));
  return route_from_segments(net, flow.id, walk);
}

routing_solution rrr(const network& net, const network_state& st,
                     const std::vector<flow_spec>& flows, problem_mode mode) {
  const problem_mode ctx =
      mode == problem_mode::grr_short ? problem_mode::grr_short : problem_mode::energy_sfra;
  network_state work = st;
  clear_loads(work);

  routing_solution out;
  for (const flow_spec& f : flows) {
    require_rate(f);
    solver_config cfg;
    cfg.mode = ctx;
    solve_result r = solve_energy_sfra(net, work, f, cfg);
    if (r.status != solve_status::optimal) {
      out.flows.push_back(rejection(f.id, -1));
      continue;
    }
    flow_routing fr = r.solution.flows.front();
    // consume the capacity and wake the chosen servers so the next flow
    // sees them as free to reuse
    add_walk_load(work.link_load, walk_from_q(fr.q, f.src, f.dst), f.rate);
    for (int i = 0; i < net.topo.n; ++i)
      for (int x = 0; x < net.vnfs.count; ++x)
        if (fr.u[i][x]) {
          work.proc_load[i][x] += net.vnfs.processing[x] * f.rate;
          work.state[i] = server_state::active;
        }
    out.flows.push_back(std::move(fr));
  }
  out.server_next = settle_states(st.state, out, ctx);
  return out;
}

routing_solution st_ensf(const network& net, const network_state& st,
                         const std::vector<flow_spec>& flows) {
  return ensf_run(net, st, flows, false, -1, nullptr);
}

lt_result lt_ensf(const network& net, const network_state& st, const std::vector<flow_spec>& flows,
                  const ensf_config& cfg) {
  lt_result res;
  res.solution = ensf_run(net, st, flows, true, cfg.placement_cap, &res.servers);
  return res;
}

} // namespace sfcr
