#include "sfcr/exact.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

#include "sfcr/errors.hpp"

namespace sfcr {

const char* to_string(solve_status s) {
  switch (s) {
    case solve_status::optimal: return "OPTIMAL";
    case solve_status::feasible_timeout: return "FEASIBLE_TIMEOUT";
    case solve_status::infeasible: return "INFEASIBLE";
  }
  return "INFEASIBLE";
}

std::vector<std::vector<int>> simple_paths(const topology& topo, int src, int dst) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur{src};
  std::vector<char> used(topo.n, 0);
  used[src] = 1;

  std::function<void()> dfs = [&]() {
    int at = cur.back();
    if (at == dst) {
      out.push_back(cur);
      return;
    }
    for (int j = 0; j < topo.n; ++j) {
      if (used[j] || !topo.has_link(at, j)) continue;
      used[j] = 1;
      cur.push_back(j);
      dfs();
      cur.pop_back();
      used[j] = 0;
    }
  };
  if (src != dst) dfs();

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double required_rate(const flow_spec& f, const solver_config& cfg) {
  if (f.rate_known()) return f.rate;
  if (cfg.stand_in_rate >= 0.0) return cfg.stand_in_rate;
  std::ostringstream err;
  err << "flow " << f.id << " has no rate and no stand-in was supplied";
  throw rates_unknown(err.str());
}

// all chain placements onto a path in visit order (a server may keep the
// flow for several consecutive vnfs), sorted by the node-index tuple;
// `usable` gates (node, vnf) pairs
std::vector<std::vector<int>> placements_on(const std::vector<int>& path,
                                            const std::vector<int>& chain,
                                            const std::function<bool(int, int)>& usable) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(chain.size(), -1);
  std::function<void(size_t, size_t)> rec = [&](size_t c, size_t from) {
    if (c == chain.size()) {
      out.emplace_back();
      for (size_t k = 0; k < chain.size(); ++k) out.back().push_back(path[pick[k]]);
      return;
    }
    for (size_t p = from; p < path.size(); ++p) {
      if (!usable(path[p], chain[c])) continue;
      pick[c] = static_cast<int>(p);
      rec(c + 1, p);
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// joint processing check: one server may carry several vnfs of the chain,
// so the per-placement demand must fit against the background as a sum
bool servers_admit(const network& net, const network_state& st, const std::vector<int>& chain,
                   const std::vector<int>& place, double rate) {
  std::vector<double> need(net.topo.n, 0.0);
  for (size_t c = 0; c < place.size(); ++c)
    need[place[c]] += net.vnfs.processing[chain[c]] * rate;
  for (int i = 0; i < net.topo.n; ++i) {
    if (need[i] == 0.0) continue;
    double used = need[i];
    for (double v : st.proc_load[i]) used += v;
    if (used > st.mu_server * net.servers[i].capacity + 1e-9) return false;
  }
  return true;
}

bool links_admit(const topology& topo, const network_state& st, const std::vector<int>& path,
                 double rate) {
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    int i = path[k], j = path[k + 1];
    if (st.link_load[i][j] + rate > st.mu_link * topo.cap[i][j] + 1e-9) return false;
  }
  return true;
}

double background_processing(const network_state& st, int node) {
  double s = 0.0;
  for (double v : st.proc_load[node]) s += v;
  return s;
}

routing_solution single_flow_solution(const network& net, const network_state& st,
                                      const flow_spec& flow, const std::vector<int>& path,
                                      const std::vector<int>& placement,
                                      problem_mode mode) {
  routing_solution sol;
  std::vector<std::pair<int, int>> anchors;
  for (size_t c = 0; c < placement.size(); ++c) anchors.push_back({placement[c], flow.chain[c]});
  sol.flows.push_back(route_from_path(net, flow.id, path, anchors));
  sol.server_next = settle_states(st.state, sol, mode);
  return sol;
}

} // namespace

solve_result solve_sfra(const network& net, const network_state& st, const flow_spec& flow,
                        const solver_config& cfg) {
  auto t0 = clock_type::now();
  solve_result res;
  double rate = required_rate(flow, cfg);

  auto usable = [&](int node, int vnf) {
    if (!net.servers[node].hosts[vnf]) return false;
    double need = net.vnfs.processing[vnf] * rate;
    return background_processing(st, node) + need <=
           st.mu_server * net.servers[node].capacity + 1e-9;
  };

  for (const auto& path : simple_paths(net.topo, flow.src, flow.dst)) {
    ++res.nodes_explored;
    if (cfg.time_budget > 0 && seconds_since(t0) > cfg.time_budget) {
      res.status = solve_status::feasible_timeout;
      res.wall_time = seconds_since(t0);
      return res;
    }
    if (cfg.enforce_delay && walk_delay(net.topo, path) > flow.delay_budget + 1e-9) continue;
    if (!links_admit(net.topo, st, path, rate)) continue;
    for (const auto& place : placements_on(path, flow.chain, usable)) {
      if (!servers_admit(net, st, flow.chain, place, rate)) continue;
      // paths arrive in (hops, lexicographic) order: the first feasible one
      // is the optimum; the placement tie-break is the smallest server tuple
      res.solution = single_flow_solution(net, st, flow, path, place, cfg.mode);
      res.objective = static_cast<double>(path.size()) - 1.0;
      res.status = solve_status::optimal;
      res.wall_time = seconds_since(t0);
      return res;
    }
  }
  res.status = solve_status::infeasible;
  res.wall_time = seconds_since(t0);
  return res;
}

solve_result solve_energy_sfra(const network& net, const network_state& st,
                               const flow_spec& flow, const solver_config& cfg) {
  auto t0 = clock_type::now();
  solve_result res;
  double rate = required_rate(flow, cfg);
  const bool short_ctx = !is_long_term(cfg.mode);
  auto e = context_energy(net.servers, cfg.mode);
  auto prev = binary_states(st.state, cfg.mode);

  auto usable = [&](int node, int vnf) {
    if (!net.servers[node].hosts[vnf]) return false;
    if (short_ctx && st.state[node] == server_state::off) return false;
    double need = net.vnfs.processing[vnf] * rate;
    return background_processing(st, node) + need <=
           st.mu_server * net.servers[node].capacity + 1e-9;
  };

  bool found = false;
  std::vector<int> best_path, best_place;
  double best_cost = kInf;

  for (const auto& path : simple_paths(net.topo, flow.src, flow.dst)) {
    ++res.nodes_explored;
    if (cfg.time_budget > 0 && seconds_since(t0) > cfg.time_budget) break;
    if (cfg.enforce_delay && walk_delay(net.topo, path) > flow.delay_budget + 1e-9) continue;
    if (!links_admit(net.topo, st, path, rate)) continue;
    for (const auto& place : placements_on(path, flow.chain, usable)) {
      if (!servers_admit(net, st, flow.chain, place, rate)) continue;
      double cost = 0.0;
      std::vector<char> used(net.topo.n, 0);
      for (int node : place)
        if (!prev[node] && !used[node]) {
          cost += e[node];
          used[node] = 1;
        }
      // ties resolve to the first candidate in (hops, path, servers) order
      if (cost < best_cost) {
        best_cost = cost;
        best_path = path;
        best_place = place;
        found = true;
      }
    }
  }

  res.wall_time = seconds_since(t0);
  if (!found) {
    res.status = cfg.time_budget > 0 && res.wall_time > cfg.time_budget
                     ? solve_status::feasible_timeout
                     : solve_status::infeasible;
    return res;
  }
  res.solution = single_flow_solution(net, st, flow, best_path, best_place, cfg.mode);
  res.objective = best_cost;
  res.status = res.wall_time > cfg.time_budget && cfg.time_budget > 0
                   ? solve_status::feasible_timeout
                   : solve_status::optimal;
  return res;
}

namespace {

struct grr_candidate {
  std::vector<int> path;
  std::vector<int> placement;  // node per chain position
  std::vector<std::pair<int, int>> links;
  int reconf = 0;  // forwarding entries changed vs the installed ones
};

} // namespace

solve_result solve_grr(const network& net, const network_state& st,
                       const std::vector<flow_spec>& flows, const solver_config& cfg) {
  auto t0 = clock_type::now();
  solve_result res;
  const int n = net.topo.n;
  const int F = static_cast<int>(flows.size());
  const bool short_ctx = !is_long_term(cfg.mode);
  auto e = context_energy(net.servers, cfg.mode);

  if (cfg.alpha < 0.0 || cfg.alpha > 1.0) {
    std::ostringstream err;
    err << "alpha " << cfg.alpha << " outside [0, 1]";
    throw bad_alpha(err.str());
  }

  if (F == 0) {
    res.solution.server_next = settle_states(st.state, res.solution, cfg.mode);
    res.objective = 0.0;
    res.status = solve_status::optimal;
    res.wall_time = seconds_since(t0);
    return res;
  }

  // heaviest flows branch first
  std::vector<int> order(F);
  for (int i = 0; i < F; ++i) order[i] = i;
  std::vector<double> rate(F);
  for (int i = 0; i < F; ++i) rate[i] = required_rate(flows[i], cfg);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (rate[a] != rate[b]) return rate[a] > rate[b];
    return flows[a].id < flows[b].id;
  });

  double denom_r = static_cast<double>(n - 1) * F;
  double denom_e = 0.0;
  for (double v : e) denom_e += v;

  // static per-flow candidates in deterministic (hops, path, servers) order
  std::vector<std::vector<grr_candidate>> cand(F);
  static const mat_i no_entries;
  for (int k = 0; k < F; ++k) {
    const auto& f = flows[order[k]];
    auto it = st.installed.find(f.id);
    const mat_i& m = it == st.installed.end() ? no_entries : it->second;
    int m_total = 0;
    if (!m.empty())
      for (const auto& row : m)
        for (int v : row) m_total += v;

    auto usable = [&](int node, int vnf) {
      if (!net.servers[node].hosts[vnf]) return false;
      if (short_ctx && st.state[node] == server_state::off) return false;
      return net.vnfs.processing[vnf] * rate[order[k]] <=
             st.mu_server * net.servers[node].capacity + 1e-9;
    };

    for (const auto& path : simple_paths(net.topo, f.src, f.dst)) {
      if (cfg.enforce_delay && walk_delay(net.topo, path) > f.delay_budget + 1e-9) continue;
      bool fits = true;
      for (size_t s = 0; s + 1 < path.size(); ++s)
        if (rate[order[k]] > st.mu_link * net.topo.cap[path[s]][path[s + 1]] + 1e-9) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (const auto& place : placements_on(path, f.chain, usable)) {
        grr_candidate c;
        c.path = path;
        c.placement = place;
        int overlap = 0;
        for (size_t s = 0; s + 1 < path.size(); ++s) {
          c.links.push_back({path[s], path[s + 1]});
          if (!m.empty() && m[path[s]][path[s + 1]]) ++overlap;
        }
        c.reconf = static_cast<int>(c.links.size()) + m_total - 2 * overlap;
        cand[k].push_back(std::move(c));
      }
    }
    if (cand[k].empty()) {
      res.status = solve_status::infeasible;
      res.wall_time = seconds_since(t0);
      return res;
    }
  }

  // suffix sums of the per-flow floor on entry changes tighten the bound
  std::vector<double> reconf_floor(F + 1, 0.0);
  for (int k = F - 1; k >= 0; --k) {
    int mn = cand[k].front().reconf;
    for (const auto& c : cand[k]) mn = std::min(mn, c.reconf);
    reconf_floor[k] = reconf_floor[k + 1] + mn;
  }

  mat_d link_left = make_mat_d(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) link_left[i][j] = st.mu_link * net.topo.cap[i][j];
  std::vector<double> proc_left(n, 0.0);
  for (int i = 0; i < n; ++i) proc_left[i] = st.mu_server * net.servers[i].capacity;
  std::vector<int> server_uses(n, 0);

  std::vector<int> chosen(F, -1), best_choice;
  double best_obj = kInf;
  long reconf_now = 0;
  double energy_now = 0.0;
  bool out_of_budget = false;

  std::function<void(int)> dfs = [&](int k) {
    if (out_of_budget) return;
    if (k == F) {
      double obj = cfg.alpha * (denom_r > 0 ? reconf_now / denom_r : 0.0) +
                   (1.0 - cfg.alpha) * (denom_e > 0 ? energy_now / denom_e : 0.0);
      if (obj < best_obj) {
        best_obj = obj;
        best_choice = chosen;
      }
      return;
    }
    const auto& f = flows[order[k]];
    double t = rate[order[k]];
    for (size_t ci = 0; ci < cand[k].size(); ++ci) {
      const auto& c = cand[k][ci];
      ++res.nodes_explored;
      if (cfg.node_limit >= 0 && res.nodes_explored > cfg.node_limit) {
        out_of_budget = true;
        return;
      }
      if ((res.nodes_explored & 255) == 0 && cfg.time_budget > 0 &&
          seconds_since(t0) > cfg.time_budget) {
        out_of_budget = true;
        return;
      }

      // bound: committed cost plus the unavoidable entry changes ahead
      double energy_next = energy_now;
      for (size_t p = 0; p < c.placement.size(); ++p)
        if (server_uses[c.placement[p]] == 0) {
          bool counted = false;
          for (size_t q = 0; q < p; ++q)
            if (c.placement[q] == c.placement[p]) counted = true;
          if (!counted) energy_next += e[c.placement[p]];
        }
      double bound =
          cfg.alpha * ((reconf_now + c.reconf + reconf_floor[k + 1]) / denom_r) +
          (1.0 - cfg.alpha) * (denom_e > 0 ? energy_next / denom_e : 0.0);
      if (bound >= best_obj) continue;

      bool ok = true;
      size_t undo_links = 0;
      for (const auto& [i, j] : c.links) {
        if (link_left[i][j] + 1e-9 < t) {
          ok = false;
          break;
        }
        link_left[i][j] -= t;
        ++undo_links;
      }
      size_t undo_proc = 0;
      if (ok) {
        for (size_t p = 0; p < c.placement.size(); ++p) {
          double need = net.vnfs.processing[f.chain[p]] * t;
          if (proc_left[c.placement[p]] + 1e-9 < need) {
            ok = false;
            break;
          }
          proc_left[c.placement[p]] -= need;
          ++undo_proc;
        }
      }
      if (ok) {
        for (int node : c.placement) ++server_uses[node];
        long save_reconf = reconf_now;
        double save_energy = energy_now;
        reconf_now += c.reconf;
        energy_now = energy_next;
        chosen[k] = static_cast<int>(ci);
        dfs(k + 1);
        chosen[k] = -1;
        reconf_now = save_reconf;
        energy_now = save_energy;
        for (int node : c.placement) --server_uses[node];
      }
      for (size_t p = 0; p < undo_proc; ++p) {
        double need = net.vnfs.processing[f.chain[p]] * t;
        proc_left[c.placement[p]] += need;
      }
      for (size_t s = 0; s < undo_links; ++s) {
        auto [i, j] = c.links[s];
        link_left[i][j] += t;
      }
      if (out_of_budget) return;
    }
  };
  dfs(0);

  res.wall_time = seconds_since(t0);
  if (best_choice.empty()) {
    res.status = out_of_budget ? solve_status::feasible_timeout : solve_status::infeasible;
    return res;
  }
  res.solution.flows.resize(F);
  for (int k = 0; k < F; ++k) {
    const auto& f = flows[order[k]];
    const auto& c = cand[k][best_choice[k]];
    std::vector<std::pair<int, int>> anchors;
    for (size_t p = 0; p < c.placement.size(); ++p)
      anchors.push_back({c.placement[p], f.chain[p]});
    res.solution.flows[order[k]] = route_from_path(net, f.id, c.path, anchors);
  }
  res.solution.server_next = settle_states(st.state, res.solution, cfg.mode);
  res.objective = best_obj;
  res.status = out_of_budget ? solve_status::feasible_timeout : solve_status::optimal;
  return res;
}

} // namespace sfcr
