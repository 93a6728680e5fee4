#include "sfcr/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sfcr/errors.hpp"

namespace sfcr {

std::vector<double> context_energy(const std::vector<server_spec>& servers, problem_mode m) {
  std::vector<double> e(servers.size(), 0.0);
  for (size_t i = 0; i < servers.size(); ++i) {
    if (!servers[i].exists()) continue;
    e[i] = is_long_term(m) ? servers[i].energy
                           : servers[i].energy * (1.0 - servers[i].idle_fraction);
  }
  return e;
}

std::vector<std::uint8_t> binary_states(const std::vector<server_state>& st, problem_mode m) {
  std::vector<std::uint8_t> o(st.size(), 0);
  for (size_t i = 0; i < st.size(); ++i) {
    if (is_long_term(m))
      o[i] = st[i] != server_state::off;
    else
      o[i] = st[i] == server_state::active;
  }
  return o;
}

void constraint_report::mark(const std::string& eq) { checked[eq]; }

void constraint_report::add(violation v) { checked[v.eq].push_back(std::move(v)); }

bool constraint_report::pass(const std::string& eq) const {
  auto it = checked.find(eq);
  return it != checked.end() && it->second.empty();
}

bool constraint_report::all_pass() const {
  for (const auto& [eq, v] : checked)
    if (!v.empty()) return false;
  return !checked.empty();
}

int constraint_report::violation_count() const {
  int c = 0;
  for (const auto& [eq, v] : checked) c += static_cast<int>(v.size());
  return c;
}

void constraint_report::merge(const constraint_report& other) {
  for (const auto& [eq, vs] : other.checked) {
    auto& mine = checked[eq];
    mine.insert(mine.end(), vs.begin(), vs.end());
  }
}

static int eq_number(const std::string& eq) {
  return std::atoi(eq.c_str() + 2);  // keys look like eq<NN>
}

std::string constraint_report::to_csv() const {
  std::vector<std::string> keys;
  for (const auto& [eq, vs] : checked) keys.push_back(eq);
  std::sort(keys.begin(), keys.end(),
            [](const std::string& a, const std::string& b) { return eq_number(a) < eq_number(b); });

  std::ostringstream out;
  out << "eq,flow,i,j,x,status,slack\n";
  auto cell = [&](int v) {
    if (v < 0)
      out << "-,";
    else
      out << v << ",";
  };
  for (const auto& k : keys) {
    const auto& vs = checked.at(k);
    if (vs.empty()) {
      out << k << ",-,-,-,-,pass,0\n";
      continue;
    }
    for (const auto& v : vs) {
      out << v.eq << ",";
      cell(v.flow);
      cell(v.i);
      cell(v.j);
      cell(v.x);
      out << "fail," << v.slack << "\n";
    }
  }
  return out.str();
}

namespace {

struct flow_view {
  const flow_spec* spec = nullptr;
  const flow_routing* route = nullptr;
  std::vector<int> seq;  // flattened walk when one is attached
};

std::vector<flow_view> allocated_views(const std::vector<flow_spec>& flows,
                                       const routing_solution& sol) {
  std::vector<flow_view> views;
  for (const auto& f : flows) {
    const flow_routing* fr = sol.find(f.id);
    if (!fr || !fr->allocated) continue;
    flow_view v;
    v.spec = &f;
    v.route = fr;
    // never decode the step matrix here: checks must report on malformed
    // matrices instead of throwing while gathering them
    if (!fr->walk.empty()) v.seq = fr->walk.flatten();
    views.push_back(v);
  }
  return views;
}

double effective_rate(const flow_spec& f, const check_options& opts) {
  if (f.rate_known()) return f.rate;
  if (opts.stand_in_rate >= 0.0) return opts.stand_in_rate;
  std::ostringstream err;
  err << "flow " << f.id << " has no rate and no stand-in was supplied";
  throw rates_unknown(err.str());
}

int row_sum(const mat_i& m, int i) {
  int s = 0;
  for (int v : m[i]) s += v;
  return s;
}

int col_sum(const mat_i& m, int j) {
  int s = 0;
  for (const auto& row : m) s += row[j];
  return s;
}

} // namespace

constraint_report check_chain_membership(const network& net, const std::vector<flow_spec>& flows,
                                         const routing_solution& sol) {
  const int n = net.topo.n;
  const int X = net.vnfs.count;
  constraint_report rep;
  rep.mark("eq2");
  rep.mark("eq3");
  rep.mark("eq4");
  rep.mark("eq5");

  for (const auto& v : allocated_views(flows, sol)) {
    const auto& f = *v.spec;
    const auto& u = v.route->u;
    auto want = f.requested(X);

    for (int x = 0; x < X; ++x) {
      int placed = col_sum(u, x);
      if (placed != want[x])
        rep.add({"eq2", f.id, -1, -1, x + 1, static_cast<double>(-std::abs(placed - static_cast<int>(want[x])))});
    }

    // a vnf may only be delivered by a crossed server (the source is always
    // crossed and needs no incoming entry)
    for (int j = 0; j < n; ++j) {
      if (j == f.src) continue;
      int incoming = col_sum(v.route->r, j);
      for (int x = 0; x < X; ++x) {
        if (u[j][x] > incoming)
          rep.add({"eq3", f.id, -1, j + 1, x + 1, static_cast<double>(incoming - u[j][x])});
      }
    }

    for (int i = 0; i < n; ++i)
      for (int x = 0; x < X; ++x)
        if (u[i][x] > net.servers[i].hosts[x])
          rep.add({"eq4", f.id, i + 1, -1, x + 1,
                    static_cast<double>(net.servers[i].hosts[x] - u[i][x])});

    // a vnf is gained at most once; the same server may still deliver
    // several different vnfs of one chain
    for (int x = 0; x < X; ++x) {
      int placed = col_sum(u, x);
      if (placed > 1) rep.add({"eq5", f.id, -1, -1, x + 1, 1.0 - placed});
    }
  }
  return rep;
}

constraint_report check_capacity(const network& net, const network_state& st,
                                 const std::vector<flow_spec>& flows, const routing_solution& sol,
                                 problem_mode mode, const check_options& opts) {
  const int n = net.topo.n;
  const int X = net.vnfs.count;
  const bool realloc = is_grr(mode);
  const std::string link_eq = realloc ? "eq28" : "eq7";
  const std::string srv_eq = realloc ? "eq27" : "eq6";
  constraint_report rep;
  rep.mark(link_eq);
  rep.mark(srv_eq);

  auto views = allocated_views(flows, sol);

  // link budgets; reallocation rebuilds everything so background load is out
  mat_d traffic = make_mat_d(n, n, 0.0);
  for (const auto& v : views) {
    double t = effective_rate(*v.spec, opts);
    if (opts.walk_mode && !v.seq.empty()) {
      add_walk_load(traffic, v.seq, t);
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (v.route->r[i][j]) traffic[i][j] += t;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double used = traffic[i][j] + (realloc ? 0.0 : st.link_load[i][j]);
      if (used == 0.0) continue;
      double budget = st.mu_link * net.topo.cap[i][j];
      if (used > budget + 1e-9) rep.add({link_eq, -1, i + 1, j + 1, -1, budget - used});
    }
  }

  // processing budgets
  for (int i = 0; i < n; ++i) {
    double used = 0.0;
    for (const auto& v : views) {
      double t = effective_rate(*v.spec, opts);
      for (int x = 0; x < X; ++x)
        if (v.route->u[i][x]) used += net.vnfs.processing[x] * t;
    }
    if (!realloc)
      for (int x = 0; x < X; ++x) used += st.proc_load[i][x];
    if (used == 0.0) continue;
    double budget = st.mu_server * net.servers[i].capacity;
    if (used > budget + 1e-9) rep.add({srv_eq, -1, i + 1, -1, -1, budget - used});
  }
  return rep;
}

constraint_report check_flow_conservation(const network& net, const std::vector<flow_spec>& flows,
                                          const routing_solution& sol,
                                          const check_options& opts) {
  const int n = net.topo.n;
  constraint_report rep;
  rep.mark("eq10");
  rep.mark("eq11");
  if (opts.check_delay) rep.mark("eq12");

  for (const auto& v : allocated_views(flows, sol)) {
    const auto& f = *v.spec;

    if (opts.walk_mode) {
      // per-segment structure: contiguous simple sub-paths from source to
      // destination, each consecutive pair linked
      const auto& segs = v.route->walk.segments;
      int cur = f.src;
      for (size_t s = 0; s < segs.size(); ++s) {
        const auto& seg = segs[s].nodes;
        if (seg.empty() || seg.front() != cur) {
          rep.add({"eq10", f.id, cur + 1, -1, -1, -1.0});
          break;
        }
        std::set<int> seen;
        for (size_t k = 0; k < seg.size(); ++k) {
          if (!seen.insert(seg[k]).second)
            rep.add({"eq11", f.id, seg[k] + 1, -1, -1, -1.0});
          if (k + 1 < seg.size() && !net.topo.has_link(seg[k], seg[k + 1]))
            rep.add({"eq10", f.id, seg[k] + 1, seg[k + 1] + 1, -1, -1.0});
        }
        cur = seg.back();
      }
      if (cur != f.dst) rep.add({"eq10", f.id, f.dst + 1, -1, -1, -1.0});
    } else {
      for (int i = 0; i < n; ++i) {
        int out = row_sum(v.route->r, i);
        int in = col_sum(v.route->r, i);
        int want = i == f.src ? 1 : (i == f.dst ? -1 : 0);
        if (out - in != want)
          rep.add({"eq10", f.id, i + 1, -1, -1, static_cast<double>(-std::abs(out - in - want))});
        if (out > 1) rep.add({"eq11", f.id, i + 1, -1, -1, static_cast<double>(1 - out)});
      }
    }

    if (opts.check_delay && f.delay_budget < kInf) {
      double d;
      if (!v.seq.empty()) {
        d = walk_delay(net.topo, v.seq);
      } else {
        d = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (v.route->r[i][j] && net.topo.has_link(i, j)) d += net.topo.delay[i][j];
      }
      if (d > f.delay_budget + 1e-9) rep.add({"eq12", f.id, -1, -1, -1, f.delay_budget - d});
    }
  }
  return rep;
}

constraint_report check_ordering(const network& net, const std::vector<flow_spec>& flows,
                                 const routing_solution& sol, const check_options& opts) {
  const int n = net.topo.n;
  constraint_report rep;

  if (opts.walk_mode) {
    // routes without step matrices: the consumed vnf sequence must equal the
    // chain, in order
    rep.mark("eq19");
    for (const auto& v : allocated_views(flows, sol)) {
      std::vector<int> consumed;
      for (const auto& seg : v.route->walk.segments)
        if (seg.vnf >= 0) consumed.push_back(seg.vnf);
      if (consumed != v.spec->chain) rep.add({"eq19", v.spec->id, -1, -1, -1, -1.0});
    }
    return rep;
  }

  for (const auto& s :
       {"eq13", "eq14", "eq15", "eq16", "eq17", "eq18", "eq19", "eq23", "eq24"})
    rep.mark(s);

  for (const auto& v : allocated_views(flows, sol)) {
    const auto& f = *v.spec;
    if (!v.route->q_valid) {
      std::ostringstream err;
      err << "flow " << f.id << " carries no step matrix; validate its walk instead";
      throw malformed_q(err.str());
    }
    const mat_i& q = v.route->q;
    const mat_i& r = v.route->r;
    const mat_i& u = v.route->u;
    const int d = f.dst;

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (q[i][j] < r[i][j])
          rep.add({"eq13", f.id, i + 1, j + 1, -1, static_cast<double>(q[i][j] - r[i][j])});

    // every step rides a forwarding entry; destination row is the register
    for (int i = 0; i < n; ++i) {
      if (i == d) continue;
      for (int j = 0; j < n; ++j) {
        if (q[i][j] * r[i][j] != q[i][j])
          rep.add({"eq14", f.id, i + 1, j + 1, -1, static_cast<double>(-std::abs(q[i][j] * r[i][j] - q[i][j]))});
        if (q[i][j] > n * r[i][j])
          rep.add({"eq23", f.id, i + 1, j + 1, -1, static_cast<double>(n * r[i][j] - q[i][j])});
      }
    }

    for (int j = 0; j < n; ++j)
      if (j != d && q[d][j] != 0) rep.add({"eq15", f.id, d + 1, j + 1, -1, static_cast<double>(-std::abs(q[d][j]))});

    for (int i = 0; i < n; ++i) {
      if (i == f.src || i == d) continue;
      int lhs = row_sum(q, i);
      int rhs = col_sum(q, i) + col_sum(r, i);
      if (lhs != rhs) rep.add({"eq16", f.id, i + 1, -1, -1, static_cast<double>(-std::abs(lhs - rhs))});
    }

    {
      int lhs = col_sum(q, d) - q[d][d] + col_sum(r, d);  // incoming only
      if (lhs != q[d][d]) rep.add({"eq17", f.id, d + 1, -1, -1, static_cast<double>(-std::abs(lhs - q[d][d]))});
    }

    {
      int lhs = row_sum(q, f.src);
      if (lhs != 1) rep.add({"eq18", f.id, f.src + 1, -1, -1, static_cast<double>(-std::abs(lhs - 1))});
    }

    // chain order over consecutive vnf pairs: product form and big-M form
    const int big_m = 2 * n - 1;
    for (size_t c = 1; c < f.chain.size(); ++c) {
      int earlier = f.chain[c - 1], later = f.chain[c];
      long lhs = 0, rhs = 0;
      for (int i = 0; i < n; ++i) {
        lhs += static_cast<long>(row_sum(q, i)) * u[i][later];
        rhs += static_cast<long>(row_sum(q, i)) * u[i][earlier];
      }
      if (lhs < rhs)
        rep.add({"eq19", f.id, -1, -1, later + 1, static_cast<double>(lhs - rhs)});

      for (int i = 0; i < n; ++i) {
        for (int I = 0; I < n; ++I) {
          long a = static_cast<long>(1 - u[i][later]) * big_m + row_sum(q, i);
          long b = static_cast<long>(u[I][earlier] - 1) * big_m + row_sum(q, I);
          if (a < b) rep.add({"eq24", f.id, i + 1, I + 1, later + 1, static_cast<double>(a - b)});
        }
      }
    }
  }
  return rep;
}

constraint_report check_energy(const network& net, const std::vector<flow_spec>& flows,
                               const routing_solution& sol, problem_mode mode) {
  const int n = net.topo.n;
  const int X = net.vnfs.count;
  constraint_report rep;
  rep.mark("eq21");
  rep.mark("eq22");
  rep.mark("eq25");

  if (static_cast<int>(sol.server_next.size()) != n)
    throw dimension_mismatch("solution carries no server states to check");
  auto views = allocated_views(flows, sol);
  auto o = binary_states(sol.server_next, mode);
  const int F = static_cast<int>(views.size());

  for (int i = 0; i < n; ++i) {
    long total = 0;
    for (const auto& v : views)
      for (int x = 0; x < X; ++x) total += v.route->u[i][x];

    if (o[i] > total) rep.add({"eq21", -1, i + 1, -1, -1, static_cast<double>(total - o[i])});
    if (o[i] * total != total)
      rep.add({"eq22", -1, i + 1, -1, -1, -std::abs(static_cast<double>(o[i] * total - total))});
    long cap = static_cast<long>(1 + F * X) * o[i];
    if (cap < total) rep.add({"eq25", -1, i + 1, -1, -1, static_cast<double>(cap - total)});
  }
  return rep;
}

double objective_value(const network& net, const network_state& st,
                       const std::vector<flow_spec>& flows, const routing_solution& sol,
                       problem_mode mode, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    std::ostringstream err;
    err << "alpha " << alpha << " outside [0, 1]";
    throw bad_alpha(err.str());
  }
  const int n = net.topo.n;
  auto views = allocated_views(flows, sol);

  if (mode == problem_mode::sfra) {
    long hops = 0;
    for (const auto& v : views) hops += v.route->hops();
    return static_cast<double>(hops);
  }

  if (mode == problem_mode::energy_sfra) {
    auto e = context_energy(net.servers, mode);
    auto prev = binary_states(st.state, mode);
    auto next = binary_states(sol.server_next, mode);
    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost += (1.0 - prev[i]) * next[i] * e[i];
    return cost;
  }

  // reallocation objective: rule changes against the installed entries,
  // blended with switchable energy
  static const mat_i empty;
  long delta = 0;
  for (const auto& v : views) {
    auto it = st.installed.find(v.spec->id);
    const mat_i& m = it == st.installed.end() ? empty : it->second;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int was = m.empty() ? 0 : m[i][j];
        delta += std::abs(v.route->r[i][j] - was);
      }
  }
  const int F = static_cast<int>(flows.size());
  double reconf = F > 0 ? static_cast<double>(delta) / (static_cast<double>(n - 1) * F) : 0.0;

  auto e = context_energy(net.servers, mode);
  auto next = binary_states(sol.server_next, mode);
  double e_total = 0.0, e_on = 0.0;
  for (int i = 0; i < n; ++i) {
    e_total += e[i];
    e_on += next[i] * e[i];
  }
  double energy = e_total > 0.0 ? e_on / e_total : 0.0;
  return alpha * reconf + (1.0 - alpha) * energy;
}

constraint_report validate(const network& net, const network_state& st,
                            const std::vector<flow_spec>& flows, const routing_solution& sol,
                            problem_mode mode, const check_options& opts) {
  constraint_report rep;
  rep.merge(check_chain_membership(net, flows, sol));
  rep.merge(check_capacity(net, st, flows, sol, mode, opts));
  rep.merge(check_flow_conservation(net, flows, sol, opts));
  rep.merge(check_ordering(net, flows, sol, opts));
  if (mode != problem_mode::sfra) rep.merge(check_energy(net, flows, sol, mode));
  return rep;
}

std::vector<server_state> settle_states(const std::vector<server_state>& prev,
                                        const routing_solution& sol, problem_mode mode) {
  std::vector<server_state> next(prev.size(), server_state::off);
  std::vector<char> delivers(prev.size(), 0);
  for (const auto& fr : sol.flows) {
    if (!fr.allocated) continue;
    for (size_t i = 0; i < fr.u.size(); ++i)
      for (int x : fr.u[i])
        if (x) delivers[i] = 1;
  }
  for (size_t i = 0; i < prev.size(); ++i) {
    if (delivers[i])
      next[i] = server_state::active;
    else if (!is_long_term(mode) && prev[i] != server_state::off)
      next[i] = server_state::idle;
    else
      next[i] = server_state::off;
  }
  return next;
}

} // namespace sfcr
