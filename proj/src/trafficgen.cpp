#include "sfcr/trafficgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfcr/errors.hpp"
#include "sfcr/rng.hpp"

namespace sfcr {

namespace {

// rng stream salts, so the draw order of one stage never shifts another
constexpr std::uint64_t kHostingStream = 1;
constexpr std::uint64_t kFlowStream = 2;
constexpr std::uint64_t kGrowthStream = 3;

// integer +/- tolerance so 0.7 * 10 rounds as the arithmetic intends
int iceil(double v) { return static_cast<int>(std::ceil(v - 1e-9)); }
int ifloor(double v) { return static_cast<int>(std::floor(v + 1e-9)); }

void require_ratio(double v, const char* name) {
  if (v >= 0.0 && v <= 1.0) return;
  std::ostringstream err;
  err << name << " = " << v << " outside [0, 1]";
  throw bad_params(err.str());
}

} // namespace

void gen_params::check() const {
  require_ratio(b_f, "b_f");
  require_ratio(gamma, "gamma");
  require_ratio(x_gamma, "x_gamma");
  require_ratio(tau, "tau");
  require_ratio(tau_s, "tau_s");
  require_ratio(tau_d, "tau_d");
  std::ostringstream err;
  if (x < 1) {
    err << "x = " << x << " but at least one vnf type is required";
    throw bad_params(err.str());
  }
  if (v_f_min < 0 || v_f_min > v_f_avg || v_f_avg > v_f_max || v_f_max > x) {
    err << "chain bounds need 0 <= v_f_min <= v_f_avg <= v_f_max <= x, got " << v_f_min
        << " / " << v_f_avg << " / " << v_f_max << " / " << x;
    throw bad_params(err.str());
  }
  if (beta <= 0.0) {
    err << "beta = " << beta << " must be positive";
    throw bad_params(err.str());
  }
  if (f_m < 1) {
    err << "f_m = " << f_m << " must be at least 1";
    throw bad_params(err.str());
  }
  if (delay_budget_factor <= 0.0) {
    err << "delay_budget_factor = " << delay_budget_factor << " must be positive";
    throw bad_params(err.str());
  }
}

gen_params preset_params(int scenario) {
  if (scenario < 1 || scenario > 5) {
    std::ostringstream err;
    err << "scenario preset " << scenario << " outside 1..5";
    throw bad_params(err.str());
  }
  gen_params p;  // defaults already carry the shared column values
  const double b_f[] = {0.3, 0.3, 0.3, 0.3, 0.2};
  const double gamma[] = {1.0, 0.7, 0.7, 0.7, 0.5};
  const double v_avg[] = {2.0, 2.5, 2.0, 2.5, 2.5};
  p.b_f = b_f[scenario - 1];
  p.gamma = gamma[scenario - 1];
  p.v_f_avg = v_avg[scenario - 1];
  return p;
}

void generate_hosting(network& net, const gen_params& p) {
  p.check();
  const int n = net.topo.n;
  const int eligible_n = iceil(p.gamma * n);
  const int types_per = ifloor(p.x_gamma * p.x);
  if (eligible_n < 1) {
    std::ostringstream err;
    err << "gamma " << p.gamma << " on " << n << " nodes leaves no hosting server";
    throw bad_params(err.str());
  }
  if (static_cast<long>(eligible_n) * types_per < p.x) {
    std::ostringstream err;
    err << eligible_n << " hosting servers with " << types_per << " types each cannot cover "
        << p.x << " vnf types";
    throw uncoverable(err.str());
  }

  if (static_cast<int>(net.servers.size()) != n) net.servers.resize(n);
  for (int i = 0; i < n; ++i) net.servers[i].node = i;
  if (net.vnfs.count == 0) {
    net.vnfs.count = p.x;
    net.vnfs.processing.assign(p.x, 1.0);
  } else if (net.vnfs.count != p.x) {
    std::ostringstream err;
    err << "catalog carries " << net.vnfs.count << " vnf types but params say " << p.x;
    throw dimension_mismatch(err.str());
  }

  rng r = rng(p.seed).fork(kHostingStream);
  for (long attempt = 0; attempt < 1000000; ++attempt) {
    auto picked = r.sample(n, eligible_n);
    std::vector<std::vector<int>> types(picked.size());
    std::vector<char> covered(p.x, 0);
    for (size_t k = 0; k < picked.size(); ++k) {
      types[k] = r.sample(p.x, types_per);
      for (int t : types[k]) covered[t] = 1;
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end()) continue;
    for (auto& s : net.servers) {
      s.hosts.assign(p.x, 0);
      s.eligible = false;
    }
    for (size_t k = 0; k < picked.size(); ++k) {
      auto& s = net.servers[picked[k]];
      s.eligible = true;
      for (int t : types[k]) s.hosts[t] = 1;
    }
    return;
  }
  throw uncoverable("no covering hosting assignment found in 1000000 draws");
}

std::vector<flow_spec> generate_flows(const network& net, const gen_params& p) {
  p.check();
  const int n = net.topo.n;
  const int n_s = iceil(p.tau * p.tau_s * n);
  const int n_d = iceil(p.tau * p.tau_d * n);
  if (n_s < 1 || n_d < 1) {
    std::ostringstream err;
    err << "edge ratios leave " << n_s << " sources and " << n_d << " destinations";
    throw bad_params(err.str());
  }

  double ref_cap = 0.0;
  double max_delay = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (net.topo.has_link(i, j)) {
        ref_cap = std::max(ref_cap, net.topo.cap[i][j]);
        max_delay = std::max(max_delay, net.topo.delay[i][j]);
      }
  const double budget = p.delay_budget_factor * n * max_delay;

  rng r = rng(p.seed).fork(kFlowStream);

  // edge switches first, then the source and destination roles within them
  auto edges = r.sample(n, iceil(p.tau * n));
  auto pick_roles = [&](int count) {
    auto idx = r.sample(static_cast<int>(edges.size()), count);
    std::vector<int> nodes(idx.size());
    for (size_t k = 0; k < idx.size(); ++k) nodes[k] = edges[idx[k]];
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  };
  auto sources = pick_roles(n_s);
  auto dests = pick_roles(n_d);

  const double p_count = 1.0 / (p.beta * n_d);
  const double p_len = 1.0 / p.v_f_avg;

  std::vector<flow_spec> flows;
  int id = 1;
  for (int s : sources) {
    int count = std::min(r.geometric(p_count), p.f_m);
    for (int k = 0; k < count; ++k) {
      std::vector<int> choices;
      for (int d : dests)
        if (d != s) choices.push_back(d);
      if (choices.empty()) continue;
      flow_spec f;
      f.id = id++;
      f.src = s;
      f.dst = choices[r.uniform_int(0, static_cast<int>(choices.size()) - 1)];
      f.rate = r.uniform(0.0, 2.0 * p.b_f * ref_cap);
      int len = std::clamp(r.geometric(p_len), p.v_f_min, p.v_f_max);
      f.chain = r.sample(p.x, len);
      f.delay_budget = budget;
      flows.push_back(std::move(f));
    }
  }
  return flows;
}

std::vector<flow_spec> evolve_rates(const std::vector<flow_spec>& flows, std::uint64_t seed) {
  rng r = rng(seed).fork(kGrowthStream);
  std::vector<flow_spec> out = flows;
  for (auto& f : out) {
    if (!f.rate_known()) {
      std::ostringstream err;
      err << "flow " << f.id << " has no rate to grow";
      throw rates_unknown(err.str());
    }
    f.rate *= 1.0 + r.uniform(0.0, 0.2);
  }
  return out;
}

void auto_capacities(network& net, double theta) {
  if (theta <= 0.0) {
    std::ostringstream err;
    err << "theta = " << theta << " must be positive";
    throw bad_params(err.str());
  }
  const int n = net.topo.n;
  if (static_cast<int>(net.servers.size()) != n) net.servers.resize(n);
  for (int i = 0; i < n; ++i) {
    net.servers[i].node = i;
    net.servers[i].capacity = theta * net.topo.incident_capacity(i);
  }
}

void auto_energies(network& net, double e_min, double e_max) {
  const int n = static_cast<int>(net.servers.size());
  if (n == 0) return;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (net.servers[a].capacity != net.servers[b].capacity)
      return net.servers[a].capacity < net.servers[b].capacity;
    return a < b;
  });
  for (int rank = 0; rank < n; ++rank) {
    double t = n > 1 ? static_cast<double>(rank) / (n - 1) : 0.0;
    net.servers[order[rank]].energy = e_min + (e_max - e_min) * t;
  }
}

} // namespace sfcr
