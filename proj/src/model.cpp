#include "sfcr/model.hpp"

#include <sstream>

#include "sfcr/errors.hpp"

namespace sfcr {

const char* to_string(server_state s) {
  switch (s) {
    case server_state::off: return "OFF";
    case server_state::idle: return "IDLE";
    case server_state::active: return "ACTIVE";
  }
  return "OFF";
}

server_state state_from_string(const std::string& s) {
  if (s == "OFF" || s == "off") return server_state::off;
  if (s == "IDLE" || s == "idle") return server_state::idle;
  if (s == "ACTIVE" || s == "active") return server_state::active;
  throw parse_error("unknown server state: " + s);
}

int server_spec::hosted_count() const {
  int c = 0;
  for (auto h : hosts) c += h;
  return c;
}

double server_spec::power(server_state s) const {
  switch (s) {
    case server_state::active: return energy;
    case server_state::idle: return idle_fraction * energy;
    case server_state::off: return 0.0;
  }
  return 0.0;
}

double server_spec::power() const { return power(state); }

topology::topology(int nodes)
    : n(nodes), cap(make_mat_d(nodes, nodes, 0.0)), delay(make_mat_d(nodes, nodes, kInf)) {}

void topology::add_link(int i, int j, double capacity, double d, bool both_ways) {
  cap[i][j] = capacity;
  delay[i][j] = d;
  if (both_ways) {
    cap[j][i] = capacity;
    delay[j][i] = d;
  }
}

double topology::incident_capacity(int j) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    if (has_link(i, j)) s += cap[i][j];
  return s;
}

int topology::link_count() const {
  int c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (has_link(i, j)) ++c;
  return c;
}

std::vector<std::uint8_t> flow_spec::requested(int vnf_count) const {
  std::vector<std::uint8_t> v(vnf_count, 0);
  for (int x : chain) v[x] = 1;
  return v;
}

void network::check_dims() const {
  std::ostringstream err;
  if (static_cast<int>(servers.size()) != topo.n) {
    err << "server slots (" << servers.size() << ") != nodes (" << topo.n << ")";
    throw dimension_mismatch(err.str());
  }
  for (const auto& s : servers) {
    if (static_cast<int>(s.hosts.size()) != vnfs.count) {
      err << "server " << s.node + 1 << " hosts row has " << s.hosts.size()
          << " entries, catalog has " << vnfs.count;
      throw dimension_mismatch(err.str());
    }
  }
  if (static_cast<int>(vnfs.processing.size()) != vnfs.count)
    throw dimension_mismatch("vnf catalog processing vector does not match count");
}

network_state network_state::fresh(const network& net) {
  network_state st;
  st.link_load = make_mat_d(net.topo.n, net.topo.n, 0.0);
  st.proc_load = make_mat_d(net.topo.n, net.vnfs.count, 0.0);
  st.state.resize(net.topo.n, server_state::off);
  for (int i = 0; i < net.topo.n; ++i) st.state[i] = net.servers[i].state;
  return st;
}

} // namespace sfcr
