#ifndef SFCR_TESTS_FIXTURES_HPP
#define SFCR_TESTS_FIXTURES_HPP

#include "sfcr/model.hpp"
#include "sfcr/solution.hpp"

namespace sfcr::fixtures {

// 5-node reference fabric: links 1-2, 1-3, 2-4, 3-5, 4-5 (1-based names),
// vnf 3 hosted at node 1, vnf 2 at node 4; the canonical walk for a flow
// 1 -> 2 with chain [3, 2] is 1-3-5-4-2
inline network ref5(double server_cap = 10.0, double server_energy = 300.0) {
  network net;
  net.topo = topology(5);
  net.topo.add_link(0, 1, 1.0, 1.0);
  net.topo.add_link(0, 2, 1.0, 1.0);
  net.topo.add_link(1, 3, 1.0, 1.0);
  net.topo.add_link(2, 4, 1.0, 1.0);
  net.topo.add_link(3, 4, 1.0, 1.0);
  net.vnfs.count = 4;
  net.vnfs.processing = {1.0, 1.0, 1.0, 1.0};
  net.servers.resize(5);
  for (int i = 0; i < 5; ++i) {
    auto& s = net.servers[i];
    s.node = i;
    s.capacity = server_cap;
    s.energy = server_energy;
    s.hosts.assign(4, 0);
    s.state = server_state::idle;
    s.eligible = true;
  }
  net.servers[0].hosts[2] = 1;
  net.servers[3].hosts[1] = 1;
  return net;
}

inline flow_spec ref5_flow() {
  flow_spec f;
  f.id = 1;
  f.src = 0;
  f.dst = 1;
  f.rate = 0.5;
  f.delay_budget = 10.0;
  f.chain = {2, 1};  // vnf 3 then vnf 2, 0-based
  return f;
}

// the frozen optimum for the reference flow
inline flow_routing ref5_route(const network& net) {
  return route_from_path(net, 1, {0, 2, 4, 3, 1}, {{0, 2}, {3, 1}});
}

// 4-node diamond: 1-2, 1-3, 2-4, 3-4; every node hosts both vnf types
inline network diamond4(double server_cap = 10.0) {
  network net;
  net.topo = topology(4);
  net.topo.add_link(0, 1, 1.0, 1.0);
  net.topo.add_link(0, 2, 1.0, 1.0);
  net.topo.add_link(1, 3, 1.0, 1.0);
  net.topo.add_link(2, 3, 1.0, 1.0);
  net.vnfs.count = 2;
  net.vnfs.processing = {1.0, 1.0};
  net.servers.resize(4);
  for (int i = 0; i < 4; ++i) {
    auto& s = net.servers[i];
    s.node = i;
    s.capacity = server_cap;
    s.energy = 200.0 + 50.0 * i;
    s.hosts.assign(2, 1);
    s.state = server_state::idle;
    s.eligible = true;
  }
  return net;
}

} // namespace sfcr::fixtures

#endif
