#ifndef SFCR_MODEL_HPP
#define SFCR_MODEL_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace sfcr {

template <typename T>
using matrix = std::vector<std::vector<T>>;

using mat_i = matrix<int>;
using mat_d = matrix<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
// flows announce themselves before their rate is measurable
constexpr double kUnknownRate = -1.0;

inline mat_i make_mat_i(int rows, int cols, int v = 0) {
  return mat_i(rows, std::vector<int>(cols, v));
}
inline mat_d make_mat_d(int rows, int cols, double v = 0.0) {
  return mat_d(rows, std::vector<double>(cols, v));
}

enum class server_state { off = 0, idle = 1, active = 2 };

const char* to_string(server_state s);
server_state state_from_string(const std::string& s);

// per-unit-rate processing demand of each vnf type
struct vnf_catalog {
  int count = 0;
  std::vector<double> processing;
};

struct server_spec {
  int node = -1;
  double capacity = 0.0;  // processing capacity; 0 = no server at this node
  double energy = 0.0;    // active-mode draw
  double idle_fraction = 0.6;
  std::vector<std::uint8_t> hosts;  // hosts[x] = 1 if vnf type x is installed
  server_state state = server_state::off;
  bool eligible = false;  // may receive new vnf placements

  int hosted_count() const;
  bool exists() const { return capacity > 0.0 || hosted_count() > 0; }
  double power() const;  // draw at the current state
  double power(server_state s) const;
};

struct topology {
  int n = 0;
  mat_d cap;    // 0 = no link
  mat_d delay;  // kInf where no link; guarded by has_link, never summed

  explicit topology(int nodes = 0);
  bool has_link(int i, int j) const { return cap[i][j] > 0.0; }
  void add_link(int i, int j, double capacity, double d, bool both_ways = true);
  double incident_capacity(int j) const;  // sum of incoming link capacities
  int link_count() const;                 // directed links
};

struct flow_spec {
  int id = -1;
  int src = -1;
  int dst = -1;
  double rate = kUnknownRate;
  double delay_budget = kInf;
  std::vector<int> chain;  // ordered vnf types, no repeats

  bool rate_known() const { return rate >= 0.0; }
  std::vector<std::uint8_t> requested(int vnf_count) const;
};

// substrate: topology + servers + catalog
struct network {
  topology topo;
  std::vector<server_spec> servers;  // one slot per node; empty slot = no server
  vnf_catalog vnfs;

  void check_dims() const;  // throws dimension_mismatch
};

// operating point threaded through allocation events
struct network_state {
  mat_d link_load;                 // current traffic per link
  mat_d proc_load;                 // current processing per (node, vnf)
  std::map<int, mat_i> installed;  // installed forwarding entries per flow id
  std::vector<server_state> state;
  double mu_link = 1.0;    // usable fraction of link capacity
  double mu_server = 1.0;  // usable fraction of processing capacity

  static network_state fresh(const network& net);
};

} // namespace sfcr

#endif
