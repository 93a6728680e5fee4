#include "sfcr/solution.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "sfcr/errors.hpp"

namespace sfcr {

std::vector<int> segmented_walk::flatten() const {
  std::vector<int> seq;
  for (const auto& seg : segments) {
    if (seg.nodes.empty()) continue;
    size_t start = (!seq.empty() && seq.back() == seg.nodes.front()) ? 1 : 0;
    seq.insert(seq.end(), seg.nodes.begin() + start, seg.nodes.end());
  }
  return seq;
}

int segmented_walk::hops() const {
  auto seq = flatten();
  return seq.empty() ? 0 : static_cast<int>(seq.size()) - 1;
}

bool segmented_walk::simple() const {
  auto seq = flatten();
  std::set<int> seen(seq.begin(), seq.end());
  return seen.size() == seq.size();
}

int flow_routing::hops() const {
  if (!walk.empty()) return walk.hops();
  int c = 0;
  for (const auto& row : r)
    for (int v : row) c += v;
  return c;
}

const flow_routing* routing_solution::find(int flow_id) const {
  for (const auto& f : flows)
    if (f.flow == flow_id) return &f;
  return nullptr;
}

std::vector<int> walk_from_q(const mat_i& q, int src, int dst) {
  int n = static_cast<int>(q.size());
  std::ostringstream err;

  std::map<int, std::pair<int, int>> step_at;  // step value -> link
  int steps = 0;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(q[i].size()) != n) throw dimension_mismatch("q is not square");
    for (int j = 0; j < n; ++j) {
      if (q[i][j] < 0) {
        err << "negative step at (" << i + 1 << "," << j + 1 << ")";
        throw malformed_q(err.str());
      }
      if (q[i][j] == 0) continue;
      if (i == j) {
        if (i != dst) {
          err << "stray diagonal entry at node " << i + 1;
          throw malformed_q(err.str());
        }
        continue;  // crossed-switch register, handled at the end
      }
      if (!step_at.emplace(q[i][j], std::make_pair(i, j)).second) {
        err << "step " << q[i][j] << " appears twice";
        throw malformed_q(err.str());
      }
      ++steps;
    }
  }

  if (steps == 0) throw malformed_q("no steps encoded");
  if (step_at.rbegin()->first != steps) {
    err << "steps are not contiguous: " << steps << " entries, highest is "
        << step_at.rbegin()->first;
    throw malformed_q(err.str());
  }

  std::vector<int> seq{src};
  int cur = src;
  for (int k = 1; k <= steps; ++k) {
    auto [i, j] = step_at[k];
    if (i != cur) {
      err << "step " << k << " leaves node " << i + 1 << " but the walk is at " << cur + 1;
      throw malformed_q(err.str());
    }
    seq.push_back(j);
    cur = j;
  }
  if (cur != dst) {
    err << "walk ends at node " << cur + 1 << ", not the destination " << dst + 1;
    throw malformed_q(err.str());
  }
  if (q[dst][dst] != steps + 1) {
    err << "crossed-switch register is " << q[dst][dst] << ", walk crosses " << steps + 1;
    throw malformed_q(err.str());
  }
  return seq;
}

link_encoding routing_from_walk(const topology& topo, const std::vector<int>& walk) {
  if (walk.size() < 2) throw dimension_mismatch("walk needs at least two nodes");
  std::ostringstream err;
  for (int v : walk) {
    if (v < 0 || v >= topo.n) {
      err << "walk node " << v + 1 << " outside topology of " << topo.n;
      throw dimension_mismatch(err.str());
    }
  }

  link_encoding enc;
  enc.r = make_mat_i(topo.n, topo.n);
  enc.q = make_mat_i(topo.n, topo.n);
  for (size_t k = 0; k + 1 < walk.size(); ++k) {
    int i = walk[k], j = walk[k + 1];
    if (i == j || !topo.has_link(i, j)) {
      err << "no link " << i + 1 << " -> " << j + 1;
      throw not_a_link(err.str());
    }
    enc.r[i][j] = 1;
  }

  std::set<int> seen(walk.begin(), walk.end());
  enc.q_valid = seen.size() == walk.size();
  if (enc.q_valid) {
    for (size_t k = 0; k + 1 < walk.size(); ++k)
      enc.q[walk[k]][walk[k + 1]] = static_cast<int>(k) + 1;
    enc.q[walk.back()][walk.back()] = static_cast<int>(walk.size());
  }
  return enc;
}

void add_walk_load(mat_d& load, const std::vector<int>& walk, double amount) {
  for (size_t k = 0; k + 1 < walk.size(); ++k) load[walk[k]][walk[k + 1]] += amount;
}

double walk_delay(const topology& topo, const std::vector<int>& walk) {
  double d = 0.0;
  for (size_t k = 0; k + 1 < walk.size(); ++k) {
    int i = walk[k], j = walk[k + 1];
    if (!topo.has_link(i, j)) return kInf;
    d += topo.delay[i][j];
  }
  return d;
}

flow_routing route_from_path(const network& net, int flow_id, const std::vector<int>& path,
                             const std::vector<std::pair<int, int>>& anchors) {
  flow_routing fr;
  fr.flow = flow_id;
  fr.allocated = true;
  auto enc = routing_from_walk(net.topo, path);
  fr.r = std::move(enc.r);
  fr.q = std::move(enc.q);
  fr.q_valid = enc.q_valid;
  fr.u = make_mat_i(net.topo.n, net.vnfs.count);
  for (auto [node, vnf] : anchors) fr.u[node][vnf] = 1;
  return fr;
}

flow_routing route_from_segments(const network& net, int flow_id, const segmented_walk& walk) {
  flow_routing fr;
  fr.flow = flow_id;
  fr.allocated = true;
  fr.walk = walk;
  auto seq = walk.flatten();
  auto enc = routing_from_walk(net.topo, seq);
  fr.r = std::move(enc.r);
  fr.q = std::move(enc.q);
  fr.q_valid = enc.q_valid;
  fr.u = make_mat_i(net.topo.n, net.vnfs.count);
  for (const auto& seg : walk.segments)
    if (seg.vnf >= 0 && !seg.nodes.empty()) fr.u[seg.nodes.back()][seg.vnf] = 1;
  return fr;
}

} // namespace sfcr
