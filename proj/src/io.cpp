#include "sfcr/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sfcr/errors.hpp"

namespace sfcr {

namespace {

struct text_line {
  int no = 0;
  std::vector<std::string> tokens;
};

// comment-stripped, whitespace-tokenized lines with their 1-based numbers
std::vector<text_line> tokenize(const std::string& text) {
  std::vector<text_line> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    text_line line;
    line.no = no;
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream err;
  err << origin << ":" << line << ": " << msg;
  throw parse_error(err.str());
}

double to_double(const std::string& tok, const std::string& origin, int line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || std::isnan(v))
    fail(origin, line, "expected a number, got '" + tok + "'");
  return v;
}

int to_int(const std::string& tok, const std::string& origin, int line) {
  int v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    fail(origin, line, "expected an integer, got '" + tok + "'");
  return v;
}

std::uint64_t to_u64(const std::string& tok, const std::string& origin, int line) {
  std::uint64_t v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    fail(origin, line, "expected an unsigned integer, got '" + tok + "'");
  return v;
}

// comma-separated 1-based ids; `-` stands for the empty list
std::vector<int> to_id_list(const std::string& tok, const std::string& origin, int line) {
  std::vector<int> out;
  if (tok == "-") return out;
  std::istringstream in(tok);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) fail(origin, line, "empty entry in list '" + tok + "'");
    out.push_back(to_int(part, origin, line));
  }
  if (out.empty()) fail(origin, line, "empty list '" + tok + "'");
  return out;
}

// shortest text that parses back to the same value
std::string fmt_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int node_in_range(int one_based, int n, const std::string& origin, int line) {
  if (one_based < 1 || one_based > n) {
    std::ostringstream err;
    err << "node " << one_based << " outside 1.." << n;
    fail(origin, line, err.str());
  }
  return one_based - 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << text;
  if (!out) throw io_error("write failed on " + path);
}

std::string list_or_dash(const std::vector<int>& one_based) {
  if (one_based.empty()) return "-";
  std::string out;
  for (size_t k = 0; k < one_based.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(one_based[k]);
  }
  return out;
}

} // namespace

network parse_topology(const std::string& text, const load_options& opts,
                       const std::string& origin) {
  auto lines = tokenize(text);
  if (lines.empty()) throw parse_error(origin + ": empty topology");
  const auto& head = lines[0];
  if (head.tokens[0] != "N" || head.tokens.size() != 2)
    fail(origin, head.no, "expected header 'N <nodes>'");
  int n = to_int(head.tokens[1], origin, head.no);
  if (n < 1) fail(origin, head.no, "node count must be positive");

  network net;
  net.topo = topology(n);
  net.servers.resize(n);
  for (int i = 0; i < n; ++i) net.servers[i].node = i;

  struct server_line {
    int no = 0;
    int node = -1;
    bool cap_auto = false;
    bool energy_auto = false;
    double capacity = 0.0;
    double energy = 0.0;
    std::vector<int> types;  // 1-based as written
    server_state state = server_state::off;
  };
  std::vector<server_line> servers;
  std::set<int> seen_servers;

  for (size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    if (line.tokens[0] == "server") {
      if (line.tokens.size() != 6)
        fail(origin, line.no, "expected 'server <node> <capacity> <energy> <vnf-list> <state>'");
      server_line s;
      s.no = line.no;
      s.node = node_in_range(to_int(line.tokens[1], origin, line.no), n, origin, line.no);
      if (!seen_servers.insert(s.node).second)
        fail(origin, line.no, "duplicate server line for node " + line.tokens[1]);
      if (line.tokens[2] == "auto")
        s.cap_auto = true;
      else
        s.capacity = to_double(line.tokens[2], origin, line.no);
      if (line.tokens[3] == "auto")
        s.energy_auto = true;
      else
        s.energy = to_double(line.tokens[3], origin, line.no);
      s.types = to_id_list(line.tokens[4], origin, line.no);
      try {
        s.state = state_from_string(line.tokens[5]);
      } catch (const parse_error&) {
        fail(origin, line.no, "unknown server state '" + line.tokens[5] + "'");
      }
      if (!s.cap_auto && s.capacity < 0.0) fail(origin, line.no, "negative capacity");
      if (!s.energy_auto && s.energy < 0.0) fail(origin, line.no, "negative energy");
      servers.push_back(std::move(s));
      continue;
    }
    if (line.tokens.size() != 4)
      fail(origin, line.no, "expected a link line '<i> <j> <capacity> <delay>'");
    int i = node_in_range(to_int(line.tokens[0], origin, line.no), n, origin, line.no);
    int j = node_in_range(to_int(line.tokens[1], origin, line.no), n, origin, line.no);
    if (i == j) fail(origin, line.no, "self-loop link");
    double cap = to_double(line.tokens[2], origin, line.no);
    double delay = to_double(line.tokens[3], origin, line.no);
    if (cap < 0.0 || delay < 0.0) fail(origin, line.no, "negative link figure");
    if (std::isinf(delay)) continue;  // an explicit absent link
    net.topo.add_link(i, j, cap, delay, false);
  }

  // catalog inferred from the largest hosted type; scenarios may widen it
  int max_type = 0;
  for (const auto& s : servers)
    for (int t : s.types) {
      if (t < 1) fail(origin, s.no, "vnf ids are 1-based");
      max_type = std::max(max_type, t);
    }
  net.vnfs.count = max_type;
  net.vnfs.processing.assign(max_type, 1.0);

  for (const auto& s : servers) {
    auto& slot = net.servers[s.node];
    slot.capacity = s.cap_auto ? opts.theta * net.topo.incident_capacity(s.node) : s.capacity;
    slot.energy = s.energy_auto ? 0.0 : s.energy;
    slot.hosts.assign(net.vnfs.count, 0);
    for (int t : s.types) slot.hosts[t - 1] = 1;
    slot.state = s.state;
    slot.eligible = true;  // declared servers may receive placements by default
  }
  for (int i = 0; i < n; ++i)
    if (!seen_servers.count(i)) net.servers[i].hosts.assign(net.vnfs.count, 0);

  bool any_auto_energy = false;
  for (const auto& s : servers) any_auto_energy |= s.energy_auto;
  if (any_auto_energy) {
    // rank over every declared server so literal and auto fields mix consistently
    network ranked = net;
    auto_energies(ranked, opts.e_min, opts.e_max);
    for (const auto& s : servers)
      if (s.energy_auto) net.servers[s.node].energy = ranked.servers[s.node].energy;
  }
  if (opts.delta >= 0.0) {
    if (opts.delta > 1.0) throw bad_params("idle fraction outside [0, 1]");
    for (auto& s : net.servers) s.idle_fraction = opts.delta;
  }

  net.check_dims();
  return net;
}

network load_topology(const std::string& path, const load_options& opts) {
  return parse_topology(read_file(path), opts, path);
}

std::string format_topology(const network& net) {
  std::ostringstream out;
  out << "N " << net.topo.n << "\n";
  for (int i = 0; i < net.topo.n; ++i)
    for (int j = 0; j < net.topo.n; ++j)
      if (net.topo.has_link(i, j))
        out << i + 1 << " " << j + 1 << " " << fmt_num(net.topo.cap[i][j]) << " "
            << fmt_num(net.topo.delay[i][j]) << "\n";
  for (const auto& s : net.servers) {
    if (!s.exists()) continue;
    std::vector<int> types;
    for (size_t x = 0; x < s.hosts.size(); ++x)
      if (s.hosts[x]) types.push_back(static_cast<int>(x) + 1);
    out << "server " << s.node + 1 << " " << fmt_num(s.capacity) << " " << fmt_num(s.energy)
        << " " << list_or_dash(types) << " " << to_string(s.state) << "\n";
  }
  return out.str();
}

void save_topology(const network& net, const std::string& path) {
  write_file(path, format_topology(net));
}

scenario_data parse_scenario(const std::string& text, const std::string& origin) {
  scenario_data sc;
  std::set<int> host_nodes;
  std::set<int> flow_ids;
  for (const auto& line : tokenize(text)) {
    const std::string& key = line.tokens[0];
    if (key == "vnfs") {
      if (line.tokens.size() < 2) fail(origin, line.no, "expected 'vnfs <count> [processing...]'");
      sc.vnf_count = to_int(line.tokens[1], origin, line.no);
      if (sc.vnf_count < 0) fail(origin, line.no, "negative vnf count");
      sc.vnf_processing.clear();
      if (line.tokens.size() > 2) {
        if (static_cast<int>(line.tokens.size()) - 2 != sc.vnf_count)
          fail(origin, line.no, "processing list does not match the vnf count");
        for (size_t k = 2; k < line.tokens.size(); ++k)
          sc.vnf_processing.push_back(to_double(line.tokens[k], origin, line.no));
      }
      continue;
    }
    if (key == "host") {
      if (line.tokens.size() != 3) fail(origin, line.no, "expected 'host <node> <vnf-list>'");
      int node = to_int(line.tokens[1], origin, line.no);
      if (node < 1) fail(origin, line.no, "node ids are 1-based");
      if (!host_nodes.insert(node).second)
        fail(origin, line.no, "duplicate host line for node " + line.tokens[1]);
      sc.host_lines.push_back({node - 1, to_id_list(line.tokens[2], origin, line.no)});
      for (int& t : sc.host_lines.back().second) {
        if (t < 1) fail(origin, line.no, "vnf ids are 1-based");
        --t;
      }
      continue;
    }
    if (key == "eligible") {
      if (line.tokens.size() != 2) fail(origin, line.no, "expected 'eligible <node-list>'");
      sc.eligible_given = true;
      sc.eligible.clear();
      for (int node : to_id_list(line.tokens[1], origin, line.no)) {
        if (node < 1) fail(origin, line.no, "node ids are 1-based");
        sc.eligible.push_back(node - 1);
      }
      continue;
    }
    if (key == "placement_cap") {
      if (line.tokens.size() != 2) fail(origin, line.no, "expected 'placement_cap <k>'");
      sc.placement_cap = to_int(line.tokens[1], origin, line.no);
      continue;
    }
    if (key == "mu_l" || key == "mu_s") {
      if (line.tokens.size() != 2) fail(origin, line.no, "expected '" + key + " <value>'");
      double v = to_double(line.tokens[1], origin, line.no);
      if (!(v > 0.0) || v > 1.0) fail(origin, line.no, key + " outside (0, 1]");
      (key == "mu_l" ? sc.mu_l : sc.mu_s) = v;
      continue;
    }
    if (key == "seed") {
      if (line.tokens.size() != 2) fail(origin, line.no, "expected 'seed <value>'");
      sc.seed = to_u64(line.tokens[1], origin, line.no);
      sc.seed_given = true;
      continue;
    }
    if (line.tokens.size() != 6)
      fail(origin, line.no, "expected a flow line '<id> <src> <dst> <rate> <budget> <chain>'");
    flow_spec f;
    f.id = to_int(line.tokens[0], origin, line.no);
    if (!flow_ids.insert(f.id).second)
      fail(origin, line.no, "duplicate flow id " + line.tokens[0]);
    f.src = to_int(line.tokens[1], origin, line.no) - 1;
    f.dst = to_int(line.tokens[2], origin, line.no) - 1;
    if (f.src < 0 || f.dst < 0) fail(origin, line.no, "node ids are 1-based");
    if (line.tokens[3] == "?")
      f.rate = kUnknownRate;
    else {
      f.rate = to_double(line.tokens[3], origin, line.no);
      if (f.rate < 0.0) fail(origin, line.no, "negative rate");
    }
    f.delay_budget = to_double(line.tokens[4], origin, line.no);
    if (f.delay_budget < 0.0) fail(origin, line.no, "negative delay budget");
    f.chain = to_id_list(line.tokens[5], origin, line.no);
    for (int& t : f.chain) {
      if (t < 1) fail(origin, line.no, "vnf ids are 1-based");
      --t;
    }
    sc.flows.push_back(std::move(f));
  }
  return sc;
}

scenario_data load_scenario(const std::string& path) {
  return parse_scenario(read_file(path), path);
}

std::string format_scenario(const scenario_data& sc) {
  std::ostringstream out;
  if (sc.vnf_count >= 0) {
    out << "vnfs " << sc.vnf_count;
    for (double p : sc.vnf_processing) out << " " << fmt_num(p);
    out << "\n";
  }
  if (sc.placement_cap >= 0) out << "placement_cap " << sc.placement_cap << "\n";
  if (sc.mu_l >= 0.0) out << "mu_l " << fmt_num(sc.mu_l) << "\n";
  if (sc.mu_s >= 0.0) out << "mu_s " << fmt_num(sc.mu_s) << "\n";
  if (sc.seed_given) out << "seed " << sc.seed << "\n";
  if (sc.eligible_given) {
    std::vector<int> nodes;
    for (int i : sc.eligible) nodes.push_back(i + 1);
    std::sort(nodes.begin(), nodes.end());
    out << "eligible " << list_or_dash(nodes) << "\n";
  }
  auto hosts = sc.host_lines;
  std::sort(hosts.begin(), hosts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [node, types] : hosts) {
    std::vector<int> ids;
    for (int t : types) ids.push_back(t + 1);
    std::sort(ids.begin(), ids.end());
    out << "host " << node + 1 << " " << list_or_dash(ids) << "\n";
  }
  auto flows = sc.flows;
  std::sort(flows.begin(), flows.end(),
            [](const flow_spec& a, const flow_spec& b) { return a.id < b.id; });
  for (const auto& f : flows) {
    std::vector<int> chain;
    for (int t : f.chain) chain.push_back(t + 1);
    out << f.id << " " << f.src + 1 << " " << f.dst + 1 << " "
        << (f.rate_known() ? fmt_num(f.rate) : std::string("?")) << " "
        << fmt_num(f.delay_budget) << " " << list_or_dash(chain) << "\n";
  }
  return out.str();
}

void save_scenario(const scenario_data& sc, const std::string& path) {
  write_file(path, format_scenario(sc));
}

void apply_scenario(network& net, const scenario_data& sc) {
  const int n = net.topo.n;
  if (static_cast<int>(net.servers.size()) != n) {
    net.servers.resize(n);
    for (int i = 0; i < n; ++i) net.servers[i].node = i;
  }
  if (sc.vnf_count >= 0) {
    net.vnfs.count = sc.vnf_count;
    if (!sc.vnf_processing.empty())
      net.vnfs.processing = sc.vnf_processing;
    else
      net.vnfs.processing.assign(sc.vnf_count, 1.0);
    for (auto& s : net.servers) s.hosts.resize(sc.vnf_count, 0);
  }
  for (const auto& [node, types] : sc.host_lines) {
    if (node >= n) throw bad_params("host line node outside the topology");
    auto& s = net.servers[node];
    if (s.capacity <= 0.0) throw bad_params("host line targets a node without a server");
    s.hosts.assign(net.vnfs.count, 0);
    for (int t : types) {
      if (t >= net.vnfs.count) throw bad_params("host line uses a vnf outside the catalog");
      s.hosts[t] = 1;
    }
  }
  if (sc.eligible_given) {
    for (auto& s : net.servers) s.eligible = false;
    for (int node : sc.eligible) {
      if (node >= n) throw bad_params("eligible node outside the topology");
      if (net.servers[node].capacity <= 0.0)
        throw bad_params("eligible line targets a node without a server");
      net.servers[node].eligible = true;
    }
  }
  for (const auto& f : sc.flows) {
    if (f.src >= n || f.dst >= n) throw bad_params("flow endpoint outside the topology");
    for (int t : f.chain)
      if (t >= net.vnfs.count) throw bad_params("flow chain uses a vnf outside the catalog");
  }
  net.check_dims();
}

gen_params parse_gen_params(const std::string& text, const std::string& origin) {
  gen_params p;
  for (const auto& line : tokenize(text)) {
    if (line.tokens.size() != 2) fail(origin, line.no, "expected '<field> <value>'");
    const std::string& key = line.tokens[0];
    const std::string& val = line.tokens[1];
    if (key == "b_f")
      p.b_f = to_double(val, origin, line.no);
    else if (key == "gamma")
      p.gamma = to_double(val, origin, line.no);
    else if (key == "v_f_avg")
      p.v_f_avg = to_double(val, origin, line.no);
    else if (key == "x_gamma")
      p.x_gamma = to_double(val, origin, line.no);
    else if (key == "v_f_min")
      p.v_f_min = to_int(val, origin, line.no);
    else if (key == "v_f_max")
      p.v_f_max = to_int(val, origin, line.no);
    else if (key == "tau")
      p.tau = to_double(val, origin, line.no);
    else if (key == "tau_s")
      p.tau_s = to_double(val, origin, line.no);
    else if (key == "tau_d")
      p.tau_d = to_double(val, origin, line.no);
    else if (key == "beta")
      p.beta = to_double(val, origin, line.no);
    else if (key == "f_m")
      p.f_m = to_int(val, origin, line.no);
    else if (key == "x")
      p.x = to_int(val, origin, line.no);
    else if (key == "delay_budget_factor")
      p.delay_budget_factor = to_double(val, origin, line.no);
    else if (key == "seed")
      p.seed = to_u64(val, origin, line.no);
    else
      fail(origin, line.no, "unknown field '" + key + "'");
  }
  return p;
}

gen_params load_gen_params(const std::string& path) {
  return parse_gen_params(read_file(path), path);
}

std::string format_gen_params(const gen_params& p) {
  std::ostringstream out;
  out << "b_f " << fmt_num(p.b_f) << "\n";
  out << "gamma " << fmt_num(p.gamma) << "\n";
  out << "v_f_avg " << fmt_num(p.v_f_avg) << "\n";
  out << "x_gamma " << fmt_num(p.x_gamma) << "\n";
  out << "v_f_min " << p.v_f_min << "\n";
  out << "v_f_max " << p.v_f_max << "\n";
  out << "tau " << fmt_num(p.tau) << "\n";
  out << "tau_s " << fmt_num(p.tau_s) << "\n";
  out << "tau_d " << fmt_num(p.tau_d) << "\n";
  out << "beta " << fmt_num(p.beta) << "\n";
  out << "f_m " << p.f_m << "\n";
  out << "x " << p.x << "\n";
  out << "delay_budget_factor " << fmt_num(p.delay_budget_factor) << "\n";
  out << "seed " << p.seed << "\n";
  return out.str();
}

namespace {

std::string flow_file(const std::string& dir, int id) {
  return dir + "/flow_" + std::to_string(id) + ".txt";
}

} // namespace

void save_solution(const network& net, const std::vector<flow_spec>& flows,
                   const routing_solution& sol, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create " + dir + ": " + ec.message());

  for (const auto& f : flows) {
    const flow_routing* fr = sol.find(f.id);
    std::ostringstream out;
    out << "flow " << f.id << "\n";
    if (!fr || !fr->allocated) {
      out << "status rejected\n";
      if (fr && fr->failed_vnf >= 0) out << "failed_vnf " << fr->failed_vnf + 1 << "\n";
      write_file(flow_file(dir, f.id), out.str());
      continue;
    }
    out << "status allocated\n";
    if (!fr->walk.empty()) {
      for (const auto& seg : fr->walk.segments) {
        out << "seg " << (seg.vnf >= 0 ? std::to_string(seg.vnf + 1) : std::string("-"));
        for (int node : seg.nodes) out << " " << node + 1;
        out << "\n";
      }
    } else {
      std::vector<int> path;
      if (fr->q_valid)
        path = walk_from_q(fr->q, f.src, f.dst);
      else
        throw io_error("flow " + std::to_string(f.id) + " carries no serializable route");
      out << "path";
      for (int node : path) out << " " << node + 1;
      out << "\n";
      for (int t : f.chain)
        for (int i = 0; i < net.topo.n; ++i)
          if (fr->u[i][t]) out << "place " << t + 1 << " " << i + 1 << "\n";
    }
    write_file(flow_file(dir, f.id), out.str());
  }

  std::ostringstream out;
  for (const auto& s : net.servers) {
    if (!s.exists()) continue;
    server_state st = s.state;
    if (s.node < static_cast<int>(sol.server_next.size())) st = sol.server_next[s.node];
    out << "server " << s.node + 1 << " " << to_string(st) << "\n";
  }
  write_file(dir + "/servers.txt", out.str());
}

routing_solution load_solution(const network& net, const std::vector<flow_spec>& flows,
                               const std::string& dir) {
  routing_solution sol;
  for (const auto& f : flows) {
    const std::string path = flow_file(dir, f.id);
    auto lines = tokenize(read_file(path));
    bool allocated = false;
    bool status_seen = false;
    int failed_vnf = -1;
    std::vector<int> path_nodes;
    std::vector<std::pair<int, int>> anchors;  // (node, vnf) in file order
    segmented_walk walk;

    for (const auto& line : lines) {
      const std::string& key = line.tokens[0];
      if (key == "flow") {
        if (line.tokens.size() != 2 || to_int(line.tokens[1], path, line.no) != f.id)
          fail(path, line.no, "flow id does not match the file name");
      } else if (key == "status") {
        if (line.tokens.size() != 2) fail(path, line.no, "expected 'status <value>'");
        status_seen = true;
        if (line.tokens[1] == "allocated")
          allocated = true;
        else if (line.tokens[1] == "rejected")
          allocated = false;
        else
          fail(path, line.no, "unknown status '" + line.tokens[1] + "'");
      } else if (key == "failed_vnf") {
        if (line.tokens.size() != 2) fail(path, line.no, "expected 'failed_vnf <position>'");
        failed_vnf = to_int(line.tokens[1], path, line.no) - 1;
      } else if (key == "seg") {
        if (line.tokens.size() < 3) fail(path, line.no, "expected 'seg <vnf|-> <nodes...>'");
        segmented_walk::segment seg;
        seg.vnf = line.tokens[1] == "-" ? -1 : to_int(line.tokens[1], path, line.no) - 1;
        for (size_t k = 2; k < line.tokens.size(); ++k)
          seg.nodes.push_back(
              node_in_range(to_int(line.tokens[k], path, line.no), net.topo.n, path, line.no));
        walk.segments.push_back(std::move(seg));
      } else if (key == "path") {
        for (size_t k = 1; k < line.tokens.size(); ++k)
          path_nodes.push_back(
              node_in_range(to_int(line.tokens[k], path, line.no), net.topo.n, path, line.no));
      } else if (key == "place") {
        if (line.tokens.size() != 3) fail(path, line.no, "expected 'place <vnf> <node>'");
        int vnf = to_int(line.tokens[1], path, line.no) - 1;
        int node = node_in_range(to_int(line.tokens[2], path, line.no), net.topo.n, path, line.no);
        if (vnf < 0 || vnf >= net.vnfs.count)
          fail(path, line.no, "vnf outside the catalog");
        anchors.push_back({node, vnf});
      } else {
        fail(path, line.no, "unknown line '" + key + "'");
      }
    }
    if (!status_seen) fail(path, 1, "missing status line");

    if (!allocated) {
      flow_routing fr;
      fr.flow = f.id;
      fr.failed_vnf = failed_vnf;
      fr.r = make_mat_i(net.topo.n, net.topo.n);
      fr.q = make_mat_i(net.topo.n, net.topo.n);
      fr.u = make_mat_i(net.topo.n, net.vnfs.count);
      sol.flows.push_back(std::move(fr));
      continue;
    }
    if (!walk.segments.empty())
      sol.flows.push_back(route_from_segments(net, f.id, walk));
    else if (!path_nodes.empty())
      sol.flows.push_back(route_from_path(net, f.id, path_nodes, anchors));
    else
      fail(path, 1, "allocated flow without a route");
  }

  sol.server_next.assign(net.topo.n, server_state::off);
  const std::string servers_path = dir + "/servers.txt";
  if (std::filesystem::exists(servers_path)) {
    for (const auto& line : tokenize(read_file(servers_path))) {
      if (line.tokens.size() != 3 || line.tokens[0] != "server")
        fail(servers_path, line.no, "expected 'server <node> <state>'");
      int node =
          node_in_range(to_int(line.tokens[1], servers_path, line.no), net.topo.n,
                        servers_path, line.no);
      try {
        sol.server_next[node] = state_from_string(line.tokens[2]);
      } catch (const parse_error&) {
        fail(servers_path, line.no, "unknown server state '" + line.tokens[2] + "'");
      }
    }
  }
  return sol;
}

std::string render_report(const constraint_report& report) {
  // families ordered by their numeric id, not lexicographically
  std::vector<std::pair<std::string, const std::vector<violation>*>> families;
  for (const auto& [eq, list] : report.checked) families.push_back({eq, &list});
  auto family_rank = [](const std::string& eq) {
    size_t k = 0;
    while (k < eq.size() && !std::isdigit(static_cast<unsigned char>(eq[k]))) ++k;
    int num = 0;
    while (k < eq.size() && std::isdigit(static_cast<unsigned char>(eq[k])))
      num = num * 10 + (eq[k++] - '0');
    return num;
  };
  std::sort(families.begin(), families.end(), [&](const auto& a, const auto& b) {
    int ra = family_rank(a.first), rb = family_rank(b.first);
    return ra != rb ? ra < rb : a.first < b.first;
  });

  std::ostringstream out;
  int total = 0;
  for (const auto& [eq, list] : families) {
    if (list->empty()) {
      out << eq << " PASS\n";
      continue;
    }
    total += static_cast<int>(list->size());
    out << eq << " FAIL " << list->size() << " violation" << (list->size() == 1 ? "" : "s")
        << "\n";
    size_t shown = 0;
    for (const auto& v : *list) {
      if (++shown > 5) {
        out << "  ...\n";
        break;
      }
      out << " ";
      if (v.flow >= 0) out << " flow=" << v.flow;
      if (v.i >= 0) out << " i=" << v.i;
      if (v.j >= 0) out << " j=" << v.j;
      if (v.x >= 0) out << " x=" << v.x;
      out << " slack=" << fmt_num(v.slack) << "\n";
    }
  }
  out << (total == 0 ? "overall PASS" : "overall FAIL") << " (" << families.size()
      << " families, " << total << " violation" << (total == 1 ? "" : "s") << ")\n";
  return out.str();
}

} // namespace sfcr
