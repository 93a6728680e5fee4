#include "sfcr/lp.hpp"

#include <iomanip>
#include <sstream>

#include "sfcr/errors.hpp"

namespace sfcr {

namespace {

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string var_r(int f, int i, int j) {
  return "R_" + std::to_string(f) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}
std::string var_q(int f, int i, int j) {
  return "Q_" + std::to_string(f) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}
std::string var_u(int f, int i, int x) {
  return "U_" + std::to_string(f) + "_" + std::to_string(i + 1) + "_" + std::to_string(x + 1);
}
std::string var_o(int i) { return "O_" + std::to_string(i + 1); }

// one linear expression; zero coefficients are kept so that every emitted
// row and the analytic row count stay in lockstep with the family domains
struct expr {
  std::ostringstream s;
  bool first = true;

  void add(double c, const std::string& v) {
    if (first) {
      s << num(c) << " " << v;
      first = false;
      return;
    }
    if (c < 0)
      s << " - " << num(-c) << " " << v;
    else
      s << " + " << num(c) << " " << v;
  }
  void constant(double c) {
    if (c == 0.0) return;
    if (first) {
      s << num(c);
      first = false;
      return;
    }
    if (c < 0)
      s << " - " << num(-c);
    else
      s << " + " << num(c);
  }
  bool empty() const { return first; }
  std::string str() const { return s.str(); }
};

double lp_rate(const flow_spec& f, const lp_options& opts) {
  if (f.rate_known()) return f.rate;
  if (opts.stand_in_rate >= 0.0) return opts.stand_in_rate;
  std::ostringstream err;
  err << "flow " << f.id << " has no rate and no stand-in was supplied";
  throw rates_unknown(err.str());
}

} // namespace

std::string export_lp(const network& net, const network_state& st,
                      const std::vector<flow_spec>& flows, const lp_options& opts) {
  const int n = net.topo.n;
  const int X = net.vnfs.count;
  const int F = static_cast<int>(flows.size());
  const bool realloc = is_grr(opts.mode);
  const bool with_energy = opts.mode != problem_mode::sfra;
  const bool short_ctx = with_energy && !is_long_term(opts.mode);
  if (realloc && (opts.alpha < 0.0 || opts.alpha > 1.0)) {
    std::ostringstream err;
    err << "alpha " << opts.alpha << " outside [0, 1]";
    throw bad_alpha(err.str());
  }

  std::vector<double> rate(F);
  for (int k = 0; k < F; ++k) rate[k] = lp_rate(flows[k], opts);

  std::ostringstream out;
  const char* tag = realloc ? (short_ctx ? "short-term reallocation" : "long-term reallocation")
                            : (with_energy ? "switch-on-cost allocation" : "shortest-route allocation");
  out << "\\ " << tag << " model: n=" << n << " vnf_types=" << X << " flows=" << F << "\n";

  // ---- objective ----
  out << "Minimize\n obj: ";
  expr obj;
  if (opts.mode == problem_mode::sfra) {
    for (int k = 0; k < F; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) obj.add(1.0, var_r(flows[k].id, i, j));
  } else if (opts.mode == problem_mode::energy_sfra) {
    auto e = context_energy(net.servers, opts.mode);
    auto prev = binary_states(st.state, opts.mode);
    for (int i = 0; i < n; ++i) obj.add((1.0 - prev[i]) * e[i], var_o(i));
  } else {
    // blend of forwarding-entry changes against the installed routes and
    // switchable energy, both normalized; |R - M| over binaries expands to
    // (1 - 2M) R + M, the M part folding into a literal constant
    auto e = context_energy(net.servers, opts.mode);
    double denom_r = static_cast<double>(n - 1) * std::max(F, 1);
    double denom_e = 0.0;
    for (double v : e) denom_e += v;
    double constant = 0.0;
    static const mat_i no_entries;
    for (int k = 0; k < F; ++k) {
      auto it = st.installed.find(flows[k].id);
      const mat_i& m = it == st.installed.end() ? no_entries : it->second;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          int was = m.empty() ? 0 : m[i][j];
          obj.add(opts.alpha * (1.0 - 2.0 * was) / denom_r, var_r(flows[k].id, i, j));
          constant += opts.alpha * was / denom_r;
        }
    }
    for (int i = 0; i < n; ++i)
      obj.add(denom_e > 0.0 ? (1.0 - opts.alpha) * e[i] / denom_e : 0.0, var_o(i));
    obj.constant(constant);
  }
  if (obj.empty())
    out << "0\n";
  else
    out << obj.str() << "\n";

  // ---- rows ----
  out << "Subject To\n";
  auto row = [&](const std::string& name, const expr& lhs, const char* op, double rhs) {
    out << " " << name << ": " << lhs.str() << " " << op << " " << num(rhs) << "\n";
  };

  for (int k = 0; k < F; ++k) {
    const auto& f = flows[k];
    const int fid = f.id;
    auto want = f.requested(X);

    // chain membership: exact vnf counts, delivery only on crossed servers,
    // supported servers, each vnf gained at most once
    for (int x = 0; x < X; ++x) {
      expr lhs;
      for (int i = 0; i < n; ++i) lhs.add(1.0, var_u(fid, i, x));
      row("eq2_f" + std::to_string(fid) + "_x" + std::to_string(x + 1), lhs, "=",
          static_cast<double>(want[x]));
    }
    for (int j = 0; j < n; ++j) {
      if (j == f.src) continue;
      for (int x = 0; x < X; ++x) {
        expr lhs;
        lhs.add(1.0, var_u(fid, j, x));
        for (int i = 0; i < n; ++i)
          if (i != j) lhs.add(-1.0, var_r(fid, i, j));
        row("eq3_f" + std::to_string(fid) + "_j" + std::to_string(j + 1) + "_x" +
                std::to_string(x + 1),
            lhs, "<=", 0.0);
      }
    }
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < X; ++x) {
        expr lhs;
        lhs.add(1.0, var_u(fid, i, x));
        row("eq4_f" + std::to_string(fid) + "_i" + std::to_string(i + 1) + "_x" +
                std::to_string(x + 1),
            lhs, "<=", static_cast<double>(net.servers[i].hosts[x]));
      }
    for (int x = 0; x < X; ++x) {
      expr lhs;
      for (int i = 0; i < n; ++i) lhs.add(1.0, var_u(fid, i, x));
      row("eq5_f" + std::to_string(fid) + "_x" + std::to_string(x + 1), lhs, "<=", 1.0);
    }
  }

  // capacity rows: allocation keeps the background terms on the right-hand
  // side, reallocation rebuilds everything from scratch
  if (!realloc) {
    for (int i = 0; i < n; ++i) {
      expr lhs;
      for (int k = 0; k < F; ++k)
        for (int x = 0; x < X; ++x)
          lhs.add(net.vnfs.processing[x] * rate[k], var_u(flows[k].id, i, x));
      double bg = 0.0;
      for (double v : st.proc_load[i]) bg += v;
      if (lhs.empty()) lhs.constant(0.0);
      row("eq6_i" + std::to_string(i + 1), lhs, "<=",
          st.mu_server * net.servers[i].capacity - bg);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        expr lhs;
        for (int k = 0; k < F; ++k) lhs.add(rate[k], var_r(flows[k].id, i, j));
        if (lhs.empty()) lhs.constant(0.0);
        row("eq7_i" + std::to_string(i + 1) + "_j" + std::to_string(j + 1), lhs, "<=",
            st.mu_link * net.topo.cap[i][j] - st.link_load[i][j]);
      }
  }

  for (int k = 0; k < F; ++k) {
    const auto& f = flows[k];
    const int fid = f.id;

    // conservation, single egress, delay budget
    for (int i = 0; i < n; ++i) {
      expr lhs;
      for (int j = 0; j < n; ++j)
        if (j != i) lhs.add(1.0, var_r(fid, i, j));
      for (int j = 0; j < n; ++j)
        if (j != i) lhs.add(-1.0, var_r(fid, j, i));
      double rhs = i == f.src ? 1.0 : (i == f.dst ? -1.0 : 0.0);
      row("eq10_f" + std::to_string(fid) + "_i" + std::to_string(i + 1), lhs, "=", rhs);
    }
    for (int i = 0; i < n; ++i) {
      expr lhs;
      for (int j = 0; j < n; ++j)
        if (j != i) lhs.add(1.0, var_r(fid, i, j));
      row("eq11_f" + std::to_string(fid) + "_i" + std::to_string(i + 1), lhs, "<=", 1.0);
    }
    if (opts.enforce_delay && f.delay_budget < kInf) {
      expr lhs;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (net.topo.has_link(i, j)) lhs.add(net.topo.delay[i][j], var_r(fid, i, j));
      if (lhs.empty()) lhs.constant(0.0);
      row("eq12_f" + std::to_string(fid), lhs, "<=", f.delay_budget);
    }

    // step-number structure
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        expr lhs;
        lhs.add(1.0, var_q(fid, i, j));
        lhs.add(-1.0, var_r(fid, i, j));
        row("eq13_f" + std::to_string(fid) + "_i" + std::to_string(i + 1) + "_j" +
                std::to_string(j + 1),
            lhs, ">=", 0.0);
      }
    for (int i = 0; i < n; ++i) {
      if (i == f.dst) continue;
      expr lhs;
      lhs.add(1.0, var_q(fid, f.dst, i));
      row("eq15_f" + std::to_string(fid) + "_i" + std::to_string(i + 1), lhs, "=", 0.0);
    }
    for (int i = 0; i < n; ++i) {
      if (i == f.src || i == f.dst) continue;
      expr lhs;
      for (int j = 0; j < n; ++j)
        if (j != i) lhs.add(1.0, var_q(fid, i, j));
      for (int j = 0; j < n; ++j)
        if (j != i) lhs.add(-1.0, var_q(fid, j, i));
      for (int j = 0; j < n; ++j)
        if (j != i) lhs.add(-1.0, var_r(fid, j, i));
      row("eq16_f" + std::to_string(fid) + "_i" + std::to_string(i + 1), lhs, "=", 0.0);
    }
    {
      expr lhs;
      lhs.add(1.0, var_q(fid, f.dst, f.dst));
      for (int j = 0; j < n; ++j)
        if (j != f.dst) lhs.add(-1.0, var_q(fid, j, f.dst));
      for (int j = 0; j < n; ++j)
        if (j != f.dst) lhs.add(-1.0, var_r(fid, j, f.dst));
      row("eq17_f" + std::to_string(fid), lhs, "=", 0.0);
    }
    {
      expr lhs;
      for (int j = 0; j < n; ++j)
        if (j != f.src) lhs.add(1.0, var_q(fid, f.src, j));
      row("eq18_f" + std::to_string(fid), lhs, "=", 1.0);
    }

    // big-M ties between steps and forwarding entries; the factor is exactly
    // the switch count
    for (int i = 0; i < n; ++i) {
      if (i == f.dst) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        expr lhs;
        lhs.add(1.0, var_q(fid, i, j));
        lhs.add(-static_cast<double>(n), var_r(fid, i, j));
        row("eq23_f" + std::to_string(fid) + "_i" + std::to_string(i + 1) + "_j" +
                std::to_string(j + 1),
            lhs, "<=", 0.0);
      }
    }

    // chain order: a later vnf's row sum of steps dominates every earlier
    // vnf's row sum wherever both placements are real; the destination row
    // carries its crossed-switch register in the sum
    const double big = 2.0 * n - 1.0;
    auto q_row_sum = [&](expr& lhs, int i, double sign) {
      for (int j = 0; j < n; ++j)
        if (j != i) lhs.add(sign, var_q(fid, i, j));
      if (i == f.dst) lhs.add(sign, var_q(fid, i, i));
    };
    const int psi = static_cast<int>(f.chain.size());
    for (int v = 1; v <= psi; ++v)
      for (int z = 1; z <= v - 1; ++z) {
        int kv = f.chain[v - 1], kz = f.chain[z - 1];
        for (int i = 0; i < n; ++i)
          for (int I = 0; I < n; ++I) {
            expr lhs;
            if (i != I) {
              q_row_sum(lhs, i, 1.0);
              q_row_sum(lhs, I, -1.0);
            }
            lhs.add(-big, var_u(fid, i, kv));
            lhs.add(-big, var_u(fid, I, kz));
            row("eq24_f" + std::to_string(fid) + "_v" + std::to_string(v) + "_z" +
                    std::to_string(z) + "_i" + std::to_string(i + 1) + "_k" +
                    std::to_string(I + 1),
                lhs, ">=", -2.0 * big);
          }
      }
  }

  // server switching consistency and the reallocation capacity rows
  if (with_energy) {
    for (int i = 0; i < n; ++i) {
      expr lhs;
      lhs.add(1.0, var_o(i));
      for (int k = 0; k < F; ++k)
        for (int x = 0; x < X; ++x) lhs.add(-1.0, var_u(flows[k].id, i, x));
      row("eq21_i" + std::to_string(i + 1), lhs, "<=", 0.0);
    }
    const double lift = 1.0 + static_cast<double>(F) * X;
    for (int i = 0; i < n; ++i) {
      expr lhs;
      lhs.add(lift, var_o(i));
      for (int k = 0; k < F; ++k)
        for (int x = 0; x < X; ++x) lhs.add(-1.0, var_u(flows[k].id, i, x));
      row("eq25_i" + std::to_string(i + 1), lhs, ">=", 0.0);
    }
  }
  if (realloc) {
    for (int i = 0; i < n; ++i) {
      expr lhs;
      for (int k = 0; k < F; ++k)
        for (int x = 0; x < X; ++x)
          lhs.add(net.vnfs.processing[x] * rate[k], var_u(flows[k].id, i, x));
      if (lhs.empty()) lhs.constant(0.0);
      row("eq27_i" + std::to_string(i + 1), lhs, "<=", st.mu_server * net.servers[i].capacity);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        expr lhs;
        for (int k = 0; k < F; ++k) lhs.add(rate[k], var_r(flows[k].id, i, j));
        if (lhs.empty()) lhs.constant(0.0);
        row("eq28_i" + std::to_string(i + 1) + "_j" + std::to_string(j + 1), lhs, "<=",
            st.mu_link * net.topo.cap[i][j]);
      }
  }

  // ---- bounds ----
  out << "Bounds\n";
  for (int k = 0; k < F; ++k) {
    const int fid = flows[k].id;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (!net.topo.has_link(i, j)) {
          out << " " << var_r(fid, i, j) << " = 0\n";
          out << " " << var_q(fid, i, j) << " = 0\n";
        } else {
          out << " 0 <= " << var_q(fid, i, j) << " <= " << n << "\n";
        }
      }
    out << " 0 <= " << var_q(fid, flows[k].dst, flows[k].dst) << " <= " << n << "\n";
  }
  if (short_ctx) {
    // short-term reallocation cannot wake a dark server
    for (int i = 0; i < n; ++i) {
      if (st.state[i] != server_state::off) continue;
      for (int k = 0; k < F; ++k)
        for (int x = 0; x < X; ++x) out << " " << var_u(flows[k].id, i, x) << " = 0\n";
      out << " " << var_o(i) << " = 0\n";
    }
  }

  // ---- domains ----
  out << "Generals\n";
  for (int k = 0; k < F; ++k) {
    const int fid = flows[k].id;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) out << " " << var_q(fid, i, j) << "\n";
    out << " " << var_q(fid, flows[k].dst, flows[k].dst) << "\n";
  }
  out << "Binaries\n";
  for (int k = 0; k < F; ++k) {
    const int fid = flows[k].id;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) out << " " << var_r(fid, i, j) << "\n";
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < X; ++x) out << " " << var_u(fid, i, x) << "\n";
  }
  if (with_energy)
    for (int i = 0; i < n; ++i) out << " " << var_o(i) << "\n";
  out << "End\n";
  return out.str();
}

} // namespace sfcr
