#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sfcr/constraints.hpp"
#include "sfcr/errors.hpp"
#include "sfcr/io.hpp"
#include "sfcr/lp.hpp"
#include "sfcr/model.hpp"
#include "sfcr/orchestrator.hpp"
#include "sfcr/trafficgen.hpp"

namespace {

using namespace sfcr;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

problem_mode mode_from_string(const std::string& s) {
  if (s == "sfra") return problem_mode::sfra;
  if (s == "energy-sfra") return problem_mode::energy_sfra;
  if (s == "grr-short") return problem_mode::grr_short;
  if (s == "grr-long") return problem_mode::grr_long;
  throw bad_params("unknown mode '" + s + "' (sfra, energy-sfra, grr-short, grr-long)");
}

// the validation context each algorithm's output should satisfy
problem_mode mode_of_algo(algo_kind a) {
  switch (a) {
    case algo_kind::nsf:
    case algo_kind::exact_sfra: return problem_mode::sfra;
    case algo_kind::rrr:
    case algo_kind::exact_energy_sfra: return problem_mode::energy_sfra;
    case algo_kind::st_ensf: return problem_mode::grr_short;
    case algo_kind::lt_ensf:
    case algo_kind::exact_grr: return problem_mode::grr_long;
  }
  return problem_mode::sfra;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << text;
  if (!out) throw io_error("write failed on " + path);
}

// shared file/knob flags
struct common_opts {
  std::string topology;
  double theta = 0.1;
  double delta = -1.0;
  double mu_l = -1.0;  // <0: take the scenario's value (or 1.0)
  double mu_s = -1.0;
};

void add_common(CLI::App* cmd, common_opts& c) {
  cmd->add_option("--topology", c.topology, "topology file")->required();
  cmd->add_option("--theta", c.theta, "auto server capacity as a fraction of incident capacity")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta", c.delta, "idle power fraction applied to every server");
  cmd->add_option("--mu-l", c.mu_l, "usable fraction of link capacity");
  cmd->add_option("--mu-s", c.mu_s, "usable fraction of server capacity");
}

network load_net(const common_opts& c) {
  load_options opts;
  opts.theta = c.theta;
  opts.delta = c.delta;
  return load_topology(c.topology, opts);
}

double pick_mu(double flag, double scenario_value) {
  if (flag >= 0.0) return flag;
  if (scenario_value >= 0.0) return scenario_value;
  return 1.0;
}

gen_params preset_of(const std::string& token) {
  // a bare number selects a built-in column; anything else is a parameter file
  bool numeric = !token.empty();
  for (char ch : token) numeric &= ch >= '0' && ch <= '9';
  if (numeric) return preset_params(std::stoi(token));
  return load_gen_params(token);
}

scenario_data generate_scenario(network& net, gen_params p) {
  generate_hosting(net, p);
  scenario_data sc;
  sc.flows = generate_flows(net, p);
  sc.vnf_count = net.vnfs.count;
  sc.seed_given = true;
  sc.seed = p.seed;
  sc.eligible_given = true;
  for (const auto& s : net.servers) {
    if (s.eligible) sc.eligible.push_back(s.node);
    if (!s.exists() || s.hosted_count() == 0) continue;
    std::vector<int> types;
    for (size_t x = 0; x < s.hosts.size(); ++x)
      if (s.hosts[x]) types.push_back(static_cast<int>(x));
    sc.host_lines.push_back({s.node, std::move(types)});
  }
  return sc;
}

int cmd_generate(const common_opts& c, const std::string& preset, std::uint64_t seed,
                 bool seed_given, const std::string& out) {
  network net = load_net(c);
  gen_params p = preset_of(preset);
  if (seed_given) p.seed = seed;
  scenario_data sc = generate_scenario(net, p);
  save_scenario(sc, out);

  double rate_sum = 0.0;
  size_t chain_sum = 0;
  for (const auto& f : sc.flows) {
    rate_sum += f.rate;
    chain_sum += f.chain.size();
  }
  size_t n = sc.flows.size();
  std::printf("flows %zu\n", n);
  std::printf("mean_rate %.6g\n", n ? rate_sum / static_cast<double>(n) : 0.0);
  std::printf("mean_chain_length %.6g\n",
              n ? static_cast<double>(chain_sum) / static_cast<double>(n) : 0.0);
  std::printf("hosting_servers %zu\n", sc.host_lines.size());
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

int cmd_run(const common_opts& c, const std::string& scenario_path, const std::string& preset,
            const std::string& algo_name_s, double alpha, std::uint64_t seed, bool seed_given,
            int iterations, double time_budget, const std::string& out_dir) {
  network net = load_net(c);
  scenario_data sc;
  if (!scenario_path.empty())
    sc = load_scenario(scenario_path);
  else {
    gen_params p = preset_of(preset);
    if (seed_given) p.seed = seed;
    sc = generate_scenario(net, p);
  }
  apply_scenario(net, sc);

  algo_config algos;
  algos.long_term = algo_from_string(algo_name_s);
  algos.alpha = alpha;
  algos.time_budget = time_budget;
  algos.placement_cap = sc.placement_cap;

  event_config ev;
  ev.mu_link = pick_mu(c.mu_l, sc.mu_l);
  ev.mu_server = pick_mu(c.mu_s, sc.mu_s);

  std::uint64_t growth_seed = seed_given ? seed : (sc.seed_given ? sc.seed : 0);
  bool rates_known = true;
  for (const auto& f : sc.flows) rates_known &= f.rate_known();
  if (!rates_known && algos.long_term == algo_kind::exact_grr)
    throw bad_params("exact-grr needs every flow rate; the scenario carries unknown rates");

  auto t0 = std::chrono::steady_clock::now();
  orchestrator_result res;
  std::string schedule;
  if (rates_known) {
    // iteration replay: rates grow between long-term reallocations
    schedule = "replay";
    res = replay(net, sc.flows, iterations, growth_seed, algos, ev);
  } else {
    // full event loop at static stand-in rates
    schedule = "event";
    sim_scenario sim;
    for (const auto& f : sc.flows) {
      sim_event e;
      e.t = 0.0;
      e.kind = sim_event_kind::arrival;
      e.flow = f;
      sim.events.push_back(std::move(e));
    }
    sim.horizon = iterations * ev.long_term_period;
    res = run(net, sim, ev, algos);
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(out_dir + "/solutions");
  save_scenario(sc, out_dir + "/scenario.txt");
  write_text(out_dir + "/metrics.csv", res.timeline.to_csv());
  save_solution(res.net, res.flows, res.solution, out_dir + "/solutions");

  // validate the final installed configuration in the algorithm's own context
  network_state vst = network_state::fresh(res.net);
  vst.mu_link = ev.mu_link;
  vst.mu_server = ev.mu_server;
  check_options copts;
  copts.stand_in_rate = ev.initial_mfs;
  for (const auto& fr : res.solution.flows) copts.walk_mode |= !fr.walk.empty();
  constraint_report rep =
      validate(res.net, vst, res.flows, res.solution, mode_of_algo(algos.long_term), copts);

  int allocated = 0;
  for (const auto& fr : res.solution.flows) allocated += fr.allocated ? 1 : 0;
  const metrics_row* last = res.timeline.rows.empty() ? nullptr : &res.timeline.rows.back();

  std::ostringstream report;
  report << "algorithm " << algo_name(algos.long_term) << "\n";
  report << "schedule " << schedule << "\n";
  report << "iterations " << iterations << "\n";
  report << "seed " << growth_seed << "\n";
  report << "mu_l " << ev.mu_link << "\n";
  report << "mu_s " << ev.mu_server << "\n";
  report << "rows " << res.timeline.rows.size() << "\n";
  report << "wall_time_s " << wall << "\n";
  report << "flows " << res.flows.size() << " allocated " << allocated << " rejected "
         << res.flows.size() - allocated << "\n";
  if (last) {
    report << "final_energy " << last->total_energy << "\n";
    report << "final_qos_misses " << last->qos_misses << "\n";
  }
  report << "validation\n" << render_report(rep);
  report << "log\n";
  for (const auto& line : res.timeline.log) report << line << "\n";
  write_text(out_dir + "/report.txt", report.str());

  std::printf("rows %zu, %d/%zu flows allocated, wall %.3fs\n", res.timeline.rows.size(),
              allocated, res.flows.size(), wall);
  std::printf("wrote %s/metrics.csv\n", out_dir.c_str());

  // structural violations fail the run; delay misses are reported, not fatal
  for (const auto& [eq, list] : rep.checked)
    if (!list.empty() && eq != "eq12") {
      std::fprintf(stderr, "validation failed: %s (%zu violations), see %s/report.txt\n",
                   eq.c_str(), list.size(), out_dir.c_str());
      return kExitInfeasible;
    }
  return kExitOk;
}

int cmd_validate(const common_opts& c, const std::string& scenario_path,
                 const std::string& solution_dir, const std::string& mode_s) {
  network net = load_net(c);
  scenario_data sc = load_scenario(scenario_path);
  apply_scenario(net, sc);
  routing_solution sol = load_solution(net, sc.flows, solution_dir);

  network_state st = network_state::fresh(net);
  st.mu_link = pick_mu(c.mu_l, sc.mu_l);
  st.mu_server = pick_mu(c.mu_s, sc.mu_s);
  check_options copts;
  copts.stand_in_rate = 0.3;
  for (const auto& fr : sol.flows) copts.walk_mode |= !fr.walk.empty();

  constraint_report rep = validate(net, st, sc.flows, sol, mode_from_string(mode_s), copts);
  std::fputs(render_report(rep).c_str(), stdout);
  return rep.all_pass() ? kExitOk : kExitInfeasible;
}

int cmd_export_lp(const common_opts& c, const std::string& scenario_path,
                  const std::string& mode_s, double alpha, const std::string& out) {
  network net = load_net(c);
  scenario_data sc = load_scenario(scenario_path);
  apply_scenario(net, sc);

  network_state st = network_state::fresh(net);
  st.mu_link = pick_mu(c.mu_l, sc.mu_l);
  st.mu_server = pick_mu(c.mu_s, sc.mu_s);

  lp_options opts;
  opts.mode = mode_from_string(mode_s);
  opts.alpha = alpha;
  for (const auto& f : sc.flows)
    if (!f.rate_known()) opts.stand_in_rate = 0.3;

  write_text(out, export_lp(net, st, sc.flows, opts));
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"service chain placement and routing workbench"};
  app.require_subcommand(1);

  common_opts gen_c, run_c, val_c, lp_c;
  std::string gen_preset = "1", gen_out;
  std::uint64_t gen_seed = 0;

  std::string run_scenario, run_preset, run_algo = "3r", run_out;
  double run_alpha = 0.5, run_budget = 60.0;
  std::uint64_t run_seed = 0;
  int run_iterations = 5;

  std::string val_scenario, val_solution, val_mode = "sfra";
  std::string lp_scenario, lp_mode = "sfra", lp_out;
  double lp_alpha = 0.5;

  CLI::App* gen = app.add_subcommand("generate", "draw a scenario from a parameter preset");
  add_common(gen, gen_c);
  gen->add_option("--preset", gen_preset, "study column 1..5 or a parameter file");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "scenario file to write")->required();

  CLI::App* runc = app.add_subcommand("run", "place, route and reallocate over iterations");
  add_common(runc, run_c);
  runc->add_option("--scenario", run_scenario, "scenario file");
  runc->add_option("--preset", run_preset, "generate from study column 1..5 or a parameter file");
  runc->add_option("--algo", run_algo,
                   "long-term branch: nsf, 3r, st-ensf, lt-ensf, exact-sfra, "
                   "exact-energy-sfra, exact-grr");
  runc->add_option("--alpha", run_alpha, "overhead/energy blend for exact-grr");
  runc->add_option("--seed", run_seed, "generator and rate-growth seed");
  runc->add_option("--iterations", run_iterations, "long-term reallocation count")
      ->check(CLI::PositiveNumber);
  runc->add_option("--time-budget", run_budget, "seconds per exact solve")
      ->check(CLI::PositiveNumber);
  runc->add_option("--out", run_out, "output directory")->required();

  CLI::App* val = app.add_subcommand("validate", "check a solution dump against a scenario");
  add_common(val, val_c);
  val->add_option("--scenario", val_scenario, "scenario file")->required();
  val->add_option("--solution", val_solution, "solution dump directory")->required();
  val->add_option("--mode", val_mode, "sfra, energy-sfra, grr-short, grr-long");

  CLI::App* lp = app.add_subcommand("export-lp", "emit the linearized model as LP text");
  add_common(lp, lp_c);
  lp->add_option("--scenario", lp_scenario, "scenario file")->required();
  lp->add_option("--mode", lp_mode, "sfra, energy-sfra, grr-short, grr-long");
  lp->add_option("--alpha", lp_alpha, "overhead/energy blend for grr modes");
  lp->add_option("--out", lp_out, "LP file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_c, gen_preset, gen_seed, gen->count("--seed") > 0, gen_out);
    if (runc->parsed()) {
      if (run_scenario.empty() == run_preset.empty())
        throw bad_params("run needs exactly one of --scenario and --preset");
      return cmd_run(run_c, run_scenario, run_preset, run_algo, run_alpha, run_seed,
                     runc->count("--seed") > 0, run_iterations, run_budget, run_out);
    }
    if (val->parsed()) return cmd_validate(val_c, val_scenario, val_solution, val_mode);
    if (lp->parsed()) return cmd_export_lp(lp_c, lp_scenario, lp_mode, lp_alpha, lp_out);
  } catch (const io_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const parse_error& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitIo;
  } catch (const uncoverable& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
