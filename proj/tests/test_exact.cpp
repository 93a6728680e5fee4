#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <vector>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "sfcr/constraints.hpp"
#include "sfcr/errors.hpp"
#include "sfcr/exact.hpp"
#include "sfcr/rng.hpp"

using namespace sfcr;
using namespace oracle;


TEST_CASE("reference allocation returns the frozen route") {
  auto net = fixtures::ref5();
  auto st = network_state::fresh(net);
  auto f = fixtures::ref5_flow();
  solver_config cfg;
  cfg.mode = problem_mode::sfra;

  auto t0 = std::chrono::steady_clock::now();
  auto res = solve_sfra(net, st, f, cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.objective == 4.0);
  CHECK(secs < 1.0);

  auto frozen = fixtures::ref5_route(net);
  REQUIRE(res.solution.flows.size() == 1);
  const auto& got = res.solution.flows[0];
  CHECK(got.allocated);
  CHECK(got.r == frozen.r);
  CHECK(got.q == frozen.q);
  CHECK(got.u == frozen.u);
  CHECK(got.q[1][1] == 5);  // four links crossed, five switches

  // delivering servers come out active, the rest stay idle short-term
  CHECK(res.solution.server_next[0] == server_state::active);
  CHECK(res.solution.server_next[3] == server_state::active);
  CHECK(res.solution.server_next[2] == server_state::idle);

  check_options opts;
  CHECK(validate(net, st, {f}, res.solution, problem_mode::sfra, opts).all_pass());
}

TEST_CASE("shortest-route allocation agrees with exhaustive search") {
  auto net = fixtures::ref5();
  auto st = network_state::fresh(net);
  auto f = fixtures::ref5_flow();
  solver_config cfg;
  cfg.mode = problem_mode::sfra;

  auto res = solve_sfra(net, st, f, cfg);
  auto ref = oracle_single(net, st, f, problem_mode::sfra);
  REQUIRE(ref.found);
  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.objective == ref.objective);

  auto expect = oracle_route(net, f, ref.path, ref.where);
  CHECK(res.solution.flows[0].r == expect.r);
  CHECK(res.solution.flows[0].u == expect.u);
}

TEST_CASE("allocation agrees with exhaustive search across seeded fabrics") {
  int feasible = 0, infeasible = 0;
  for (int seed = 1; seed <= 25; ++seed) {
    rng r(7000 + seed);
    int n = r.uniform_int(4, 6);
    auto net = random_net(r, n, 4);
    auto st = network_state::fresh(net);
    auto f = random_flow(r, n, 4, 1);
    solver_config cfg;
    cfg.mode = problem_mode::sfra;

    auto res = solve_sfra(net, st, f, cfg);
    auto ref = oracle_single(net, st, f, problem_mode::sfra);

    INFO("seed ", seed);
    if (!ref.found) {
      CHECK(res.status == solve_status::infeasible);
      ++infeasible;
      continue;
    }
    ++feasible;
    REQUIRE(res.status == solve_status::optimal);
    CHECK(res.objective == ref.objective);
    auto expect = oracle_route(net, f, ref.path, ref.where);
    CHECK(res.solution.flows[0].r == expect.r);
    CHECK(res.solution.flows[0].u == expect.u);
    check_options opts;
    CHECK(validate(net, st, {f}, res.solution, problem_mode::sfra, opts).all_pass());
  }
  // the batch must exercise both outcomes
  CHECK(feasible >= 8);
  CHECK(infeasible >= 3);
}

TEST_CASE("switch-on-cost allocation matches exhaustive search long-term") {
  for (int seed = 1; seed <= 15; ++seed) {
    rng r(8800 + seed);
    int n = r.uniform_int(4, 6);
    auto net = random_net(r, n, 3);
    auto st = network_state::fresh(net);
    for (int i = 0; i < n; ++i) {
      double u = r.uniform();
      st.state[i] = u < 0.4 ? server_state::off
                            : (u < 0.7 ? server_state::idle : server_state::active);
    }
    auto f = random_flow(r, n, 3, 1);
    solver_config cfg;
    cfg.mode = problem_mode::energy_sfra;

    auto res = solve_energy_sfra(net, st, f, cfg);
    auto ref = oracle_single(net, st, f, problem_mode::energy_sfra);

    INFO("seed ", seed);
    if (!ref.found) {
      CHECK(res.status == solve_status::infeasible);
      continue;
    }
    REQUIRE(res.status == solve_status::optimal);
    CHECK(res.objective == doctest::Approx(ref.objective).epsilon(1e-12));
    auto expect = oracle_route(net, f, ref.path, ref.where);
    CHECK(res.solution.flows[0].r == expect.r);
    CHECK(res.solution.flows[0].u == expect.u);
    // the returned objective is the same number the shared scorer computes
    CHECK(objective_value(net, st, {f}, res.solution, problem_mode::energy_sfra, 0.0) ==
          doctest::Approx(res.objective).epsilon(1e-12));
  }
}

TEST_CASE("long-term switch-on cost prefers already-powered servers") {
  auto net = fixtures::diamond4();
  auto st = network_state::fresh(net);
  for (int i = 0; i < 4; ++i) st.state[i] = server_state::off;
  st.state[1] = server_state::active;  // only node 2 is running

  flow_spec f;
  f.id = 1;
  f.src = 0;
  f.dst = 3;
  f.rate = 0.5;
  f.delay_budget = 10.0;
  f.chain = {0};

  solver_config cfg;
  cfg.mode = problem_mode::energy_sfra;
  auto res = solve_energy_sfra(net, st, f, cfg);
  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.objective == 0.0);
  CHECK(res.solution.flows[0].u[1][0] == 1);  // rides the powered server
  // long-term settle switches the unused servers off
  CHECK(res.solution.server_next[1] == server_state::active);
  CHECK(res.solution.server_next[0] == server_state::off);
  CHECK(res.solution.server_next[2] == server_state::off);
}

TEST_CASE("short-term switch-on cost only uses powered servers") {
  auto net = fixtures::diamond4();
  auto st = network_state::fresh(net);
  st.state = {server_state::off, server_state::off, server_state::idle, server_state::idle};

  flow_spec f;
  f.id = 1;
  f.src = 0;
  f.dst = 3;
  f.rate = 0.5;
  f.delay_budget = 10.0;
  f.chain = {0, 1};

  solver_config cfg;
  cfg.mode = problem_mode::grr_short;
  auto res = solve_energy_sfra(net, st, f, cfg);
  REQUIRE(res.status == solve_status::optimal);
  // nodes 1 and 2 (0-based 0, 1) are dark: both vnfs land on one powered
  // server, the cheaper node 3
  const auto& u = res.solution.flows[0].u;
  CHECK(u[0][0] == 0);
  CHECK(u[0][1] == 0);
  CHECK(u[1][0] == 0);
  CHECK(u[1][1] == 0);
  CHECK(u[2][0] == 1);
  CHECK(u[2][1] == 1);
  // idle-to-active price of node 3 alone: (1 - 0.6) * 300
  CHECK(res.objective == doctest::Approx(0.4 * 300.0).epsilon(1e-12));

  auto ref = oracle_single(net, st, f, problem_mode::grr_short);
  REQUIRE(ref.found);
  CHECK(res.objective == doctest::Approx(ref.objective).epsilon(1e-12));

  // with every server dark there is nothing to place on
  for (auto& s : st.state) s = server_state::off;
  auto dark = solve_energy_sfra(net, st, f, cfg);
  CHECK(dark.status == solve_status::infeasible);
}

TEST_CASE("single-flow allocation respects background loads") {
  auto net = fixtures::diamond4();
  auto st = network_state::fresh(net);
  flow_spec f;
  f.id = 1;
  f.src = 0;
  f.dst = 3;
  f.rate = 0.5;
  f.delay_budget = 10.0;
  f.chain = {0};
  solver_config cfg;
  cfg.mode = problem_mode::sfra;

  // clear fabric: the lexicographically smaller two-hop route wins
  auto res = solve_sfra(net, st, f, cfg);
  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.solution.flows[0].r[0][1] == 1);

  // saturate link 1-2: the allocation detours through node 3
  st.link_load[0][1] = 0.8;
  res = solve_sfra(net, st, f, cfg);
  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.solution.flows[0].r[0][1] == 0);
  CHECK(res.solution.flows[0].r[0][2] == 1);

  // a derated fabric admits nothing
  st.link_load[0][1] = 0.0;
  st.mu_link = 0.4;
  res = solve_sfra(net, st, f, cfg);
  CHECK(res.status == solve_status::infeasible);

  // busy servers push the placement elsewhere
  st.mu_link = 1.0;
  st.proc_load[1][0] = 9.9;  // node 2 nearly full
  st.proc_load[2][1] = 9.9;
  res = solve_sfra(net, st, f, cfg);
  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.solution.flows[0].u[1][0] == 0);
}

TEST_CASE("missing rates fall back to the stand-in or throw") {
  auto net = fixtures::diamond4();
  auto st = network_state::fresh(net);
  flow_spec f;
  f.id = 1;
  f.src = 0;
  f.dst = 3;
  f.rate = kUnknownRate;
  f.delay_budget = 10.0;
  f.chain = {0};
  solver_config cfg;
  cfg.mode = problem_mode::sfra;

  CHECK_THROWS_AS(solve_sfra(net, st, f, cfg), rates_unknown);
  cfg.stand_in_rate = 0.3;
  auto res = solve_sfra(net, st, f, cfg);
  CHECK(res.status == solve_status::optimal);
}

TEST_CASE("joint reallocation matches exhaustive search") {
  for (int seed = 1; seed <= 10; ++seed) {
    rng r(9100 + seed);
    int n = r.uniform_int(4, 5);
    auto net = random_net(r, n, 3);
    auto st = network_state::fresh(net);
    std::vector<flow_spec> flows;
    for (int i = 0; i < 2; ++i) {
      auto f = random_flow(r, n, 3, i + 1);
      f.chain.resize(std::min<size_t>(f.chain.size(), 2));
      f.delay_budget = static_cast<double>(n);  // loose enough to keep options
      flows.push_back(f);
    }
    // pre-install a route for flow 1 so rule changes are in play
    {
      solver_config pre;
      pre.mode = problem_mode::sfra;
      auto first = solve_sfra(net, st, flows[0], pre);
      if (first.status == solve_status::optimal)
        st.installed[flows[0].id] = first.solution.flows[0].r;
    }

    for (double alpha : {0.0, 0.6, 1.0}) {
      for (auto mode : {problem_mode::grr_long, problem_mode::grr_short}) {
        solver_config cfg;
        cfg.mode = mode;
        cfg.alpha = alpha;
        auto res = solve_grr(net, st, flows, cfg);
        double ref = oracle_grr(net, st, flows, mode, alpha);

        INFO("seed ", seed, " alpha ", alpha, " long ", is_long_term(mode));
        if (ref == kInf) {
          CHECK(res.status == solve_status::infeasible);
          continue;
        }
        REQUIRE(res.status == solve_status::optimal);
        CHECK(res.objective == doctest::Approx(ref).epsilon(1e-9));
        check_options opts;
        CHECK(validate(net, st, flows, res.solution, mode, opts).all_pass());
        CHECK(objective_value(net, st, flows, res.solution, mode, alpha) ==
              doctest::Approx(res.objective).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("reallocation with full weight on rule changes keeps installed routes") {
  auto net = fixtures::diamond4();
  auto st = network_state::fresh(net);
  flow_spec f;
  f.id = 1;
  f.src = 0;
  f.dst = 3;
  f.rate = 0.5;
  f.delay_budget = 10.0;
  f.chain = {0};

  // install the 1-3-4 route, then ask for a pure-rule-change reallocation
  auto pre = route_from_path(net, 1, {0, 2, 3}, {{2, 0}});
  st.installed[1] = pre.r;

  solver_config cfg;
  cfg.mode = problem_mode::grr_long;
  cfg.alpha = 1.0;
  auto res = solve_grr(net, st, {f}, cfg);
  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.objective == 0.0);
  CHECK(res.solution.flows[0].r == pre.r);

  // with no weight on rule changes the cheapest server wins instead
  cfg.alpha = 0.0;
  res = solve_grr(net, st, {f}, cfg);
  REQUIRE(res.status == solve_status::optimal);
  CHECK(res.solution.flows[0].u[0][0] == 1);  // the 200 J source server
}

TEST_CASE("joint reallocation shares capacity between flows") {
  auto net = fixtures::diamond4();
  net.topo.cap[0][1] = net.topo.cap[1][0] = 0.6;
  net.topo.cap[0][2] = net.topo.cap[2][0] = 0.6;
  auto st = network_state::fresh(net);
  std::vector<flow_spec> flows;
  for (int i = 0; i < 2; ++i) {
    flow_spec f;
    f.id = i + 1;
    f.src = 0;
    f.dst = 3;
    f.rate = 0.5;
    f.delay_budget = 10.0;
    f.chain = {static_cast<int>(i % 2)};
    flows.push_back(f);
  }

  solver_config cfg;
  cfg.mode = problem_mode::grr_long;
  cfg.alpha = 0.5;
  auto res = solve_grr(net, st, flows, cfg);
  REQUIRE(res.status == solve_status::optimal);
  // neither 0.6-capacity first hop can carry both 0.5 flows
  const auto& r1 = res.solution.flows[0].r;
  const auto& r2 = res.solution.flows[1].r;
  CHECK(r1[0][1] + r2[0][1] <= 1);
  CHECK(r1[0][2] + r2[0][2] <= 1);
  check_options opts;
  CHECK(validate(net, st, flows, res.solution, problem_mode::grr_long, opts).all_pass());

  double ref = oracle_grr(net, st, flows, problem_mode::grr_long, 0.5);
  CHECK(res.objective == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("reallocation budget limits report a timeout") {
  auto net = fixtures::diamond4();
  auto st = network_state::fresh(net);
  std::vector<flow_spec> flows;
  for (int i = 0; i < 2; ++i) {
    flow_spec f;
    f.id = i + 1;
    f.src = 0;
    f.dst = 3;
    f.rate = 0.2;
    f.delay_budget = 10.0;
    f.chain = {i % 2};
    flows.push_back(f);
  }
  solver_config cfg;
  cfg.mode = problem_mode::grr_long;
  cfg.node_limit = 1;
  auto res = solve_grr(net, st, flows, cfg);
  CHECK(res.status == solve_status::feasible_timeout);

  cfg.node_limit = -1;
  res = solve_grr(net, st, flows, cfg);
  CHECK(res.status == solve_status::optimal);

  cfg.alpha = 2.0;
  CHECK_THROWS_AS(solve_grr(net, st, flows, cfg), bad_alpha);
  cfg.alpha = 0.5;

  auto empty = solve_grr(net, st, {}, cfg);
  CHECK(empty.status == solve_status::optimal);
  CHECK(empty.objective == 0.0);
}

TEST_CASE("reallocation is deterministic across repeated runs") {
  rng r(424242);
  auto net = random_net(r, 5, 3);
  auto st = network_state::fresh(net);
  std::vector<flow_spec> flows;
  for (int i = 0; i < 3; ++i) flows.push_back(random_flow(r, 5, 3, i + 1));
  for (auto& f : flows) f.delay_budget = 8.0;

  solver_config cfg;
  cfg.mode = problem_mode::grr_long;
  cfg.alpha = 0.4;
  auto a = solve_grr(net, st, flows, cfg);
  auto b = solve_grr(net, st, flows, cfg);
  REQUIRE(a.status == b.status);
  if (a.status == solve_status::optimal) {
    CHECK(a.objective == b.objective);
    for (size_t i = 0; i < a.solution.flows.size(); ++i) {
      CHECK(a.solution.flows[i].r == b.solution.flows[i].r);
      CHECK(a.solution.flows[i].u == b.solution.flows[i].u);
    }
  }
}
