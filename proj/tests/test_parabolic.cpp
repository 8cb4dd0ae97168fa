#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "memfv/parabolic.hpp"
#include "oracles.hpp"

using namespace memfv;
using namespace memfv::test;

TEST_CASE("config validation") {
  SimConfig cfg = annihilation_scenario(8, 0.1, 0.05);

  SUBCASE("valid") { CHECK_NOTHROW(cfg.validate()); }

  SUBCASE("bad dt") {
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
  }

  SUBCASE("t_end below dt") {
    cfg.t_end = 0.01;
    CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
  }

  SUBCASE("t_end not a multiple of dt") {
    cfg.t_end = 0.126;
    CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
  }

  SUBCASE("nonpositive coefficients") {
    cfg.species[0].diffusion = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
  }

  SUBCASE("key estimate with distinct permeabilities") {
    cfg.species[1].permeability = 2.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
    cfg.monitors.key_estimate = false;
    CHECK_NOTHROW(cfg.validate());
  }

  SUBCASE("initial spec count must match species") {
    cfg.initial.pop_back();
    CHECK_THROWS_AS(cfg.validate(), InvalidParameterError);
  }
}

TEST_CASE("zero dynamics stay zero") {
  SimConfig cfg = rough_heat_scenario(8, 0.1, 0.05);
  cfg.initial = {{"constant", 0.0, 0.0, 0.0, 0.0, 1}};
  const SimResult res = simulate(cfg);
  REQUIRE_FALSE(res.error);
  for (const MonitorRecord& r : res.records) {
    CHECK(r.total_mass == 0.0);
    CHECK(r.l2[0] == 0.0);
  }
}

TEST_CASE("implicit diffusion is L2-dissipative") {
  const SimResult res = simulate(rough_heat_scenario(32, 0.25, 1.0 / 64.0));
  REQUIRE_FALSE(res.error);
  double prev = 1e300;
  for (const MonitorRecord& r : res.records) {
    CHECK(r.l2[0] <= prev * (1.0 + 1e-13));
    prev = r.l2[0];
  }
}

TEST_CASE("one step produces exactly one record") {
  SimConfig cfg = rough_heat_scenario(8, 0.05, 0.05);
  const SimResult res = simulate(cfg);
  CHECK(res.records.size() == 1);
  CHECK(res.trajectory.states.size() == 2);
  CHECK(res.records[0].t == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("steady membrane fixture") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 32, 32);

  SUBCASE("equal boundary values give a flat zero-flux profile") {
    const SteadySolution sol = steady_state(mesh, 1.0, 1.0, 1.0, 0.7, 0.7);
    CHECK(std::abs(sol.flux) <= 1e-12);
    CHECK(std::abs(sol.jump) <= 1e-12);
    for (double v : sol.u) CHECK(v == doctest::Approx(0.7).epsilon(1e-11));
  }

  SUBCASE("unit case reproduces J = 1/3 and jump = -1/3 exactly") {
    const SteadySolution sol = steady_state(mesh, 1.0, 1.0, 1.0, 1.0, 0.0);
    CHECK(std::abs(sol.flux - 1.0 / 3.0) <= 1e-10);
    CHECK(std::abs(sol.jump + 1.0 / 3.0) <= 1e-10);
    // Cell values match the piecewise-linear profile.
    for (int c = 0; c < mesh.cell_count(); ++c) {
      const double x = mesh.cells[c].x;
      const double exact = mesh.subdomain_of(c) == 1
                               ? 1.0 - x / 3.0
                               : (2.0 - x) / 3.0;
      CHECK(std::abs(sol.u[c] - exact) <= 1e-10);
    }
  }

  SUBCASE("series-resistance formula with distinct coefficients") {
    const MembraneMesh m2 = build_interval_mesh(0.5, 2.0, 16, 40);
    const double d1 = 2.0, d2 = 0.5, k = 4.0, a = 3.0, c = 1.0;
    const SteadySolution sol = steady_state(m2, d1, d2, k, a, c);
    const double j_exact = (a - c) / (0.5 / d1 + 2.0 / d2 + 1.0 / k);
    CHECK(sol.flux == doctest::Approx(j_exact).epsilon(1e-11));
    CHECK(sol.jump == doctest::Approx(-j_exact / k).epsilon(1e-11));
  }

  SUBCASE("large permeability removes the jump") {
    const SteadySolution sol = steady_state(mesh, 1.0, 1.0, 1e12, 1.0, 0.0);
    CHECK(std::abs(sol.jump) <= 1e-11);
    CHECK(sol.flux == doctest::Approx(0.5).epsilon(1e-9));
  }

  SUBCASE("2D meshes are rejected") {
    const MembraneMesh rect = build_rect_mesh(1.0, 1.0, 1.0, 4, 4, 4);
    CHECK_THROWS_AS(steady_state(rect, 1.0, 1.0, 1.0, 1.0, 0.0),
                    InvalidParameterError);
  }
}

TEST_CASE("transient run converges to the steady profile") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 32, 32);
  auto [op, load] = steady_fixture_system(mesh, 1.0, 1.0, 1.0, 1.0, 0.0);
  const SteadySolution target = steady_state(mesh, 1.0, 1.0, 1.0, 1.0, 0.0);

  Field u(op.n, 0.0);
  const double dt = 0.1;
  for (int s = 0; s < 600; ++s) {
    Field b(op.n);
    for (int i = 0; i < op.n; ++i) b[i] = op.mass[i] * u[i] + dt * load[i];
    u = solve_shifted(op, dt, b, u, 1e-13).solution;
  }
  for (int i = 0; i < op.n; ++i)
    CHECK(u[i] == doctest::Approx(target.u[i]).epsilon(1e-9));
}

TEST_CASE("symmetric annihilation stays symmetric") {
  SimConfig cfg = annihilation_scenario(16, 0.25, 1.0 / 64.0);
  cfg.initial[1] = cfg.initial[0];
  const SimResult res = simulate(cfg);
  REQUIRE_FALSE(res.error);
  for (const MultiField& state : res.trajectory.states)
    for (int c = 0; c < res.mesh.cell_count(); ++c)
      CHECK(std::abs(state[0][c] - state[1][c]) <= 1e-12);
}

TEST_CASE("standard annihilation run invariants") {
  SimConfig cfg = annihilation_scenario(32, 0.25, 1.0 / 128.0);
  const SimResult res = simulate(cfg);
  REQUIRE_FALSE(res.error);

  SUBCASE("nonnegativity") {
    for (const MonitorRecord& r : res.records) CHECK(r.min_value >= -1e-12);
  }

  SUBCASE("total mass nonincreasing") {
    double prev = 2.0;  // two unit spikes
    for (const MonitorRecord& r : res.records) {
      CHECK(r.total_mass <= prev + 1e-12);
      prev = r.total_mass;
    }
    CHECK(prev < 2.0);  // Dirichlet loss plus annihilation
  }

  SUBCASE("per-side budgets balance through the membrane") {
    CHECK(res.max_budget_residual <= 1e-12 * 2.0);
  }
}

TEST_CASE("reaction substepping keeps tall spikes nonnegative") {
  // Spikes tall enough that u + dt f(u) would cross zero without substeps.
  SimConfig cfg = annihilation_scenario(32, 0.125, 1.0 / 16.0, 50.0);
  cfg.initial[1].x = cfg.initial[0].x;  // co-located spikes, strong reaction
  const SimResult res = simulate(cfg);
  REQUIRE_FALSE(res.error);
  CHECK(res.max_reaction_substeps > 1);
  for (const MonitorRecord& r : res.records) CHECK(r.min_value >= -1e-12);
}

TEST_CASE("ordered initial data stay ordered under pure diffusion") {
  SimConfig lo = rough_heat_scenario(24, 0.25, 1.0 / 32.0);
  lo.initial = {{"indicator", 0.5, 0.0, 0.0, 0.0, 2}};
  SimConfig hi = lo;
  hi.initial = {{"indicator", 0.8, 0.0, 0.0, 0.0, 2}};
  const SimResult rlo = simulate(lo);
  const SimResult rhi = simulate(hi);
  for (std::size_t m = 0; m < rlo.trajectory.states.size(); ++m)
    for (int c = 0; c < rlo.mesh.cell_count(); ++c)
      CHECK(rlo.trajectory.states[m][0][c] <=
            rhi.trajectory.states[m][0][c] + 1e-13);
}

TEST_CASE("non-quasi-positive reactions trip the positivity guard") {
  ReactionSystem sink;
  sink.species_count = 1;
  sink.eval = [](const double*, double* f) { f[0] = -1.0; };
  sink.label = "sink";

  SimConfig cfg = rough_heat_scenario(8, 0.5, 0.25);
  cfg.initial = {{"constant", 0.0, 0.0, 0.0, 0.0, 1}};
  cfg.monitors.key_estimate = false;

  Simulator sim(cfg, sink);
  CHECK_THROWS_AS(sim.step(), PositivityError);

  // simulate() flushes the partial trajectory with an error marker instead.
  const SimResult res = simulate(cfg, sink);
  CHECK(res.error.has_value());
  CHECK(res.trajectory.states.size() == 1);  // only the initial state
}

TEST_CASE("determinism: identical configs give identical trajectories") {
  const SimConfig cfg = annihilation_scenario(16, 0.125, 1.0 / 32.0);
  const SimResult a = simulate(cfg);
  const SimResult b = simulate(cfg);
  REQUIRE(a.trajectory.states.size() == b.trajectory.states.size());
  for (std::size_t m = 0; m < a.trajectory.states.size(); ++m)
    for (int j = 0; j < 2; ++j)
      for (int c = 0; c < a.mesh.cell_count(); ++c)
        CHECK(a.trajectory.states[m][j][c] == b.trajectory.states[m][j][c]);
}

TEST_CASE("2D runs keep mass budgets and positivity") {
  SimConfig cfg;
  cfg.mesh.dim = 2;
  cfg.mesh.n1 = cfg.mesh.n2 = 8;
  cfg.mesh.ny = 6;
  cfg.species = {{1.0, 2.0}};
  cfg.reaction = "none";
  cfg.initial = {{"spike", 0.0, 1.0, 0.5, 0.5, 1}};
  cfg.t_end = 0.125;
  cfg.dt = 1.0 / 64.0;
  cfg.linear_tol = 1e-13;
  const SimResult res = simulate(cfg);
  REQUIRE_FALSE(res.error);
  CHECK(res.max_budget_residual <= 1e-12);
  double prev = 1.0;
  for (const MonitorRecord& r : res.records) {
    CHECK(r.min_value >= -1e-12);
    CHECK(r.total_mass <= prev + 1e-12);
    prev = r.total_mass;
  }
}
