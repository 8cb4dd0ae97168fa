#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "memfv/experiments.hpp"

using namespace memfv;
using namespace memfv::test;

TEST_CASE("regularization sweep validation") {
  const SimConfig cfg = annihilation_scenario(8, 0.125, 1.0 / 16.0);
  CHECK_THROWS_AS(regularization_sweep(cfg, {1, 4}), InvalidParameterError);
  CHECK_THROWS_AS(regularization_sweep(cfg, {4, 4, 16}), InvalidParameterError);
  CHECK_THROWS_AS(regularization_sweep(cfg, {16, 4, 1}), InvalidParameterError);
}

TEST_CASE("regularization is inactive for a vanishing reaction") {
  SimConfig cfg = rough_heat_scenario(16, 0.125, 1.0 / 32.0);
  const RegularizationSweepResult res = regularization_sweep(cfg, {1, 4, 16});
  for (double d : res.d_total) CHECK(d == 0.0);
  CHECK_FALSE(res.strictly_decreasing);  // zero differences are not decreasing
  CHECK(res.offending_pair == 0);
}

TEST_CASE("spike annihilation sweep is Cauchy in n") {
  // Unit-mass spikes (height 64) on a one-second horizon; the acceptance
  // suite runs the taller variant on the finer mesh.
  SimConfig cfg = annihilation_scenario(64, 1.0, 1.0 / 128.0);
  const RegularizationSweepResult res =
      regularization_sweep(cfg, {1, 4, 16, 64});
  REQUIRE(res.d_total.size() == 3);
  CHECK(res.strictly_decreasing);
  CHECK(res.d_total[0] > res.d_total[1]);
  CHECK(res.d_total[1] > res.d_total[2]);
}

TEST_CASE("doubling n with smooth small data changes little") {
  SimConfig cfg = annihilation_scenario(16, 0.25, 1.0 / 32.0);
  cfg.initial[0] = {"constant", 0.05, 0.0, 0.0, 0.0, 1};
  cfg.initial[1] = {"constant", 0.05, 0.0, 0.0, 0.0, 1};

  SimConfig a = cfg, b = cfg;
  a.regularization = 64;
  b.regularization = 128;
  const SimResult ra = simulate(a);
  const SimResult rb = simulate(b);
  const double d = trajectory_l1_distance(ra.mesh, ra.trajectory, rb.trajectory);
  CHECK(d < 1e-6);
  CHECK(d > 0.0);  // the damping factor differs, so the runs are not identical
}

TEST_CASE("refinement study") {
  SimConfig cfg = rough_heat_scenario(8, 0.25, 1.0 / 16.0);
  cfg.initial = {{"indicator", 1.0, 0.0, 0.0, 0.0, 1}};
  const RefinementStudyResult res = refinement_study(cfg, 3);

  SUBCASE("steady fixture is exact at every level") {
    REQUIRE(res.steady_max_error.size() == 3);
    CHECK(res.steady_exact);
    for (double e : res.steady_max_error) CHECK(e <= 1e-10);
  }

  SUBCASE("transient self-convergence order") {
    CHECK(res.order_ok);
    CHECK(res.min_order >= 0.9);
    for (double o : res.observed_order) CHECK(o <= 2.1);
  }

  SUBCASE("level validation") {
    CHECK_THROWS_AS(refinement_study(cfg, 2), InvalidParameterError);
  }
}

TEST_CASE("dt-only refinement is first order") {
  SimConfig cfg = rough_heat_scenario(32, 0.25, 1.0 / 8.0);
  const DtRefinementResult res = dt_refinement_study(cfg, 3);
  CHECK(res.order_ok);
  for (double o : res.observed_order) {
    CHECK(o >= 0.8);
    CHECK(o <= 1.3);
  }
}

TEST_CASE("poincare study") {
  MeshSpec base;
  base.dim = 1;
  base.length1 = 1.0;
  base.length2 = 2.0;
  base.n1 = 32;
  base.n2 = 64;
  const PoincareStudyResult res =
      poincare_study(base, {1, 2, 4}, {0.1, 1.0, 10.0});
  CHECK(res.stabilized);
  CHECK(res.monotone_in_k);
  REQUIRE(res.c_p.size() == 3);
  // Transparent limit on (0,3) is (3/pi)^2; k = 10 should sit above the
  // k -> infinity value.
  const double glued = 9.0 / (M_PI * M_PI);
  CHECK(res.c_p[2][2] > glued * 0.98);
}

TEST_CASE("assess_run verdicts") {
  SUBCASE("standard annihilation run passes") {
    SimConfig cfg = annihilation_scenario(32, 0.25, 1.0 / 128.0);
    cfg.monitors.truncation_levels = {4.0, 8.0};
    const SimResult res = simulate(cfg);
    const RunReport rep = assess_run(res, cfg, builtin_annihilation());
    CHECK(rep.passed);
    CHECK(rep.text().find("FAIL") == std::string::npos);
  }

  SUBCASE("aborted runs fail with the error noted") {
    ReactionSystem sink;
    sink.species_count = 1;
    sink.eval = [](const double*, double* f) { f[0] = -1.0; };
    sink.label = "sink";
    SimConfig cfg = rough_heat_scenario(8, 0.5, 0.25);
    cfg.initial = {{"constant", 0.0, 0.0, 0.0, 0.0, 1}};
    cfg.monitors.key_estimate = false;
    const SimResult res = simulate(cfg, sink);
    REQUIRE(res.error);
    const RunReport rep = assess_run(res, cfg, sink);
    CHECK_FALSE(rep.passed);
    CHECK(rep.text().find("aborted") != std::string::npos);
  }
}

TEST_CASE("campaigns are bit-deterministic") {
  SimConfig cfg = annihilation_scenario(16, 0.125, 1.0 / 32.0);
  const RegularizationSweepResult a = regularization_sweep(cfg, {1, 4, 16});
  const RegularizationSweepResult b = regularization_sweep(cfg, {1, 4, 16});
  CHECK(a.csv() == b.csv());
  CHECK(a.summary() == b.summary());

  MeshSpec base;
  base.length2 = 2.0;
  base.n1 = 16;
  base.n2 = 32;
  const PoincareStudyResult pa = poincare_study(base, {1, 2, 4}, {0.5, 5.0});
  const PoincareStudyResult pb = poincare_study(base, {1, 2, 4}, {0.5, 5.0});
  CHECK(pa.csv() == pb.csv());
}
