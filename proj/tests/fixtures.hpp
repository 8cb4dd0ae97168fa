// Shared run configurations for the integration-style tests.

#ifndef MEMFV_TESTS_FIXTURES_HPP
#define MEMFV_TESTS_FIXTURES_HPP

#include "memfv/parabolic.hpp"

namespace memfv::test {

// Two-species annihilation, unit coefficients, one spike per side.
inline SimConfig annihilation_scenario(int n_per_side, double t_end, double dt,
                                       double spike_mass = 1.0) {
  SimConfig cfg;
  cfg.mesh.dim = 1;
  cfg.mesh.n1 = n_per_side;
  cfg.mesh.n2 = n_per_side;
  cfg.species = {{1.0, 1.0}, {1.0, 1.0}};
  cfg.reaction = "annihilation";
  cfg.initial.resize(2);
  cfg.initial[0] = {"spike", 0.0, spike_mass, 0.5, 0.0, 1};
  cfg.initial[1] = {"spike", 0.0, spike_mass, 1.5, 0.0, 1};
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.linear_tol = 1e-13;
  return cfg;
}

// Single-species heat run with a spike (rough data), no reaction.
inline SimConfig rough_heat_scenario(int n_per_side, double t_end, double dt) {
  SimConfig cfg;
  cfg.mesh.dim = 1;
  cfg.mesh.n1 = n_per_side;
  cfg.mesh.n2 = n_per_side;
  cfg.species = {{1.0, 1.0}};
  cfg.reaction = "none";
  cfg.initial = {{"spike", 0.0, 1.0, 0.4, 0.0, 1}};
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.linear_tol = 1e-13;
  return cfg;
}

}  // namespace memfv::test

#endif
