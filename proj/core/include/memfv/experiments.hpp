#ifndef MEMFV_EXPERIMENTS_HPP
#define MEMFV_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "memfv/monitors.hpp"
#include "memfv/parabolic.hpp"

namespace memfv {

// Post-run verdicts for one simulation: positivity, mass behaviour, membrane
// budgets and the enabled monitor inequalities. One line per assertion with
// both sides printed; machine-parseable PASS/FAIL prefix.
struct RunReport {
  std::vector<std::string> lines;
  bool passed = true;

  void add(bool ok, const std::string& name, double lhs, double rhs);
  void note(const std::string& line);
  std::string text() const;
};

RunReport assess_run(const SimResult& result, const SimConfig& config,
                     const ReactionSystem& reaction);

// L1(Q_T) distance between two stored runs on the same mesh and time grid.
double trajectory_l1_distance(const MembraneMesh& mesh, const Trajectory& a,
                              const Trajectory& b);

struct RegularizationSweepResult {
  std::vector<int> n_values;
  std::vector<std::vector<double>> d_per_species;  // [pair][species]
  std::vector<double> d_total;                     // per pair
  bool strictly_decreasing = false;
  int offending_pair = -1;  // first non-decreasing pair, -1 if none

  std::string csv() const;
  std::string summary() const;
};

// Runs the configured scenario at each regularization level and reports the
// successive L1(Q_T) differences d_k; asserts Cauchy behaviour (d_k strictly
// decreasing). Levels must be strictly increasing, at least 3.
RegularizationSweepResult regularization_sweep(const SimConfig& config,
                                               const std::vector<int>& n_values);

struct RefinementStudyResult {
  std::vector<int> factors;
  std::vector<double> steady_max_error;  // vs the closed-form profile (1D)
  std::vector<double> transient_error;   // final-time L1 vs fine reference
  std::vector<double> observed_order;    // between successive levels
  double min_order = 0.0;
  bool steady_exact = false;  // every level at 1e-10
  bool order_ok = false;      // min order >= 0.8

  std::string csv() const;
  std::string summary() const;
};

// Simultaneous (h, dt) refinement by factors 2^0..2^(levels-1), transient
// error against a once-more-refined reference; in 1D also the steady fixture
// against its closed form. Needs levels >= 3.
RefinementStudyResult refinement_study(const SimConfig& config, int levels);

struct DtRefinementResult {
  std::vector<double> dt_values;
  std::vector<double> error;  // final-time L1 vs the smallest-dt reference
  std::vector<double> observed_order;
  double min_order = 0.0;
  bool order_ok = false;  // first order in dt

  std::string csv() const;
  std::string summary() const;
};

// dt-only refinement with the mesh frozen.
DtRefinementResult dt_refinement_study(const SimConfig& config, int levels);

struct PoincareStudyResult {
  std::vector<int> factors;
  std::vector<double> k_values;
  std::vector<std::vector<double>> c_p;  // [mesh level][k]
  bool stabilized = false;     // finest pair within 5% for every k
  bool monotone_in_k = false;  // strictly decreasing in k on every mesh

  std::string csv() const;
  std::string summary() const;
};

PoincareStudyResult poincare_study(const MeshSpec& base,
                                   const std::vector<int>& factors,
                                   const std::vector<double>& k_values);

}  // namespace memfv

#endif
