#ifndef MEMFV_PARABOLIC_HPP
#define MEMFV_PARABOLIC_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "memfv/elliptic.hpp"
#include "memfv/mesh.hpp"
#include "memfv/reactions.hpp"
#include "memfv/types.hpp"

namespace memfv {

struct SpeciesConfig {
  double diffusion = 1.0;
  double permeability = 1.0;
};

struct MeshSpec {
  int dim = 1;
  double length1 = 1.0;
  double length2 = 1.0;
  double height = 1.0;
  int n1 = 2;
  int n2 = 2;
  int ny = 2;

  MembraneMesh build() const;
};

// Per-species initial data: "constant" (value), "spike" (given mass placed in
// the cell containing (x,y)), or "indicator" (value on one subdomain).
struct InitialSpec {
  std::string type = "constant";
  double value = 0.0;
  double mass = 1.0;
  double x = 0.0;
  double y = 0.0;
  int subdomain = 1;

  Field build(const MembraneMesh& mesh) const;
};

struct MonitorToggles {
  bool key_estimate = true;
  std::vector<double> truncation_levels;  // empty = off
  int truncation_species = 0;
  double weighted_gradient_alpha = -1.0;  // < 0 = off
  int weighted_gradient_species = 0;
  double lbeta = 0.0;  // 0 = off
  int lbeta_species = 0;
};

struct SimConfig {
  MeshSpec mesh;
  std::vector<SpeciesConfig> species;
  std::string reaction = "none";
  std::vector<double> reaction_rates;
  int regularization = 0;  // 0 = off
  bool mollify_initial_data = false;
  std::vector<InitialSpec> initial;
  double t_end = 1.0;
  double dt = 0.01;
  MonitorToggles monitors;
  double linear_tol = 1e-12;
  double positivity_tol = 1e-12;
  double key_estimate_slack = 0.05;
  double truncation_slack = 0.10;
  double steady_a = 1.0;  // boundary values for the steady fixture subcommand
  double steady_c = 0.0;

  int species_count() const { return static_cast<int>(species.size()); }
  long step_count() const;

  // True iff all per-species permeabilities coincide; writes the common value.
  bool common_permeability(double* k_out = nullptr) const;

  // Throws on any violated invariant (positive dt, t_end a multiple of dt,
  // positive coefficients, equal k when the key-estimate monitor is on, ...).
  void validate() const;
};

struct SimState {
  double time = 0.0;
  long step = 0;
  MultiField u;
  std::vector<double> l2_spacetime;  // per species, running integral of u^2
};

// Stored run history at uniform dt; states[0] is the initial data.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<MultiField> states;

  long step_count() const { return static_cast<long>(states.size()) - 1; }
};

// Per-step functionals; the CSV row contract.
struct MonitorRecord {
  double t = 0.0;
  std::vector<double> mass;  // per species
  double total_mass = 0.0;
  std::vector<double> l2;  // per species
  double dual_norm_u = 0.0;  // 0 when the key-estimate monitor is off
  double e_t = 0.0;          // 0 when the key-estimate monitor is off
  double jump_l2 = 0.0;
  double min_value = 0.0;
  std::optional<double> truncation_energy;   // running, first configured level
  std::optional<double> weighted_gradient;   // running
  std::optional<double> trace_lbeta;         // running
};

struct StepDiagnostics {
  int reaction_substeps = 1;
  int linear_iterations = 0;        // max over species
  double membrane_flux = 0.0;       // sum over species, rate at the new time
  double max_budget_residual = 0.0; // worst per-side per-species mass defect
};

// One IMEX step: explicit (regularized) reaction with positivity-adaptive
// substepping, then per-species implicit diffusion
//   (M + dt A_i) u_i_new = M (u_i_old + dt f_i(u_old)).
// Operators must be assembled with each species' (D_i, k_i).
StepDiagnostics step_imex(SimState& state, const SimConfig& config,
                          const MembraneMesh& mesh,
                          const std::vector<MembraneOperator>& ops,
                          const std::function<void(const double*, double*)>& reaction,
                          int species_count);

struct SimResult {
  MembraneMesh mesh;
  Trajectory trajectory;
  std::vector<MonitorRecord> records;  // one per step
  SimState final_state;
  double max_budget_residual = 0.0;  // worst per-side mass defect over the run
  int max_reaction_substeps = 1;
  std::optional<std::string> error;  // set when the run aborted; partial data kept
};

class KeyEstimateStream;

// Owns the mesh, operators and reaction of one run.
class Simulator {
 public:
  explicit Simulator(SimConfig config);
  Simulator(SimConfig config, ReactionSystem custom_reaction);
  ~Simulator();

  StepDiagnostics step();
  MonitorRecord record() const;  // functionals of the current state

  const SimState& state() const { return state_; }
  const MembraneMesh& mesh() const { return mesh_; }
  const SimConfig& config() const { return config_; }
  const ReactionSystem& reaction() const { return reaction_; }

  // Runs to t_end; one MonitorRecord per step; deterministic given config.
  SimResult run();

 private:
  void init();
  void evaluate_reaction(const double* u, double* f) const;

  SimConfig config_;
  MembraneMesh mesh_;
  ReactionSystem reaction_;
  std::optional<RegularizedReaction> regularized_;
  std::vector<MembraneOperator> ops_;
  SimState state_;
  std::unique_ptr<KeyEstimateStream> key_;
  double last_dual_ = 0.0;
  double last_e_ = 0.0;
  double trunc_acc_ = 0.0;
  double wgrad_acc_ = 0.0;
  double trace_acc_ = 0.0;
  StepDiagnostics last_diag_;
};

SimResult simulate(const SimConfig& config);
SimResult simulate(const SimConfig& config, const ReactionSystem& custom_reaction);

// 1D steady membrane fixture with boundary values a at x=0 and c at x=L,
// per-side diffusion and interface-resistance membrane flux; exact for the
// piecewise-linear profile with J = (a-c)/(L1/D1 + L2/D2 + 1/k).
struct SteadySolution {
  Field u;
  double flux = 0.0;  // J, positive from side 1 to side 2
  double jump = 0.0;  // reconstructed membrane jump u2 - u1
  int iterations = 0;
};

SteadySolution steady_state(const MembraneMesh& mesh, double d1, double d2,
                            double k, double a, double c, double tol = 1e-13);

// The operator and boundary load vector behind the steady fixture; the load
// carries the lifted Dirichlet data, so A u = load reproduces the fixture and
// (M + dt A) u_new = M u_old + dt load drives the transient toward it.
std::pair<MembraneOperator, Field> steady_fixture_system(const MembraneMesh& mesh,
                                                         double d1, double d2,
                                                         double k, double a,
                                                         double c);

}  // namespace memfv

#endif
