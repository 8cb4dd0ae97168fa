#ifndef MEMFV_MONITORS_HPP
#define MEMFV_MONITORS_HPP

#include <memory>
#include <utility>
#include <vector>

#include "memfv/parabolic.hpp"

namespace memfv {

// Spatial building blocks shared by the streaming records and the post-hoc
// checks. Face sums run over non-membrane faces and Dirichlet faces (ghost
// value 0); the membrane jump is not a gradient.

// D-weighted gradient energy restricted to faces whose cells satisfy |w| <= b.
double sublevel_gradient_energy(const MembraneMesh& mesh, Diffusion diffusion,
                                const Field& w, double b);

// Gradient energy of (1+|w|)^alpha at one time.
double weighted_gradient_increment(const MembraneMesh& mesh, const Field& w,
                                   double alpha);

// (integral of |grad w|^beta, membrane trace integral of |tr|^beta) at one time.
std::pair<double, double> lbeta_increment(const MembraneMesh& mesh,
                                          const Field& w, double beta);

// L2 norm of the membrane jumps over all species.
double membrane_jump_l2(const MembraneMesh& mesh, const MultiField& u);

// Streaming evaluator of the key-estimate quantities: the damped sums
// U = e^{-Ct} sum_i u_i and V = e^{-Ct} sum_i D_i u_i, the dual norm of U
// through the unit-diffusion membrane operator, the auxiliary solution G of
// the constant-source problem, C1 = ||G||^2 / (2 min D_i), and the Lyapunov
// quantity E(t) = dual(U)^2/2 + (1/2) int_0^t <U,V>.
class KeyEstimateStream {
 public:
  KeyEstimateStream(const MembraneMesh& mesh,
                    const std::vector<SpeciesConfig>& species,
                    double mass_control_constant, double tol);

  // Push the state at time t; dt = 0 for the initial state. Returns
  // (dual_norm(U), E(t)).
  std::pair<double, double> push(const MultiField& u, double t, double dt);

  double e0() const { return e0_; }
  double c1() const { return c1_; }
  double mass_control_constant() const { return c_; }
  double min_diffusion() const { return min_d_; }

 private:
  MembraneOperator a_hat_;
  std::vector<double> diffusion_;
  double c_ = 0.0;
  double c1_ = 0.0;
  double e0_ = 0.0;
  double integral_ = 0.0;
  double min_d_ = 1.0;
  double tol_ = 1e-12;
  bool primed_ = false;
};

struct KeyEstimateReport {
  double mass_control_constant = 0.0;
  double c1 = 0.0;
  double e0 = 0.0;
  double c3 = 0.0;
  std::vector<double> t;
  std::vector<double> dual_norm;
  std::vector<double> e;      // E(t) per step
  std::vector<double> bound;  // E(0) + C1 t (1 + slack)
  double l2_spacetime = 0.0;  // sum_i int int u_i^2
  bool energy_ok = false;
  bool l2_ok = false;
  bool passed = false;
};

// Checks E(t) <= E(0) + C1 t (1+slack) at every step and the L2 space-time
// consequence sum_i int int u_i^2 <= C3. Refuses distinct permeabilities.
KeyEstimateReport key_estimate_check(const MembraneMesh& mesh,
                                     const Trajectory& trajectory,
                                     const SimConfig& config,
                                     double mass_control_constant);

struct TruncationEnergyReport {
  double level = 0.0;
  double lhs = 0.0;  // D int_{|w|<=b} |grad w|^2 over the run
  double rhs = 0.0;  // b (int int |f| + int |w0|)
  bool signed_source_negative = false;  // int int f < 0, flagged
  bool ok = false;
};

// Sublevel gradient-energy bound for one designated species; the source is
// re-evaluated from the trajectory with the run's (regularized) reaction.
TruncationEnergyReport truncation_energy_check(const MembraneMesh& mesh,
                                               const Trajectory& trajectory,
                                               const SimConfig& config,
                                               const ReactionSystem& reaction,
                                               int species, double b);

// Space-time integral of |grad (1+|w|)^alpha|^2, alpha in [0, 1/2).
double weighted_gradient_norm(const MembraneMesh& mesh,
                              const Trajectory& trajectory, int species,
                              double alpha);

// (int_0^T sum |grad w|^beta, int_0^T membrane trace integral).
std::pair<double, double> lbeta_gradient_and_trace(const MembraneMesh& mesh,
                                                   const Trajectory& trajectory,
                                                   int species, double beta);

struct TimeTranslationReport {
  std::vector<double> h;
  std::vector<double> omega;
  double slope = 0.0;
  bool stationary = false;
};

// omega(h) = int int |w(t+h) - w(t)| and the fitted log-log slope; h values
// must be multiples of dt spanning at least a decade, at least 4 of them.
TimeTranslationReport time_translation_modulus(const MembraneMesh& mesh,
                                               const Trajectory& trajectory,
                                               int species,
                                               const std::vector<double>& h_values);

}  // namespace memfv

#endif
