#ifndef MEMFV_REACTIONS_HPP
#define MEMFV_REACTIONS_HPP

#include <functional>
#include <string>
#include <vector>

#include "memfv/mesh.hpp"
#include "memfv/types.hpp"

namespace memfv {

// Constants declared by a reaction system: sub-quadratic growth bound,
// mass-control bound, and local Lipschitz data on [0,M]^m.
struct HypothesisConstants {
  double growth = 0.0;
  double mass_control = 0.0;
  double lipschitz = 0.0;
  double lipschitz_box = 0.0;
};

// Reaction vector field f(u) on [0,inf)^m. Evaluators are pure functions and
// freely shareable across workers.
struct ReactionSystem {
  int species_count = 0;
  std::function<void(const double* u, double* f)> eval;
  HypothesisConstants constants;
  std::string label;
  bool mass_dissipative = false;  // sum_j f_j <= 0 pointwise, by construction

  std::vector<double> operator()(const std::vector<double>& u) const {
    std::vector<double> f(species_count, 0.0);
    eval(u.data(), f.data());
    return f;
  }
};

// Two-species annihilation f1 = f2 = -u1*u2.
ReactionSystem builtin_annihilation();

// Six-species mass-action stand-in for nucleocytoplasmic transport, rates
// r[0..5]. Built from bindings, conversions and releases arranged so that
// the species sum of f is <= 0 and every negative term in f_i carries u_i.
ReactionSystem builtin_transport_demo(const std::vector<double>& rates);

// f identically zero.
ReactionSystem builtin_zero(int species_count);

// Registry used by the config file; throws InvalidParameterError listing the
// available labels on an unknown one.
ReactionSystem make_reaction(const std::string& label,
                             const std::vector<double>& rates,
                             int species_count);
std::vector<std::string> reaction_labels();

struct HypothesisReport {
  double growth_estimate = 0.0;        // sup |f_i| / (1 + sum u_j^2)
  double mass_control_estimate = 0.0;  // sup sum f_j / (1 + sum u_j)
  double lipschitz_estimate = 0.0;     // sup difference quotient
  bool quasi_positive = true;
  int quasi_positivity_species = -1;
  double quasi_positivity_worst = 0.0;
  bool stable_under_doubling = true;
  bool passed = false;
};

// Sampling-based check of the growth, mass-control, quasi-positivity and
// local Lipschitz hypotheses over [0,M]^m; fixed-seed, deterministic.
// Divergence of an estimate under sample doubling fails the report.
HypothesisReport check_hypotheses(const ReactionSystem& sys, double box,
                                  long samples);

// Level-n regularization f_i / (1 + (1/n) sum_j |f_j|); bounded by n,
// sign-preserving, quasi-positivity inherited.
struct RegularizedReaction {
  ReactionSystem base;
  int level = 1;

  void eval(const double* u, double* f) const {
    base.eval(u, f);
    double s = 0.0;
    for (int j = 0; j < base.species_count; ++j) s += std::abs(f[j]);
    const double damp = 1.0 / (1.0 + s / level);
    for (int j = 0; j < base.species_count; ++j) f[j] *= damp;
  }
};

RegularizedReaction regularize(const ReactionSystem& sys, int n);

// C^2 cap at level b: identity on [0,b-2], cosine transition of width 2,
// constant b-1 beyond b. Satisfies 0 <= T' <= 1 and -1 <= T'' <= 0.
struct Truncation {
  double level = 4.0;

  double value(double s) const;
  double deriv(double s) const;
  double second(double s) const;
};

Truncation make_truncation(double b);  // requires b >= 4

// Clip at level n, then mollify per subdomain with a nonnegative
// normalized stencil of radius 1/n. Preserves nonnegativity; constants are
// fixed points.
Field mollify_initial(const Field& u0, int n, const MembraneMesh& mesh);

}  // namespace memfv

#endif
