#include "memfv/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "memfv/monitors.hpp"

namespace memfv {

MembraneMesh MeshSpec::build() const {
  if (dim == 1) return build_interval_mesh(length1, length2, n1, n2);
  if (dim == 2) return build_rect_mesh(length1, length2, height, n1, n2, ny);
  throw InvalidGeometryError("mesh dimension must be 1 or 2");
}

Field InitialSpec::build(const MembraneMesh& mesh) const {
  const int n = mesh.cell_count();
  if (type == "constant") {
    if (value < 0.0) throw InvalidDataError("initial data must be nonnegative");
    return Field(n, value);
  }
  if (type == "indicator") {
    if (value < 0.0) throw InvalidDataError("initial data must be nonnegative");
    Field u(n, 0.0);
    for (int c = 0; c < n; ++c)
      if (mesh.subdomain_of(c) == subdomain) u[c] = value;
    return u;
  }
  if (type == "product_sine") {
    if (value < 0.0) throw InvalidDataError("initial data must be nonnegative");
    Field u(n, 0.0);
    for (int c = 0; c < n; ++c) {
      double v = value * std::sin(M_PI * mesh.cells[c].x / mesh.extent_x);
      if (mesh.dim == 2) v *= std::sin(M_PI * mesh.cells[c].y / mesh.extent_y);
      u[c] = v;
    }
    return u;
  }
  if (type == "spike") {
    if (mass < 0.0) throw InvalidDataError("spike mass must be nonnegative");
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (int c = 0; c < n; ++c) {
      const double dx = mesh.cells[c].x - x;
      const double dy = mesh.cells[c].y - y;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    Field u(n, 0.0);
    u[best] = mass / mesh.cells[best].volume;
    return u;
  }
  throw InvalidParameterError(
      "unknown initial data type '" + type +
      "'; available: constant, spike, indicator, product_sine");
}

long SimConfig::step_count() const { return std::lround(t_end / dt); }

bool SimConfig::common_permeability(double* k_out) const {
  if (species.empty()) return false;
  const double k = species.front().permeability;
  for (const SpeciesConfig& s : species)
    if (s.permeability != k) return false;
  if (k_out) *k_out = k;
  return true;
}

void SimConfig::validate() const {
  if (species.empty()) throw InvalidParameterError("config: no species");
  for (const SpeciesConfig& s : species) {
    if (s.diffusion <= 0.0)
      throw InvalidParameterError("config: diffusion coefficients must be positive");
    if (s.permeability <= 0.0)
      throw InvalidParameterError("config: permeabilities must be positive");
  }
  if (dt <= 0.0) throw InvalidParameterError("config: dt must be positive");
  if (t_end < dt) throw InvalidParameterError("config: t_end must be >= dt");
  const double steps = t_end / dt;
  if (std::abs(steps - std::lround(steps)) > 1e-9 * std::max(1.0, steps))
    throw InvalidParameterError("config: t_end must be an integer multiple of dt");
  if (initial.size() != species.size())
    throw InvalidParameterError(
        "config: need one initial data spec per species");
  if (regularization < 0)
    throw InvalidParameterError("config: regularization level must be >= 0");
  if (mollify_initial_data && regularization < 1)
    throw InvalidParameterError(
        "config: mollified initial data requires a regularization level");
  if (monitors.key_estimate && !common_permeability())
    throw InvalidParameterError(
        "config: the key-estimate monitor requires all permeabilities k_i "
        "equal; disable it or use a common k");
  if (linear_tol <= 0.0)
    throw InvalidParameterError("config: linear_tol must be positive");
  if (positivity_tol < 0.0)
    throw InvalidParameterError("config: positivity_tol must be >= 0");
  for (double b : monitors.truncation_levels)
    if (b <= 0.0)
      throw InvalidParameterError("config: truncation levels must be positive");
  const int m = species_count();
  auto check_species = [m](int j, const char* what) {
    if (j < 0 || j >= m)
      throw InvalidParameterError(std::string("config: ") + what +
                                  " species index out of range");
  };
  check_species(monitors.truncation_species, "truncation");
  check_species(monitors.weighted_gradient_species, "weighted-gradient");
  check_species(monitors.lbeta_species, "lbeta");
  if (monitors.weighted_gradient_alpha >= 0.5)
    throw InvalidParameterError("config: weighted-gradient alpha must be < 1/2");
  if (monitors.lbeta != 0.0 && monitors.lbeta < 1.0)
    throw InvalidParameterError("config: lbeta must be >= 1");
}

StepDiagnostics step_imex(SimState& state, const SimConfig& config,
                          const MembraneMesh& mesh,
                          const std::vector<MembraneOperator>& ops,
                          const std::function<void(const double*, double*)>& reaction,
                          int species_count) {
  const int n = mesh.cell_count();
  const int m = species_count;
  const double dt = config.dt;

  StepDiagnostics diag;
  diag.reaction_substeps = 0;

  // Explicit reaction stage; the substep shrinks by halving whenever a
  // species would cross zero, with a hard floor.
  MultiField u_star = state.u;
  std::vector<double> ubuf(m), fbuf(m);
  MultiField f_stage(m, Field(n, 0.0));
  double remaining = dt;
  while (remaining > dt * 1e-14) {
    for (int c = 0; c < n; ++c) {
      for (int j = 0; j < m; ++j) ubuf[j] = u_star[j][c];
      reaction(ubuf.data(), fbuf.data());
      for (int j = 0; j < m; ++j) f_stage[j][c] = fbuf[j];
    }
    double sub = remaining;
    for (;;) {
      int worst_cell = -1;
      double worst = 0.0;
      for (int j = 0; j < m; ++j) {
        for (int c = 0; c < n; ++c) {
          const double v = u_star[j][c] + sub * f_stage[j][c];
          if (v < worst) {
            worst = v;
            worst_cell = c;
          }
        }
      }
      if (worst_cell < 0) break;
      sub *= 0.5;
      if (sub < dt * 0x1p-30)
        throw PositivityError(
            "step_imex: reaction substep floor hit while preserving positivity",
            worst_cell, worst);
    }
    for (int j = 0; j < m; ++j)
      for (int c = 0; c < n; ++c) u_star[j][c] += sub * f_stage[j][c];
    remaining -= sub;
    ++diag.reaction_substeps;
    if (diag.reaction_substeps > 100000)
      throw PositivityError("step_imex: reaction substepping stagnated", -1, 0.0);
  }

  // Implicit diffusion stage per species.
  int worst_cell = -1;
  double worst_value = 0.0;
  for (int j = 0; j < m; ++j) {
    const MembraneOperator& op = ops[j];
    Field b(n);
    for (int c = 0; c < n; ++c) b[c] = op.mass[c] * u_star[j][c];
    EllipticSolveReport rep = solve_shifted(op, dt, b, u_star[j], config.linear_tol);
    Field& u_new = rep.solution;
    diag.linear_iterations = std::max(diag.linear_iterations, rep.iterations);

    // Membrane flux and per-side budgets, from the solved state.
    double flux = 0.0;
    for (int id : mesh.membrane_face_ids) {
      const InteriorFace& f = mesh.interior_faces[id];
      flux += -op.entry(f.left, f.right) * (u_new[f.left] - u_new[f.right]);
    }
    const double d_j = config.species[j].diffusion;
    double dirichlet[3] = {0.0, 0.0, 0.0};
    for (const DirichletFace& f : mesh.dirichlet_faces)
      dirichlet[f.side] += d_j * f.area / f.half_dist * u_new[f.cell];
    double dm[3] = {0.0, 0.0, 0.0};
    for (int c = 0; c < n; ++c)
      dm[mesh.subdomain_of(c)] += op.mass[c] * (u_new[c] - u_star[j][c]);
    const double r1 = dm[1] + dt * (dirichlet[1] + flux);
    const double r2 = dm[2] + dt * (dirichlet[2] - flux);
    diag.max_budget_residual =
        std::max({diag.max_budget_residual, std::abs(r1), std::abs(r2)});
    diag.membrane_flux += flux;

    for (int c = 0; c < n; ++c) {
      if (u_new[c] < worst_value) {
        worst_value = u_new[c];
        worst_cell = c;
      }
    }
    state.u[j] = std::move(u_new);
  }

  if (worst_value < -config.positivity_tol)
    throw PositivityError("step_imex: positivity violated beyond tolerance",
                          worst_cell, worst_value);

  state.step += 1;
  state.time = static_cast<double>(state.step) * dt;
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int c = 0; c < n; ++c)
      s += mesh.cells[c].volume * state.u[j][c] * state.u[j][c];
    state.l2_spacetime[j] += dt * s;
  }
  return diag;
}

Simulator::Simulator(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  reaction_ = make_reaction(config_.reaction, config_.reaction_rates,
                            config_.species_count());
  init();
}

Simulator::Simulator(SimConfig config, ReactionSystem custom_reaction)
    : config_(std::move(config)), reaction_(std::move(custom_reaction)) {
  config_.validate();
  init();
}

Simulator::~Simulator() = default;

void Simulator::init() {
  if (reaction_.species_count != config_.species_count())
    throw InvalidParameterError(
        "reaction '" + reaction_.label + "' expects " +
        std::to_string(reaction_.species_count) + " species, config has " +
        std::to_string(config_.species_count()));

  mesh_ = config_.mesh.build();
  for (const SpeciesConfig& s : config_.species)
    ops_.push_back(assemble(mesh_, Diffusion(s.diffusion), s.permeability));
  if (config_.regularization > 0)
    regularized_ = regularize(reaction_, config_.regularization);

  const int m = config_.species_count();
  state_.u.resize(m);
  for (int j = 0; j < m; ++j) {
    state_.u[j] = config_.initial[j].build(mesh_);
    if (config_.mollify_initial_data)
      state_.u[j] = mollify_initial(state_.u[j], config_.regularization, mesh_);
  }
  state_.l2_spacetime.assign(m, 0.0);

  if (config_.monitors.key_estimate) {
    key_ = std::make_unique<KeyEstimateStream>(
        mesh_, config_.species, reaction_.constants.mass_control,
        config_.linear_tol);
    key_->push(state_.u, 0.0, 0.0);
  }
}

void Simulator::evaluate_reaction(const double* u, double* f) const {
  if (regularized_)
    regularized_->eval(u, f);
  else
    reaction_.eval(u, f);
}

StepDiagnostics Simulator::step() {
  auto eval = [this](const double* u, double* f) { evaluate_reaction(u, f); };
  last_diag_ = step_imex(state_, config_, mesh_, ops_, eval,
                         config_.species_count());

  if (key_) {
    auto [dual, e] = key_->push(state_.u, state_.time, config_.dt);
    last_dual_ = dual;
    last_e_ = e;
  }

  const MonitorToggles& mon = config_.monitors;
  if (!mon.truncation_levels.empty()) {
    trunc_acc_ += config_.dt * sublevel_gradient_energy(
                                   mesh_,
                                   Diffusion(config_.species[mon.truncation_species].diffusion),
                                   state_.u[mon.truncation_species],
                                   mon.truncation_levels.front());
  }
  if (mon.weighted_gradient_alpha >= 0.0) {
    wgrad_acc_ += config_.dt * weighted_gradient_increment(
                                   mesh_, state_.u[mon.weighted_gradient_species],
                                   mon.weighted_gradient_alpha);
  }
  if (mon.lbeta > 0.0) {
    trace_acc_ += config_.dt *
                  lbeta_increment(mesh_, state_.u[mon.lbeta_species], mon.lbeta)
                      .second;
  }
  return last_diag_;
}

MonitorRecord Simulator::record() const {
  const int m = config_.species_count();
  const int n = mesh_.cell_count();
  MonitorRecord r;
  r.t = state_.time;
  r.mass.resize(m);
  r.l2.resize(m);
  r.min_value = std::numeric_limits<double>::max();
  for (int j = 0; j < m; ++j) {
    double mass = 0.0, l2 = 0.0;
    for (int c = 0; c < n; ++c) {
      const double v = state_.u[j][c];
      mass += mesh_.cells[c].volume * v;
      l2 += mesh_.cells[c].volume * v * v;
      r.min_value = std::min(r.min_value, v);
    }
    r.mass[j] = mass;
    r.l2[j] = std::sqrt(l2);
    r.total_mass += mass;
  }
  r.jump_l2 = membrane_jump_l2(mesh_, state_.u);
  if (key_) {
    r.dual_norm_u = last_dual_;
    r.e_t = last_e_;
  }
  const MonitorToggles& mon = config_.monitors;
  if (!mon.truncation_levels.empty()) r.truncation_energy = trunc_acc_;
  if (mon.weighted_gradient_alpha >= 0.0) r.weighted_gradient = wgrad_acc_;
  if (mon.lbeta > 0.0) r.trace_lbeta = trace_acc_;

  auto finite = [](double v) { return std::isfinite(v); };
  bool ok = finite(r.t) && finite(r.total_mass) && finite(r.dual_norm_u) &&
            finite(r.e_t) && finite(r.jump_l2) && finite(r.min_value);
  for (double v : r.mass) ok = ok && finite(v);
  for (double v : r.l2) ok = ok && finite(v);
  if (!ok) throw Error("monitor record contains a non-finite value");
  return r;
}

SimResult Simulator::run() {
  SimResult res;
  res.mesh = mesh_;
  res.trajectory.dt = config_.dt;
  res.trajectory.times.push_back(0.0);
  res.trajectory.states.push_back(state_.u);

  const long nsteps = config_.step_count();
  try {
    for (long s = 1; s <= nsteps; ++s) {
      step();
      res.max_budget_residual =
          std::max(res.max_budget_residual, last_diag_.max_budget_residual);
      res.max_reaction_substeps =
          std::max(res.max_reaction_substeps, last_diag_.reaction_substeps);
      res.trajectory.times.push_back(state_.time);
      res.trajectory.states.push_back(state_.u);
      res.records.push_back(record());
    }
  } catch (const Error& err) {
    res.error = err.what();
  }
  res.final_state = state_;
  return res;
}

SimResult simulate(const SimConfig& config) { return Simulator(config).run(); }

SimResult simulate(const SimConfig& config, const ReactionSystem& custom_reaction) {
  return Simulator(config, custom_reaction).run();
}

std::pair<MembraneOperator, Field> steady_fixture_system(const MembraneMesh& mesh,
                                                         double d1, double d2,
                                                         double k, double a,
                                                         double c) {
  if (mesh.dim != 1)
    throw InvalidParameterError("steady fixture: only 1D meshes are supported");
  if (a < 0.0 || c < 0.0)
    throw InvalidParameterError("steady fixture: boundary values must be >= 0");

  MembraneOperator op = assemble(mesh, Diffusion(d1, d2), k);

  // Replace the membrane coupling by the interface-resistance
  // transmissibility (half cell + membrane + half cell in series); the scheme
  // is then exact on piecewise-linear profiles.
  auto bump = [&op](int i, int j, double dv) {
    for (int p = op.row_ptr[i]; p < op.row_ptr[i + 1]; ++p)
      if (op.col[p] == j) {
        op.val[p] += dv;
        return;
      }
    throw Error("steady fixture: matrix entry missing");
  };
  for (int id : mesh.membrane_face_ids) {
    const InteriorFace& f = mesh.interior_faces[id];
    const double wl = mesh.cells[f.left].volume;
    const double wr = mesh.cells[f.right].volume;
    const double t_mem = f.area / (0.5 * wl / d1 + 1.0 / k + 0.5 * wr / d2);
    const double delta = t_mem + op.entry(f.left, f.right);  // t_new - t_old
    bump(f.left, f.left, delta);
    bump(f.right, f.right, delta);
    bump(f.left, f.right, -delta);
    bump(f.right, f.left, -delta);
  }

  Field load(op.n, 0.0);
  for (const DirichletFace& f : mesh.dirichlet_faces) {
    const double d = mesh.subdomain_of(f.cell) == 1 ? d1 : d2;
    const double bc = f.side == 1 ? a : c;
    load[f.cell] += d * f.area / f.half_dist * bc;
  }
  return {std::move(op), std::move(load)};
}

SteadySolution steady_state(const MembraneMesh& mesh, double d1, double d2,
                            double k, double a, double c, double tol) {
  auto [op, load] = steady_fixture_system(mesh, d1, d2, k, a, c);

  Field rhs(op.n, 0.0);
  for (int i = 0; i < op.n; ++i) rhs[i] = load[i] / op.mass[i];
  EllipticSolveReport rep = solve_poisson(op, rhs, tol);

  SteadySolution sol;
  sol.u = std::move(rep.solution);
  sol.iterations = rep.iterations;
  const InteriorFace& mf = mesh.interior_faces[mesh.membrane_face_ids.front()];
  const double t_mem = -op.entry(mf.left, mf.right);
  sol.flux = t_mem * (sol.u[mf.left] - sol.u[mf.right]) / mf.area;
  const double wl = mesh.cells[mf.left].volume;
  const double wr = mesh.cells[mf.right].volume;
  const double trace1 = sol.u[mf.left] - sol.flux * 0.5 * wl / d1;
  const double trace2 = sol.u[mf.right] + sol.flux * 0.5 * wr / d2;
  sol.jump = trace2 - trace1;
  return sol;
}

}  // namespace memfv
