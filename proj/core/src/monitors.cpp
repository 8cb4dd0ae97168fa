#include "memfv/monitors.hpp"

#include <cmath>

namespace memfv {

namespace {

double face_coeff_d(const MembraneMesh& mesh, Diffusion diffusion, int cell) {
  return mesh.subdomain_of(cell) == 1 ? diffusion.d1 : diffusion.d2;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(std::string(what) + ": non-finite value");
}

}  // namespace

double sublevel_gradient_energy(const MembraneMesh& mesh, Diffusion diffusion,
                                const Field& w, double b) {
  // Interior faces only: the sublevel restriction reads "both adjacent cells
  // <= b", and membrane jumps are not gradients.
  double e = 0.0;
  for (const InteriorFace& f : mesh.interior_faces) {
    if (f.membrane) continue;
    if (std::abs(w[f.left]) > b || std::abs(w[f.right]) > b) continue;
    const double d = face_coeff_d(mesh, diffusion, f.left);
    const double dw = w[f.right] - w[f.left];
    e += d * f.area / f.dist * dw * dw;
  }
  return e;
}

double weighted_gradient_increment(const MembraneMesh& mesh, const Field& w,
                                   double alpha) {
  // Interior per-subdomain gradients; constants give zero.
  auto phi = [alpha](double v) { return std::pow(1.0 + std::abs(v), alpha); };
  double e = 0.0;
  for (const InteriorFace& f : mesh.interior_faces) {
    if (f.membrane) continue;
    const double d = phi(w[f.right]) - phi(w[f.left]);
    e += f.area / f.dist * d * d;
  }
  return e;
}

std::pair<double, double> lbeta_increment(const MembraneMesh& mesh,
                                          const Field& w, double beta) {
  double grad = 0.0;
  for (const InteriorFace& f : mesh.interior_faces) {
    if (f.membrane) continue;
    const double g = std::abs(w[f.right] - w[f.left]) / f.dist;
    grad += f.area * f.dist * std::pow(g, beta);
  }
  double trace = 0.0;
  for (int id : mesh.membrane_face_ids) {
    const InteriorFace& f = mesh.interior_faces[id];
    trace += (std::pow(std::abs(w[f.left]), beta) +
              std::pow(std::abs(w[f.right]), beta)) *
             f.area;
  }
  return {grad, trace};
}

double membrane_jump_l2(const MembraneMesh& mesh, const MultiField& u) {
  double s = 0.0;
  for (int id : mesh.membrane_face_ids) {
    const InteriorFace& f = mesh.interior_faces[id];
    for (const Field& w : u) {
      const double j = w[f.right] - w[f.left];
      s += f.area * j * j;
    }
  }
  return std::sqrt(s);
}

KeyEstimateStream::KeyEstimateStream(const MembraneMesh& mesh,
                                     const std::vector<SpeciesConfig>& species,
                                     double mass_control_constant, double tol)
    : c_(mass_control_constant), tol_(tol) {
  if (species.empty())
    throw InvalidParameterError("key estimate: no species configured");
  const double k = species.front().permeability;
  for (const SpeciesConfig& s : species) {
    if (s.permeability != k)
      throw InvalidParameterError(
          "key estimate requires equal membrane permeabilities k_i; the case "
          "of distinct k_i is an open problem and is refused");
    diffusion_.push_back(s.diffusion);
  }
  min_d_ = diffusion_.front();
  for (double d : diffusion_) min_d_ = std::min(min_d_, d);

  a_hat_ = assemble(mesh, Diffusion(1.0), k);

  if (c_ > 0.0) {
    Field rhs(a_hat_.n, c_);
    EllipticSolveReport rep = solve_poisson(a_hat_, rhs, tol_);
    double g2 = 0.0;
    for (int i = 0; i < a_hat_.n; ++i)
      g2 += a_hat_.mass[i] * rep.solution[i] * rep.solution[i];
    c1_ = g2 / (2.0 * min_d_);
  }
}

std::pair<double, double> KeyEstimateStream::push(const MultiField& u, double t,
                                                  double dt) {
  const int n = a_hat_.n;
  const double damp = std::exp(-c_ * t);
  Field u_hat(n, 0.0), v_hat(n, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (int c = 0; c < n; ++c) {
      u_hat[c] += damp * u[i][c];
      v_hat[c] += damp * diffusion_[i] * u[i][c];
    }
  }
  if (dt > 0.0) {
    double uv = 0.0;
    for (int c = 0; c < n; ++c) uv += a_hat_.mass[c] * u_hat[c] * v_hat[c];
    integral_ += dt * uv;
  }
  const double dual = dual_norm(a_hat_, u_hat, tol_);
  const double e = 0.5 * dual * dual + 0.5 * integral_;
  if (!primed_) {
    e0_ = e;
    primed_ = true;
  }
  return {dual, e};
}

KeyEstimateReport key_estimate_check(const MembraneMesh& mesh,
                                     const Trajectory& trajectory,
                                     const SimConfig& config,
                                     double mass_control_constant) {
  KeyEstimateReport rep;
  rep.mass_control_constant = mass_control_constant;

  KeyEstimateStream stream(mesh, config.species, mass_control_constant,
                           config.linear_tol);
  const double slack = config.key_estimate_slack;
  const int n = mesh.cell_count();

  auto [dual0, e_init] = stream.push(trajectory.states[0], 0.0, 0.0);
  rep.e0 = e_init;
  rep.c1 = stream.c1();

  rep.energy_ok = true;
  double l2_total = 0.0;
  for (std::size_t m = 1; m < trajectory.states.size(); ++m) {
    const double t = trajectory.times[m];
    auto [dual, e] = stream.push(trajectory.states[m], t, trajectory.dt);
    require_finite(e, "key_estimate_check");
    const double bound = rep.e0 + rep.c1 * t * (1.0 + slack);
    rep.t.push_back(t);
    rep.dual_norm.push_back(dual);
    rep.e.push_back(e);
    rep.bound.push_back(bound);
    if (e > bound + 1e-12 * std::max(1.0, rep.e0)) rep.energy_ok = false;
    for (const Field& w : trajectory.states[m]) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += mesh.cells[c].volume * w[c] * w[c];
      l2_total += trajectory.dt * s;
    }
  }
  rep.l2_spacetime = l2_total;

  const double t_final = trajectory.times.back();
  rep.c3 = 2.0 / stream.min_diffusion() * (rep.e0 + rep.c1 * t_final) *
           std::exp(2.0 * mass_control_constant * t_final);
  rep.l2_ok = l2_total <= rep.c3 * (1.0 + slack);
  rep.passed = rep.energy_ok && rep.l2_ok;
  return rep;
}

TruncationEnergyReport truncation_energy_check(const MembraneMesh& mesh,
                                               const Trajectory& trajectory,
                                               const SimConfig& config,
                                               const ReactionSystem& reaction,
                                               int species, double b) {
  TruncationEnergyReport rep;
  rep.level = b;
  const int n = mesh.cell_count();
  const int m = reaction.species_count;
  const Diffusion d(config.species[species].diffusion);

  std::optional<RegularizedReaction> reg;
  if (config.regularization > 0) reg = regularize(reaction, config.regularization);

  std::vector<double> ubuf(m), fbuf(m);
  double lhs = 0.0, f_abs = 0.0, f_signed = 0.0;
  for (std::size_t step = 1; step < trajectory.states.size(); ++step) {
    lhs += trajectory.dt *
           sublevel_gradient_energy(mesh, d, trajectory.states[step][species], b);
    const MultiField& prev = trajectory.states[step - 1];
    for (int c = 0; c < n; ++c) {
      for (int j = 0; j < m; ++j) ubuf[j] = prev[j][c];
      if (reg)
        reg->eval(ubuf.data(), fbuf.data());
      else
        reaction.eval(ubuf.data(), fbuf.data());
      const double fv = fbuf[species] * mesh.cells[c].volume;
      f_abs += trajectory.dt * std::abs(fv);
      f_signed += trajectory.dt * fv;
    }
  }
  double w0_l1 = 0.0;
  for (int c = 0; c < n; ++c)
    w0_l1 += mesh.cells[c].volume * std::abs(trajectory.states[0][species][c]);

  rep.lhs = lhs;
  rep.rhs = b * (f_abs + w0_l1);
  rep.signed_source_negative = f_signed < 0.0;
  rep.ok = lhs <= rep.rhs * (1.0 + config.truncation_slack);
  require_finite(rep.lhs, "truncation_energy_check");
  require_finite(rep.rhs, "truncation_energy_check");
  return rep;
}

double weighted_gradient_norm(const MembraneMesh& mesh,
                              const Trajectory& trajectory, int species,
                              double alpha) {
  if (alpha < 0.0 || alpha >= 0.5)
    throw InvalidParameterError(
        "weighted_gradient_norm: alpha must lie in [0, 1/2)");
  double acc = 0.0;
  for (std::size_t m = 1; m < trajectory.states.size(); ++m)
    acc += trajectory.dt *
           weighted_gradient_increment(mesh, trajectory.states[m][species], alpha);
  require_finite(acc, "weighted_gradient_norm");
  return acc;
}

std::pair<double, double> lbeta_gradient_and_trace(const MembraneMesh& mesh,
                                                   const Trajectory& trajectory,
                                                   int species, double beta) {
  if (beta < 1.0)
    throw InvalidParameterError("lbeta_gradient_and_trace: beta must be >= 1");
  double grad = 0.0, trace = 0.0;
  for (std::size_t m = 1; m < trajectory.states.size(); ++m) {
    auto [g, tr] = lbeta_increment(mesh, trajectory.states[m][species], beta);
    grad += trajectory.dt * g;
    trace += trajectory.dt * tr;
  }
  require_finite(grad, "lbeta_gradient_and_trace");
  require_finite(trace, "lbeta_gradient_and_trace");
  return {grad, trace};
}

TimeTranslationReport time_translation_modulus(const MembraneMesh& mesh,
                                               const Trajectory& trajectory,
                                               int species,
                                               const std::vector<double>& h_values) {
  if (h_values.size() < 4)
    throw InsufficientDataError(
        "time_translation_modulus: need at least 4 h values");
  const double dt = trajectory.dt;
  const int n = mesh.cell_count();
  const std::size_t steps = trajectory.states.size();

  TimeTranslationReport rep;
  double scale = 0.0;
  for (std::size_t m = 0; m < steps; ++m)
    for (int c = 0; c < n; ++c)
      scale += dt * mesh.cells[c].volume *
               std::abs(trajectory.states[m][species][c]);

  // All lags integrate over the same base window [0, T - h_max], so a field
  // linear in t gives omega exactly proportional to h.
  std::vector<long> lags;
  long lag_max = 0;
  for (double h : h_values) {
    const double lag_real = h / dt;
    const long lag = std::lround(lag_real);
    if (lag < 1 || std::abs(lag_real - lag) > 1e-9)
      throw InvalidParameterError(
          "time_translation_modulus: h values must be positive multiples of dt");
    if (static_cast<std::size_t>(lag) >= steps)
      throw InsufficientDataError(
          "time_translation_modulus: h exceeds the stored horizon");
    lags.push_back(lag);
    lag_max = std::max(lag_max, lag);
  }

  for (std::size_t i = 0; i < lags.size(); ++i) {
    const long lag = lags[i];
    double omega = 0.0;
    for (std::size_t m = 0; m + lag_max < steps; ++m) {
      const Field& a = trajectory.states[m][species];
      const Field& b = trajectory.states[m + lag][species];
      for (int c = 0; c < n; ++c)
        omega += dt * mesh.cells[c].volume * std::abs(b[c] - a[c]);
    }
    require_finite(omega, "time_translation_modulus");
    rep.h.push_back(h_values[i]);
    rep.omega.push_back(omega);
  }

  double omega_max = 0.0;
  for (double w : rep.omega) omega_max = std::max(omega_max, w);
  if (omega_max <= 1e-14 * std::max(scale, 1e-300)) {
    rep.stationary = true;
    return rep;
  }

  // Least-squares slope of log omega against log h.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double count = static_cast<double>(rep.h.size());
  for (std::size_t i = 0; i < rep.h.size(); ++i) {
    const double x = std::log(rep.h[i]);
    const double y = std::log(rep.omega[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return rep;
}

}  // namespace memfv
