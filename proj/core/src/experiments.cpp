#include "memfv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "memfv/csv.hpp"

namespace memfv {

void RunReport::add(bool ok, const std::string& name, double lhs, double rhs) {
  std::ostringstream line;
  line << (ok ? "PASS " : "FAIL ") << name << " lhs=" << format_sci(lhs)
       << " rhs=" << format_sci(rhs);
  lines.push_back(line.str());
  passed = passed && ok;
}

void RunReport::note(const std::string& line) { lines.push_back(line); }

std::string RunReport::text() const {
  std::ostringstream out;
  for (const std::string& l : lines) out << l << "\n";
  out << (passed ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return out.str();
}

RunReport assess_run(const SimResult& result, const SimConfig& config,
                     const ReactionSystem& reaction) {
  RunReport rep;
  if (result.error) {
    rep.note("FAIL run aborted: " + *result.error);
    rep.passed = false;
  }
  if (result.records.empty()) {
    rep.note("FAIL no records emitted");
    rep.passed = false;
    return rep;
  }

  const MembraneMesh& mesh = result.mesh;
  double mass0 = 0.0;
  for (const Field& w : result.trajectory.states[0])
    for (int c = 0; c < mesh.cell_count(); ++c)
      mass0 += mesh.cells[c].volume * w[c];
  const double scale = std::max(1.0, std::abs(mass0));

  double min_value = 0.0;
  for (const MonitorRecord& r : result.records)
    min_value = std::min(min_value, r.min_value);
  rep.add(min_value >= -config.positivity_tol, "nonnegativity min_u",
          min_value, -config.positivity_tol);

  if (reaction.mass_dissipative) {
    double worst_increase = 0.0;
    double prev = mass0;
    for (const MonitorRecord& r : result.records) {
      worst_increase = std::max(worst_increase, r.total_mass - prev);
      prev = r.total_mass;
    }
    rep.add(worst_increase <= 1e-12 * scale, "mass nonincreasing max_increase",
            worst_increase, 1e-12 * scale);
  }

  rep.add(result.max_budget_residual <= 1e-12 * scale,
          "membrane flux budget residual", result.max_budget_residual,
          1e-12 * scale);

  if (config.monitors.key_estimate && !result.error) {
    KeyEstimateReport key = key_estimate_check(
        mesh, result.trajectory, config, reaction.constants.mass_control);
    rep.add(key.energy_ok, "key estimate E(t) <= E0 + C1 t (1+slack)",
            key.e.empty() ? 0.0 : key.e.back(),
            key.bound.empty() ? 0.0 : key.bound.back());
    rep.add(key.l2_ok, "key estimate L2 space-time bound", key.l2_spacetime,
            key.c3);
  }

  if (!config.monitors.truncation_levels.empty() && !result.error) {
    for (double b : config.monitors.truncation_levels) {
      TruncationEnergyReport tr = truncation_energy_check(
          mesh, result.trajectory, config, reaction,
          config.monitors.truncation_species, b);
      std::ostringstream name;
      name << "truncation energy b=" << b;
      rep.add(tr.ok, name.str(), tr.lhs, tr.rhs * (1.0 + config.truncation_slack));
      if (tr.signed_source_negative)
        rep.note("NOTE signed source integral is negative at b=" +
                 std::to_string(b) + "; right side uses |f|");
    }
  }

  if (config.monitors.weighted_gradient_alpha >= 0.0 && !result.error) {
    const double v = weighted_gradient_norm(
        mesh, result.trajectory, config.monitors.weighted_gradient_species,
        config.monitors.weighted_gradient_alpha);
    rep.note("NOTE weighted gradient integral = " + format_sci(v));
  }
  if (config.monitors.lbeta > 0.0 && !result.error) {
    auto [g, t] = lbeta_gradient_and_trace(mesh, result.trajectory,
                                           config.monitors.lbeta_species,
                                           config.monitors.lbeta);
    rep.note("NOTE lbeta gradient = " + format_sci(g) +
             " trace = " + format_sci(t));
  }
  return rep;
}

double trajectory_l1_distance(const MembraneMesh& mesh, const Trajectory& a,
                              const Trajectory& b) {
  if (a.states.size() != b.states.size() || a.dt != b.dt)
    throw DimensionError("trajectory_l1_distance: runs are not aligned");
  double acc = 0.0;
  for (std::size_t m = 1; m < a.states.size(); ++m) {
    for (std::size_t j = 0; j < a.states[m].size(); ++j) {
      const Field& ua = a.states[m][j];
      const Field& ub = b.states[m][j];
      for (int c = 0; c < mesh.cell_count(); ++c)
        acc += a.dt * mesh.cells[c].volume * std::abs(ua[c] - ub[c]);
    }
  }
  return acc;
}

RegularizationSweepResult regularization_sweep(const SimConfig& config,
                                               const std::vector<int>& n_values) {
  if (n_values.size() < 3)
    throw InvalidParameterError("regularization_sweep: need at least 3 levels");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] <= n_values[i - 1])
      throw InvalidParameterError(
          "regularization_sweep: levels must be strictly increasing");

  RegularizationSweepResult res;
  res.n_values = n_values;

  std::vector<SimResult> runs;
  for (int n : n_values) {
    SimConfig c = config;
    c.regularization = n;
    runs.push_back(simulate(c));
    if (runs.back().error)
      throw Error("regularization_sweep: run failed: " + *runs.back().error);
  }

  const MembraneMesh& mesh = runs.front().mesh;
  const int m = config.species_count();
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    std::vector<double> per_species(m, 0.0);
    const Trajectory& a = runs[k].trajectory;
    const Trajectory& b = runs[k + 1].trajectory;
    for (std::size_t t = 1; t < a.states.size(); ++t)
      for (int j = 0; j < m; ++j)
        for (int c = 0; c < mesh.cell_count(); ++c)
          per_species[j] += a.dt * mesh.cells[c].volume *
                            std::abs(a.states[t][j][c] - b.states[t][j][c]);
    double total = 0.0;
    for (double v : per_species) total += v;
    res.d_per_species.push_back(per_species);
    res.d_total.push_back(total);
  }

  res.strictly_decreasing = true;
  for (std::size_t k = 0; k + 1 < res.d_total.size(); ++k) {
    if (!(res.d_total[k + 1] < res.d_total[k])) {
      res.strictly_decreasing = false;
      res.offending_pair = static_cast<int>(k);
      break;
    }
  }
  return res;
}

std::string RegularizationSweepResult::csv() const {
  std::ostringstream out;
  out << "# schema=1\nn_low,n_high,d_total";
  for (std::size_t j = 0; j < d_per_species.front().size(); ++j)
    out << ",d_species_" << j + 1;
  out << "\n";
  for (std::size_t k = 0; k < d_total.size(); ++k) {
    out << n_values[k] << "," << n_values[k + 1] << ","
        << format_sci(d_total[k]);
    for (double v : d_per_species[k]) out << "," << format_sci(v);
    out << "\n";
  }
  return out.str();
}

std::string RegularizationSweepResult::summary() const {
  std::ostringstream out;
  out << (strictly_decreasing ? "PASS" : "FAIL")
      << " regularization sweep d_k strictly decreasing:";
  for (double v : d_total) out << " " << format_sci(v);
  if (!strictly_decreasing)
    out << " (offending pair index " << offending_pair << ")";
  out << "\n";
  return out.str();
}

namespace {

MeshSpec refine_spec(const MeshSpec& base, int factor) {
  MeshSpec s = base;
  s.n1 *= factor;
  s.n2 *= factor;
  s.ny *= factor;
  return s;
}

int locate_cell(const MeshSpec& spec, double x, double y) {
  auto clamp = [](int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); };
  const double hx1 = spec.length1 / spec.n1;
  const double hx2 = spec.length2 / spec.n2;
  int ix;
  bool side1 = x < spec.length1;
  if (side1)
    ix = clamp(static_cast<int>(std::floor(x / hx1)), 0, spec.n1 - 1);
  else
    ix = clamp(static_cast<int>(std::floor((x - spec.length1) / hx2)), 0,
               spec.n2 - 1);
  if (spec.dim == 1) return side1 ? ix : spec.n1 + ix;
  const double hy = spec.height / spec.ny;
  const int iy = clamp(static_cast<int>(std::floor(y / hy)), 0, spec.ny - 1);
  if (side1) return iy * spec.n1 + ix;
  return spec.n1 * spec.ny + iy * spec.n2 + ix;
}

Field project_to_coarse(const MeshSpec& coarse_spec, const MembraneMesh& coarse,
                        const MembraneMesh& fine, const Field& uf) {
  Field acc(coarse.cell_count(), 0.0);
  for (int c = 0; c < fine.cell_count(); ++c) {
    const int target = locate_cell(coarse_spec, fine.cells[c].x, fine.cells[c].y);
    acc[target] += fine.cells[c].volume * uf[c];
  }
  for (int c = 0; c < coarse.cell_count(); ++c) acc[c] /= coarse.cells[c].volume;
  return acc;
}

double final_l1_error(const MeshSpec& coarse_spec, const MembraneMesh& coarse,
                      const MultiField& uc, const MembraneMesh& fine,
                      const MultiField& uf) {
  double err = 0.0;
  for (std::size_t j = 0; j < uc.size(); ++j) {
    const Field proj = project_to_coarse(coarse_spec, coarse, fine, uf[j]);
    for (int c = 0; c < coarse.cell_count(); ++c)
      err += coarse.cells[c].volume * std::abs(uc[j][c] - proj[c]);
  }
  return err;
}

}  // namespace

RefinementStudyResult refinement_study(const SimConfig& config, int levels) {
  if (levels < 3)
    throw InvalidParameterError("refinement_study: need at least 3 levels");

  RefinementStudyResult res;

  // levels+1 runs; the transient error at level l is the successive
  // difference against the next-finer run, projected onto the level-l mesh.
  std::vector<SimResult> runs;
  std::vector<MeshSpec> specs;
  for (int l = 0; l <= levels; ++l) {
    const int factor = 1 << l;
    SimConfig c = config;
    c.mesh = refine_spec(config.mesh, factor);
    c.dt = config.dt / factor;
    c.monitors = MonitorToggles{};
    c.monitors.key_estimate = false;
    runs.push_back(simulate(c));
    specs.push_back(c.mesh);
    if (runs.back().error)
      throw Error("refinement_study: run failed: " + *runs.back().error);
  }

  res.steady_exact = true;
  for (int l = 0; l < levels; ++l) {
    const int factor = 1 << l;
    res.factors.push_back(factor);
    const SimResult& run = runs[l];

    res.transient_error.push_back(
        final_l1_error(specs[l], run.mesh, run.final_state.u, runs[l + 1].mesh,
                       runs[l + 1].final_state.u));

    if (config.mesh.dim == 1) {
      // Steady fixture against its closed form on the same mesh family.
      const double d1 = config.species[0].diffusion;
      const double d2 = d1;
      const double k = config.species[0].permeability;
      const double a = 1.0, bb = 0.0;
      SteadySolution sol = steady_state(run.mesh, d1, d2, k, a, bb);
      const double j_exact =
          (a - bb) / (config.mesh.length1 / d1 + config.mesh.length2 / d2 + 1.0 / k);
      double max_err = std::abs(sol.flux - j_exact);
      max_err = std::max(max_err, std::abs(sol.jump + j_exact / k));
      for (int cell = 0; cell < run.mesh.cell_count(); ++cell) {
        const double x = run.mesh.cells[cell].x;
        double exact;
        if (run.mesh.subdomain_of(cell) == 1)
          exact = a - j_exact * x / d1;
        else
          exact = bb + j_exact *
                           (config.mesh.length1 + config.mesh.length2 - x) / d2;
        max_err = std::max(max_err, std::abs(sol.u[cell] - exact));
      }
      res.steady_max_error.push_back(max_err);
      if (max_err > 1e-10) res.steady_exact = false;
    }
  }

  res.min_order = 1e300;
  for (std::size_t l = 0; l + 1 < res.transient_error.size(); ++l) {
    const double order =
        std::log2(res.transient_error[l] / res.transient_error[l + 1]);
    res.observed_order.push_back(order);
    res.min_order = std::min(res.min_order, order);
  }
  res.order_ok = res.min_order >= 0.8;
  return res;
}

std::string RefinementStudyResult::csv() const {
  std::ostringstream out;
  out << "# schema=1\nfactor,transient_l1_error,observed_order,steady_max_error\n";
  for (std::size_t l = 0; l < factors.size(); ++l) {
    out << factors[l] << "," << format_sci(transient_error[l]) << ",";
    if (l < observed_order.size())
      out << format_sci(observed_order[l]);
    else
      out << "nan";
    out << ",";
    if (l < steady_max_error.size())
      out << format_sci(steady_max_error[l]);
    else
      out << "nan";
    out << "\n";
  }
  return out.str();
}

std::string RefinementStudyResult::summary() const {
  std::ostringstream out;
  out << (order_ok ? "PASS" : "FAIL")
      << " transient self-convergence min order = " << format_sci(min_order)
      << " (threshold 0.8)\n";
  if (!steady_max_error.empty())
    out << (steady_exact ? "PASS" : "FAIL")
        << " steady fixture exact to 1e-10 at all levels, worst = "
        << format_sci(*std::max_element(steady_max_error.begin(),
                                        steady_max_error.end()))
        << "\n";
  return out.str();
}

DtRefinementResult dt_refinement_study(const SimConfig& config, int levels) {
  if (levels < 3)
    throw InvalidParameterError("dt_refinement_study: need at least 3 levels");

  DtRefinementResult res;
  std::vector<SimResult> runs;
  for (int l = 0; l <= levels; ++l) {
    SimConfig c = config;
    c.dt = config.dt / (1 << l);
    c.monitors = MonitorToggles{};
    c.monitors.key_estimate = false;
    runs.push_back(simulate(c));
    if (runs.back().error)
      throw Error("dt_refinement_study: run failed: " + *runs.back().error);
  }

  // Successive differences on the frozen mesh; first order in dt gives a
  // clean halving of d_l.
  for (int l = 0; l < levels; ++l) {
    res.dt_values.push_back(config.dt / (1 << l));
    const SimResult& a = runs[l];
    const SimResult& b = runs[l + 1];
    double err = 0.0;
    for (std::size_t j = 0; j < a.final_state.u.size(); ++j)
      for (int cell = 0; cell < a.mesh.cell_count(); ++cell)
        err += a.mesh.cells[cell].volume *
               std::abs(a.final_state.u[j][cell] - b.final_state.u[j][cell]);
    res.error.push_back(err);
  }

  res.min_order = 1e300;
  double max_order = -1e300;
  for (std::size_t l = 0; l + 1 < res.error.size(); ++l) {
    const double order = std::log2(res.error[l] / res.error[l + 1]);
    res.observed_order.push_back(order);
    res.min_order = std::min(res.min_order, order);
    max_order = std::max(max_order, order);
  }
  res.order_ok = res.min_order >= 0.8 && max_order <= 1.3;
  return res;
}

std::string DtRefinementResult::csv() const {
  std::ostringstream out;
  out << "# schema=1\ndt,l1_error,observed_order\n";
  for (std::size_t l = 0; l < dt_values.size(); ++l) {
    out << format_sci(dt_values[l]) << "," << format_sci(error[l]) << ",";
    if (l < observed_order.size())
      out << format_sci(observed_order[l]);
    else
      out << "nan";
    out << "\n";
  }
  return out.str();
}

std::string DtRefinementResult::summary() const {
  std::ostringstream out;
  out << (order_ok ? "PASS" : "FAIL")
      << " dt-only refinement first order in dt, min order = "
      << format_sci(min_order) << "\n";
  return out.str();
}

PoincareStudyResult poincare_study(const MeshSpec& base,
                                   const std::vector<int>& factors,
                                   const std::vector<double>& k_values) {
  if (factors.size() < 3)
    throw InvalidParameterError("poincare_study: need at least 3 mesh levels");
  if (k_values.empty())
    throw InvalidParameterError("poincare_study: need at least one k");

  PoincareStudyResult res;
  res.factors = factors;
  res.k_values = k_values;
  for (int f : factors) {
    const MembraneMesh mesh = refine_spec(base, f).build();
    std::vector<double> row;
    for (double k : k_values) {
      MembraneOperator op = assemble(mesh, Diffusion(1.0), k);
      row.push_back(poincare_constant(op));
    }
    res.c_p.push_back(row);
  }

  res.stabilized = true;
  const auto& fine = res.c_p[res.c_p.size() - 1];
  const auto& next = res.c_p[res.c_p.size() - 2];
  for (std::size_t j = 0; j < k_values.size(); ++j)
    if (std::abs(fine[j] - next[j]) > 0.05 * fine[j]) res.stabilized = false;

  res.monotone_in_k = true;
  for (const auto& row : res.c_p)
    for (std::size_t j = 0; j + 1 < row.size(); ++j)
      if (!(row[j + 1] < row[j])) res.monotone_in_k = false;

  return res;
}

std::string PoincareStudyResult::csv() const {
  std::ostringstream out;
  out << "# schema=1\nfactor";
  for (double k : k_values) out << ",c_p_k_" << format_sci(k);
  out << "\n";
  for (std::size_t l = 0; l < c_p.size(); ++l) {
    out << factors[l];
    for (double v : c_p[l]) out << "," << format_sci(v);
    out << "\n";
  }
  return out.str();
}

std::string PoincareStudyResult::summary() const {
  std::ostringstream out;
  out << (stabilized ? "PASS" : "FAIL")
      << " Poincare constant stabilizes under refinement (<5% at finest pair)\n";
  out << (monotone_in_k ? "PASS" : "FAIL")
      << " Poincare constant strictly decreasing in k\n";
  return out.str();
}

}  // namespace memfv
