#include "memfv/verify.hpp"

#include <cmath>
#include <sstream>

#include "memfv/csv.hpp"
#include "memfv/experiments.hpp"
#include "memfv/monitors.hpp"

namespace memfv {

void VerifyReport::check(bool ok, const std::string& name, double lhs,
                         double rhs) {
  std::ostringstream line;
  line << (ok ? "PASS " : "FAIL ") << name << " lhs=" << format_sci(lhs)
       << " rhs=" << format_sci(rhs);
  lines.push_back(line.str());
  passed = passed && ok;
}

std::string VerifyReport::text() const {
  std::ostringstream out;
  for (const std::string& l : lines) out << l << "\n";
  out << (passed ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return out.str();
}

namespace {

// Small deterministic generator for fixture fields.
double lcg_next(unsigned long long& s) {
  s = s * 6364136223846793005ULL + 1442695040888963407ULL;
  return static_cast<double>((s >> 11) & ((1ULL << 40) - 1)) /
         static_cast<double>(1ULL << 40);
}

Field random_field(int n, unsigned long long seed) {
  Field f(n);
  unsigned long long s = seed;
  for (int i = 0; i < n; ++i) f[i] = 2.0 * lcg_next(s) - 1.0;
  return f;
}

SimConfig annihilation_config(int n, double t_end, double dt) {
  SimConfig cfg;
  cfg.mesh.dim = 1;
  cfg.mesh.n1 = n;
  cfg.mesh.n2 = n;
  cfg.species = {{1.0, 1.0}, {0.5, 1.0}};
  cfg.reaction = "annihilation";
  cfg.initial.resize(2);
  cfg.initial[0] = {"spike", 0.0, 1.0, 0.5, 0.0, 1};
  cfg.initial[1] = {"spike", 0.0, 1.0, 1.5, 0.0, 1};
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.linear_tol = 1e-13;
  return cfg;
}

void verify_elliptic(VerifyReport& rep) {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 2, 2);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);

  const double expected[4][4] = {{6, -2, 0, 0},
                                 {-2, 3, -1, 0},
                                 {0, -1, 3, -2},
                                 {0, 0, -2, 6}};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs(op.entry(i, j) - expected[i][j]));
  rep.check(worst == 0.0, "elliptic hand-assembled 4x4 matrix", worst, 0.0);

  double sym = 0.0;
  for (int i = 0; i < op.n; ++i)
    for (int p = op.row_ptr[i]; p < op.row_ptr[i + 1]; ++p)
      sym = std::max(sym, std::abs(op.val[p] - op.entry(op.col[p], i)));
  rep.check(sym == 0.0, "elliptic operator symmetry", sym, 0.0);

  // A applied to a constant acts only through Dirichlet rows.
  const MembraneMesh mesh2 = build_rect_mesh(1.0, 1.0, 1.0, 4, 4, 4);
  const MembraneOperator op2 = assemble(mesh2, Diffusion(1.0), 2.0);
  Field ones(op2.n, 1.0);
  Field a_ones = op2.apply(ones);
  std::vector<bool> dirichlet_adjacent(op2.n, false);
  for (const DirichletFace& f : mesh2.dirichlet_faces)
    dirichlet_adjacent[f.cell] = true;
  double interior_residual = 0.0;
  for (int i = 0; i < op2.n; ++i)
    if (!dirichlet_adjacent[i])
      interior_residual = std::max(interior_residual, std::abs(a_ones[i]));
  rep.check(interior_residual < 1e-12, "elliptic constant in membrane kernel",
            interior_residual, 1e-12);

  // Bilinear form symmetry and Cauchy-Schwarz on pseudo-random fields.
  const Field v = random_field(op2.n, 42), w = random_field(op2.n, 43);
  const double bvw = bilinear_form(op2, v, w);
  const double bwv = bilinear_form(op2, w, v);
  rep.check(std::abs(bvw - bwv) <= 1e-12 * std::abs(bvw),
            "bilinear form symmetry", std::abs(bvw - bwv),
            1e-12 * std::abs(bvw));
  const double cs = std::sqrt(bilinear_form(op2, v, v)) *
                    std::sqrt(bilinear_form(op2, w, w));
  rep.check(std::abs(bvw) <= cs * (1.0 + 1e-12), "bilinear form Cauchy-Schwarz",
            std::abs(bvw), cs);

  // Solver linearity.
  const Field f1 = random_field(op2.n, 7), f2 = random_field(op2.n, 8);
  Field combo(op2.n);
  for (int i = 0; i < op2.n; ++i) combo[i] = 2.0 * f1[i] - 3.0 * f2[i];
  const Field s1 = solve_poisson(op2, f1, 1e-13).solution;
  const Field s2 = solve_poisson(op2, f2, 1e-13).solution;
  const Field sc = solve_poisson(op2, combo, 1e-13).solution;
  double lin_err = 0.0, scale = 0.0;
  for (int i = 0; i < op2.n; ++i) {
    lin_err = std::max(lin_err, std::abs(sc[i] - 2.0 * s1[i] + 3.0 * s2[i]));
    scale = std::max(scale, std::abs(sc[i]));
  }
  rep.check(lin_err <= 1e-10 * std::max(1.0, scale), "poisson solve linearity",
            lin_err, 1e-10 * std::max(1.0, scale));

  // Dual norm homogeneity and the duality inequality.
  const MembraneOperator unit = assemble(mesh2, Diffusion(1.0), 2.0);
  const double dn = dual_norm(unit, f1, 1e-13);
  Field f1s(op2.n);
  for (int i = 0; i < op2.n; ++i) f1s[i] = -2.5 * f1[i];
  const double dns = dual_norm(unit, f1s, 1e-13);
  rep.check(std::abs(dns - 2.5 * dn) <= 1e-9 * dns, "dual norm homogeneity",
            std::abs(dns - 2.5 * dn), 1e-9 * dns);
  double pairing = 0.0;
  for (int i = 0; i < op2.n; ++i) pairing += unit.mass[i] * f1[i] * v[i];
  const double duality_rhs = dn * std::sqrt(bilinear_form(unit, v, v));
  rep.check(std::abs(pairing) <= duality_rhs + 1e-10, "dual norm duality bound",
            std::abs(pairing), duality_rhs);

  // Poincare constant: monotone in k on an asymmetric domain (the symmetric
  // one has a zero-jump ground mode, so C_P does not depend on k there), and
  // near the transparent-membrane limit on the symmetric one.
  const MembraneMesh mesh_asym = build_interval_mesh(1.0, 2.0, 64, 128);
  double prev = 1e300;
  bool monotone = true;
  for (double k : {0.1, 1.0, 10.0}) {
    const double cp = poincare_constant(assemble(mesh_asym, Diffusion(1.0), k));
    if (!(cp < prev)) monotone = false;
    prev = cp;
  }
  rep.check(monotone, "poincare constant decreasing in k", prev, 1e300);
  const MembraneMesh mesh64 = build_interval_mesh(1.0, 1.0, 64, 64);
  const double cp_open =
      poincare_constant(assemble(mesh64, Diffusion(1.0), 1e8));
  const double cp_exact = 4.0 / (M_PI * M_PI);
  rep.check(std::abs(cp_open - cp_exact) <= 0.05 * cp_exact,
            "poincare constant transparent-membrane limit", cp_open, cp_exact);

  // Steady fixture exactness.
  const MembraneMesh mesh16 = build_interval_mesh(1.0, 1.0, 16, 16);
  const SteadySolution sol = steady_state(mesh16, 1.0, 1.0, 1.0, 1.0, 0.0);
  rep.check(std::abs(sol.flux - 1.0 / 3.0) <= 1e-10, "steady membrane flux",
            sol.flux, 1.0 / 3.0);
  rep.check(std::abs(sol.jump + 1.0 / 3.0) <= 1e-10, "steady membrane jump",
            sol.jump, -1.0 / 3.0);
}

void verify_parabolic(VerifyReport& rep) {
  // Zero data stays zero.
  SimConfig zero_cfg;
  zero_cfg.mesh.n1 = zero_cfg.mesh.n2 = 8;
  zero_cfg.species = {{1.0, 1.0}};
  zero_cfg.initial = {{"constant", 0.0, 0.0, 0.0, 0.0, 1}};
  zero_cfg.t_end = 0.1;
  zero_cfg.dt = 0.05;
  SimResult zr = simulate(zero_cfg);
  double zmax = 0.0;
  for (double v : zr.final_state.u[0]) zmax = std::max(zmax, std::abs(v));
  rep.check(zmax == 0.0, "zero dynamics", zmax, 0.0);

  // L2 norm decreasing without reaction.
  SimConfig heat = zero_cfg;
  heat.initial = {{"spike", 0.0, 1.0, 0.4, 0.0, 1}};
  heat.t_end = 0.25;
  heat.dt = 1.0 / 64.0;
  SimResult hr = simulate(heat);
  bool l2_dec = true;
  double prev_l2 = 1e300;
  for (const MonitorRecord& r : hr.records) {
    if (r.l2[0] > prev_l2 * (1.0 + 1e-12)) l2_dec = false;
    prev_l2 = r.l2[0];
  }
  rep.check(l2_dec, "implicit step L2 dissipation", prev_l2, 1e300);

  // Symmetric annihilation data stays symmetric.
  SimConfig sym = annihilation_config(16, 0.125, 1.0 / 64.0);
  sym.species[1] = sym.species[0];
  sym.initial[1] = sym.initial[0];
  SimResult sr = simulate(sym);
  double asym = 0.0;
  for (std::size_t m = 0; m < sr.trajectory.states.size(); ++m)
    for (int c = 0; c < sr.mesh.cell_count(); ++c)
      asym = std::max(asym, std::abs(sr.trajectory.states[m][0][c] -
                                     sr.trajectory.states[m][1][c]));
  rep.check(asym <= 1e-12, "annihilation symmetry", asym, 1e-12);

  // Standard annihilation run: positivity, mass, budgets.
  SimConfig ann = annihilation_config(32, 0.125, 1.0 / 128.0);
  SimResult ar = simulate(ann);
  RunReport rr = assess_run(ar, ann, builtin_annihilation());
  for (const std::string& l : rr.lines) rep.lines.push_back("  " + l);
  rep.check(rr.passed, "standard annihilation run assertions", rr.passed, 1.0);

  // Transient drives to the steady fixture profile.
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 16, 16);
  auto [op, load] = steady_fixture_system(mesh, 1.0, 1.0, 1.0, 1.0, 0.0);
  const SteadySolution target = steady_state(mesh, 1.0, 1.0, 1.0, 1.0, 0.0);
  Field u(op.n, 0.0);
  const double dt = 0.05;
  for (int s = 0; s < 400; ++s) {
    Field b(op.n);
    for (int i = 0; i < op.n; ++i) b[i] = op.mass[i] * u[i] + dt * load[i];
    u = solve_shifted(op, dt, b, u, 1e-13).solution;
  }
  double steady_err = 0.0;
  for (int i = 0; i < op.n; ++i)
    steady_err = std::max(steady_err, std::abs(u[i] - target.u[i]));
  rep.check(steady_err <= 1e-8, "transient converges to steady profile",
            steady_err, 1e-8);
}

void verify_monitors(VerifyReport& rep) {
  // Pure dissipation: dual norm of U nonincreasing, exactly.
  SimConfig heat;
  heat.mesh.n1 = heat.mesh.n2 = 32;
  heat.species = {{1.0, 1.0}};
  heat.initial = {{"spike", 0.0, 1.0, 0.3, 0.0, 1}};
  heat.t_end = 0.25;
  heat.dt = 1.0 / 128.0;
  heat.linear_tol = 1e-14;
  SimResult hr = simulate(heat);
  double worst_incr = -1e300;
  double prev = 1e300;
  for (const MonitorRecord& r : hr.records) {
    worst_incr = std::max(worst_incr, r.dual_norm_u - prev);
    prev = r.dual_norm_u;
  }
  rep.check(worst_incr <= 1e-12, "dissipation dual norm nonincreasing",
            worst_incr, 1e-12);

  // Key estimate on the standard annihilation run.
  SimConfig ann = annihilation_config(32, 0.25, 1.0 / 128.0);
  SimResult ar = simulate(ann);
  KeyEstimateReport key = key_estimate_check(ar.mesh, ar.trajectory, ann, 1.0);
  rep.check(key.energy_ok, "key estimate energy inequality", key.e.back(),
            key.bound.back());
  rep.check(key.l2_ok, "key estimate L2 space-time bound", key.l2_spacetime,
            key.c3);

  // Distinct permeabilities are refused.
  SimConfig bad = ann;
  bad.monitors.key_estimate = false;
  bad.species[1].permeability = 2.0;
  bool refused = false;
  try {
    SimResult br = simulate(bad);
    key_estimate_check(br.mesh, br.trajectory, bad, 1.0);
  } catch (const InvalidParameterError&) {
    refused = true;
  }
  rep.check(refused, "key estimate refuses distinct k", refused, 1.0);

  // Truncation object invariants on a grid.
  bool trunc_ok = true;
  for (double b : {4.0, 10.0}) {
    const Truncation tb = make_truncation(b);
    for (int i = 0; i <= 20000; ++i) {
      const double s = b * 1.2 * i / 20000.0;
      const double d = tb.deriv(s);
      const double dd = tb.second(s);
      if (d < 0.0 || d > 1.0 || dd < -1.0 || dd > 0.0) trunc_ok = false;
      if (s <= b - 2.0 && tb.value(s) != s) trunc_ok = false;
      if (s >= b && tb.deriv(s) != 0.0) trunc_ok = false;
    }
  }
  rep.check(trunc_ok, "truncation object invariants", trunc_ok, 1.0);

  // Truncation energy on the steady fixture held constant in time: the
  // gradient part integrates to T * J^2 (L1/D1 + L2/D2) exactly.
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 16, 16);
  const SteadySolution sol = steady_state(mesh, 1.0, 1.0, 1.0, 1.0, 0.0);
  Trajectory traj;
  traj.dt = 0.1;
  for (int m = 0; m <= 10; ++m) {
    traj.times.push_back(m * traj.dt);
    traj.states.push_back({sol.u});
  }
  SimConfig scfg;
  scfg.mesh.n1 = scfg.mesh.n2 = 16;
  scfg.species = {{1.0, 1.0}};
  scfg.initial = {{"constant", 0.0, 0.0, 0.0, 0.0, 1}};
  scfg.t_end = 1.0;
  scfg.dt = 0.1;
  TruncationEnergyReport ter = truncation_energy_check(
      mesh, traj, scfg, builtin_zero(1), 0, 4.0);
  // Interior-face energy of the piecewise-linear profile: per side
  // J^2 (L - h)/D, h the cell width.
  const double exact_lhs = 1.0 * (1.0 / 9.0) * 2.0 * (1.0 - 1.0 / 16.0);
  rep.check(std::abs(ter.lhs - exact_lhs) <= 1e-10 * exact_lhs,
            "steady gradient energy closed form", ter.lhs, exact_lhs);
  rep.check(ter.ok, "truncation energy inequality", ter.lhs, ter.rhs);

  // Linear-in-time field has time-translation exponent 1.
  Trajectory lin;
  lin.dt = 1.0 / 64.0;
  const int n = mesh.cell_count();
  for (int m = 0; m <= 64; ++m) {
    Field w(n);
    for (int c = 0; c < n; ++c)
      w[c] = m * lin.dt * std::sin(mesh.cells[c].x);
    lin.times.push_back(m * lin.dt);
    lin.states.push_back({w});
  }
  TimeTranslationReport tt = time_translation_modulus(
      mesh, lin, 0, {lin.dt, 2 * lin.dt, 4 * lin.dt, 8 * lin.dt, 16 * lin.dt});
  rep.check(std::abs(tt.slope - 1.0) <= 1e-9, "linear field translation slope",
            tt.slope, 1.0);
}

}  // namespace

VerifyReport run_verify_suite(const std::string& suite) {
  VerifyReport rep;
  bool known = false;
  if (suite == "all" || suite == "elliptic") {
    verify_elliptic(rep);
    known = true;
  }
  if (suite == "all" || suite == "parabolic") {
    verify_parabolic(rep);
    known = true;
  }
  if (suite == "all" || suite == "monitors") {
    verify_monitors(rep);
    known = true;
  }
  if (!known)
    throw InvalidParameterError(
        "unknown verify suite '" + suite +
        "'; available: all, elliptic, parabolic, monitors");
  return rep;
}

}  // namespace memfv
