#include "memfv/reactions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace memfv {

ReactionSystem builtin_annihilation() {
  ReactionSystem sys;
  sys.species_count = 2;
  sys.eval = [](const double* u, double* f) {
    const double r = -u[0] * u[1];
    f[0] = r;
    f[1] = r;
  };
  sys.constants.growth = 1.0;
  sys.constants.mass_control = 1.0;
  sys.constants.lipschitz_box = 10.0;
  sys.constants.lipschitz = 2.0 * sys.constants.lipschitz_box;
  sys.label = "annihilation";
  sys.mass_dissipative = true;
  return sys;
}

ReactionSystem builtin_transport_demo(const std::vector<double>& rates) {
  if (rates.size() != 6)
    throw InvalidParameterError("transport_demo: expected 6 rate constants");
  for (double r : rates)
    if (r < 0.0)
      throw InvalidParameterError("transport_demo: rates must be nonnegative");

  // Species: 0 RanGTP, 1 RanGDP, 2 receptor-Ran complex, 3 cargo,
  // 4 free receptor, 5 cargo-receptor complex.
  // r0: T + Rt -> Tr      r1: Tr -> Rd        r2: Rd -> Rt
  // r3: C + T -> Tc       r4: Tc -> T         r5: Rt -> Rd
  ReactionSystem sys;
  sys.species_count = 6;
  const std::vector<double> r = rates;
  sys.eval = [r](const double* u, double* f) {
    const double bind_ran = r[0] * u[4] * u[0];
    const double hydrolyse_complex = r[1] * u[2];
    const double recharge = r[2] * u[1];
    const double bind_cargo = r[3] * u[3] * u[4];
    const double release = r[4] * u[5];
    const double hydrolyse_free = r[5] * u[0];
    f[0] = -bind_ran + recharge - hydrolyse_free;
    f[1] = hydrolyse_complex - recharge + hydrolyse_free;
    f[2] = bind_ran - hydrolyse_complex;
    f[3] = -bind_cargo;
    f[4] = -bind_ran - bind_cargo + release;
    f[5] = bind_cargo - release;
  };
  const double rate_sum = std::accumulate(rates.begin(), rates.end(), 0.0);
  sys.constants.growth = std::max(1.0, rate_sum);
  sys.constants.mass_control = 0.0;  // binding-only stoichiometry, sum f <= 0
  sys.constants.lipschitz_box = 10.0;
  sys.constants.lipschitz = rate_sum * (1.0 + 2.0 * sys.constants.lipschitz_box);
  sys.label = "transport_demo";
  sys.mass_dissipative = true;
  return sys;
}

ReactionSystem builtin_zero(int species_count) {
  if (species_count < 1)
    throw InvalidParameterError("zero reaction: species_count must be >= 1");
  ReactionSystem sys;
  sys.species_count = species_count;
  sys.eval = [species_count](const double*, double* f) {
    std::fill(f, f + species_count, 0.0);
  };
  sys.label = "none";
  sys.mass_dissipative = true;
  return sys;
}

std::vector<std::string> reaction_labels() {
  return {"none", "annihilation", "transport_demo"};
}

ReactionSystem make_reaction(const std::string& label,
                             const std::vector<double>& rates,
                             int species_count) {
  if (label == "none") return builtin_zero(species_count);
  if (label == "annihilation") return builtin_annihilation();
  if (label == "transport_demo") {
    std::vector<double> r = rates;
    if (r.empty()) r.assign(6, 1.0);
    return builtin_transport_demo(r);
  }
  std::ostringstream msg;
  msg << "unknown reaction label '" << label << "'; available:";
  for (const std::string& l : reaction_labels()) msg << " " << l;
  throw InvalidParameterError(msg.str());
}

HypothesisReport check_hypotheses(const ReactionSystem& sys, double box,
                                  long samples) {
  if (box <= 0.0) throw InvalidParameterError("check_hypotheses: M must be > 0");
  if (samples < 1000)
    throw InvalidParameterError("check_hypotheses: need at least 1000 samples");

  const int m = sys.species_count;

  auto estimate = [&](long count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, box);
    std::vector<double> u(m), v(m), fu(m), fv(m);
    double growth = 0.0, mass = -1e300, lip = 0.0;
    for (long s = 0; s < count; ++s) {
      double su = 0.0, squ = 0.0;
      for (int j = 0; j < m; ++j) {
        u[j] = uni(rng);
        v[j] = uni(rng);
        su += u[j];
        squ += u[j] * u[j];
      }
      sys.eval(u.data(), fu.data());
      sys.eval(v.data(), fv.data());
      double fsum = 0.0, fdiff = 0.0, udiff = 0.0;
      for (int j = 0; j < m; ++j) {
        growth = std::max(growth, std::abs(fu[j]) / (1.0 + squ));
        fsum += fu[j];
        fdiff += std::abs(fu[j] - fv[j]);
        udiff += std::abs(u[j] - v[j]);
      }
      mass = std::max(mass, fsum / (1.0 + su));
      if (udiff > 0.0) lip = std::max(lip, fdiff / udiff);
    }
    struct Est {
      double growth, mass, lip;
    };
    return Est{growth, mass, lip};
  };

  const auto base = estimate(samples, 0x2545F4914F6CDD1DULL);
  const auto doubled = estimate(2 * samples, 0x9E3779B97F4A7C15ULL);

  HypothesisReport rep;
  rep.growth_estimate = doubled.growth;
  rep.mass_control_estimate = doubled.mass;
  rep.lipschitz_estimate = doubled.lip;

  auto stable = [](double a, double b) { return b <= 1.5 * std::abs(a) + 1e-9; };
  rep.stable_under_doubling = stable(base.growth, doubled.growth) &&
                              stable(base.mass, doubled.mass) &&
                              stable(base.lip, doubled.lip);

  // Quasi-positivity on each hyperplane u_i = 0.
  std::mt19937_64 rng(0xDA942042E4DD58B5ULL);
  std::uniform_real_distribution<double> uni(0.0, box);
  std::vector<double> u(m), f(m);
  for (int i = 0; i < m && rep.quasi_positive; ++i) {
    for (long s = 0; s < samples; ++s) {
      for (int j = 0; j < m; ++j) u[j] = uni(rng);
      u[i] = 0.0;
      sys.eval(u.data(), f.data());
      if (f[i] < -1e-12) {
        rep.quasi_positive = false;
        rep.quasi_positivity_species = i;
        rep.quasi_positivity_worst = f[i];
        break;
      }
    }
  }

  rep.passed = rep.quasi_positive && rep.stable_under_doubling;
  return rep;
}

RegularizedReaction regularize(const ReactionSystem& sys, int n) {
  if (n < 1) throw InvalidParameterError("regularize: level must be >= 1");
  return RegularizedReaction{sys, n};
}

double Truncation::deriv(double s) const {
  if (s <= level - 2.0) return 1.0;
  if (s >= level) return 0.0;
  const double tau = s - level + 2.0;
  return 0.5 * (1.0 + std::cos(0.5 * M_PI * tau));
}

double Truncation::value(double s) const {
  if (s <= level - 2.0) return s;
  if (s >= level) return level - 1.0;
  const double tau = s - level + 2.0;
  return level - 2.0 + 0.5 * tau + std::sin(0.5 * M_PI * tau) / M_PI;
}

double Truncation::second(double s) const {
  if (s <= level - 2.0 || s >= level) return 0.0;
  const double tau = s - level + 2.0;
  return -0.25 * M_PI * std::sin(0.5 * M_PI * tau);
}

Truncation make_truncation(double b) {
  if (b < 4.0)
    throw InvalidParameterError(
        "make_truncation: level must be >= 4 (transition width 2 with |T''| <= 1)");
  return Truncation{b};
}

Field mollify_initial(const Field& u0, int n, const MembraneMesh& mesh) {
  if (n < 1) throw InvalidParameterError("mollify_initial: level must be >= 1");
  if (static_cast<int>(u0.size()) != mesh.cell_count())
    throw DimensionError("mollify_initial: field size does not match mesh");
  for (double v : u0)
    if (v < 0.0) throw InvalidDataError("mollify_initial: negative input value");

  const int nc = mesh.cell_count();
  Field clipped(nc);
  for (int i = 0; i < nc; ++i) clipped[i] = std::min(u0[i], double(n));

  const double delta = 1.0 / n;
  Field out(nc, 0.0);
  for (int i = 0; i < nc; ++i) {
    const Cell& ci = mesh.cells[i];
    double wsum = 0.0, acc = 0.0;
    for (int j = 0; j < nc; ++j) {
      const Cell& cj = mesh.cells[j];
      if (cj.subdomain != ci.subdomain) continue;  // no smoothing across the membrane
      const double dx = cj.x - ci.x;
      const double dy = cj.y - ci.y;
      const double r2 = dx * dx + dy * dy;
      if (r2 > delta * delta) continue;
      const double w = std::exp(-4.0 * r2 / (delta * delta)) * cj.volume;
      wsum += w;
      acc += w * clipped[j];
    }
    out[i] = acc / wsum;  // the cell itself always contributes
  }
  return out;
}

}  // namespace memfv
