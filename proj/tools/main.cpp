// Command-line driver: run simulations, verify shipped fixtures, run
// parameter sweeps and the steady membrane fixture.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memfv/config.hpp"
#include "memfv/csv.hpp"
#include "memfv/experiments.hpp"
#include "memfv/verify.hpp"

namespace fs = std::filesystem;
using namespace memfv;

namespace {

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw InvalidParameterError("--values: empty list");
  return out;
}

std::vector<int> as_int_list(const std::vector<double>& v) {
  std::vector<int> out;
  for (double x : v) {
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-12)
      throw InvalidParameterError("--values: expected integers");
    out.push_back(i);
  }
  return out;
}

void require_power_of_two_factors(const std::vector<int>& factors) {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i] != (1 << i))
      throw InvalidParameterError(
          "--values for h/dt sweeps must be the refinement factors 1,2,4,...");
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const SimConfig cfg = parse_config(config_path);
  fs::create_directories(out_dir);
  write_text_file(out_dir + "/config.echo", echo_config(cfg));

  const ReactionSystem reaction =
      make_reaction(cfg.reaction, cfg.reaction_rates, cfg.species_count());
  const SimResult result = simulate(cfg);
  write_text_file(out_dir + "/trace.csv",
                  records_csv(cfg, result.records,
                              result.error ? *result.error : ""));

  const RunReport report = assess_run(result, cfg, reaction);
  write_text_file(out_dir + "/summary.txt", report.text());
  std::cout << report.text();
  return report.passed && !result.error ? 0 : 1;
}

int cmd_verify(const std::string& suite) {
  const VerifyReport rep = run_verify_suite(suite);
  std::cout << rep.text();
  return rep.passed ? 0 : 1;
}

int cmd_sweep(const std::string& param, const std::string& values_text,
              const std::string& config_path, const std::string& out_dir) {
  const SimConfig cfg = parse_config(config_path);
  const std::vector<double> values = parse_value_list(values_text);
  fs::create_directories(out_dir);
  write_text_file(out_dir + "/config.echo", echo_config(cfg));

  std::string table, summary;
  if (param == "n") {
    const RegularizationSweepResult res =
        regularization_sweep(cfg, as_int_list(values));
    table = res.csv();
    summary = res.summary();
    write_text_file(out_dir + "/sweep_n_table.csv", table);
  } else if (param == "h") {
    const std::vector<int> factors = as_int_list(values);
    require_power_of_two_factors(factors);
    const RefinementStudyResult res =
        refinement_study(cfg, static_cast<int>(factors.size()));
    table = res.csv();
    summary = res.summary();
    write_text_file(out_dir + "/sweep_h_table.csv", table);
  } else if (param == "dt") {
    const std::vector<int> factors = as_int_list(values);
    require_power_of_two_factors(factors);
    const DtRefinementResult res =
        dt_refinement_study(cfg, static_cast<int>(factors.size()));
    table = res.csv();
    summary = res.summary();
    write_text_file(out_dir + "/sweep_dt_table.csv", table);
  } else if (param == "k") {
    const PoincareStudyResult res =
        poincare_study(cfg.mesh, {1, 2, 4}, values);
    table = res.csv();
    summary = res.summary();
    write_text_file(out_dir + "/sweep_k_table.csv", table);
  } else {
    throw InvalidParameterError("--param must be one of n, h, dt, k");
  }

  write_text_file(out_dir + "/summary.txt", summary);
  std::cout << summary;
  return summary.find("FAIL") == std::string::npos ? 0 : 1;
}

int cmd_steady(const std::string& config_path) {
  const SimConfig cfg = parse_config(config_path);
  if (cfg.mesh.dim != 1) {
    std::cerr << "steady: requires a 1D mesh\n";
    return 2;
  }
  const MembraneMesh mesh = cfg.mesh.build();
  const double d = cfg.species[0].diffusion;
  const double k = cfg.species[0].permeability;
  const SteadySolution sol =
      steady_state(mesh, d, d, k, cfg.steady_a, cfg.steady_c);
  const double j_exact = (cfg.steady_a - cfg.steady_c) /
                         (cfg.mesh.length1 / d + cfg.mesh.length2 / d + 1.0 / k);
  const double jump_exact = -j_exact / k;
  const double tol = 1e-10 * std::max(1.0, std::abs(j_exact));
  const bool ok = std::abs(sol.flux - j_exact) <= tol &&
                  std::abs(sol.jump - jump_exact) <= tol;
  std::cout << (ok ? "PASS" : "FAIL") << " steady fixture flux="
            << format_sci(sol.flux) << " expected=" << format_sci(j_exact)
            << " jump=" << format_sci(sol.jump)
            << " expected=" << format_sci(jump_exact) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-volume membrane reaction-diffusion simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", suite = "all", param, values;

  CLI::App* run = app.add_subcommand("run", "simulate one configuration");
  run->add_option("--config", config_path, "config file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");

  CLI::App* verify = app.add_subcommand("verify", "run shipped fixture checks");
  verify->add_option("--suite", suite, "all | elliptic | parabolic | monitors");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter campaign");
  sweep->add_option("--param", param, "n | h | dt | k")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--config", config_path, "config file (JSON)")->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI::App* steady = app.add_subcommand("steady", "1D steady membrane fixture");
  steady->add_option("--config", config_path, "config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (verify->parsed()) return cmd_verify(suite);
    if (sweep->parsed()) return cmd_sweep(param, values, config_path, out_dir);
    if (steady->parsed()) return cmd_steady(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
