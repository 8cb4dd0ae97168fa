#include "memfv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "memfv/reactions.hpp"

namespace memfv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& msg) {
  throw InvalidParameterError("config " + origin + ": " + path + ": " + msg);
}

void reject_unknown(const json& j, const std::string& origin,
                    const std::string& path, const std::set<std::string>& known) {
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) fail(origin, path + "." + key, "unknown key");
}

double get_number(const json& j, const std::string& origin,
                  const std::string& path, const std::string& key,
                  bool required, double fallback) {
  if (!j.contains(key)) {
    if (required) fail(origin, path + "." + key, "missing required field");
    return fallback;
  }
  if (!j[key].is_number())
    fail(origin, path + "." + key, "expected a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& origin, const std::string& path,
            const std::string& key, bool required, int fallback) {
  if (!j.contains(key)) {
    if (required) fail(origin, path + "." + key, "missing required field");
    return fallback;
  }
  if (!j[key].is_number_integer())
    fail(origin, path + "." + key, "expected an integer");
  return j[key].get<int>();
}

bool get_bool(const json& j, const std::string& origin, const std::string& path,
              const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) fail(origin, path + "." + key, "expected a boolean");
  return j[key].get<bool>();
}

std::string get_string(const json& j, const std::string& origin,
                       const std::string& path, const std::string& key,
                       bool required, const std::string& fallback) {
  if (!j.contains(key)) {
    if (required) fail(origin, path + "." + key, "missing required field");
    return fallback;
  }
  if (!j[key].is_string()) fail(origin, path + "." + key, "expected a string");
  return j[key].get<std::string>();
}

SimConfig from_json(const json& root, const std::string& origin) {
  if (!root.is_object()) fail(origin, "$", "top level must be an object");
  reject_unknown(root, origin, "$",
                 {"mesh", "species", "reaction", "regularization",
                  "mollify_initial", "initial", "t_end", "dt", "monitors",
                  "tolerances", "steady"});

  SimConfig cfg;

  if (!root.contains("mesh")) fail(origin, "$.mesh", "missing required field");
  {
    const json& m = root["mesh"];
    if (!m.is_object()) fail(origin, "$.mesh", "expected an object");
    reject_unknown(m, origin, "$.mesh",
                   {"dim", "length1", "length2", "height", "n1", "n2", "ny"});
    cfg.mesh.dim = get_int(m, origin, "$.mesh", "dim", false, 1);
    if (cfg.mesh.dim != 1 && cfg.mesh.dim != 2)
      fail(origin, "$.mesh.dim", "must be 1 or 2");
    cfg.mesh.length1 = get_number(m, origin, "$.mesh", "length1", true, 0.0);
    cfg.mesh.length2 = get_number(m, origin, "$.mesh", "length2", true, 0.0);
    cfg.mesh.height = get_number(m, origin, "$.mesh", "height", false, 1.0);
    cfg.mesh.n1 = get_int(m, origin, "$.mesh", "n1", true, 0);
    cfg.mesh.n2 = get_int(m, origin, "$.mesh", "n2", true, 0);
    cfg.mesh.ny = get_int(m, origin, "$.mesh", "ny", false, 2);
  }

  if (!root.contains("species") || !root["species"].is_array() ||
      root["species"].empty())
    fail(origin, "$.species", "need a nonempty array of species");
  int idx = 0;
  for (const json& s : root["species"]) {
    const std::string path = "$.species[" + std::to_string(idx++) + "]";
    if (!s.is_object()) fail(origin, path, "expected an object");
    reject_unknown(s, origin, path, {"diffusion", "permeability"});
    SpeciesConfig sc;
    sc.diffusion = get_number(s, origin, path, "diffusion", true, 0.0);
    sc.permeability = get_number(s, origin, path, "permeability", true, 0.0);
    cfg.species.push_back(sc);
  }

  if (root.contains("reaction")) {
    const json& r = root["reaction"];
    if (r.is_string()) {
      cfg.reaction = r.get<std::string>();
    } else if (r.is_object()) {
      reject_unknown(r, origin, "$.reaction", {"label", "rates"});
      cfg.reaction = get_string(r, origin, "$.reaction", "label", true, "");
      if (r.contains("rates")) {
        if (!r["rates"].is_array())
          fail(origin, "$.reaction.rates", "expected an array");
        for (const json& v : r["rates"]) {
          if (!v.is_number())
            fail(origin, "$.reaction.rates", "expected numbers");
          cfg.reaction_rates.push_back(v.get<double>());
        }
      }
    } else {
      fail(origin, "$.reaction", "expected a string or an object");
    }
  }

  if (root.contains("regularization")) {
    const json& r = root["regularization"];
    if (r.is_string()) {
      if (r.get<std::string>() != "off")
        fail(origin, "$.regularization", "expected an integer level or \"off\"");
      cfg.regularization = 0;
    } else if (r.is_number_integer()) {
      cfg.regularization = r.get<int>();
    } else {
      fail(origin, "$.regularization", "expected an integer level or \"off\"");
    }
  }
  cfg.mollify_initial_data = get_bool(root, origin, "$", "mollify_initial", false);

  if (!root.contains("initial") || !root["initial"].is_array())
    fail(origin, "$.initial", "need an array of initial data specs");
  idx = 0;
  for (const json& s : root["initial"]) {
    const std::string path = "$.initial[" + std::to_string(idx++) + "]";
    if (!s.is_object()) fail(origin, path, "expected an object");
    reject_unknown(s, origin, path,
                   {"type", "value", "mass", "x", "y", "subdomain"});
    InitialSpec spec;
    spec.type = get_string(s, origin, path, "type", true, "");
    spec.value = get_number(s, origin, path, "value", false, 0.0);
    spec.mass = get_number(s, origin, path, "mass", false, 1.0);
    spec.x = get_number(s, origin, path, "x", false, 0.0);
    spec.y = get_number(s, origin, path, "y", false, 0.0);
    spec.subdomain = get_int(s, origin, path, "subdomain", false, 1);
    if (spec.type != "constant" && spec.type != "spike" &&
        spec.type != "indicator" && spec.type != "product_sine")
      fail(origin, path + ".type",
           "must be constant, spike, indicator or product_sine");
    if (spec.subdomain != 1 && spec.subdomain != 2)
      fail(origin, path + ".subdomain", "must be 1 or 2");
    cfg.initial.push_back(spec);
  }

  cfg.t_end = get_number(root, origin, "$", "t_end", true, 0.0);
  cfg.dt = get_number(root, origin, "$", "dt", true, 0.0);

  if (root.contains("monitors")) {
    const json& m = root["monitors"];
    if (!m.is_object()) fail(origin, "$.monitors", "expected an object");
    reject_unknown(m, origin, "$.monitors",
                   {"key_estimate", "truncation_levels", "truncation_species",
                    "weighted_gradient_alpha", "weighted_gradient_species",
                    "lbeta", "lbeta_species"});
    cfg.monitors.key_estimate =
        get_bool(m, origin, "$.monitors", "key_estimate", true);
    if (m.contains("truncation_levels")) {
      if (!m["truncation_levels"].is_array())
        fail(origin, "$.monitors.truncation_levels", "expected an array");
      for (const json& v : m["truncation_levels"]) {
        if (!v.is_number())
          fail(origin, "$.monitors.truncation_levels", "expected numbers");
        cfg.monitors.truncation_levels.push_back(v.get<double>());
      }
    }
    cfg.monitors.truncation_species =
        get_int(m, origin, "$.monitors", "truncation_species", false, 0);
    cfg.monitors.weighted_gradient_alpha = get_number(
        m, origin, "$.monitors", "weighted_gradient_alpha", false, -1.0);
    cfg.monitors.weighted_gradient_species =
        get_int(m, origin, "$.monitors", "weighted_gradient_species", false, 0);
    cfg.monitors.lbeta = get_number(m, origin, "$.monitors", "lbeta", false, 0.0);
    cfg.monitors.lbeta_species =
        get_int(m, origin, "$.monitors", "lbeta_species", false, 0);
  }

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) fail(origin, "$.tolerances", "expected an object");
    reject_unknown(t, origin, "$.tolerances",
                   {"linear", "positivity", "key_estimate_slack",
                    "truncation_slack"});
    cfg.linear_tol = get_number(t, origin, "$.tolerances", "linear", false, 1e-12);
    cfg.positivity_tol =
        get_number(t, origin, "$.tolerances", "positivity", false, 1e-12);
    cfg.key_estimate_slack = get_number(t, origin, "$.tolerances",
                                        "key_estimate_slack", false, 0.05);
    cfg.truncation_slack =
        get_number(t, origin, "$.tolerances", "truncation_slack", false, 0.10);
  }

  if (root.contains("steady")) {
    const json& st = root["steady"];
    if (!st.is_object()) fail(origin, "$.steady", "expected an object");
    reject_unknown(st, origin, "$.steady", {"a", "c"});
    cfg.steady_a = get_number(st, origin, "$.steady", "a", false, 1.0);
    cfg.steady_c = get_number(st, origin, "$.steady", "c", false, 0.0);
  }

  // Label check first so unknown labels list the alternatives, then the
  // structural invariants.
  ReactionSystem sys =
      make_reaction(cfg.reaction, cfg.reaction_rates, cfg.species_count());
  if (sys.species_count != cfg.species_count())
    fail(origin, "$.species",
         "reaction '" + cfg.reaction + "' expects " +
             std::to_string(sys.species_count) + " species, config has " +
             std::to_string(cfg.species_count()));
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw InvalidParameterError("config " + origin + ": " + e.what());
  }
  return cfg;
}

}  // namespace

SimConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameterError("config " + origin + ": " + e.what());
  }
  return from_json(root, origin);
}

SimConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string echo_config(const SimConfig& cfg) {
  json root;
  root["mesh"] = {{"dim", cfg.mesh.dim},       {"length1", cfg.mesh.length1},
                  {"length2", cfg.mesh.length2}, {"height", cfg.mesh.height},
                  {"n1", cfg.mesh.n1},          {"n2", cfg.mesh.n2},
                  {"ny", cfg.mesh.ny}};
  root["species"] = json::array();
  for (const SpeciesConfig& s : cfg.species)
    root["species"].push_back(
        {{"diffusion", s.diffusion}, {"permeability", s.permeability}});
  root["reaction"] = {{"label", cfg.reaction}, {"rates", cfg.reaction_rates}};
  root["regularization"] = cfg.regularization;
  root["mollify_initial"] = cfg.mollify_initial_data;
  root["initial"] = json::array();
  for (const InitialSpec& s : cfg.initial)
    root["initial"].push_back({{"type", s.type},
                               {"value", s.value},
                               {"mass", s.mass},
                               {"x", s.x},
                               {"y", s.y},
                               {"subdomain", s.subdomain}});
  root["t_end"] = cfg.t_end;
  root["dt"] = cfg.dt;
  root["monitors"] = {
      {"key_estimate", cfg.monitors.key_estimate},
      {"truncation_levels", cfg.monitors.truncation_levels},
      {"truncation_species", cfg.monitors.truncation_species},
      {"weighted_gradient_alpha", cfg.monitors.weighted_gradient_alpha},
      {"weighted_gradient_species", cfg.monitors.weighted_gradient_species},
      {"lbeta", cfg.monitors.lbeta},
      {"lbeta_species", cfg.monitors.lbeta_species}};
  root["tolerances"] = {{"linear", cfg.linear_tol},
                        {"positivity", cfg.positivity_tol},
                        {"key_estimate_slack", cfg.key_estimate_slack},
                        {"truncation_slack", cfg.truncation_slack}};
  root["steady"] = {{"a", cfg.steady_a}, {"c", cfg.steady_c}};
  return root.dump(2) + "\n";
}

}  // namespace memfv
