#include <fstream>
#include <set>
#include <sstream>

#include "catdec/cli.hpp"
#include "json.hpp"

namespace catdec::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kSharedKeys = {"units",  "output_format", "output_path",
                                           "oracle", "quadrature",    "seed"};
const std::set<std::string> kSiKeys = {"mass_kg",          "sigma_m",       "separation_m",
                                       "velocity_m_per_s", "temperature_K", "gamma_per_s"};
const std::set<std::string> kReducedKeys = {"separation", "theta", "velocity", "gamma"};

double number(const json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw UsageError("config: missing key '" + key + "'");
  if (!it->is_number()) throw UsageError("config: '" + key + "' must be a number");
  return it->get<double>();
}

double number_or(const json& doc, const std::string& key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

std::optional<double> optional_number(const json& doc, const std::string& key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return number(doc, key);
}

QuadratureSpec parse_quadrature(const json& q) {
  if (!q.is_object()) throw UsageError("config: 'quadrature' must be an object");
  QuadratureSpec spec;
  for (const auto& [key, value] : q.items()) {
    if (key == "order" || key == "max_order") {
      if (!value.is_number_integer()) throw UsageError("config: quadrature." + key + " must be an integer");
      (key == "order" ? spec.order : spec.max_order) = value.get<int>();
    } else if (key == "convergence_tol") {
      if (!value.is_number()) throw UsageError("config: quadrature.convergence_tol must be a number");
      spec.convergence_tol = value.get<double>();
    } else {
      throw UsageError("config: unknown key 'quadrature." + key + "'");
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return spec;
}

}  // namespace

PhysicalConstants RunConfig::constants() const {
  return units == UnitSystem::reduced ? natural_units() : PhysicalConstants{};
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config: top level must be an object");

  RunConfig config;
  if (doc.contains("units")) {
    const json& units = doc.at("units");
    if (units == "si") {
      config.units = UnitSystem::si;
    } else if (units == "reduced") {
      config.units = UnitSystem::reduced;
    } else {
      throw UsageError("config: 'units' must be \"si\" or \"reduced\"");
    }
  }
  const auto& physics_keys = config.units == UnitSystem::si ? kSiKeys : kReducedKeys;
  for (const auto& [key, value] : doc.items()) {
    if (!kSharedKeys.count(key) && !physics_keys.count(key)) {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }

  if (config.units == UnitSystem::si) {
    config.params.mass = number(doc, "mass_kg");
    config.params.sigma = number(doc, "sigma_m");
    config.params.separation = number(doc, "separation_m");
    config.params.drift_velocity = number_or(doc, "velocity_m_per_s", 0.0);
    config.params.temperature = number(doc, "temperature_K");
    config.gamma = optional_number(doc, "gamma_per_s");
  } else {
    config.params = natural_unit_params(number(doc, "separation"), number(doc, "theta"),
                                        number_or(doc, "velocity", 0.0));
    config.gamma = optional_number(doc, "gamma");
  }
  config.params.validate();

  if (doc.contains("output_format")) {
    const json& f = doc.at("output_format");
    if (f == "csv") {
      config.output_format = OutputFormat::csv;
    } else if (f == "json") {
      config.output_format = OutputFormat::json;
    } else {
      throw UsageError("config: 'output_format' must be \"csv\" or \"json\"");
    }
  }
  if (doc.contains("output_path")) {
    if (!doc.at("output_path").is_string()) throw UsageError("config: 'output_path' must be a string");
    config.output_path = doc.at("output_path").get<std::string>();
  }
  if (doc.contains("oracle")) {
    if (!doc.at("oracle").is_boolean()) throw UsageError("config: 'oracle' must be a boolean");
    config.oracle = doc.at("oracle").get<bool>();
  }
  if (doc.contains("quadrature")) config.quadrature = parse_quadrature(doc.at("quadrature"));
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw UsageError("config: 'seed' must be a non-negative integer");
    }
    config.seed = doc.at("seed").get<std::uint64_t>();
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& config) {
  json doc = json::object();
  const CatParams& p = config.params;
  if (config.units == UnitSystem::si) {
    doc["units"] = "si";
    doc["mass_kg"] = p.mass;
    doc["sigma_m"] = p.sigma;
    doc["separation_m"] = p.separation;
    doc["velocity_m_per_s"] = p.drift_velocity;
    doc["temperature_K"] = p.temperature;
    if (config.gamma) doc["gamma_per_s"] = *config.gamma;
  } else {
    doc["units"] = "reduced";
    doc["separation"] = p.separation;
    doc["theta"] = 4.0 * p.temperature;
    doc["velocity"] = p.drift_velocity;
    if (config.gamma) doc["gamma"] = *config.gamma;
  }
  doc["output_format"] = config.output_format == OutputFormat::csv ? "csv" : "json";
  if (!config.output_path.empty()) doc["output_path"] = config.output_path;
  doc["oracle"] = config.oracle;
  doc["quadrature"] = {{"order", config.quadrature.order},
                       {"convergence_tol", config.quadrature.convergence_tol},
                       {"max_order", config.quadrature.max_order}};
  if (config.seed) doc["seed"] = *config.seed;
  return doc.dump(2) + "\n";
}

}  // namespace catdec::cli
