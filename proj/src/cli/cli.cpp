#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "catdec/analysis.hpp"
#include "catdec/cli.hpp"
#include "catdec/closedform.hpp"
#include "json.hpp"

namespace catdec::cli {
namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_path;
  std::string format;
  bool oracle = false;
  std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const GlobalOptions& g) {
  if (g.config_path.empty()) throw UsageError("--config is required for this command");
  RunConfig config = load_config(g.config_path);
  if (!g.out_path.empty()) config.output_path = g.out_path;
  if (g.format == "csv") config.output_format = OutputFormat::csv;
  if (g.format == "json") config.output_format = OutputFormat::json;
  if (g.oracle) config.oracle = true;
  if (g.seed) config.seed = g.seed;
  return config;
}

std::string units_label(const RunConfig& config) {
  return config.units == UnitSystem::si ? "si" : "reduced";
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write output file '" + path + "'");
  file << text;
  if (!file) throw UsageError("failed writing output file '" + path + "'");
}

void add_param_metadata(Table& t, const RunConfig& config) {
  const CatParams& p = config.params;
  t.metadata.push_back({"units", units_label(config)});
  t.metadata.push_back({"mass", format_number(p.mass)});
  t.metadata.push_back({"sigma", format_number(p.sigma)});
  t.metadata.push_back({"separation", format_number(p.separation)});
  t.metadata.push_back({"velocity", format_number(p.drift_velocity)});
  t.metadata.push_back({"temperature", format_number(p.temperature)});
}

int cmd_tau(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto consts = config.constants();
  const DecoherenceReport report = analysis::decoherence_report(config.params, config.gamma, consts);
  Table t;
  t.title = "catdec tau";
  add_param_metadata(t, config);
  t.columns = {"tau_d", "v_thermal"};
  std::vector<std::optional<double>> row = {report.tau_d, report.v_thermal};
  if (report.gamma) {
    t.columns.insert(t.columns.end(), {"gamma", "tau_literature", "gamma_tau_d", "kT_over_hbar_gamma"});
    row.insert(row.end(), {report.gamma, report.tau_literature, report.gamma_tau_product,
                           report.thermal_to_dissipative_ratio});
  }
  t.rows.push_back(row);
  const std::string text = render(t, config.output_format);
  out << text;
  if (!config.output_path.empty()) emit(text, config.output_path, out);
  if (report.outside_high_temperature_regime) {
    err << "warning: kT <= hbar gamma; the thermal treatment assumes kT >> hbar gamma\n";
  }
  return 0;
}

int cmd_density(const RunConfig& config, double t, int points, std::optional<double> half_width,
                std::ostream& out) {
  if (points < 2) throw UsageError("--points must be at least 2");
  if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("--t must be finite and non-negative");
  const auto consts = config.constants();
  const ReducedParams rp = nondimensionalize(config.params, consts);
  const double tau = t / rp.scales.t_quantum;
  const double sigma = config.params.sigma;
  double half = 0.0;
  if (half_width) {
    if (!(*half_width > 0.0)) throw UsageError("--xmax must be positive");
    half = *half_width;
  } else {
    const double w = std::sqrt(closedform::packet_width_sq(rp, tau).w2_thermal);
    half = sigma * (0.5 * rp.r + std::abs(rp.u) * tau + 8.0 * w);
  }
  const auto n = static_cast<std::size_t>(points);
  std::vector<double> xs(n);
  std::vector<double> reduced_xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = half * (2.0 * static_cast<double>(i) - static_cast<double>(n - 1)) /
            static_cast<double>(n - 1);
    reduced_xs[i] = xs[i] / sigma;
  }
  std::vector<double> averaged;
  if (config.oracle) {
    oracle::build_grid(rp, tau);
    averaged = oracle::thermal_average(rp, tau, reduced_xs, config.quadrature);
  }

  Table table;
  table.title = "catdec density";
  add_param_metadata(table, config);
  table.metadata.push_back({"t", format_number(t)});
  table.metadata.push_back({"t_quantum", format_number(rp.scales.t_quantum)});
  table.columns = {"x", "P", "P_T"};
  if (config.oracle) table.columns.push_back("P_T_oracle");
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::optional<double>> row = {
        xs[i], closedform::probability(rp, reduced_xs[i], tau) / sigma,
        closedform::thermal_probability(rp, reduced_xs[i], tau) / sigma};
    if (config.oracle) row.push_back(averaged[i] / sigma);
    table.rows.push_back(std::move(row));
  }
  emit(render(table, config.output_format), config.output_path, out);
  return 0;
}

int cmd_attenuation(const RunConfig& config, double t_max, int points, std::ostream& out) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw UsageError("--tmax must be positive");
  if (points < 2) throw UsageError("--points must be at least 2");
  const auto consts = config.constants();
  const auto n = static_cast<std::size_t>(points);
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  const AttenuationCurve curve = analysis::build_curve(
      config.params, times, CurveOptions{config.oracle, config.quadrature}, consts);

  Table table;
  table.title = "catdec attenuation";
  add_param_metadata(table, config);
  table.metadata.push_back({"t_quantum", format_number(curve.t_quantum)});
  table.metadata.push_back({"t_thermal", format_number(curve.t_thermal)});
  table.metadata.push_back({"tau_d", format_number(curve.tau_d)});
  table.metadata.push_back(
      {"tau_fit", curve.tau_fit ? format_number(*curve.tau_fit) : std::string("nan")});
  table.metadata.push_back(
      {"asymptote", format_number(analysis::attenuation_asymptote(config.params, consts))});
  table.metadata.push_back(
      {"log_asymptote", format_number(analysis::log_attenuation_asymptote(config.params, consts))});
  table.columns = {"t", "log_a_closedform", "log_a_exact"};
  if (curve.log_a_oracle) table.columns.push_back("log_a_oracle");
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::optional<double>> row = {curve.times[i], curve.log_a_closedform[i],
                                              curve.log_a_exact[i]};
    if (curve.log_a_oracle) row.push_back((*curve.log_a_oracle)[i]);
    table.rows.push_back(std::move(row));
  }
  emit(render(table, config.output_format), config.output_path, out);
  return 0;
}

analysis::SweepRequest load_sweep(const std::string& path, const RunConfig& config) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read sweep file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("sweep: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("sweep: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "axis" && key != "values" && key != "outputs" && key != "t" && key != "gamma") {
      throw UsageError("sweep: unknown key '" + key + "'");
    }
  }
  analysis::SweepRequest request;
  request.base = config.params;
  request.gamma = config.gamma;
  if (!doc.contains("axis") || !doc.at("axis").is_string()) throw UsageError("sweep: 'axis' must be a string");
  const auto axis = analysis::parse_axis(doc.at("axis").get<std::string>());
  if (!axis) throw UsageError("sweep: invalid axis '" + doc.at("axis").get<std::string>() + "'");
  request.axis = *axis;
  if (!doc.contains("values") || !doc.at("values").is_array() || doc.at("values").empty()) {
    throw UsageError("sweep: 'values' must be a non-empty array of numbers");
  }
  for (const auto& v : doc.at("values")) {
    if (!v.is_number()) throw UsageError("sweep: 'values' must be numbers");
    request.values.push_back(v.get<double>());
  }
  if (doc.contains("outputs")) {
    if (!doc.at("outputs").is_array()) throw UsageError("sweep: 'outputs' must be an array");
    for (const auto& o : doc.at("outputs")) {
      const auto parsed = o.is_string() ? analysis::parse_output(o.get<std::string>()) : std::nullopt;
      if (!parsed) throw UsageError("sweep: invalid output " + o.dump());
      request.outputs.push_back(*parsed);
    }
  } else {
    request.outputs = {analysis::SweepOutput::tau_d};
  }
  for (const char* key : {"t", "gamma"}) {
    if (!doc.contains(key)) continue;
    if (!doc.at(key).is_number()) throw UsageError(std::string("sweep: '") + key + "' must be a number");
    (std::string(key) == "t" ? request.t : request.gamma) = doc.at(key).get<double>();
  }
  return request;
}

int cmd_sweep(const RunConfig& config, const std::string& sweep_path, std::ostream& out) {
  const analysis::SweepRequest request = load_sweep(sweep_path, config);
  const analysis::SweepTable result = analysis::sweep(request, config.constants());
  Table table;
  table.title = "catdec sweep";
  add_param_metadata(table, config);
  table.metadata.push_back({"axis", analysis::to_string(result.axis)});
  if (request.t) table.metadata.push_back({"t", format_number(*request.t)});
  if (request.gamma) table.metadata.push_back({"gamma", format_number(*request.gamma)});
  table.columns.push_back(analysis::to_string(result.axis));
  for (auto o : result.outputs) table.columns.push_back(analysis::to_string(o));
  table.notes_column = "error";
  for (const auto& row : result.rows) {
    std::vector<std::optional<double>> cells = {row.axis_value};
    cells.insert(cells.end(), row.values.begin(), row.values.end());
    table.rows.push_back(std::move(cells));
    table.notes.push_back(row.error);
  }
  emit(render(table, config.output_format), config.output_path, out);
  return 0;
}

int cmd_verify(const GlobalOptions& g, bool full, const std::string& perturb, std::ostream& out) {
  VerifyOptions options;
  options.level = full ? VerifyLevel::full : VerifyLevel::fast;
  if (!perturb.empty()) options.perturbation = parse_perturbation(perturb);
  if (g.seed) options.seed = *g.seed;
  const VerifyReport report = run_verify(options);
  const std::string text = render_verify(report);
  out << text;
  if (!g.out_path.empty()) emit(text, g.out_path, out);
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermal decoherence of a free two-packet superposition", "catdec"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed_value = 0;
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--out", g.out_path, "Output file (default: standard output)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--oracle", g.oracle, "Add the numerical oracle column");
  auto* seed_opt = app.add_option("--seed", seed_value, "Random seed");

  auto* tau_cmd = app.add_subcommand("tau", "Decoherence time and dissipative comparison");

  auto* density_cmd = app.add_subcommand("density", "Probability densities at one time");
  double density_t = 0.0;
  int density_points = 1001;
  std::optional<double> density_xmax;
  density_cmd->add_option("--t", density_t, "Time");
  density_cmd->add_option("--points", density_points, "Number of x samples");
  density_cmd->add_option("--xmax", density_xmax, "Half width of the x range");

  auto* attenuation_cmd = app.add_subcommand("attenuation", "Attenuation coefficient curve");
  double t_max = 0.0;
  int curve_points = 200;
  attenuation_cmd->add_option("--tmax", t_max, "Final time")->required();
  attenuation_cmd->add_option("--points", curve_points, "Number of time samples");

  auto* verify_cmd = app.add_subcommand("verify", "Run the verification gate");
  bool fast = false;
  bool full = false;
  std::string perturb;
  auto* fast_flag = verify_cmd->add_flag("--fast", fast, "Closed-form chain and reductions");
  verify_cmd->add_flag("--full", full, "Also run the spectral and Monte Carlo oracles")->excludes(fast_flag);
  verify_cmd->add_option("--perturb", perturb, "Rescale a constant under test, e.g. k=1.2");

  auto* sweep_cmd = app.add_subcommand("sweep", "One-axis parameter sweep");
  std::string sweep_path;
  sweep_cmd->add_option("--sweep", sweep_path, "JSON sweep specification")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  try {
    if (verify_cmd->parsed()) return cmd_verify(g, full, perturb, out);
    const RunConfig config = resolve_config(g);
    if (tau_cmd->parsed()) return cmd_tau(config, out, err);
    if (density_cmd->parsed()) return cmd_density(config, density_t, density_points, density_xmax, out);
    if (attenuation_cmd->parsed()) return cmd_attenuation(config, t_max, curve_points, out);
    if (sweep_cmd->parsed()) return cmd_sweep(config, sweep_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace catdec::cli
