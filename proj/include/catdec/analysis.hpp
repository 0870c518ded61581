#pragma once

// Decoherence times, attenuation curves across the three computational
// routes (closed form, general motion-model formula, numerical oracle) and
// one-axis parameter sweeps.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "catdec/oracle.hpp"
#include "catdec/physcore.hpp"

namespace catdec {

struct AttenuationCurve {
  std::vector<double> times;  // physical time units
  std::vector<double> log_a_closedform;
  std::vector<double> log_a_exact;
  // Present only when the oracle route was requested; individual entries are
  // empty where the oracle failed.
  std::optional<std::vector<std::optional<double>>> log_a_oracle;
  double tau_d = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> tau_fit;
  double t_quantum = 0.0;
  double t_thermal = std::numeric_limits<double>::infinity();
};

struct DecoherenceReport {
  double tau_d = 0.0;
  double v_thermal = 0.0;
  std::optional<double> gamma;
  std::optional<double> tau_literature;
  std::optional<double> gamma_tau_product;
  // kT / (hbar gamma); the treatment assumes this is large.
  std::optional<double> thermal_to_dissipative_ratio;
  bool outside_high_temperature_regime = false;
};

struct CurveOptions {
  bool with_oracle = false;
  QuadratureSpec spec{};
};

namespace analysis {

/// sqrt(8) sigma^2 / (v_thermal d). Throws PhysicsInputError when T = 0 or
/// d = 0 (no thermal decoherence: a(t) = 1).
double decoherence_time(const CatParams& params, const PhysicalConstants& consts = {});

/// hbar^2 / (gamma m k T d^2), the dissipation-based estimate.
double literature_decoherence_time(const CatParams& params, double gamma,
                                   const PhysicalConstants& consts = {});

DecoherenceReport decoherence_report(const CatParams& params, std::optional<double> gamma,
                                     const PhysicalConstants& consts = {});

/// Least-squares fit of log a = -t^2 / tau^2 over samples with
/// t <= window_fraction * min(t_quantum, t_thermal). Needs at least five
/// such samples (t = 0 counts). Stores the result in curve.tau_fit.
double short_time_fit(AttenuationCurve& curve, double window_fraction = 0.02);

/// Long-time floor of the attenuation, exp(-d^2 / (8 sigma^2 + 2 hbar^2/(m k T))).
double attenuation_asymptote(const CatParams& params, const PhysicalConstants& consts = {});
double log_attenuation_asymptote(const CatParams& params, const PhysicalConstants& consts = {});

/// Fills the closed-form and free-particle motion-model columns, and the
/// oracle column when requested. tau_d is NaN when undefined; the short-time
/// fit is attached when the grid resolves the fit window.
AttenuationCurve build_curve(const CatParams& params, const std::vector<double>& times,
                             const CurveOptions& options = {},
                             const PhysicalConstants& consts = {});

enum class SweepAxis { mass, sigma, separation, temperature };

std::optional<SweepAxis> parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

/// Quantities a sweep can report per row.
enum class SweepOutput {
  tau_d,
  v_thermal,
  tau_literature,   // needs gamma
  attenuation,      // needs t
  log_attenuation,  // needs t
  asymptote,
  log_asymptote,
};

std::optional<SweepOutput> parse_output(const std::string& name);
std::string to_string(SweepOutput output);

struct SweepRequest {
  CatParams base;
  SweepAxis axis = SweepAxis::temperature;
  std::vector<double> values;
  std::vector<SweepOutput> outputs;
  std::optional<double> t;
  std::optional<double> gamma;
};

struct SweepRow {
  double axis_value = 0.0;
  std::vector<std::optional<double>> values;  // one per requested output
  std::string error;                          // empty when every output succeeded
};

struct SweepTable {
  SweepAxis axis = SweepAxis::temperature;
  std::vector<SweepOutput> outputs;
  std::vector<SweepRow> rows;  // input order
};

SweepTable sweep(const SweepRequest& request, const PhysicalConstants& consts = {});

}  // namespace analysis
}  // namespace catdec
