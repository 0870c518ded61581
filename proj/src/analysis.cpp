#include "catdec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "catdec/closedform.hpp"
#include "catdec/exactmodel.hpp"
#include "catdec/parallel.hpp"

namespace catdec::analysis {
namespace {

void require_decoherence_inputs(const CatParams& params) {
  params.validate();
  if (params.separation == 0.0) throw PhysicsInputError("no interference: separation is zero");
  if (params.temperature == 0.0) {
    throw PhysicsInputError("no thermal decoherence: temperature is zero");
  }
}

}  // namespace

double decoherence_time(const CatParams& params, const PhysicalConstants& consts) {
  require_decoherence_inputs(params);
  const double v_thermal = derive_scales(params, consts).v_thermal;
  return std::sqrt(8.0) * params.sigma * params.sigma / (v_thermal * params.separation);
}

double literature_decoherence_time(const CatParams& params, double gamma,
                                   const PhysicalConstants& consts) {
  require_decoherence_inputs(params);
  if (!(std::isfinite(gamma) && gamma > 0.0)) {
    throw PhysicsInputError("dissipative rate gamma must be positive");
  }
  const double hbar = consts.hbar();
  const double kT = consts.k_boltzmann() * params.temperature;
  return hbar * hbar / (gamma * params.mass * kT * params.separation * params.separation);
}

DecoherenceReport decoherence_report(const CatParams& params, std::optional<double> gamma,
                                     const PhysicalConstants& consts) {
  DecoherenceReport report;
  report.tau_d = decoherence_time(params, consts);
  report.v_thermal = derive_scales(params, consts).v_thermal;
  if (gamma) {
    report.gamma = gamma;
    report.tau_literature = literature_decoherence_time(params, *gamma, consts);
    report.gamma_tau_product = *gamma * report.tau_d;
    const double ratio =
        consts.k_boltzmann() * params.temperature / (consts.hbar() * *gamma);
    report.thermal_to_dissipative_ratio = ratio;
    report.outside_high_temperature_regime = ratio <= 1.0;
  }
  return report;
}

double short_time_fit(AttenuationCurve& curve, double window_fraction) {
  if (curve.times.size() != curve.log_a_closedform.size()) {
    throw std::invalid_argument("attenuation curve columns have mismatched lengths");
  }
  const double limit = window_fraction * std::min(curve.t_quantum, curve.t_thermal);
  double sum_t2_log = 0.0;
  double sum_t4 = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    const double t = curve.times[i];
    if (t > limit) continue;
    const double t2 = t * t;
    sum_t2_log += t2 * curve.log_a_closedform[i];
    sum_t4 += t2 * t2;
    ++used;
  }
  if (used < 5) {
    throw std::invalid_argument("short-time fit needs at least 5 samples inside the window, got " +
                                std::to_string(used));
  }
  const double slope = -sum_t2_log / sum_t4;
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw std::invalid_argument("short-time fit: curve shows no quadratic decay");
  }
  const double tau = 1.0 / std::sqrt(slope);
  curve.tau_fit = tau;
  return tau;
}

double log_attenuation_asymptote(const CatParams& params, const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  if (rp.theta == 0.0) return 0.0;
  // -d^2 / (8 sigma^2 + 2 hbar^2 / (m k T)) with hbar^2/(m k T) = 4 sigma^2 / theta.
  return -(rp.r * rp.r) * rp.theta / (8.0 * rp.theta + 8.0);
}

double attenuation_asymptote(const CatParams& params, const PhysicalConstants& consts) {
  return std::exp(log_attenuation_asymptote(params, consts));
}

AttenuationCurve build_curve(const CatParams& params, const std::vector<double>& times,
                             const CurveOptions& options, const PhysicalConstants& consts) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw std::invalid_argument("curve times must be finite and non-negative");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("curve times must be strictly increasing");
    }
  }
  const ReducedParams rp = nondimensionalize(params, consts);
  const MotionModel free_model = exactmodel::free_particle_model_reduced(rp.theta);

  AttenuationCurve curve;
  curve.times = times;
  curve.t_quantum = rp.scales.t_quantum;
  curve.t_thermal = rp.scales.t_thermal;
  curve.log_a_closedform.resize(times.size());
  curve.log_a_exact.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double tau = times[i] / rp.scales.t_quantum;
    curve.log_a_closedform[i] = closedform::log_attenuation(rp, tau);
    curve.log_a_exact[i] = exactmodel::exact_log_attenuation(free_model, 1.0, rp.r, tau);
  }

  if (options.with_oracle) {
    options.spec.validate();
    std::vector<std::optional<double>> oracle(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
      try {
        const double a =
            oracle::numeric_attenuation(rp, times[i] / rp.scales.t_quantum, options.spec);
        if (a > 0.0) oracle[i] = std::log(a);
      } catch (const OracleError&) {
        oracle[i] = std::nullopt;
      }
    });
    curve.log_a_oracle = std::move(oracle);
  }

  try {
    curve.tau_d = decoherence_time(params, consts);
  } catch (const PhysicsInputError&) {
    curve.tau_d = std::numeric_limits<double>::quiet_NaN();
  }
  try {
    short_time_fit(curve);
  } catch (const std::invalid_argument&) {
    curve.tau_fit.reset();
  }
  return curve;
}

std::optional<SweepAxis> parse_axis(const std::string& name) {
  if (name == "mass") return SweepAxis::mass;
  if (name == "sigma") return SweepAxis::sigma;
  if (name == "separation") return SweepAxis::separation;
  if (name == "temperature") return SweepAxis::temperature;
  return std::nullopt;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::mass: return "mass";
    case SweepAxis::sigma: return "sigma";
    case SweepAxis::separation: return "separation";
    case SweepAxis::temperature: return "temperature";
  }
  return "?";
}

std::optional<SweepOutput> parse_output(const std::string& name) {
  for (auto o : {SweepOutput::tau_d, SweepOutput::v_thermal, SweepOutput::tau_literature,
                 SweepOutput::attenuation, SweepOutput::log_attenuation, SweepOutput::asymptote,
                 SweepOutput::log_asymptote}) {
    if (to_string(o) == name) return o;
  }
  return std::nullopt;
}

std::string to_string(SweepOutput output) {
  switch (output) {
    case SweepOutput::tau_d: return "tau_d";
    case SweepOutput::v_thermal: return "v_thermal";
    case SweepOutput::tau_literature: return "tau_literature";
    case SweepOutput::attenuation: return "attenuation";
    case SweepOutput::log_attenuation: return "log_attenuation";
    case SweepOutput::asymptote: return "asymptote";
    case SweepOutput::log_asymptote: return "log_asymptote";
  }
  return "?";
}

namespace {

double evaluate_output(SweepOutput output, const CatParams& params, const SweepRequest& request,
                       const PhysicalConstants& consts) {
  auto require_t = [&]() {
    if (!request.t) throw std::invalid_argument("output needs a time t");
    return *request.t;
  };
  switch (output) {
    case SweepOutput::tau_d: return decoherence_time(params, consts);
    case SweepOutput::v_thermal: return derive_scales(params, consts).v_thermal;
    case SweepOutput::tau_literature:
      if (!request.gamma) throw std::invalid_argument("tau_literature needs gamma");
      return literature_decoherence_time(params, *request.gamma, consts);
    case SweepOutput::attenuation: return closedform::attenuation(params, require_t(), consts);
    case SweepOutput::log_attenuation:
      return closedform::log_attenuation(params, require_t(), consts);
    case SweepOutput::asymptote: return attenuation_asymptote(params, consts);
    case SweepOutput::log_asymptote: return log_attenuation_asymptote(params, consts);
  }
  throw std::logic_error("unknown sweep output");
}

CatParams with_axis(CatParams p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::mass: p.mass = value; break;
    case SweepAxis::sigma: p.sigma = value; break;
    case SweepAxis::separation: p.separation = value; break;
    case SweepAxis::temperature: p.temperature = value; break;
  }
  return p;
}

}  // namespace

SweepTable sweep(const SweepRequest& request, const PhysicalConstants& consts) {
  SweepTable table;
  table.axis = request.axis;
  table.outputs = request.outputs;
  table.rows.resize(request.values.size());
  parallel_for(request.values.size(), [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.axis_value = request.values[i];
    row.values.assign(request.outputs.size(), std::nullopt);
    const CatParams params = with_axis(request.base, request.axis, request.values[i]);
    try {
      params.validate();
    } catch (const std::exception& e) {
      row.error = e.what();
      return;
    }
    for (std::size_t k = 0; k < request.outputs.size(); ++k) {
      try {
        row.values[k] = evaluate_output(request.outputs[k], params, request, consts);
      } catch (const std::exception& e) {
        if (!row.error.empty()) row.error += "; ";
        row.error += to_string(request.outputs[k]) + ": " + e.what();
      }
    }
  });
  return table;
}

}  // namespace catdec::analysis
