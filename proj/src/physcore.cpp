#include "catdec/physcore.hpp"

#include <cmath>

namespace catdec {

PhysicalConstants PhysicalConstants::with_units(double hbar, double k_boltzmann) {
  if (!(std::isfinite(hbar) && hbar > 0.0) ||
      !(std::isfinite(k_boltzmann) && k_boltzmann > 0.0)) {
    throw PhysicsInputError("physical constants must be finite and positive");
  }
  return PhysicalConstants(hbar, k_boltzmann);
}

void CatParams::validate() const {
  if (!std::isfinite(mass) || !std::isfinite(sigma) || !std::isfinite(separation) ||
      !std::isfinite(drift_velocity) || !std::isfinite(temperature)) {
    throw PhysicsInputError("parameters must be finite");
  }
  if (mass <= 0.0) throw PhysicsInputError("mass must be positive");
  if (sigma <= 0.0) throw PhysicsInputError("packet width sigma must be positive");
  if (separation < 0.0) throw PhysicsInputError("separation must be non-negative");
  if (temperature < 0.0) throw PhysicsInputError("temperature must be non-negative");
}

ReducedParams ReducedParams::make(double r, double theta, double u) {
  ReducedParams p;
  p.r = r;
  p.u = u;
  p.theta = theta;
  p.mass = 1.0;
  p.scales.x_unit = 1.0;
  p.scales.t_quantum = 1.0;
  p.scales.v_thermal = std::sqrt(theta);
  p.scales.t_thermal = theta > 0.0 ? 1.0 / p.scales.v_thermal
                                   : std::numeric_limits<double>::infinity();
  return p;
}

Scales derive_scales(const CatParams& params, const PhysicalConstants& consts) {
  params.validate();
  Scales s;
  s.x_unit = params.sigma;
  s.t_quantum = 2.0 * params.mass * params.sigma * params.sigma / consts.hbar();
  if (params.temperature > 0.0) {
    s.v_thermal = std::sqrt(consts.k_boltzmann() * params.temperature / params.mass);
    s.t_thermal = params.sigma / s.v_thermal;
  } else {
    s.v_thermal = 0.0;
    s.t_thermal = std::numeric_limits<double>::infinity();
  }
  return s;
}

ReducedParams nondimensionalize(const CatParams& params, const PhysicalConstants& consts) {
  ReducedParams rp;
  rp.scales = derive_scales(params, consts);
  rp.mass = params.mass;
  const double velocity_unit = params.sigma / rp.scales.t_quantum;
  rp.r = params.separation / params.sigma;
  rp.u = params.drift_velocity / velocity_unit;
  const double time_ratio = rp.scales.t_quantum / params.sigma;
  rp.theta = consts.k_boltzmann() * params.temperature / params.mass * (time_ratio * time_ratio);
  return rp;
}

CatParams redimensionalize(const ReducedParams& reduced, const PhysicalConstants& consts) {
  const double sigma = reduced.scales.x_unit;
  const double velocity_unit = sigma / reduced.scales.t_quantum;
  CatParams p;
  p.mass = reduced.mass;
  p.sigma = sigma;
  p.separation = reduced.r * sigma;
  p.drift_velocity = reduced.u * velocity_unit;
  const double time_ratio = reduced.scales.t_quantum / sigma;
  p.temperature =
      reduced.theta / (time_ratio * time_ratio) * reduced.mass / consts.k_boltzmann();
  return p;
}

PhysicalConstants natural_units() { return PhysicalConstants::with_units(1.0, 1.0); }

CatParams natural_unit_params(double r, double theta, double velocity) {
  CatParams p;
  p.mass = 1.0;
  p.sigma = 1.0;
  p.separation = r;
  p.drift_velocity = velocity;
  // t_q = 2, so theta = (kT/m) t_q^2 / sigma^2 = 4 kT.
  p.temperature = theta / 4.0;
  return p;
}

double overlap_factor(double r) {
  if (r > 60.0) return 0.0;
  return std::exp(-r * r / 8.0);
}

}  // namespace catdec
