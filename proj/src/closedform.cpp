#include "catdec/closedform.hpp"

#include <cmath>
#include <numbers>

namespace catdec::closedform {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1 / sqrt(2 (1 + e^{-r^2/8})), the superposition normalization.
double superposition_norm(double r) { return 1.0 / std::sqrt(2.0 * (1.0 + overlap_factor(r))); }

// Common prefactor of both densities: 1 / (2 (1 + e^{-r^2/8}) sqrt(2 pi var)).
double density_prefactor(double r, double variance) {
  return 1.0 / (2.0 * (1.0 + overlap_factor(r)) * std::sqrt(kTwoPi * variance));
}

double gaussian_term(double offset, double variance) {
  return std::exp(-offset * offset / (2.0 * variance));
}

}  // namespace

ComplexAmplitude initial_wavefunction(const ReducedParams& p, double x) {
  const double norm = superposition_norm(p.r) / std::sqrt(std::sqrt(kTwoPi));
  const double left = x - 0.5 * p.r;
  const double right = x + 0.5 * p.r;
  const double envelope = std::exp(-left * left / 4.0) + std::exp(-right * right / 4.0);
  return norm * envelope * std::polar(1.0, 0.5 * p.u * x);
}

BranchAmplitudes evolved_branches(const ReducedParams& p, double x, double tau) {
  const ComplexAmplitude alpha(1.0, tau);
  const ComplexAmplitude prefactor =
      superposition_norm(p.r) / std::sqrt(std::sqrt(kTwoPi * alpha * alpha));
  // e^{i m v x / hbar - i m v^2 t / 2 hbar} in reduced variables.
  const ComplexAmplitude phase = std::polar(1.0, 0.5 * p.u * x - 0.25 * p.u * p.u * tau);
  const double drift = p.u * tau;
  const double left = x - 0.5 * p.r - drift;
  const double right = x + 0.5 * p.r - drift;
  const ComplexAmplitude four_alpha = 4.0 * alpha;
  return {phase * prefactor * std::exp(-(left * left) / four_alpha),
          phase * prefactor * std::exp(-(right * right) / four_alpha)};
}

ComplexAmplitude evolved_wavefunction(const ReducedParams& p, double x, double tau) {
  const auto [first, second] = evolved_branches(p, x, tau);
  return first + second;
}

double probability(const ReducedParams& p, double x, double tau) {
  const double var = 1.0 + tau * tau;
  const double y = x - p.u * tau;
  const double half_r = 0.5 * p.r;
  const double cross = 2.0 * std::exp(-(y * y + half_r * half_r) / (2.0 * var)) *
                       std::cos(tau * p.r * y / (2.0 * var));
  return density_prefactor(p.r, var) *
         (gaussian_term(y - half_r, var) + gaussian_term(y + half_r, var) + cross);
}

double thermal_probability(const ReducedParams& p, double x, double tau) {
  const WidthPair widths = packet_width_sq(p, tau);
  const double var = widths.w2_conditional;
  const double w2 = widths.w2_thermal;
  const double spread = p.theta * tau * tau;
  const double half_r = 0.5 * p.r;
  const double envelope_exponent =
      -x * x / (2.0 * w2) - (w2 + spread * tau * tau) / (var * w2) * (p.r * p.r) / 8.0;
  const double cross =
      2.0 * std::exp(envelope_exponent) * std::cos(tau * p.r * x / (2.0 * w2));
  return density_prefactor(p.r, w2) *
         (gaussian_term(x - half_r, w2) + gaussian_term(x + half_r, w2) + cross);
}

WidthPair packet_width_sq(const ReducedParams& p, double tau) {
  const double quantum = tau * tau;
  const double thermal = p.theta * tau * tau;
  const double conditional = 1.0 + quantum;
  return {conditional, conditional + thermal};
}

double log_attenuation(const ReducedParams& p, double tau) {
  const double w2 = packet_width_sq(p, tau).w2_thermal;
  const double thermal = p.theta * tau * tau;
  return -(thermal * (p.r * p.r)) / (8.0 * w2);
}

double attenuation(const ReducedParams& p, double tau) { return std::exp(log_attenuation(p, tau)); }

double fringe_wavenumber(const ReducedParams& p, double tau) {
  return tau * p.r / (2.0 * packet_width_sq(p, tau).w2_thermal);
}

// ---- physical units ------------------------------------------------------

ComplexAmplitude initial_wavefunction(const CatParams& params, double x,
                                      const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  return initial_wavefunction(rp, x / rp.scales.x_unit) / std::sqrt(rp.scales.x_unit);
}

ComplexAmplitude evolved_wavefunction(const CatParams& params, double x, double t,
                                      const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  return evolved_wavefunction(rp, x / rp.scales.x_unit, t / rp.scales.t_quantum) /
         std::sqrt(rp.scales.x_unit);
}

double probability(const CatParams& params, double x, double t,
                   const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  return probability(rp, x / rp.scales.x_unit, t / rp.scales.t_quantum) / rp.scales.x_unit;
}

double thermal_probability(const CatParams& params, double x, double t,
                           const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  return thermal_probability(rp, x / rp.scales.x_unit, t / rp.scales.t_quantum) /
         rp.scales.x_unit;
}

WidthPair packet_width_sq(const CatParams& params, double t, const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  const WidthPair reduced = packet_width_sq(rp, t / rp.scales.t_quantum);
  const double area = rp.scales.x_unit * rp.scales.x_unit;
  return {reduced.w2_conditional * area, reduced.w2_thermal * area};
}

double log_attenuation(const CatParams& params, double t, const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  return log_attenuation(rp, t / rp.scales.t_quantum);
}

double attenuation(const CatParams& params, double t, const PhysicalConstants& consts) {
  return std::exp(log_attenuation(params, t, consts));
}

}  // namespace catdec::closedform
