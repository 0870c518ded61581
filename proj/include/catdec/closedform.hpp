#pragma once

// Analytic evaluators for the free two-packet state: the initial
// superposition, its free evolution, the probability density, the
// thermally averaged density, the packet widths and the attenuation
// coefficient of the interference term.
//
// Each quantity has a reduced-unit overload (ReducedParams, x in units of
// sigma, tau = t / t_q) which does the arithmetic, and an SI overload that
// nondimensionalizes, evaluates, and rescales the result.

#include <complex>

#include "catdec/physcore.hpp"

namespace catdec {

using ComplexAmplitude = std::complex<double>;

struct WidthPair {
  double w2_conditional = 0.0;  // sigma^2 + hbar^2 t^2 / (4 m^2 sigma^2)
  double w2_thermal = 0.0;      // w2_conditional + (kT/m) t^2
};

/// The two packet contributions of the evolved state; psi = first + second.
struct BranchAmplitudes {
  ComplexAmplitude first;   // packet launched at +d/2
  ComplexAmplitude second;  // packet launched at -d/2
};

namespace closedform {

// ---- reduced units -------------------------------------------------------

ComplexAmplitude initial_wavefunction(const ReducedParams& p, double x);

/// Free evolution of each packet. The complex prefactor
/// [2 pi sigma^2 (1 + i tau)^2]^(-1/4) uses the principal square root twice.
BranchAmplitudes evolved_branches(const ReducedParams& p, double x, double tau);
ComplexAmplitude evolved_wavefunction(const ReducedParams& p, double x, double tau);

double probability(const ReducedParams& p, double x, double tau);
double thermal_probability(const ReducedParams& p, double x, double tau);
WidthPair packet_width_sq(const ReducedParams& p, double tau);

/// -theta tau^2 r^2 / (8 + 8 theta tau^2 + 8 tau^2); never positive.
double log_attenuation(const ReducedParams& p, double tau);
double attenuation(const ReducedParams& p, double tau);

/// Spatial frequency of the interference cosine in the thermal density.
double fringe_wavenumber(const ReducedParams& p, double tau);

// ---- physical units ------------------------------------------------------

ComplexAmplitude initial_wavefunction(const CatParams& params, double x,
                                      const PhysicalConstants& consts = {});
ComplexAmplitude evolved_wavefunction(const CatParams& params, double x, double t,
                                      const PhysicalConstants& consts = {});
double probability(const CatParams& params, double x, double t,
                   const PhysicalConstants& consts = {});
double thermal_probability(const CatParams& params, double x, double t,
                           const PhysicalConstants& consts = {});
WidthPair packet_width_sq(const CatParams& params, double t,
                          const PhysicalConstants& consts = {});
double log_attenuation(const CatParams& params, double t,
                       const PhysicalConstants& consts = {});
double attenuation(const CatParams& params, double t,
                   const PhysicalConstants& consts = {});

}  // namespace closedform
}  // namespace catdec
