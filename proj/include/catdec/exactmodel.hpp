#pragma once

// Attenuation of the interference term for a general stationary motion model,
// characterized by the mean-square displacement s(t) = <(x(t1) - x(t1+t))^2>
// and the non-equal-time commutator [x(t1), x(t1+t)] = i chi(t).
//
// The functions are unit-agnostic: s, chi, sigma, separation and t only need
// to share one consistent unit system (SI or reduced).

#include <functional>
#include <initializer_list>
#include <string>

#include "catdec/physcore.hpp"

namespace catdec {

struct MotionModel {
  std::function<double(double)> mean_square_displacement;  // s(t), area
  std::function<double(double)> commutator_magnitude;      // chi(t), area
  std::string label;
};

struct ExactWidth {
  double w2_exact = 0.0;
};

namespace exactmodel {

/// s(t) = (kT/m) t^2, chi(t) = hbar t / m.
MotionModel free_particle_model(double mass, double temperature,
                                const PhysicalConstants& consts = {});

/// Free particle in reduced units (sigma = 1, t in units of t_q):
/// s(tau) = theta tau^2, chi(tau) = 2 tau.
MotionModel free_particle_model_reduced(double theta);

/// Checks s(0) = 0, chi(0) = 0 and s >= 0 on the supplied sample times.
/// Throws PhysicsInputError on violation.
void check_model(const MotionModel& model, std::initializer_list<double> sample_times = {});

/// sigma^2 - [x(t1), x(t1+t)]^2 / (4 sigma^2) + s(t); the commutator is purely
/// imaginary, so the middle term is +chi^2 / (4 sigma^2).
ExactWidth exact_width_sq(const MotionModel& model, double sigma, double t);

double exact_log_attenuation(const MotionModel& model, double sigma, double separation,
                             double t);
double exact_attenuation(const MotionModel& model, double sigma, double separation, double t);

}  // namespace exactmodel
}  // namespace catdec
