#include "catdec/exactmodel.hpp"

#include <cmath>
#include <string>

namespace catdec::exactmodel {

MotionModel free_particle_model(double mass, double temperature,
                                const PhysicalConstants& consts) {
  if (!(std::isfinite(mass) && mass > 0.0)) throw PhysicsInputError("mass must be positive");
  if (!(std::isfinite(temperature) && temperature >= 0.0)) {
    throw PhysicsInputError("temperature must be non-negative");
  }
  const double thermal_speed_sq = consts.k_boltzmann() * temperature / mass;
  const double hbar_over_m = consts.hbar() / mass;
  return {[thermal_speed_sq](double t) { return thermal_speed_sq * t * t; },
          [hbar_over_m](double t) { return hbar_over_m * t; }, "free particle"};
}

MotionModel free_particle_model_reduced(double theta) {
  if (!(std::isfinite(theta) && theta >= 0.0)) {
    throw PhysicsInputError("theta must be non-negative");
  }
  return {[theta](double tau) { return theta * tau * tau; },
          [](double tau) { return 2.0 * tau; }, "free particle (reduced)"};
}

void check_model(const MotionModel& model, std::initializer_list<double> sample_times) {
  if (!model.mean_square_displacement || !model.commutator_magnitude) {
    throw PhysicsInputError("motion model '" + model.label + "' is incomplete");
  }
  if (model.mean_square_displacement(0.0) != 0.0) {
    throw PhysicsInputError("motion model '" + model.label + "': s(0) must vanish");
  }
  if (model.commutator_magnitude(0.0) != 0.0) {
    throw PhysicsInputError("motion model '" + model.label + "': commutator must vanish at 0");
  }
  for (double t : sample_times) {
    const double s = model.mean_square_displacement(t);
    if (!(s >= 0.0)) {
      throw PhysicsInputError("motion model '" + model.label +
                              "': negative mean-square displacement");
    }
  }
}

ExactWidth exact_width_sq(const MotionModel& model, double sigma, double t) {
  const double sigma2 = sigma * sigma;
  const double chi = model.commutator_magnitude(t);
  const double s = model.mean_square_displacement(t);
  if (!(s >= 0.0)) {
    throw PhysicsInputError("motion model '" + model.label +
                            "': negative mean-square displacement");
  }
  return {sigma2 + chi * chi / (4.0 * sigma2) + s};
}

double exact_log_attenuation(const MotionModel& model, double sigma, double separation,
                             double t) {
  if (!(sigma > 0.0)) throw PhysicsInputError("packet width sigma must be positive");
  const double w2 = exact_width_sq(model, sigma, t).w2_exact;
  const double s = model.mean_square_displacement(t);
  return -(s * (separation * separation)) / (8.0 * (sigma * sigma) * w2);
}

double exact_attenuation(const MotionModel& model, double sigma, double separation, double t) {
  return std::exp(exact_log_attenuation(model, sigma, separation, t));
}

}  // namespace catdec::exactmodel
