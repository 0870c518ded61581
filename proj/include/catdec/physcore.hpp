#pragma once

// Physical constants, parameter validation and the reduced unit system.
//
// Every closed-form and oracle computation runs on dimensionless variables:
// lengths in units of the packet width sigma and times in units of the
// quantum spreading time t_q = 2 m sigma^2 / hbar. SI values only appear at
// the API boundary, so products such as hbar^2 never reach the core math.

#include <limits>
#include <stdexcept>
#include <string>

namespace catdec {

/// Thrown for physically invalid or degenerate inputs.
class PhysicsInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical oracle cannot deliver a trustworthy result
/// (grid too large, aliasing, quadrature non-convergence, underflow).
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhysicalConstants {
 public:
  /// CODATA 2018 values (hbar in J s, k in J/K).
  PhysicalConstants() = default;

  /// Alternative unit systems, e.g. hbar = k = 1 test units.
  static PhysicalConstants with_units(double hbar, double k_boltzmann);

  double hbar() const { return hbar_; }
  double k_boltzmann() const { return k_boltzmann_; }

  friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;

  static constexpr double kCodataHbar = 1.054571817e-34;
  static constexpr double kCodataBoltzmann = 1.380649e-23;

 private:
  PhysicalConstants(double hbar, double k) : hbar_(hbar), k_boltzmann_(k) {}

  double hbar_ = kCodataHbar;
  double k_boltzmann_ = kCodataBoltzmann;
};

/// Inputs for the two-packet state. Units follow the PhysicalConstants in use
/// (SI for the CODATA default).
struct CatParams {
  double mass = 0.0;
  double sigma = 0.0;
  double separation = 0.0;
  double drift_velocity = 0.0;
  double temperature = 0.0;

  /// Throws PhysicsInputError on a non-finite field, mass <= 0, sigma <= 0,
  /// separation < 0 or temperature < 0.
  void validate() const;

  friend bool operator==(const CatParams&, const CatParams&) = default;
};

struct Scales {
  double x_unit = 0.0;     // sigma
  double t_quantum = 0.0;  // 2 m sigma^2 / hbar
  double t_thermal = std::numeric_limits<double>::infinity();  // sigma / v_thermal
  double v_thermal = 0.0;  // sqrt(kT/m)
};

/// Dimensionless form of CatParams.
///   r     = d / sigma
///   u     = v t_q / sigma
///   theta = (v_thermal t_q / sigma)^2, so that (kT/m) t^2 = theta tau^2 sigma^2
/// Mass is carried along so the record can be mapped back to CatParams.
struct ReducedParams {
  double r = 0.0;
  double u = 0.0;
  double theta = 0.0;
  double mass = 1.0;
  Scales scales{1.0, 1.0, std::numeric_limits<double>::infinity(), 0.0};

  /// Pure reduced-unit record (sigma = 1, t_q = 1) for tests and oracles.
  static ReducedParams make(double r, double theta, double u = 0.0);
};

Scales derive_scales(const CatParams& params, const PhysicalConstants& consts = {});

ReducedParams nondimensionalize(const CatParams& params,
                                const PhysicalConstants& consts = {});

CatParams redimensionalize(const ReducedParams& reduced,
                           const PhysicalConstants& consts = {});

/// CatParams in the hbar = k = 1 system with mass = sigma = 1. There
/// t_q = 2 and kT = theta / 4. Used by the "reduced" config mode.
CatParams natural_unit_params(double r, double theta, double velocity);
PhysicalConstants natural_units();

/// Overlap factor exp(-r^2/8) between the two initial packets, evaluated in the
/// log domain and flushed to exactly zero for r > 60.
double overlap_factor(double r);

}  // namespace catdec
