#pragma once

// Independent numerical references for the closed-form results:
//  - exact free evolution by momentum-space phase multiplication (FFT),
//  - Gauss-Hermite and Monte Carlo averages over the Maxwell velocity
//    distribution,
//  - extraction of the attenuation coefficient straight from its definition
//    (interference envelope over twice the geometric mean of the packets).
//
// Everything here works in reduced units (x in sigma, tau = t / t_q). The SI
// overloads nondimensionalize first.

#include <complex>
#include <cstdint>
#include <vector>

#include "catdec/closedform.hpp"
#include "catdec/physcore.hpp"

namespace catdec {

/// Uniform periodic grid, endpoint excluded: x_i = x_min + i dx.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_points_; }
  double dx() const { return dx_; }
  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
  /// Largest resolved wavenumber, pi / dx.
  double k_nyquist() const;

  static constexpr std::size_t kMinPoints = 256;
  static constexpr std::size_t kMaxPoints = std::size_t{1} << 24;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dx_;
};

struct ComplexField {
  Grid1D grid;
  std::vector<ComplexAmplitude> values;

  /// Discrete norm sum |psi|^2 dx.
  double norm() const;
};

struct RealField {
  Grid1D grid;
  std::vector<double> values;

  /// Discrete norm sum P dx.
  double norm() const;
  /// Copy with values clamped at zero, for export.
  RealField clamped() const;
};

struct MonteCarloField {
  RealField field;
  std::vector<double> standard_error;  // per grid point

  /// Standard error of the field estimate in max norm.
  double max_standard_error() const;
};

struct QuadratureSpec {
  int order = 40;
  double convergence_tol = 1e-13;
  int max_order = 1024;

  /// Requires 8 <= order <= max_order <= 2048 and convergence_tol > 0.
  void validate() const;
  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

namespace oracle {

/// Domain covering r/2 + |u| tau_max + 12 w(tau_max) on each side and a
/// wavenumber cutoff of at least (|u| + 12 sqrt(theta)) / 2 + 8, so the
/// thermal velocity nodes used by the averaging oracles stay resolved.
/// Throws OracleError when more than 2^24 points would be needed.
Grid1D build_grid(const ReducedParams& p, double tau_max);
Grid1D build_grid(const CatParams& params, double t_max, const Scales& scales,
                  const PhysicalConstants& consts = {});

ComplexField sample_initial_state(const ReducedParams& p, const Grid1D& grid);

/// Exact free evolution: forward FFT, multiply by exp(-i k^2 tau), inverse
/// FFT (unitary normalization). Throws OracleError if more than 1e-10 of the
/// norm sits in the outer quarter of the resolved band.
ComplexField spectral_propagate(const ComplexField& initial, double tau);
ComplexField spectral_propagate(const ComplexField& initial, const CatParams& params, double t,
                                const PhysicalConstants& consts = {});

/// Gauss-Hermite average of the closed-form density over a zero-mean Maxwell
/// distribution of drift velocities. The order is doubled from spec.order
/// until successive fields differ by less than spec.convergence_tol in max
/// norm. The configured drift u is replaced by the integration variable.
/// Successive max-norm deltas are appended to *deltas when given.
RealField thermal_average(const ReducedParams& p, double tau, const Grid1D& grid,
                          const QuadratureSpec& spec = {}, std::vector<double>* deltas = nullptr);
/// Same average at an arbitrary list of points.
std::vector<double> thermal_average(const ReducedParams& p, double tau,
                                    const std::vector<double>& xs, const QuadratureSpec& spec = {},
                                    std::vector<double>* deltas = nullptr);

/// Same average, but each velocity node's density comes from spectrally
/// propagating the sampled initial state: initial state -> FFT evolution ->
/// |psi|^2 -> thermal average, without touching the evolved closed forms.
RealField spectral_thermal_average(const ReducedParams& p, double tau, const Grid1D& grid,
                                   const QuadratureSpec& spec = {});

/// Monte Carlo average with Maxwell-distributed velocities drawn from a
/// seeded mt19937_64. Deterministic for a fixed seed.
MonteCarloField monte_carlo_thermal_average(const ReducedParams& p, double tau,
                                            const Grid1D& grid, std::size_t n_samples,
                                            std::uint64_t seed);

/// Branch-resolved thermal averages at one point.
struct BranchAverages {
  double first = 0.0;               // <|psi_1|^2>
  double second = 0.0;              // <|psi_2|^2>
  std::complex<double> cross{};     // <conj(psi_1) psi_2>; 2 Re is the cosine term
  double cross_magnitude = 0.0;     // <|psi_1 psi_2|>, sets the roundoff floor of cross
};
BranchAverages branch_averages(const ReducedParams& p, double x, double tau, int order);

/// Attenuation coefficient measured from its definition: the interference
/// envelope (demodulated with the known fringe wavenumber, peak refined by a
/// quadratic fit of its logarithm) divided by twice the geometric mean of
/// the two packet densities at the peak.
/// Throws OracleError when the envelope underflows (below 1e-300), drops under
/// the quadrature roundoff floor (1e3 eps <|psi_1 psi_2|>), or the quadrature
/// does not converge by spec.max_order.
double numeric_attenuation(const ReducedParams& p, double tau, const QuadratureSpec& spec = {});
double numeric_attenuation(const CatParams& params, double t, const QuadratureSpec& spec = {},
                           const PhysicalConstants& consts = {});

}  // namespace oracle
}  // namespace catdec
