#include "catdec/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "catdec/gauss_hermite.hpp"
#include "catdec/parallel.hpp"

namespace catdec {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw std::invalid_argument("grid bounds must be finite with x_max > x_min");
  }
  if (n_points < kMinPoints || n_points > kMaxPoints || !std::has_single_bit(n_points)) {
    throw std::invalid_argument("grid size must be a power of two in [256, 2^24], got " +
                                std::to_string(n_points));
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points);
}

double Grid1D::k_nyquist() const { return std::numbers::pi / dx_; }

double ComplexField::norm() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * grid.dx();
}

double RealField::norm() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * grid.dx();
}

RealField RealField::clamped() const {
  RealField out = *this;
  for (double& v : out.values) v = std::max(v, 0.0);
  return out;
}

double MonteCarloField::max_standard_error() const {
  double m = 0.0;
  for (double e : standard_error) m = std::max(m, e);
  return m;
}

void QuadratureSpec::validate() const {
  if (order < 8 || order > max_order || max_order > 2048) {
    throw std::invalid_argument("quadrature spec requires 8 <= order <= max_order <= 2048");
  }
  if (!(convergence_tol > 0.0)) {
    throw std::invalid_argument("quadrature convergence tolerance must be positive");
  }
}

namespace oracle {
namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : buffer_(n) {
    auto* data = reinterpret_cast<fftw_complex*>(buffer_.data());
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::vector<std::complex<double>>& buffer() { return buffer_; }

  // Unitary transforms (1/sqrt(N) both ways).
  void forward() { execute(forward_); }
  void backward() { execute(backward_); }

 private:
  void execute(fftw_plan plan) {
    fftw_execute(plan);
    const double scale = 1.0 / std::sqrt(static_cast<double>(buffer_.size()));
    for (auto& v : buffer_) v *= scale;
  }

  std::vector<std::complex<double>> buffer_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// Wavenumber of FFT bin j in standard (unshifted) order.
double wavenumber(std::size_t j, const Grid1D& grid) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  auto signed_index = static_cast<std::ptrdiff_t>(j);
  if (signed_index >= n / 2) signed_index -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index) /
         (static_cast<double>(n) * grid.dx());
}

void check_band_limit(const std::vector<std::complex<double>>& spectrum, const Grid1D& grid) {
  const double k_edge = 0.75 * grid.k_nyquist();
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double power = std::norm(spectrum[j]);
    total += power;
    if (std::abs(wavenumber(j, grid)) > k_edge) tail += power;
  }
  if (tail > 1e-10 * total) {
    throw OracleError("aliasing: spectral content near the grid cutoff exceeds 1e-10 of the norm");
  }
}

// One propagation on a caller-owned plan; input and output on grid.
void propagate_in_place(FftPlan& plan, const Grid1D& grid, double tau) {
  auto& buf = plan.buffer();
  plan.forward();
  check_band_limit(buf, grid);
  if (tau == 0.0) {
    plan.backward();
    return;
  }
  for (std::size_t j = 0; j < buf.size(); ++j) {
    const double k = wavenumber(j, grid);
    buf[j] *= std::polar(1.0, -k * k * tau);
  }
  plan.backward();
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Smallest Gauss-Hermite order whose central node spacing (about
// pi / sqrt(2n)) is half the width, in the quadrature variable, of the
// packet Gaussian exp(-(x - sqrt(2 theta) tau z)^2 / (2 W^2)). Coarser rules
// can agree with each other while both missing the peak.
int resolving_order(const ReducedParams& p, double tau) {
  if (p.theta == 0.0 || tau == 0.0) return 0;
  const double width = std::sqrt(1.0 + tau * tau) / (std::sqrt(2.0 * p.theta) * tau);
  const double n = 0.5 * std::pow(2.0 * std::numbers::pi / width, 2);
  return n > 1e9 ? std::numeric_limits<int>::max() : static_cast<int>(std::ceil(n));
}

void require_resolvable(int min_order, const QuadratureSpec& spec) {
  if (min_order > spec.max_order) {
    throw OracleError("thermal quadrature cannot resolve the velocity integrand below order " +
                      std::to_string(min_order) + " (max_order " +
                      std::to_string(spec.max_order) + ")");
  }
}

// Doubles the quadrature order from spec.order until two successive fields
// agree to spec.convergence_tol in max norm at an order of at least min_order.
template <typename Evaluate>
std::vector<double> converge_in_order(const QuadratureSpec& spec, int min_order,
                                      Evaluate&& evaluate, std::vector<double>* deltas) {
  spec.validate();
  require_resolvable(min_order, spec);
  int order = spec.order;
  std::vector<double> previous = evaluate(order);
  while (true) {
    const int next_order = 2 * order;
    if (next_order > spec.max_order) {
      throw OracleError("thermal quadrature did not converge by order " +
                        std::to_string(spec.max_order));
    }
    std::vector<double> next = evaluate(next_order);
    const double delta = max_abs_difference(previous, next);
    if (deltas) deltas->push_back(delta);
    if (delta < spec.convergence_tol && next_order >= min_order) return next;
    previous = std::move(next);
    order = next_order;
  }
}

ReducedParams with_velocity(const ReducedParams& p, double u) {
  ReducedParams q = p;
  q.u = u;
  return q;
}

// Gauss-Hermite rule recentred on one Gaussian factor of the velocity
// integrand. With c = sqrt(2 theta) tau and V = 1 + tau^2, each of
// |psi_1|^2, |psi_2|^2 and |psi_1 psi_2| times e^{-z^2} is a Gaussian in z of
// precision P = 1 + c^2 / (2V) centred at c x_j / (2 V P), x_j being the
// packet offset. Substituting z = centre + y / sqrt(P) leaves a slowly varying
// factor against e^{-y^2}, however narrow the original peak.
class CentredRule {
 public:
  CentredRule(double c, double tau)
      : c_(c), var_(1.0 + tau * tau), precision_(1.0 + c * c / (2.0 * var_)),
        scale_(1.0 / std::sqrt(precision_)) {}

  // Calls term(weight, z) with weights that already include 1/sqrt(pi).
  template <typename Term>
  void apply(const GaussHermiteRule& rule, double offset, Term&& term) const {
    const double centre = c_ * offset / (2.0 * var_ * precision_);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      if (rule.weights[j] == 0.0) continue;
      const double y = rule.nodes[j];
      const double z = centre + scale_ * y;
      term(std::exp(std::log(rule.weights[j]) + y * y - z * z) * scale_ * kInvSqrtPi, z);
    }
  }

 private:
  double c_;
  double var_;
  double precision_;
  double scale_;
};

}  // namespace

Grid1D build_grid(const ReducedParams& p, double tau_max) {
  if (!(tau_max >= 0.0) || !std::isfinite(tau_max)) {
    throw std::invalid_argument("t_max must be finite and non-negative");
  }
  const double speed = std::abs(p.u);
  const double width = std::sqrt(1.0 + p.theta * tau_max * tau_max + tau_max * tau_max);
  const double half_width = 0.5 * p.r + speed * tau_max + 12.0 * width;
  const double k_required = 0.5 * (speed + 12.0 * std::sqrt(p.theta)) + 8.0;
  const double needed = 2.0 * half_width * k_required / std::numbers::pi;
  if (!(needed <= static_cast<double>(Grid1D::kMaxPoints))) {
    throw OracleError("grid would need more than 2^24 points; laboratory-scale SI runs require "
                      "reduced units");
  }
  const std::size_t n =
      std::max(Grid1D::kMinPoints, std::bit_ceil(static_cast<std::size_t>(std::ceil(needed))));
  if (n > Grid1D::kMaxPoints) {
    throw OracleError("grid would need more than 2^24 points; laboratory-scale SI runs require "
                      "reduced units");
  }
  return Grid1D(-half_width, half_width, n);
}

Grid1D build_grid(const CatParams& params, double t_max, const Scales& scales,
                  const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  return build_grid(rp, t_max / scales.t_quantum);
}

ComplexField sample_initial_state(const ReducedParams& p, const Grid1D& grid) {
  ComplexField field{grid, std::vector<ComplexAmplitude>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    field.values[i] = closedform::initial_wavefunction(p, grid.x(i));
  }
  return field;
}

ComplexField spectral_propagate(const ComplexField& initial, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("propagation time must be non-negative");
  if (initial.values.size() != initial.grid.size()) {
    throw std::invalid_argument("field size does not match its grid");
  }
  FftPlan plan(initial.grid.size());
  std::copy(initial.values.begin(), initial.values.end(), plan.buffer().begin());
  if (tau == 0.0) {
    plan.forward();
    check_band_limit(plan.buffer(), initial.grid);
    return initial;
  }
  propagate_in_place(plan, initial.grid, tau);
  return {initial.grid, plan.buffer()};
}

ComplexField spectral_propagate(const ComplexField& initial, const CatParams& params, double t,
                                const PhysicalConstants& consts) {
  return spectral_propagate(initial, t / derive_scales(params, consts).t_quantum);
}

std::vector<double> thermal_average(const ReducedParams& p, double tau,
                                    const std::vector<double>& xs, const QuadratureSpec& spec,
                                    std::vector<double>* deltas) {
  if (!(p.theta >= 0.0)) throw std::invalid_argument("theta must be non-negative");
  if (p.theta == 0.0) {
    const ReducedParams at_rest = with_velocity(p, 0.0);
    std::vector<double> values(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      values[i] = closedform::probability(at_rest, xs[i], tau);
    }
    return values;
  }
  auto evaluate = [&](int order) {
    std::vector<double> values(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      const BranchAverages b = branch_averages(p, xs[i], tau, order);
      values[i] = b.first + b.second + 2.0 * b.cross.real();
    });
    return values;
  };
  return converge_in_order(spec, 0, evaluate, deltas);
}

RealField thermal_average(const ReducedParams& p, double tau, const Grid1D& grid,
                          const QuadratureSpec& spec, std::vector<double>* deltas) {
  std::vector<double> xs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) xs[i] = grid.x(i);
  return {grid, thermal_average(p, tau, xs, spec, deltas)};
}

RealField spectral_thermal_average(const ReducedParams& p, double tau, const Grid1D& grid,
                                   const QuadratureSpec& spec) {
  FftPlan plan(grid.size());
  auto propagated_density = [&](double u) {
    const ComplexField initial = sample_initial_state(with_velocity(p, u), grid);
    std::copy(initial.values.begin(), initial.values.end(), plan.buffer().begin());
    propagate_in_place(plan, grid, tau);
    std::vector<double> density(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) density[i] = std::norm(plan.buffer()[i]);
    return density;
  };
  RealField out{grid, {}};
  if (p.theta == 0.0) {
    out.values = propagated_density(0.0);
    return out;
  }
  // Nodes whose Maxwell weight is below 1e-20 carry packets outside the grid's
  // resolved band and contribute nothing at the tested precision.
  constexpr double kNegligibleWeight = 1e-20;
  const double node_scale = std::sqrt(2.0 * p.theta);
  auto evaluate = [&](int order) {
    const GaussHermiteRule& rule = gauss_hermite_rule(order);
    std::vector<double> values(grid.size(), 0.0);
    for (int j = 0; j < order; ++j) {
      const double weight = rule.weights[j] * kInvSqrtPi;
      if (weight < kNegligibleWeight) continue;
      const std::vector<double> density = propagated_density(node_scale * rule.nodes[j]);
      for (std::size_t i = 0; i < grid.size(); ++i) values[i] += weight * density[i];
    }
    return values;
  };
  out.values = converge_in_order(spec, resolving_order(p, tau), evaluate, nullptr);
  return out;
}

MonteCarloField monte_carlo_thermal_average(const ReducedParams& p, double tau,
                                            const Grid1D& grid, std::size_t n_samples,
                                            std::uint64_t seed) {
  if (n_samples < 1000) throw std::invalid_argument("Monte Carlo needs at least 1000 samples");
  MonteCarloField out{RealField{grid, std::vector<double>(grid.size())},
                      std::vector<double>(grid.size(), 0.0)};
  if (p.theta == 0.0) {
    const ReducedParams at_rest = with_velocity(p, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out.field.values[i] = closedform::probability(at_rest, grid.x(i), tau);
    }
    return out;
  }
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> maxwell(0.0, std::sqrt(p.theta));
  std::vector<double> velocities(n_samples);
  for (double& u : velocities) u = maxwell(engine);

  const auto n = static_cast<double>(n_samples);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid.x(i);
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (double u : velocities) {
      const double value = closedform::probability(with_velocity(p, u), x, tau);
      ++count;
      const double delta = value - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta * (value - mean);
    }
    out.field.values[i] = mean;
    out.standard_error[i] = std::sqrt(m2 / (n - 1.0) / n);
  });
  return out;
}

BranchAverages branch_averages(const ReducedParams& p, double x, double tau, int order) {
  BranchAverages avg;
  if (p.theta == 0.0) {
    const BranchAmplitudes b = closedform::evolved_branches(with_velocity(p, 0.0), x, tau);
    avg.first = std::norm(b.first);
    avg.second = std::norm(b.second);
    avg.cross = std::conj(b.first) * b.second;
    avg.cross_magnitude = std::abs(avg.cross);
    return avg;
  }
  const GaussHermiteRule& rule = gauss_hermite_rule(order);
  const double node_scale = std::sqrt(2.0 * p.theta);
  const CentredRule centred(node_scale * tau, tau);
  auto branches = [&](double z) {
    return closedform::evolved_branches(with_velocity(p, node_scale * z), x, tau);
  };
  centred.apply(rule, x - 0.5 * p.r, [&](double w, double z) { avg.first += w * std::norm(branches(z).first); });
  centred.apply(rule, x + 0.5 * p.r, [&](double w, double z) { avg.second += w * std::norm(branches(z).second); });
  centred.apply(rule, x, [&](double w, double z) {
    const BranchAmplitudes b = branches(z);
    const std::complex<double> cross = std::conj(b.first) * b.second;
    avg.cross += w * cross;
    avg.cross_magnitude += w * std::abs(cross);
  });
  return avg;
}

double numeric_attenuation(const ReducedParams& p, double tau, const QuadratureSpec& spec) {
  spec.validate();
  if (!(tau >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const double fringe_k = closedform::fringe_wavenumber(p, tau);
  const double width = std::sqrt(closedform::packet_width_sq(p, tau).w2_thermal);

  // Demodulate the cross term with the known fringe phase; the in-phase part
  // is the envelope, the quadrature part should vanish.
  auto envelope = [&](double x, int order) {
    const BranchAverages b = branch_averages(p, x, tau, order);
    const double in_cos = 2.0 * b.cross.real();
    const double in_sin = 2.0 * b.cross.imag();
    const double c = std::cos(fringe_k * x);
    const double s = std::sin(fringe_k * x);
    return std::hypot(in_cos * c + in_sin * s, in_sin * c - in_cos * s);
  };

  // Locate the envelope peak on a coarse scan, then refine with a parabola
  // through the log-envelope (exactly quadratic for a Gaussian envelope).
  constexpr int kScan = 81;
  const double h = 8.0 * width / (kScan - 1);
  std::vector<double> log_env(kScan);
  int best = 0;
  for (int i = 0; i < kScan; ++i) {
    const double e = envelope(-4.0 * width + i * h, spec.order);
    log_env[i] = e > 0.0 ? std::log(e) : -std::numeric_limits<double>::infinity();
    if (log_env[i] > log_env[best]) best = i;
  }
  double peak = -4.0 * width + best * h;
  if (best > 0 && best < kScan - 1 && std::isfinite(log_env[best - 1]) &&
      std::isfinite(log_env[best + 1])) {
    const double curvature = log_env[best - 1] - 2.0 * log_env[best] + log_env[best + 1];
    if (curvature < 0.0) peak += 0.5 * h * (log_env[best - 1] - log_env[best + 1]) / curvature;
  }

  auto ratio_at_peak = [&](int order) {
    const BranchAverages b = branch_averages(p, peak, tau, order);
    const double env = envelope(peak, order);
    const double noise_floor = 1e3 * std::numeric_limits<double>::epsilon() * 2.0 * b.cross_magnitude;
    if (!(env >= 1e-300) || env <= noise_floor) {
      throw OracleError("interference below noise floor; use log_attenuation instead");
    }
    return env / (2.0 * std::sqrt(b.first) * std::sqrt(b.second));
  };

  if (p.theta == 0.0) return ratio_at_peak(spec.order);
  int order = spec.order;
  double previous = ratio_at_peak(order);
  while (true) {
    const int next_order = 2 * order;
    if (next_order > spec.max_order) {
      throw OracleError("attenuation quadrature did not converge by order " +
                        std::to_string(spec.max_order));
    }
    const double next = ratio_at_peak(next_order);
    if (std::abs(next - previous) < spec.convergence_tol) return next;
    previous = next;
    order = next_order;
  }
}

double numeric_attenuation(const CatParams& params, double t, const QuadratureSpec& spec,
                           const PhysicalConstants& consts) {
  const ReducedParams rp = nondimensionalize(params, consts);
  return numeric_attenuation(rp, t / rp.scales.t_quantum, spec);
}

}  // namespace oracle
}  // namespace catdec
