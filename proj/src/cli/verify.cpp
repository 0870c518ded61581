#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "catdec/analysis.hpp"
#include "catdec/cli.hpp"
#include "catdec/closedform.hpp"
#include "catdec/exactmodel.hpp"
#include "catdec/oracle.hpp"

namespace catdec::cli {
namespace {

namespace cf = closedform;

// Electron in a 0.4 Angstrom packet pair 1 cm apart.
constexpr double kElectronMass = 9.109e-31;
constexpr double kElectronSigma = 0.4e-10;
constexpr double kElectronSeparation = 1e-2;

// Quoted values, with their tolerances.
constexpr double kQuotedTau300 = 6.9e-24;
constexpr double kQuotedTau1 = 1.2e-22;
constexpr double kQuotedVelocity300 = 6.8e4;  // 6.8e6 cm/s

// 40-digit mpmath evaluations with CODATA 2018 hbar and k.
constexpr double kFrozenTQuantum = 2.764041246894046e-17;
constexpr double kFrozenTau300 = 6.71116719470576e-24;
constexpr double kFrozenTauLiterature300 = 2.947657923666941881761546e-23;  // gamma = 1e9 / s

CatParams electron(double temperature) {
  CatParams p;
  p.mass = kElectronMass;
  p.sigma = kElectronSigma;
  p.separation = kElectronSeparation;
  p.temperature = temperature;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Context {
  PhysicalConstants consts;
  std::uint64_t seed;
};

struct Check {
  std::string name;
  double tolerance;
  std::function<double(const Context&, std::string&)> measure;  // returns the error measure
};

std::vector<double> symmetric_points(double half_width, std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = half_width * (2.0 * static_cast<double>(i) - static_cast<double>(n - 1)) /
            static_cast<double>(n - 1);
  }
  return xs;
}

double trapezoid(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n - 1);
  double sum = 0.5 * (f(lo) + f(hi));
  for (std::size_t i = 1; i + 1 < n; ++i) sum += f(lo + h * static_cast<double>(i));
  return sum * h;
}

double max_thermal_deviation(const ReducedParams& p, double tau, const RealField& field) {
  double worst = 0.0;
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    worst = std::max(worst,
                     std::abs(field.values[i] - cf::thermal_probability(p, field.grid.x(i), tau)));
  }
  return worst;
}

double quoted_tau(const Context& c, double temperature, double quoted) {
  return rel(analysis::decoherence_time(electron(temperature), c.consts), quoted);
}

double reduction_identity(const Context& c, std::string& detail) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tq = derive_scales(electron(1.0), c.consts).t_quantum;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    CatParams p = electron(1.0);
    p.separation = 40.0 * unit(rng) * p.sigma;
    const double theta = 100.0 * unit(rng);
    const double time_ratio = tq / p.sigma;
    p.temperature = theta / (time_ratio * time_ratio) * p.mass / c.consts.k_boltzmann();
    const double t = 1e3 * unit(rng) * tq;
    const MotionModel model = exactmodel::free_particle_model(p.mass, p.temperature, c.consts);
    const double exact = exactmodel::exact_attenuation(model, p.sigma, p.separation, t);
    const double closed = cf::attenuation(p, t, c.consts);
    if (closed > 0.0) worst = std::max(worst, rel(exact, closed));
  }
  detail = "1000 draws, r<=40, theta<=100, t/t_q<=1e3";
  return worst;
}

double initial_state_chain(const Context&, std::string& detail) {
  double worst = 0.0;
  for (double r : {0.0, 3.0, 10.0}) {
    for (double u : {0.0, -1.5, 2.0}) {
      const auto p = ReducedParams::make(r, 1.0, u);
      for (double x : symmetric_points(r / 2 + 8.0, 201)) {
        const auto psi0 = cf::initial_wavefunction(p, x);
        worst = std::max(worst, std::abs(cf::evolved_wavefunction(p, x, 0.0) - psi0));
        for (double tau : {0.0, 0.4, 2.0}) {
          const double from_psi = std::norm(cf::evolved_wavefunction(p, x, tau));
          worst = std::max(worst, std::abs(from_psi - cf::probability(p, x, tau)));
        }
      }
    }
  }
  detail = "psi(t=0) = initial state and |psi|^2 = P";
  return worst;
}

double gauss_hermite_arbiter(const Context& c, std::string& detail) {
  std::mt19937_64 rng(c.seed + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const auto p = ReducedParams::make(20.0 * unit(rng), 0.1 + 19.9 * unit(rng));
    const double tau = 3.0 * unit(rng);
    const double w = std::sqrt(cf::packet_width_sq(p, tau).w2_thermal);
    const double half = p.r / 2 + 8.0 * w;
    const RealField f = oracle::thermal_average(p, tau, Grid1D(-half, half, 256));
    worst = std::max(worst, max_thermal_deviation(p, tau, f));
  }
  detail = "50 (r, theta, t) draws, 256 points each";
  return worst;
}

double normalization(const Context& c, std::string& detail) {
  std::mt19937_64 rng(c.seed + 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const auto p = ReducedParams::make(30.0 * unit(rng), 50.0 * unit(rng), 10.0 * unit(rng) - 5.0);
    const double tau = 10.0 * unit(rng);
    const double w = std::sqrt(cf::packet_width_sq(p, tau).w2_thermal);
    const double half = p.r / 2 + 12.0 * w;
    const double shift = p.u * tau;
    const double n_thermal =
        trapezoid([&](double x) { return cf::thermal_probability(p, x, tau); }, -half, half, 8001);
    const double n_plain = trapezoid([&](double x) { return cf::probability(p, x, tau); },
                                     shift - half, shift + half, 8001);
    worst = std::max({worst, std::abs(n_thermal - 1.0), std::abs(n_plain - 1.0)});
  }
  detail = "100 draws, trapezoid over +-(r/2 + 12 w)";
  return worst;
}

double positivity_and_symmetry(const Context& c, std::string& detail) {
  std::mt19937_64 rng(c.seed + 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t negatives = 0;
  for (int s = 0; s < 100; ++s) {
    const auto p = ReducedParams::make(30.0 * unit(rng), 50.0 * unit(rng));
    const double tau = 10.0 * unit(rng);
    const double w = std::sqrt(cf::packet_width_sq(p, tau).w2_thermal);
    const double peak = cf::thermal_probability(p, p.r / 2, tau);
    for (double x : symmetric_points(p.r / 2 + 10.0 * w, 1001)) {
      const double v = cf::thermal_probability(p, x, tau);
      if (v < 0.0) ++negatives;
      worst = std::max(worst, std::abs(v - cf::thermal_probability(p, -x, tau)) / peak);
    }
  }
  detail = std::to_string(negatives) + " negative samples; value is max relative asymmetry";
  return negatives > 0 ? std::numeric_limits<double>::infinity() : worst;
}

double galilean_shift(const Context& c, std::string& detail) {
  std::mt19937_64 rng(c.seed + 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double r = 20.0 * unit(rng);
    const double u = 20.0 * unit(rng) - 10.0;
    const auto moving = ReducedParams::make(r, 0.0, u);
    const auto resting = ReducedParams::make(r, 0.0, 0.0);
    const double tau = 5.0 * unit(rng);
    const double peak = cf::probability(resting, r / 2, tau);
    for (double x : symmetric_points(r / 2 + 8.0 * std::sqrt(1 + tau * tau), 201)) {
      const double a = cf::probability(moving, x + u * tau, tau);
      const double b = cf::probability(resting, x, tau);
      worst = std::max(worst, std::abs(a - b) / peak);
    }
  }
  detail = "P(x + u t; u) = P(x; 0), 100 draws";
  return worst;
}

double attenuation_shape(const Context& c, std::string& detail) {
  std::mt19937_64 rng(c.seed + 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto units = natural_units();
  std::size_t violations = 0;
  for (int s = 0; s < 200; ++s) {
    const CatParams p = natural_unit_params(40.0 * unit(rng), 100.0 * unit(rng), 0.0);
    const double floor = analysis::log_attenuation_asymptote(p, units);
    double previous = 0.0;
    for (int i = 0; i <= 300; ++i) {
      const double t = 1e-4 * std::pow(1.05, i);
      const double la = cf::log_attenuation(p, t, units);
      if (la > previous || la < floor) ++violations;
      previous = la;
    }
    const CatParams no_gap = natural_unit_params(0.0, 100.0 * unit(rng), 0.0);
    const CatParams cold = natural_unit_params(40.0 * unit(rng), 0.0, 0.0);
    const double t = 10.0 * unit(rng);
    if (cf::attenuation(no_gap, t, units) != 1.0) ++violations;
    if (cf::attenuation(cold, t, units) != 1.0) ++violations;
  }
  detail = std::to_string(violations) + " violations of monotonicity, floor, a = 1 at d = 0 or T = 0";
  return static_cast<double>(violations);
}

double short_time_law(const Context&, std::string& detail) {
  const auto units = natural_units();
  double worst = 0.0;
  double worst_ratio_error = 0.0;
  for (double r : {5.0, 10.0, 30.0}) {
    for (double theta : {0.5, 4.0, 50.0}) {
      const CatParams p = natural_unit_params(r, theta, 0.0);
      const Scales s = derive_scales(p, units);
      const double span = 0.04 * std::min(s.t_quantum, s.t_thermal);
      std::vector<double> times(401);
      for (std::size_t i = 0; i < times.size(); ++i) times[i] = span * static_cast<double>(i) / 400;
      AttenuationCurve curve = analysis::build_curve(p, times, {}, units);
      const double tau_half = analysis::short_time_fit(curve, 0.02);
      const double tau_full = analysis::short_time_fit(curve, 0.04);
      worst = std::max(worst, rel(tau_half, curve.tau_d));
      const double ratio = (tau_full / curve.tau_d - 1.0) / (tau_half / curve.tau_d - 1.0);
      worst_ratio_error = std::max(worst_ratio_error, std::abs(ratio - 4.0));
    }
  }
  std::ostringstream d;
  d << "max |ratio - 4| = " << format_number(worst_ratio_error) << " (limit 0.5)";
  detail = d.str();
  return worst_ratio_error > 0.5 ? std::numeric_limits<double>::infinity() : worst;
}

double spectral_evolution(const Context&, std::string& detail) {
  double worst = 0.0;
  for (auto [r, u, tau] : {std::tuple{8.0, 0.5, 1.0}, {4.0, -1.0, 2.5}, {12.0, 0.0, 0.3}}) {
    const auto p = ReducedParams::make(r, 0.0, u);
    const Grid1D g = oracle::build_grid(p, tau);
    const ComplexField psi = oracle::spectral_propagate(oracle::sample_initial_state(p, g), tau);
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(std::norm(psi.values[i]) - cf::probability(p, g.x(i), tau)));
    }
  }
  detail = "|FFT-propagated psi|^2 vs P, 3 sets";
  return worst;
}

double oracle_triangle(const Context&, std::string& detail) {
  double worst = 0.0;
  for (auto [r, theta, tau] : {std::tuple{8.0, 2.0, 1.0}, {4.0, 0.5, 2.0}, {12.0, 4.0, 0.5},
                               {6.0, 10.0, 0.3}, {10.0, 1.0, 1.0}}) {
    const auto p = ReducedParams::make(r, theta);
    const Grid1D g = oracle::build_grid(p, tau);
    worst = std::max(worst, max_thermal_deviation(p, tau, oracle::spectral_thermal_average(p, tau, g)));
  }
  detail = "initial state -> FFT -> |psi|^2 -> velocity average, 5 sets";
  return worst;
}

double monte_carlo(const Context& c, std::string& detail) {
  const auto p = ReducedParams::make(10.0, 4.0);
  const double tau = 0.5;
  const Grid1D g = oracle::build_grid(p, tau);
  const MonteCarloField mc = oracle::monte_carlo_thermal_average(p, tau, g, 100000, c.seed);
  const double se = mc.max_standard_error();
  const double deviation = max_thermal_deviation(p, tau, mc.field);
  detail = "max deviation " + format_number(deviation) + ", max standard error " + format_number(se);
  return deviation / se;
}

// Points are restricted to a > 1e-6: below that the interference envelope
// sinks under the roundoff of the summed cross term and the oracle refuses.
double definitional_attenuation(const Context&, std::string& detail) {
  double worst = 0.0;
  int points = 0;
  for (double r : {2.0, 4.0, 8.0, 12.0}) {
    for (double theta : {0.5, 4.0, 20.0}) {
      for (double tau : {0.05, 0.2, 0.5, 1.0, 3.0}) {
        const auto p = ReducedParams::make(r, theta);
        const double closed = cf::attenuation(p, tau);
        if (!(closed > 1e-6)) continue;
        worst = std::max(worst, std::abs(oracle::numeric_attenuation(p, tau) - closed));
        ++points;
      }
    }
  }
  detail = std::to_string(points) + " points with a > 1e-6, envelope over twice the geometric mean";
  return points >= 20 ? worst : std::numeric_limits<double>::infinity();
}

std::vector<Check> checks_for(VerifyLevel level) {
  std::vector<Check> checks = {
      {"electron_tau_300K", 0.05,
       [](const Context& c, std::string& d) {
         d = "vs 6.9e-24 s";
         return quoted_tau(c, 300.0, kQuotedTau300);
       }},
      {"electron_tau_1K", 0.05,
       [](const Context& c, std::string& d) {
         d = "vs 1.2e-22 s";
         return quoted_tau(c, 1.0, kQuotedTau1);
       }},
      {"electron_v_thermal_300K", 0.02,
       [](const Context& c, std::string& d) {
         d = "vs 6.8e6 cm/s";
         return rel(derive_scales(electron(300.0), c.consts).v_thermal, kQuotedVelocity300);
       }},
      {"frozen_t_quantum", 1e-12,
       [](const Context& c, std::string& d) {
         d = "2 m sigma^2 / hbar, high-precision reference";
         return rel(derive_scales(electron(300.0), c.consts).t_quantum, kFrozenTQuantum);
       }},
      {"frozen_tau_300K", 1e-12,
       [](const Context& c, std::string& d) {
         d = "high-precision reference";
         return rel(analysis::decoherence_time(electron(300.0), c.consts), kFrozenTau300);
       }},
      {"frozen_tau_literature_300K", 1e-12,
       [](const Context& c, std::string& d) {
         d = "gamma = 1e9 / s, high-precision reference";
         return rel(analysis::literature_decoherence_time(electron(300.0), 1e9, c.consts),
                    kFrozenTauLiterature300);
       }},
      {"initial_state_chain", 1e-14, initial_state_chain},
      {"reduction_identity", 1e-12, reduction_identity},
      {"thermal_average_gauss_hermite", 1e-10, gauss_hermite_arbiter},
      {"normalization", 1e-8, normalization},
      {"positivity_symmetry", 1e-12, positivity_and_symmetry},
      {"galilean_shift", 1e-12, galilean_shift},
      {"attenuation_shape", 0.0, attenuation_shape},
      {"short_time_law", 0.01, short_time_law},
  };
  if (level == VerifyLevel::full) {
    checks.push_back({"spectral_evolution", 1e-10, spectral_evolution});
    checks.push_back({"oracle_triangle", 1e-8, oracle_triangle});
    checks.push_back({"monte_carlo_5se", 5.0, monte_carlo});
    checks.push_back({"definitional_attenuation", 1e-8, definitional_attenuation});
  }
  return checks;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

Perturbation parse_perturbation(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("perturbation must look like hbar=1.01 or k=1.2");
  Perturbation p;
  p.constant = text.substr(0, eq);
  if (p.constant != "hbar" && p.constant != "k") {
    throw UsageError("perturbation constant must be hbar or k");
  }
  try {
    std::size_t used = 0;
    p.factor = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw UsageError("perturbation factor is not a number: " + text.substr(eq + 1));
  }
  if (!(p.factor > 0.0) || !std::isfinite(p.factor)) throw UsageError("perturbation factor must be positive");
  return p;
}

VerifyReport run_verify(const VerifyOptions& options) {
  Context context{PhysicalConstants{}, options.seed};
  if (options.perturbation) {
    const auto& pert = *options.perturbation;
    const double hbar = PhysicalConstants::kCodataHbar * (pert.constant == "hbar" ? pert.factor : 1.0);
    const double k = PhysicalConstants::kCodataBoltzmann * (pert.constant == "k" ? pert.factor : 1.0);
    context.consts = PhysicalConstants::with_units(hbar, k);
  }
  VerifyReport report;
  for (const Check& check : checks_for(options.level)) {
    CheckResult result;
    result.name = check.name;
    result.tolerance = check.tolerance;
    const auto start = std::chrono::steady_clock::now();
    try {
      result.measured = check.measure(context, result.detail);
      result.passed = result.measured <= check.tolerance;
    } catch (const std::exception& e) {
      result.measured = std::numeric_limits<double>::quiet_NaN();
      result.passed = false;
      result.detail = std::string("error: ") + e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(result));
  }
  return report;
}

std::string render_verify(const VerifyReport& report) {
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  std::ostringstream out;
  out << std::string(width - 5, ' ') << "check  result  measured                 tolerance  seconds  detail\n";
  for (const auto& c : report.checks) {
    char seconds[16];
    std::snprintf(seconds, sizeof seconds, "%7.2f", c.seconds);
    std::string measured = format_number(c.measured);
    measured.resize(std::max<std::size_t>(measured.size(), 23), ' ');
    char tol[16];
    std::snprintf(tol, sizeof tol, "%-9.1e", c.tolerance);
    out << std::string(width - c.name.size(), ' ') << c.name << "  " << (c.passed ? "PASS  " : "FAIL  ")
        << "  " << measured << "  " << tol << "  " << seconds << "  " << c.detail << '\n';
  }
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(),
                                    [](const CheckResult& c) { return !c.passed; });
  out << (failed == 0 ? "all " + std::to_string(report.checks.size()) + " checks passed\n"
                      : std::to_string(failed) + " of " + std::to_string(report.checks.size()) +
                            " checks failed\n");
  return out.str();
}

}  // namespace catdec::cli
