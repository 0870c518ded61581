// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "catdec/analysis.hpp"
#include "catdec/cli.hpp"
#include "catdec/closedform.hpp"
#include "catdec/exactmodel.hpp"
#include "catdec/oracle.hpp"
#include "test_support.hpp"

using namespace catdec;
namespace cf = catdec::closedform;
using catdec::testing::Draws;
using catdec::testing::relative_error;
using catdec::testing::simpson;

namespace {

struct Outcome {
  bool passed;
  std::string summary;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CatParams electron(double temperature) {
  CatParams p;
  p.mass = 9.109e-31;
  p.sigma = 0.4e-10;
  p.separation = 1e-2;
  p.temperature = temperature;
  return p;
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "catdec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  return code;
}

// Last line of the tau CSV output: tau_d,v_thermal.
std::pair<double, double> tau_command(double temperature) {
  char path[] = "/tmp/catdec_acceptance_XXXXXX";
  const int fd = mkstemp(path);
  if (fd < 0) throw std::runtime_error("mkstemp failed");
  const std::string json = R"({"mass_kg": 9.109e-31, "sigma_m": 0.4e-10, "separation_m": 1e-2, "temperature_K": )" +
                           std::to_string(temperature) + "}";
  if (write(fd, json.data(), json.size()) != static_cast<ssize_t>(json.size())) throw std::runtime_error("write failed");
  close(fd);
  std::string out;
  const int code = run_cli({"tau", "--config", path}, &out);
  std::remove(path);
  if (code != 0) throw std::runtime_error("tau exited with " + std::to_string(code));
  const std::string last = out.substr(out.rfind('\n', out.size() - 2) + 1);
  const auto comma = last.find(',');
  return {std::stod(last.substr(0, comma)), std::stod(last.substr(comma + 1))};
}

Outcome electron_reference_values() {
  const auto [tau300, v300] = tau_command(300.0);
  const auto [tau1, v1] = tau_command(1.0);
  (void)v1;
  const double e300 = relative_error(tau300, 6.9e-24);
  const double e1 = relative_error(tau1, 1.2e-22);
  const double ev = relative_error(v300 * 100.0, 6.8e6);
  return {e300 <= 0.05 && e1 <= 0.05 && ev <= 0.02,
          "tau_d(300K) " + sci(tau300) + " s, tau_d(1K) " + sci(tau1) + " s, v " + sci(v300 * 100) +
              " cm/s; rel errors " + sci(e300) + ", " + sci(e1) + ", " + sci(ev)};
}

Outcome reduction_identity() {
  Draws d(101);
  const PhysicalConstants consts;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = d.uniform(0, 40), theta = d.uniform(0, 100), tau = d.uniform(0, 1e3);
    CatParams p = electron(1.0);
    const double tq = 2.0 * p.mass * p.sigma * p.sigma / consts.hbar();
    p.separation = r * p.sigma;
    // theta = (kT/m) (t_q / sigma)^2
    p.temperature = theta * p.mass * p.sigma * p.sigma / (tq * tq * consts.k_boltzmann());
    const double t = tau * tq;
    const auto model = exactmodel::free_particle_model(p.mass, p.temperature, consts);
    const double exact = exactmodel::exact_attenuation(model, p.sigma, p.separation, t);
    worst = std::max(worst, relative_error(exact, cf::attenuation(p, t, consts)));
  }
  return {worst <= 1e-12, "1000 SI draws, max relative difference " + sci(worst) + " (limit 1e-12)"};
}

Outcome thermal_arbiter() {
  Draws d(102);
  double worst = 0.0;
  for (int s = 0; s < 60; ++s) {
    const auto p = ReducedParams::make(d.uniform(0, 30), d.uniform(0, 50));
    const double tau = d.uniform(0, 5);
    const double w = std::sqrt(cf::packet_width_sq(p, tau).w2_thermal);
    const double half = p.r / 2 + 8.0 * w;
    const RealField f = oracle::thermal_average(p, tau, Grid1D(-half, half, 512));
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
      worst = std::max(worst, std::abs(f.values[i] - cf::thermal_probability(p, f.grid.x(i), tau)));
    }
  }
  return {worst <= 1e-10, "60 (r, theta, t) draws x 512 points, max abs error " + sci(worst) + " (limit 1e-10)"};
}

Outcome oracle_triangle() {
  double worst = 0.0;
  int sets = 0;
  for (auto [r, theta, tau] : {std::tuple{8.0, 2.0, 1.0}, {4.0, 0.5, 2.0}, {12.0, 4.0, 0.5},
                               {6.0, 10.0, 0.3}, {10.0, 1.0, 1.0}, {3.0, 1.0, 4.0}}) {
    const auto p = ReducedParams::make(r, theta);
    const Grid1D g = oracle::build_grid(p, tau);
    const RealField f = oracle::spectral_thermal_average(p, tau, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(f.values[i] - cf::thermal_probability(p, g.x(i), tau)));
    }
    ++sets;
  }
  return {worst <= 1e-8, std::to_string(sets) + " sets, FFT-propagated initial state averaged over velocity, "
                             "max abs error " + sci(worst) + " (limit 1e-8)"};
}

Outcome definitional_attenuation() {
  double worst = 0.0;
  double smallest = 1.0;
  int points = 0;
  for (double r : {2.0, 5.0, 10.0, 16.0}) {
    for (double theta : {0.25, 2.0, 10.0, 100.0}) {
      for (double tau : {0.02, 0.1, 0.4, 1.5, 6.0}) {
        const auto p = ReducedParams::make(r, theta);
        const double a = cf::attenuation(p, tau);
        if (a < 1e-6) continue;  // below the resolvable envelope floor; see README
        worst = std::max(worst, std::abs(oracle::numeric_attenuation(p, tau) - a));
        smallest = std::min(smallest, a);
        ++points;
      }
    }
  }
  return {points >= 20 && worst <= 1e-8,
          std::to_string(points) + " points, a down to " + sci(smallest) + ", max abs error " + sci(worst) +
              " (limit 1e-8)"};
}

Outcome short_time_law() {
  const auto units = natural_units();
  double worst_fit = 0.0;
  double worst_ratio = 0.0;
  int sets = 0;
  for (double r : {5.0, 8.0, 20.0, 40.0}) {
    for (double theta : {0.1, 1.0, 4.0, 50.0}) {
      const CatParams p = natural_unit_params(r, theta, 0.0);
      const Scales s = derive_scales(p, units);
      const double span = 0.04 * std::min(s.t_quantum, s.t_thermal);
      std::vector<double> times(401);
      for (std::size_t i = 0; i < times.size(); ++i) times[i] = span * static_cast<double>(i) / 400.0;
      AttenuationCurve curve = analysis::build_curve(p, times, {}, units);
      const double narrow = analysis::short_time_fit(curve, 0.02);
      const double wide = analysis::short_time_fit(curve, 0.04);
      worst_fit = std::max(worst_fit, relative_error(narrow, curve.tau_d));
      const double ratio = (wide / curve.tau_d - 1.0) / (narrow / curve.tau_d - 1.0);
      worst_ratio = std::max(worst_ratio, std::abs(ratio - 4.0));
      ++sets;
    }
  }
  return {worst_fit <= 0.01 && worst_ratio <= 0.5,
          std::to_string(sets) + " sets with r >= 5, max |tau_fit/tau_d - 1| " + sci(worst_fit) +
              ", max |residual ratio - 4| " + sci(worst_ratio)};
}

Outcome invariants() {
  Draws d(107);
  const auto units = natural_units();
  double norm_error = 0.0, asymmetry = 0.0, galilean = 0.0;
  int negatives = 0, monotone_violations = 0, floor_violations = 0, unity_violations = 0;
  for (int s = 0; s < 200; ++s) {
    const double r = d.uniform(0, 30), theta = d.uniform(0, 50), u = d.uniform(-5, 5), tau = d.uniform(0, 8);
    const auto p = ReducedParams::make(r, theta, u);
    const double w = std::sqrt(cf::packet_width_sq(p, tau).w2_thermal);
    const double big_w = std::sqrt(cf::packet_width_sq(p, tau).w2_conditional);
    const double half = r / 2 + 12.0 * w;
    const double shift = u * tau;
    norm_error = std::max(norm_error, std::abs(simpson([&](double x) { return cf::thermal_probability(p, x, tau); },
                                                       -half, half, 6000) - 1.0));
    norm_error = std::max(norm_error, std::abs(simpson([&](double x) { return cf::probability(p, x, tau); },
                                                       shift - half, shift + half, 6000) - 1.0));
    const double peak = cf::thermal_probability(p, r / 2, tau);
    const auto resting = ReducedParams::make(r, theta, 0.0);
    const double peak_plain = cf::probability(resting, r / 2, tau);
    for (int i = 0; i <= 400; ++i) {
      const double x = -half + 2.0 * half * i / 400.0;
      const double v = cf::thermal_probability(p, x, tau);
      if (v < 0.0 || cf::probability(p, x, tau) < 0.0) ++negatives;
      asymmetry = std::max(asymmetry, std::abs(v - cf::thermal_probability(p, -x, tau)) / peak);
      const double y = (r / 2 + 8.0 * big_w) * (2.0 * i / 400.0 - 1.0);
      galilean = std::max(galilean, std::abs(cf::probability(p, y + shift, tau) - cf::probability(resting, y, tau)) /
                                        peak_plain);
    }
    const CatParams phys = natural_unit_params(r, theta, 0.0);
    const double floor = analysis::log_attenuation_asymptote(phys, units);
    double previous = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = 1e-4 * std::pow(1.08, i);
      const double la = cf::log_attenuation(phys, t, units);
      if (la > previous) ++monotone_violations;
      if (la < floor) ++floor_violations;
      previous = la;
    }
    const double t = d.uniform(0, 100);
    if (cf::attenuation(natural_unit_params(0.0, theta, 0.0), t, units) != 1.0) ++unity_violations;
    if (cf::attenuation(natural_unit_params(r, 0.0, 0.0), t, units) != 1.0) ++unity_violations;
  }
  const bool ok = norm_error <= 1e-8 && negatives == 0 && asymmetry <= 1e-12 && galilean <= 1e-12 &&
                  monotone_violations == 0 && floor_violations == 0 && unity_violations == 0;
  return {ok, "200 draws: norm " + sci(norm_error) + ", negatives " + std::to_string(negatives) + ", asymmetry " +
                  sci(asymmetry) + ", galilean " + sci(galilean) + ", monotone/floor/unity violations " +
                  std::to_string(monotone_violations) + "/" + std::to_string(floor_violations) + "/" +
                  std::to_string(unity_violations)};
}

Outcome verify_gate() {
  const int clean = run_cli({"verify", "--full"});
  const int perturbed_k = run_cli({"verify", "--full", "--perturb", "k=1.01"});
  const int perturbed_hbar = run_cli({"verify", "--full", "--perturb", "hbar=1.01"});
  return {clean == 0 && perturbed_k == 1 && perturbed_hbar == 1,
          "verify --full exit " + std::to_string(clean) + "; with k x 1.01 exit " + std::to_string(perturbed_k) +
              "; with hbar x 1.01 exit " + std::to_string(perturbed_hbar)};
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, double, std::function<Outcome()>>> criteria = {
      {1, 1.0, electron_reference_values},
      {2, 5.0, reduction_identity},
      {3, 30.0, thermal_arbiter},
      {4, 120.0, oracle_triangle},
      {5, 60.0, definitional_attenuation},
      {6, 0.0, short_time_law},
      {7, 60.0, invariants},
      {8, 0.0, verify_gate},
  };
  int failures = 0;
  for (const auto& [id, budget, body] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = sci(seconds) + " s";
    if (budget > 0.0) {
      timing += " (budget " + sci(budget) + " s)";
      if (seconds > budget) {
        outcome.passed = false;
        outcome.summary += "; over time budget";
      }
    }
    if (!outcome.passed) ++failures;
    std::printf("criterion %d: %s  %s  [%s]\n", id, outcome.passed ? "PASS" : "FAIL", outcome.summary.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
