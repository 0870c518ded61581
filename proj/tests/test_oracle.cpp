#include <chrono>
#include <cmath>
#include <tuple>
#include <complex>

#include "catdec/closedform.hpp"
#include "catdec/oracle.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace catdec;
namespace cf = catdec::closedform;

namespace {

double max_abs_deviation(const RealField& field, const ReducedParams& p, double tau) {
  double m = 0.0;
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    m = std::max(m, std::abs(field.values[i] - cf::thermal_probability(p, field.grid.x(i), tau)));
  }
  return m;
}

// |<a|b>| with the grid measure.
double overlap_modulus(const ComplexField& a, const ComplexField& b) {
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::conj(a.values[i]) * b.values[i];
  return std::abs(sum) * a.grid.dx();
}

}  // namespace

TEST_CASE("grid invariants") {
  const Grid1D g(-5.0, 5.0, 256);
  CHECK(g.dx() == 10.0 / 256);
  CHECK(g.x(0) == -5.0);
  CHECK(g.x(255) < 5.0);
  CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 300), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 128), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(1.0, -1.0, 256), std::invalid_argument);
}

TEST_CASE("build_grid covers the packets") {
  const Grid1D g = oracle::build_grid(ReducedParams::make(6.0, 0.0), 0.0);
  CHECK(g.x_min() <= -11.0);
  CHECK(g.x_max() >= 11.0);
  CHECK(g.k_nyquist() >= 8.0);

  const auto p = ReducedParams::make(8.0, 2.0, 0.5);
  double previous = 0.0;
  for (double tau = 0.25; tau < 100.0; tau *= 2.0) {
    const Grid1D grown = oracle::build_grid(p, tau);
    CHECK(grown.x_max() >= previous);
    CHECK(grown.k_nyquist() >= 0.5 * 0.5 + 8.0);
    previous = grown.x_max();
  }
}

TEST_CASE("build_grid rejects laboratory-scale SI inputs") {
  CatParams electron;
  electron.mass = 9.109e-31;
  electron.sigma = 0.4e-10;
  electron.separation = 1e-2;
  electron.temperature = 300.0;
  const Scales s = derive_scales(electron);
  CHECK_THROWS_AS(oracle::build_grid(electron, 1e-23, s), OracleError);
}

TEST_CASE("analytic density on the oracle grid is normalized") {
  const auto p = ReducedParams::make(8.0, 0.0, 0.5);
  const Grid1D g = oracle::build_grid(p, 2.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += cf::probability(p, g.x(i), 2.0);
  CHECK(std::abs(sum * g.dx() - 1.0) < 1e-10);
}

TEST_CASE("spectral propagation: identity, norm and aliasing") {
  const auto p = ReducedParams::make(8.0, 0.0, 0.5);
  const Grid1D g = oracle::build_grid(p, 3.0);
  const ComplexField initial = oracle::sample_initial_state(p, g);
  CHECK(std::abs(initial.norm() - 1.0) < 1e-10);

  const ComplexField same = oracle::spectral_propagate(initial, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(catdec::testing::ulp_distance(same.values[i].real(), initial.values[i].real()) <= 4);
    CHECK(catdec::testing::ulp_distance(same.values[i].imag(), initial.values[i].imag()) <= 4);
  }

  catdec::testing::Draws d(3);
  const Grid1D fine(-40.0, 40.0, 1024);
  for (int trial = 0; trial < 20; ++trial) {
    // Band-limited random field: a few random Gaussian wavelets.
    ComplexField field{fine, std::vector<ComplexAmplitude>(fine.size())};
    for (int k = 0; k < 5; ++k) {
      const double c = d.uniform(-10, 10), q = d.uniform(-3, 3);
      const std::complex<double> amp(d.uniform(-1, 1), d.uniform(-1, 1));
      for (std::size_t i = 0; i < fine.size(); ++i) {
        const double x = fine.x(i) - c;
        field.values[i] += amp * std::exp(-x * x / 2.0) * std::polar(1.0, q * x);
      }
    }
    const double before = field.norm();
    const ComplexField after = oracle::spectral_propagate(field, d.uniform(0.0, 5.0));
    CHECK(std::abs(after.norm() / before - 1.0) < 1e-12);
  }

  const auto fast = ReducedParams::make(0.0, 0.0, 2.0 * 0.9 * g.k_nyquist());
  CHECK_THROWS_AS(oracle::spectral_propagate(oracle::sample_initial_state(fast, g), 1.0),
                  OracleError);
}

TEST_CASE("spectral propagation of a single packet spreads as W^2(t)") {
  const auto p = ReducedParams::make(0.0, 0.0, 0.0);
  const Grid1D g = oracle::build_grid(p, 3.0);
  const ComplexField initial = oracle::sample_initial_state(p, g);
  for (double tau : {0.5, 1.0, 3.0}) {
    const ComplexField psi = oracle::spectral_propagate(initial, tau);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double w = std::norm(psi.values[i]);
      m0 += w;
      m1 += w * g.x(i);
      m2 += w * g.x(i) * g.x(i);
    }
    const double variance = m2 / m0 - (m1 / m0) * (m1 / m0);
    CHECK(std::abs(variance - cf::packet_width_sq(p, tau).w2_conditional) < 1e-10);
  }
}

TEST_CASE("spectral propagation matches the evolved closed form") {
  const auto p = ReducedParams::make(8.0, 0.0, 0.5);
  const Grid1D g = oracle::build_grid(p, 1.0);
  const ComplexField psi = oracle::spectral_propagate(oracle::sample_initial_state(p, g), 1.0);
  ComplexField analytic{g, std::vector<ComplexAmplitude>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) {
    analytic.values[i] = cf::evolved_wavefunction(p, g.x(i), 1.0);
  }
  CHECK(overlap_modulus(psi, analytic) >= 1.0 - 1e-8);
  // SI overload: with hbar = m = sigma = 1 the reduced time is t / 2.
  const ComplexField si = oracle::spectral_propagate(oracle::sample_initial_state(p, g),
                                                     natural_unit_params(8.0, 0.0, 0.25), 2.0,
                                                     natural_units());
  CHECK(overlap_modulus(si, analytic) >= 1.0 - 1e-8);
}

TEST_CASE("Gauss-Hermite thermal average") {
  SUBCASE("zero temperature is the pure density") {
    const auto p = ReducedParams::make(6.0, 0.0, 0.0);
    const Grid1D g = oracle::build_grid(p, 1.0);
    const RealField f = oracle::thermal_average(p, 1.0, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(f.values[i] == cf::probability(p, g.x(i), 1.0));
  }
  SUBCASE("merged packets spread with the thermal width") {
    const auto p = ReducedParams::make(0.0, 3.0, 0.0);
    const double tau = 0.8;
    const Grid1D g = oracle::build_grid(p, tau);
    const RealField f = oracle::thermal_average(p, tau, g);
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      m0 += f.values[i];
      m2 += f.values[i] * g.x(i) * g.x(i);
    }
    CHECK(std::abs(m2 / m0 - cf::packet_width_sq(p, tau).w2_thermal) < 1e-8);
  }
  SUBCASE("matches the printed thermal density") {
    const auto p = ReducedParams::make(10.0, 4.0);
    std::vector<double> deltas;
    const RealField f = oracle::thermal_average(p, 0.7, oracle::build_grid(p, 0.7), {}, &deltas);
    CHECK(max_abs_deviation(f, p, 0.7) <= 1e-10);
    REQUIRE(deltas.size() >= 1);
    for (std::size_t i = 1; i < deltas.size(); ++i) CHECK(deltas[i] < deltas[i - 1]);
  }
  SUBCASE("narrow velocity peaks at large theta t^2") {
    for (auto [r, theta, tau] : {std::tuple{10.5, 15.3, 2.1}, {19.6, 10.4, 2.9}, {3.0, 20.0, 2.3},
                                 {10.0, 1e4, 50.0}}) {
      const auto p = ReducedParams::make(r, theta);
      const double half = r / 2 + 8.0 * std::sqrt(cf::packet_width_sq(p, tau).w2_thermal);
      const RealField f = oracle::thermal_average(p, tau, Grid1D(-half, half, 256));
      CHECK(max_abs_deviation(f, p, tau) <= 1e-10);
    }
  }
  SUBCASE("non-convergence is reported") {
    const auto p = ReducedParams::make(10.0, 100.0);
    QuadratureSpec tight{8, 1e-16, 16};
    CHECK_THROWS_AS(oracle::thermal_average(p, 3.0, oracle::build_grid(p, 3.0), tight),
                    OracleError);
  }
}

TEST_CASE("spectral thermal average reproduces the printed thermal density") {
  const auto p = ReducedParams::make(8.0, 2.0, 0.0);
  const double tau = 0.6;
  const Grid1D g = oracle::build_grid(p, tau);
  CHECK(max_abs_deviation(oracle::spectral_thermal_average(p, tau, g), p, tau) <= 1e-8);
}

TEST_CASE("Monte Carlo thermal average") {
  const auto p = ReducedParams::make(10.0, 4.0);
  const double tau = 0.7;
  const Grid1D g = oracle::build_grid(p, tau);

  SUBCASE("deterministic for a fixed seed") {
    const auto a = oracle::monte_carlo_thermal_average(p, tau, g, 2000, 99);
    const auto b = oracle::monte_carlo_thermal_average(p, tau, g, 2000, 99);
    CHECK(a.field.values == b.field.values);
    CHECK(a.standard_error == b.standard_error);
  }
  SUBCASE("zero temperature ignores the seed") {
    const auto cold = ReducedParams::make(10.0, 0.0);
    const auto a = oracle::monte_carlo_thermal_average(cold, tau, g, 1000, 1);
    const auto b = oracle::monte_carlo_thermal_average(cold, tau, g, 1000, 2);
    CHECK(a.field.values == b.field.values);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(a.field.values[i] == cf::probability(cold, g.x(i), tau));
    }
  }
  SUBCASE("consistent with quadrature within five standard errors") {
    const auto mc = oracle::monte_carlo_thermal_average(p, tau, g, 1'000'000, 2024);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(mc.field.values[i] - cf::thermal_probability(p, g.x(i), tau)));
    }
    CHECK(mc.max_standard_error() > 0.0);
    CHECK(worst <= 5.0 * mc.max_standard_error());
  }
  CHECK_THROWS_AS(oracle::monte_carlo_thermal_average(p, tau, g, 10, 1), std::invalid_argument);
}

TEST_CASE("numeric attenuation from the definition") {
  const auto p = ReducedParams::make(10.0, 4.0);
  CHECK(oracle::numeric_attenuation(p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle::numeric_attenuation(ReducedParams::make(0.0, 4.0), 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(oracle::numeric_attenuation(p, 0.05) - cf::attenuation(p, 0.05)) <= 1e-10);
  for (double tau : {0.02, 0.05, 0.1}) {
    CHECK(std::abs(oracle::numeric_attenuation(p, tau) - cf::attenuation(p, tau)) <= 1e-8);
  }
  // Thermal width far above the packet width.
  const auto hot = ReducedParams::make(10.0, 1e4);
  CHECK(std::abs(oracle::numeric_attenuation(hot, 100.0) - cf::attenuation(hot, 100.0)) <= 1e-8);
  // Well past the thermal time the envelope underflows.
  CHECK_THROWS_AS(oracle::numeric_attenuation(ReducedParams::make(100.0, 1e4), 100.0),
                  OracleError);
}
