#pragma once

// Command-line front end: JSON run configuration, the number and table
// formats shared by every output file, the verification gate and the
// subcommand dispatcher.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catdec/oracle.hpp"
#include "catdec/physcore.hpp"

namespace catdec::cli {

enum class OutputFormat { csv, json };
enum class UnitSystem { si, reduced };

/// Thrown for malformed configs, sweep specs and command-line values.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  // SI, or the hbar = k = 1 system with mass = sigma = 1 when units is
  // reduced (see natural_unit_params).
  CatParams params;
  UnitSystem units = UnitSystem::si;
  std::optional<double> gamma;
  OutputFormat output_format = OutputFormat::csv;
  std::string output_path;  // empty: standard output
  bool oracle = false;
  QuadratureSpec quadrature{};
  std::optional<std::uint64_t> seed;

  PhysicalConstants constants() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// SI keys: mass_kg, sigma_m, separation_m, velocity_m_per_s, temperature_K,
/// gamma_per_s. With "units": "reduced" the keys are separation (d/sigma),
/// theta, velocity and gamma. Shared keys: output_format, output_path,
/// oracle, seed and quadrature {order, convergence_tol, max_order}.
/// Unknown keys are rejected. Throws UsageError, or PhysicsInputError when
/// the parameters fail validation.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Scientific notation with 17 significant digits, locale independent.
/// Non-finite values print as nan / inf / -inf.
std::string format_number(double value);

/// A column-oriented table with '#' metadata, written as CSV or JSON.
struct Table {
  std::string title;
  std::vector<std::pair<std::string, std::string>> metadata;  // values preformatted
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;       // empty cell / null when absent
  std::vector<std::string> notes;                             // one per row, optional column
  std::string notes_column;
};

std::string render(const Table& table, OutputFormat format);

enum class VerifyLevel { fast, full };

struct Perturbation {
  std::string constant;  // "hbar" or "k"
  double factor = 1.0;
};

/// Parses "hbar=1.01" or "k=1.2".
Perturbation parse_perturbation(const std::string& text);

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::fast;
  std::optional<Perturbation> perturbation;
  std::uint64_t seed = 20231;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Runs the closed-form consistency chain and unit reductions (fast) and,
/// for full, the spectral, Monte Carlo and definitional-attenuation oracles.
/// A perturbation rescales a physical constant in the library under test;
/// the references stay fixed.
VerifyReport run_verify(const VerifyOptions& options);
std::string render_verify(const VerifyReport& report);

/// Entry point of the catdec executable. Exit codes: 0 success,
/// 1 verification failure, 2 usage or physics-input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace catdec::cli
