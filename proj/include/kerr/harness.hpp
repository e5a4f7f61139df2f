#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerr/analytic.hpp"
#include "kerr/glassey.hpp"
#include "kerr/integrator.hpp"
#include "kerr/profile.hpp"

namespace kerr::harness {

using nlohmann::json;

/// Malformed or inconsistent configuration; the message names the field or
/// the line and column of a syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Simulate, Sweep, VerifyBound, Analytic, Check };

[[nodiscard]] const char* to_string(Mode m);
[[nodiscard]] Mode parse_mode(const std::string& name);

struct NondimensionalBlock {
  ProfileSpec r;
  ProfileSpec s;
  double z_max;
};

struct SweepAxis {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool log_spacing = false;

  [[nodiscard]] std::vector<double> values() const;
};

struct AnalyticBlock {
  analytic::SecSolutionParams params;
  double fraction = 0.999;
  int samples = 101;
};

struct OutputPaths {
  std::optional<std::string> report;
  std::optional<std::string> trajectory;
};

struct RunConfig {
  Mode mode = Mode::Simulate;
  std::optional<PhysicalParams> physical;
  std::optional<NondimensionalBlock> nondimensional;
  InitialConditions ic{};
  IntegratorConfig integrator;
  double quadrature_rel_tol = kQuadratureRelTol;
  std::vector<SweepAxis> sweep;
  std::optional<AnalyticBlock> analytic;
  bool verify_simulate = false;
  OutputPaths output;

  /// Nondimensional slab described by whichever block is present.
  [[nodiscard]] SlabProfile slab() const;
  /// Physical E(0), E'(0) (equal to c0 and k c1); only meaningful with a physical block.
  [[nodiscard]] std::pair<Complex, Complex> physical_ic() const;
};

/// Parses and validates a config document for the given subcommand.
[[nodiscard]] RunConfig parse_config(const json& doc, Mode mode);
/// Reads a JSON config file; syntax errors report line and column.
[[nodiscard]] RunConfig load_config(const std::string& path, Mode mode);
/// Canonical form of a config with every integrator default resolved.
[[nodiscard]] json config_to_json(const RunConfig& cfg);

[[nodiscard]] json profile_to_json(const ProfileSpec& p);
[[nodiscard]] ProfileSpec profile_from_json(const json& j, const std::string& field,
                                            double default_domain_end);

struct SimulationResult {
  json report;
  BlowupReport blowup;
};

/// Integrates the configured slab and assembles the JSON report.
[[nodiscard]] SimulationResult cmd_simulate(const RunConfig& cfg, bool with_timing = false);

/// Evaluates the sweep grid with up to `workers` threads and returns CSV text.
/// Row order is the row-major grid order regardless of scheduling.
[[nodiscard]] std::string cmd_sweep(const RunConfig& cfg, int workers = 1);

struct VerifyResult {
  json report;
  bool ordering_passed;
  std::optional<BlowupReport> blowup;
};

/// Compares z_star (when simulating), the quadrature bound, the q closed
/// form and the 2.023 form.  Throws InapplicableBound when hypotheses fail.
[[nodiscard]] VerifyResult cmd_verify_bound(const RunConfig& cfg);

struct AnalyticResult {
  json summary;
  std::string csv;
};

/// Samples the exact secant solution and its residual on [0, fraction z_star].
[[nodiscard]] AnalyticResult cmd_analytic(const RunConfig& cfg);

/// Hypothesis report with a, b, alpha, beta.
[[nodiscard]] json cmd_check(const RunConfig& cfg);

}  // namespace kerr::harness
