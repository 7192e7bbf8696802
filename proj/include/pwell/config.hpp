#pragma once

#include "pwell/constants.hpp"
#include "pwell/integrator.hpp"
#include "pwell/params.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pwell {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ProfileKind { SobolevMinimizer, Sine, Bubble, NodalFile };

struct ProfileSpec {
  ProfileKind kind = ProfileKind::Sine;
  double center = 0.5; ///< Bubble only
  double width = 0.1;  ///< Bubble only
  std::string path;    ///< NodalFile only
};

enum class TargetSetConfig { None, StableW, UnstableU };

struct ScenarioConfig {
  struct Domain {
    std::size_t n_elements = 128;
    double grading = 1.0;
  } domain;

  ProblemParams params;

  struct Initial {
    ProfileSpec profile;
    bool velocity_zero = true;
    ProfileSpec velocity;
    TargetSetConfig target_set = TargetSetConfig::None;
    double margin = 0.05;
  } initial;

  struct Time {
    double dt0 = 1e-3;
    double dt_min = 1e-12;
    double dt_max = 1e-2;
    double t_end = 10.0;
    double theta_threshold = 1e8;
    double newton_tol = 1e-12;
    int newton_max = 25;
    double growth_cap = 10.0;
  } time;

  SolverOptions constants;

  struct Output {
    std::string csv_path = "pwell_out.csv";
    std::string svg_path; ///< empty disables the plot
    int snapshot_stride = 10;
  } output;

  struct Sweep {
    int points = 20;
    double lambda_lo_factor = 0.1; ///< in units of lambda*
    double lambda_hi_factor = 3.0;
  } sweep;

  struct Analysis {
    double window_fraction = 0.5;
    double t0_fraction = 0.25;
  } analysis;

  SimConfig sim_config() const {
    SimConfig cfg;
    cfg.dt0 = time.dt0;
    cfg.dt_min = time.dt_min;
    cfg.dt_max = time.dt_max;
    cfg.t_end = time.t_end;
    cfg.newton_tol = time.newton_tol;
    cfg.newton_max = time.newton_max;
    cfg.blowup_threshold = time.theta_threshold;
    cfg.growth_cap = time.growth_cap;
    cfg.snapshot_stride = output.snapshot_stride;
    return cfg;
  }
};

/// Strict parse of a JSON config document: unknown keys, duplicate keys
/// and out-of-range values all raise ConfigError naming the offending
/// path. Absent keys take the documented defaults.
ScenarioConfig parse_config(const std::string& document);

/// parse_config applied to the file contents, after the overrides.
/// Each override is "dotted.path=value" with the value parsed as JSON
/// (a bare word falls back to a string).
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// The JSON schema with defaults, printed by --help.
std::string config_schema_help();

} // namespace pwell
