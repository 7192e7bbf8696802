#pragma once

#include "pwell/integrator.hpp"

#include <string>
#include <vector>

namespace pwell {

/// Shortest decimal that round-trips the exact double.
std::string format_double(double value);

/// Exact header of every trajectory CSV.
extern const char* const kTrajectoryCsvHeader;

/// Trajectory CSV as a string (header + one row per snapshot, final row
/// always present since the driver always records the final state).
std::string trajectory_csv_string(const Trajectory& trajectory);

/// Writes the trajectory CSV; throws std::runtime_error on I/O failure.
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

/// Rebuilds a trajectory from a CSV written by write_trajectory_csv.
/// The running integrals and theta are restored; the exact cross terms
/// are not stored in the schema, so exact_cross_terms is false and the
/// eta diagnostic falls back to finite differences. horizon_T must be
/// supplied (it is the configured t_end of the producing run).
Trajectory read_trajectory_csv(const std::string& path, double horizon_T);

struct SweepRow {
  double lambda = 0.0;
  double I0 = 0.0;
  double J0 = 0.0;
  RunOutcome outcome;
};

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

struct ConstantsRow {
  std::size_t n = 0;
  double c_star = 0.0;
  double d = 0.0;
  double beta = 0.0;
  double d_direct = 0.0;
  double residual = 0.0;
};

void write_constants_csv(const std::vector<ConstantsRow>& rows, const std::string& path);

/// Generic key/value report CSV (analyze output).
void write_report_csv(const std::vector<std::pair<std::string, std::string>>& rows,
                      const std::string& path);

} // namespace pwell
