#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aict/types.hpp"

namespace aict {

/// One control tick of a run.
struct LogRow {
  double t = 0.0;
  JointVector q, qd;       // true plant state
  JointVector y_q, y_qd;   // sensed state
  JointVector mu, mu_p, mu_pp;  // belief (zero for MRAC runs)
  JointVector u;           // commanded torque
  double free_energy = 0.0;     // zero for MRAC runs
  int setpoint_id = 0;
  double step_us = 0.0;    // controller wall time for this tick
};

/// Recorded run. When a safety stop fires the log is truncated at the
/// stop instant and the divergence fields describe why.
struct TrajectoryLog {
  std::vector<LogRow> rows;
  int dofs = 0;
  double dt = 1e-3;
  bool diverged = false;
  double stop_time = 0.0;
  std::string stop_reason;

  bool empty() const { return rows.empty(); }
};

/// Writes the fixed CSV schema: t, per-joint q, qd, y_q, y_qd, mu, mu_p,
/// mu_pp, u, then F, setpoint id and step_us. Floats carry 9 significant
/// digits. Wall times are machine noise, so step_us is written as 0
/// unless include_timing is set; everything else is deterministic for a
/// fixed scenario and seed.
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out,
                          bool include_timing = false);
void write_trajectory_csv(const TrajectoryLog& log, const std::string& path,
                          bool include_timing = false);

}  // namespace aict
