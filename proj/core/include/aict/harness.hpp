#pragma once

#include <vector>

#include "aict/metrics.hpp"
#include "aict/scenario.hpp"
#include "aict/trajectory_log.hpp"

namespace aict {

/// Co-simulates plant and controller at the scenario's control rate and
/// records every tick. Safety stops (non-finite state, runaway velocity,
/// controller divergence) truncate the log and set its divergence
/// fields instead of throwing.
TrajectoryLog run(const Scenario& scenario);

/// Peak and final-window trajectory difference between two runs of the
/// same schedule, per set-point segment.
struct SegmentDiff {
  int setpoint_id = 0;
  double peak = 0.0;        // rad, max over the segment of |qA - qB|_inf
  double final_mean = 0.0;  // rad, mean over the last 100 ms
};

std::vector<SegmentDiff> trajectory_difference(const TrajectoryLog& a,
                                               const TrajectoryLog& b,
                                               const Scenario& scenario);

struct TransferResult {
  Metrics aic;
  Metrics mrac;
  TrajectoryLog aic_log;
  TrajectoryLog mrac_log;
};

/// Runs both tuned presets, unchanged, on a plant they were not tuned
/// for: nominal masses, firmware gravity compensation, and an added
/// end-effector mass. Both controllers share schedule, seed and torque
/// limit.
TransferResult transfer_experiment();

struct PayloadResult {
  TrajectoryLog aic_light;   // 0.1 kg payload
  TrajectoryLog aic_heavy;   // 0.7 kg payload
  TrajectoryLog mrac_heavy;
  std::vector<SegmentDiff> aic_diff;   // heavy vs light under AIC
  double aic_placing_jitter = 0.0;     // N·m, on the placing segment
  double mrac_placing_jitter = 0.0;
};

/// Pick-and-place cycle with a light and a heavy payload attached for
/// the whole run; the difference between the two AIC trajectories is
/// the adaptation figure of merit.
PayloadResult payload_experiment();

struct TimingRow {
  int dofs = 0;
  double mean_us = 0.0;
  double p50_us = 0.0;
  double p99_us = 0.0;
  double max_us = 0.0;
};

struct TimingTable {
  std::vector<TimingRow> aic;
  std::vector<TimingRow> mrac;
  int steps = 0;
};

/// Steps each controller `steps` times against the decoupled plant for
/// every requested DOF count and reports controller-only wall times.
TimingTable timing_benchmark(const std::vector<int>& dofs_list,
                             int steps = 100000);

}  // namespace aict
