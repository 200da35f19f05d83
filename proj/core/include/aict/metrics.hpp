#pragma once

#include <string>
#include <vector>

#include "aict/scenario.hpp"
#include "aict/trajectory_log.hpp"

namespace aict {

/// Step-response figures for one set-point segment, worst joint unless
/// noted. Settling uses a 2% band of the step magnitude with a 0.01 rad
/// floor; the steady-state error is the mean absolute error over the
/// final 100 ms of the segment.
struct SegmentMetrics {
  int setpoint_id = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double rise_time = 0.0;       // s, worst joint, 90% of the step
  double settling_time = 0.0;   // s, worst joint; segment length if unsettled
  bool settled = false;
  double overshoot = 0.0;       // rad, worst joint, >= 0
  double steady_state_error = 0.0;  // rad, worst joint
};

struct GlobalMetrics {
  double tracking_rmse = 0.0;   // rad, against the active set-point
  double peak_torque = 0.0;     // N·m
  double saturation_duty = 0.0; // fraction of (tick, joint) pairs clipped
  double torque_jitter = 0.0;   // N·m, mean |second difference of u|
  double mean_step_us = 0.0;
  double max_step_us = 0.0;
};

struct Metrics {
  std::string controller;
  int dofs = 0;
  int tuning_parameters = 0;
  bool diverged = false;
  std::string stop_reason;
  std::vector<SegmentMetrics> segments;
  GlobalMetrics global;
};

Metrics compute_metrics(const TrajectoryLog& log, const Scenario& scenario);

/// Jitter restricted to [t0, t1), same definition as the global metric.
double torque_jitter(const TrajectoryLog& log, double t0, double t1);

/// JSON rendering with floats rounded to 9 significant digits.
std::string metrics_to_json(const Metrics& m);

/// Human-readable one-page summary.
std::string metrics_summary(const Metrics& m, const Scenario& scenario);

}  // namespace aict
