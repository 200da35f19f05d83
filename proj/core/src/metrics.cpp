#include "aict/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace aict {
namespace {

constexpr double kSettleBandFraction = 0.02;
constexpr double kSettleBandFloorRad = 0.01;
constexpr double kSteadyWindowS = 0.1;

double round9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

/// Row index range [first, last) of rows with t in [t0, t1).
std::pair<std::size_t, std::size_t> row_range(const TrajectoryLog& log,
                                              double t0, double t1) {
  const auto& rows = log.rows;
  auto lo = std::lower_bound(rows.begin(), rows.end(), t0,
                             [](const LogRow& r, double t) { return r.t < t; });
  auto hi = std::lower_bound(rows.begin(), rows.end(), t1,
                             [](const LogRow& r, double t) { return r.t < t; });
  return {static_cast<std::size_t>(lo - rows.begin()),
          static_cast<std::size_t>(hi - rows.begin())};
}

SegmentMetrics segment_metrics(const TrajectoryLog& log, int id, double t0,
                               double t1, const JointVector& target) {
  SegmentMetrics m;
  m.setpoint_id = id;
  m.t_start = t0;
  m.t_end = t1;

  const auto [first, last] = row_range(log, t0, t1);
  if (first >= last) {
    m.settled = false;
    m.settling_time = t1 - t0;
    m.rise_time = t1 - t0;
    return m;
  }
  const double seg_len = t1 - t0;
  const bool truncated = log.diverged && last == log.rows.size() &&
                         log.rows.back().t < t1 - 1.5 * log.dt;

  const JointVector start = log.rows[first].q;
  m.settled = true;
  for (int j = 0; j < log.dofs; ++j) {
    const double step = target[j] - start[j];
    const double band =
        std::max(kSettleBandFraction * std::abs(step), kSettleBandFloorRad);

    double last_violation = -1.0;  // relative to t0
    double rise = std::abs(step) < kSettleBandFloorRad ? 0.0 : seg_len;
    double overshoot = 0.0;
    for (std::size_t k = first; k < last; ++k) {
      const double err = log.rows[k].q[j] - target[j];
      if (std::abs(err) > band) last_violation = log.rows[k].t - t0;
      if (rise == seg_len && std::abs(err) <= 0.1 * std::abs(step)) {
        rise = log.rows[k].t - t0;
      }
      if (step > 0.0) {
        overshoot = std::max(overshoot, err);
      } else if (step < 0.0) {
        overshoot = std::max(overshoot, -err);
      }
    }

    const bool joint_settled =
        !truncated &&
        std::abs(log.rows[last - 1].q[j] - target[j]) <= band;
    const double settling =
        joint_settled ? std::max(0.0, last_violation + log.dt) : seg_len;

    m.rise_time = std::max(m.rise_time, rise);
    m.settling_time = std::max(m.settling_time, settling);
    m.overshoot = std::max(m.overshoot, overshoot);
    m.settled = m.settled && joint_settled;
  }

  // Steady-state error over the final window actually recorded.
  const double tail_start =
      std::max(t0, log.rows[last - 1].t - kSteadyWindowS + 0.5 * log.dt);
  double sse = 0.0;
  for (int j = 0; j < log.dofs; ++j) {
    double acc = 0.0;
    int count = 0;
    for (std::size_t k = first; k < last; ++k) {
      if (log.rows[k].t < tail_start) continue;
      acc += std::abs(log.rows[k].q[j] - target[j]);
      ++count;
    }
    if (count > 0) sse = std::max(sse, acc / count);
  }
  m.steady_state_error = sse;
  return m;
}

}  // namespace

double torque_jitter(const TrajectoryLog& log, double t0, double t1) {
  const auto [first, last] = row_range(log, t0, t1);
  if (last - first < 3) return 0.0;
  double acc = 0.0;
  long count = 0;
  for (std::size_t k = first + 2; k < last; ++k) {
    for (int j = 0; j < log.dofs; ++j) {
      acc += std::abs(log.rows[k].u[j] - 2.0 * log.rows[k - 1].u[j] +
                      log.rows[k - 2].u[j]);
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

Metrics compute_metrics(const TrajectoryLog& log, const Scenario& scenario) {
  Metrics m;
  m.controller = to_string(scenario.controller);
  m.dofs = log.dofs;
  m.tuning_parameters =
      scenario.controller == ControllerKind::kAic
          ? AicController::tuning_parameter_count(log.dofs)
          : MracController::tuning_parameter_count(log.dofs);
  m.diverged = log.diverged;
  m.stop_reason = log.stop_reason;

  for (std::size_t k = 0; k < scenario.schedule.size(); ++k) {
    const double t0 = scenario.schedule[k].t;
    const double t1 = (k + 1 < scenario.schedule.size())
                          ? scenario.schedule[k + 1].t
                          : scenario.duration;
    m.segments.push_back(segment_metrics(log, static_cast<int>(k), t0, t1,
                                         scenario.schedule[k].target));
  }

  const double limit = scenario.controller == ControllerKind::kAic
                           ? scenario.aic.torque_limit
                           : scenario.mrac.torque_limit;
  double sq_err = 0.0;
  long err_count = 0;
  long sat_count = 0;
  long joint_count = 0;
  for (const LogRow& row : log.rows) {
    if (row.setpoint_id >= 0 &&
        row.setpoint_id < static_cast<int>(scenario.schedule.size())) {
      const JointVector& target = scenario.schedule[row.setpoint_id].target;
      sq_err += (row.q - target).squaredNorm();
      err_count += log.dofs;
    }
    for (int j = 0; j < log.dofs; ++j) {
      m.global.peak_torque = std::max(m.global.peak_torque, std::abs(row.u[j]));
      if (std::abs(row.u[j]) >= limit) ++sat_count;
      ++joint_count;
    }
    m.global.mean_step_us += row.step_us;
    m.global.max_step_us = std::max(m.global.max_step_us, row.step_us);
  }
  if (err_count > 0) m.global.tracking_rmse = std::sqrt(sq_err / err_count);
  if (joint_count > 0) {
    m.global.saturation_duty =
        static_cast<double>(sat_count) / static_cast<double>(joint_count);
  }
  if (!log.rows.empty()) {
    m.global.mean_step_us /= static_cast<double>(log.rows.size());
    m.global.torque_jitter =
        torque_jitter(log, log.rows.front().t, log.rows.back().t + log.dt);
  }
  return m;
}

std::string metrics_to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["controller"] = m.controller;
  j["dofs"] = m.dofs;
  j["tuning_parameters"] = m.tuning_parameters;
  j["diverged"] = m.diverged;
  if (m.diverged) j["stop_reason"] = m.stop_reason;

  j["segments"] = nlohmann::ordered_json::array();
  for (const SegmentMetrics& s : m.segments) {
    nlohmann::ordered_json js;
    js["setpoint"] = s.setpoint_id;
    js["t_start"] = round9(s.t_start);
    js["t_end"] = round9(s.t_end);
    js["rise_time_s"] = round9(s.rise_time);
    js["settling_time_s"] = round9(s.settling_time);
    js["settled"] = s.settled;
    js["overshoot_rad"] = round9(s.overshoot);
    js["steady_state_error_rad"] = round9(s.steady_state_error);
    j["segments"].push_back(js);
  }

  j["global"]["tracking_rmse_rad"] = round9(m.global.tracking_rmse);
  j["global"]["peak_torque_nm"] = round9(m.global.peak_torque);
  j["global"]["saturation_duty"] = round9(m.global.saturation_duty);
  j["global"]["torque_jitter_nm"] = round9(m.global.torque_jitter);
  j["global"]["mean_step_us"] = round9(m.global.mean_step_us);
  j["global"]["max_step_us"] = round9(m.global.max_step_us);
  return j.dump(2);
}

std::string metrics_summary(const Metrics& m, const Scenario& scenario) {
  std::ostringstream out;
  char line[160];

  out << "scenario: " << scenario.name << "\n";
  out << "controller: " << m.controller << " (" << m.tuning_parameters
      << " tuning parameters, " << m.dofs << " DOF)\n";
  if (m.diverged) {
    out << "SAFETY STOP: " << m.stop_reason << "\n";
  }
  out << "\nsegment  t[s]          rise[s]   settle[s]  overshoot[rad]  "
         "sse[rad]\n";
  for (const SegmentMetrics& s : m.segments) {
    std::snprintf(line, sizeof(line),
                  "%-8d %5.1f-%-5.1f  %8.3f  %8.3f%s  %12.4f  %10.4f\n",
                  s.setpoint_id, s.t_start, s.t_end, s.rise_time,
                  s.settling_time, s.settled ? " " : "*", s.overshoot,
                  s.steady_state_error);
    out << line;
  }
  out << "(* = not settled within the segment)\n\n";
  std::snprintf(line, sizeof(line),
                "tracking RMSE %.4f rad, peak |u| %.2f Nm, saturation duty "
                "%.4f\n",
                m.global.tracking_rmse, m.global.peak_torque,
                m.global.saturation_duty);
  out << line;
  std::snprintf(line, sizeof(line),
                "torque jitter %.5f Nm, controller step mean %.1f us, max "
                "%.1f us\n",
                m.global.torque_jitter, m.global.mean_step_us,
                m.global.max_step_us);
  out << line;
  return out.str();
}

}  // namespace aict
