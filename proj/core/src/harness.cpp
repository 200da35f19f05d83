#include "aict/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>

#include "aict/presets.hpp"

namespace aict {
namespace {

constexpr double kRunawayVelocity = 50.0;  // rad/s, safety-stop threshold

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start)
      .count();
}

// Either controller behind one stepping surface for the run loop.
struct ControllerHandle {
  std::optional<AicController> aic;
  std::optional<MracController> mrac;

  void set_target(const JointVector& target) {
    if (aic) {
      aic->set_goal(target);
    } else {
      mrac->set_command(target);
    }
  }

  const JointVector& step(const SensoryReading& reading) {
    return aic ? aic->step(reading) : mrac->step(reading);
  }
};

int check_runaway(const PlantState& state) {
  for (Eigen::Index i = 0; i < state.qd.size(); ++i) {
    if (std::abs(state.qd[i]) > kRunawayVelocity) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TrajectoryLog run(const Scenario& scenario) {
  scenario.validate();
  const int n = scenario.dofs();
  const double dt = scenario.dt;

  TrajectoryLog log;
  log.dofs = n;
  log.dt = dt;
  const long ticks = std::lround(scenario.duration / dt);
  if (ticks <= 0) return log;
  log.rows.reserve(static_cast<std::size_t>(ticks));

  // The plant variant is copied so payload events can edit it mid-run.
  auto plant = scenario.plant;
  PlantState state{scenario.initial_q, JointVector::Zero(n), 0.0};
  NoiseStream noise(scenario.noise);

  ControllerHandle controller;
  {
    const SensoryReading first = noise.sense(state);
    // Hold the initial pose until the first scheduled set-point.
    const JointVector hold =
        (!scenario.schedule.empty() && scenario.schedule.front().t <= 0.0)
            ? scenario.schedule.front().target
            : first.y_q;
    if (scenario.controller == ControllerKind::kAic) {
      controller.aic.emplace(scenario.aic, first, hold);
    } else {
      controller.mrac.emplace(scenario.mrac, first.y_q);
      controller.mrac->set_command(hold);
    }
  }

  std::size_t next_setpoint = 0;
  int active_setpoint = -1;
  std::size_t next_payload = 0;

  for (long k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    state.t = t;

    while (next_setpoint < scenario.schedule.size() &&
           scenario.schedule[next_setpoint].t <= t) {
      controller.set_target(scenario.schedule[next_setpoint].target);
      active_setpoint = static_cast<int>(next_setpoint);
      ++next_setpoint;
    }
    while (next_payload < scenario.payload_events.size() &&
           scenario.payload_events[next_payload].t <= t) {
      std::get<PlanarArmModel>(plant).payload_mass =
          scenario.payload_events[next_payload].mass;
      ++next_payload;
    }

    const SensoryReading reading = noise.sense(state);

    LogRow row;
    row.t = t;
    row.q = state.q;
    row.qd = state.qd;
    row.y_q = reading.y_q;
    row.y_qd = reading.y_qd;
    row.setpoint_id = active_setpoint;

    try {
      const auto tick_start = Clock::now();
      row.u = controller.step(reading);
      row.step_us = elapsed_us(tick_start);
    } catch (const DivergenceError& e) {
      log.diverged = true;
      log.stop_time = t;
      log.stop_reason = e.what();
      break;
    }

    if (controller.aic) {
      row.mu = controller.aic->belief().mu;
      row.mu_p = controller.aic->belief().mu_p;
      row.mu_pp = controller.aic->belief().mu_pp;
      row.free_energy = controller.aic->free_energy(reading);
    } else {
      row.mu = JointVector::Zero(n);
      row.mu_p = JointVector::Zero(n);
      row.mu_pp = JointVector::Zero(n);
    }
    log.rows.push_back(std::move(row));

    JointVector tau = log.rows.back().u;
    for (const PushEvent& push : scenario.pushes) {
      if (t >= push.t_start && t < push.t_start + push.duration) {
        tau += push.torque;
      }
    }

    try {
      state = std::visit(
          [&](const auto& model) { return rk4_step(model, state, tau, dt); },
          plant);
    } catch (const Error& e) {
      log.diverged = true;
      log.stop_time = t;
      log.stop_reason = e.what();
      break;
    }

    const int runaway = check_runaway(state);
    if (runaway >= 0) {
      log.diverged = true;
      log.stop_time = state.t;
      log.stop_reason = "safety stop: joint " + std::to_string(runaway) +
                        " exceeded " + std::to_string(kRunawayVelocity) +
                        " rad/s";
      break;
    }
  }
  return log;
}

std::vector<SegmentDiff> trajectory_difference(const TrajectoryLog& a,
                                               const TrajectoryLog& b,
                                               const Scenario& scenario) {
  std::vector<SegmentDiff> out;
  const std::size_t rows = std::min(a.rows.size(), b.rows.size());

  for (std::size_t k = 0; k < scenario.schedule.size(); ++k) {
    const double t0 = scenario.schedule[k].t;
    const double t1 = (k + 1 < scenario.schedule.size())
                          ? scenario.schedule[k + 1].t
                          : scenario.duration;
    SegmentDiff d;
    d.setpoint_id = static_cast<int>(k);

    double final_acc = 0.0;
    int final_count = 0;
    const double tail_start = t1 - 0.1;
    for (std::size_t i = 0; i < rows; ++i) {
      const double t = a.rows[i].t;
      if (t < t0 || t >= t1) continue;
      const double diff =
          (a.rows[i].q - b.rows[i].q).cwiseAbs().maxCoeff();
      d.peak = std::max(d.peak, diff);
      if (t >= tail_start) {
        final_acc += diff;
        ++final_count;
      }
    }
    if (final_count > 0) d.final_mean = final_acc / final_count;
    out.push_back(d);
  }
  return out;
}

TransferResult transfer_experiment() {
  Scenario aic_scn = pick_place_cycle(ControllerKind::kAic);
  aic_scn.name = "transfer_aic";
  aic_scn.plant = transfer_arm();

  Scenario mrac_scn = pick_place_cycle(ControllerKind::kMrac);
  mrac_scn.name = "transfer_mrac";
  mrac_scn.plant = transfer_arm();

  TransferResult result;
  result.aic_log = run(aic_scn);
  result.mrac_log = run(mrac_scn);
  result.aic = compute_metrics(result.aic_log, aic_scn);
  result.mrac = compute_metrics(result.mrac_log, mrac_scn);
  return result;
}

PayloadResult payload_experiment() {
  const auto with_mass = [](ControllerKind kind, double payload) {
    Scenario scn = pick_place_cycle(kind);
    scn.name = "payload_" + std::to_string(payload) + "_" + to_string(kind);
    scn.plant = with_payload(std::get<PlanarArmModel>(scn.plant), payload);
    return scn;
  };

  const Scenario aic_light = with_mass(ControllerKind::kAic, 0.1);
  const Scenario aic_heavy = with_mass(ControllerKind::kAic, 0.7);
  const Scenario mrac_heavy = with_mass(ControllerKind::kMrac, 0.7);

  PayloadResult result;
  result.aic_light = run(aic_light);
  result.aic_heavy = run(aic_heavy);
  result.mrac_heavy = run(mrac_heavy);
  result.aic_diff =
      trajectory_difference(result.aic_heavy, result.aic_light, aic_light);

  // Placing segment: the arm holds the place pose C, t in [12, 18).
  result.aic_placing_jitter = torque_jitter(result.aic_heavy, 12.0, 18.0);
  result.mrac_placing_jitter = torque_jitter(result.mrac_heavy, 12.0, 18.0);
  return result;
}

TimingTable timing_benchmark(const std::vector<int>& dofs_list, int steps) {
  if (dofs_list.empty()) throw ConfigError("timing benchmark needs DOF list");
  if (steps < 1) throw ConfigError("timing benchmark needs steps >= 1");

  TimingTable table;
  table.steps = steps;

  const auto summarize = [steps](std::vector<double>& us, int n) {
    std::sort(us.begin(), us.end());
    TimingRow row;
    row.dofs = n;
    row.mean_us = 0.0;
    for (double v : us) row.mean_us += v;
    row.mean_us /= static_cast<double>(us.size());
    row.p50_us = us[us.size() / 2];
    row.p99_us = us[static_cast<std::size_t>(0.99 * (us.size() - 1))];
    row.max_us = us.back();
    return row;
  };

  for (int n : dofs_list) {
    if (n < 1) throw ConfigError("DOF counts must be >= 1");
    const DecoupledPlantModel plant = decoupled_plant(n);
    const JointVector goal = JointVector::Constant(n, 1.0);
    std::vector<double> us(static_cast<std::size_t>(steps));

    {
      PlantState state = PlantState::rest(n);
      AicConfig cfg = aic_preset();
      AicController aic(cfg, SensoryReading{state.q, state.qd}, goal);
      for (int k = 0; k < steps; ++k) {
        const SensoryReading reading{state.q, state.qd};
        const auto start = Clock::now();
        const JointVector& u = aic.step(reading);
        us[static_cast<std::size_t>(k)] = elapsed_us(start);
        state = rk4_step(plant, state, u, cfg.dt);
      }
      table.aic.push_back(summarize(us, n));
    }
    {
      PlantState state = PlantState::rest(n);
      MracConfig cfg = mrac_preset(n);
      MracController mrac(cfg, state.q);
      mrac.set_command(goal);
      for (int k = 0; k < steps; ++k) {
        const SensoryReading reading{state.q, state.qd};
        const auto start = Clock::now();
        const JointVector& u = mrac.step(reading);
        us[static_cast<std::size_t>(k)] = elapsed_us(start);
        state = rk4_step(plant, state, u, cfg.dt);
      }
      table.mrac.push_back(summarize(us, n));
    }
  }
  return table;
}

}  // namespace aict
