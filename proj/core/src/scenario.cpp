#include "aict/scenario.hpp"

namespace aict {

std::string to_string(ControllerKind kind) {
  return kind == ControllerKind::kAic ? "aic" : "mrac";
}

int Scenario::dofs() const {
  return std::visit([](const auto& model) { return model.dofs(); }, plant);
}

void Scenario::validate() const {
  std::visit([](const auto& model) { model.validate(); }, plant);
  const int n = dofs();

  if (duration < 0.0) throw ConfigError("duration must be >= 0");
  require_positive(dt, "dt");
  if (initial_q.size() != n) {
    throw DimensionError("initial_q length does not match plant DOFs");
  }

  double prev = -1.0;
  for (const SetPoint& sp : schedule) {
    if (sp.target.size() != n) {
      throw DimensionError("set-point length does not match plant DOFs");
    }
    if (sp.t < 0.0 || sp.t <= prev) {
      throw ConfigError("schedule times must be >= 0 and strictly increasing");
    }
    prev = sp.t;
  }
  if (!schedule.empty() && duration < schedule.back().t) {
    throw ConfigError("duration must cover the last scheduled set-point");
  }

  for (const PushEvent& push : pushes) {
    if (push.torque.size() != n) {
      throw DimensionError("push torque length does not match plant DOFs");
    }
    if (push.duration < 0.0 || push.t_start < 0.0) {
      throw ConfigError("push events need t_start >= 0 and duration >= 0");
    }
  }
  for (const PayloadEvent& ev : payload_events) {
    if (ev.mass < 0.0) throw ConfigError("payload mass must be >= 0");
    if (!std::holds_alternative<PlanarArmModel>(plant)) {
      throw ConfigError("payload events require the planar arm plant");
    }
  }

  if (controller == ControllerKind::kAic) {
    aic.validate();
  } else {
    mrac.validate();
    if (mrac.dofs() != n) {
      throw DimensionError("MRAC config DOFs do not match plant");
    }
  }
}

}  // namespace aict
