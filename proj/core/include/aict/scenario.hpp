#pragma once

#include <string>
#include <variant>
#include <vector>

#include "aict/aic.hpp"
#include "aict/mrac.hpp"
#include "aict/plant.hpp"

namespace aict {

enum class ControllerKind { kAic, kMrac };

std::string to_string(ControllerKind kind);

/// Timed joint-space set-point.
struct SetPoint {
  double t = 0.0;
  JointVector target;
};

/// Everything one co-simulated run needs: plant, controller choice and
/// tuning, set-point schedule, sensor noise, and scheduled events.
struct Scenario {
  std::string name = "scenario";
  std::variant<PlanarArmModel, DecoupledPlantModel> plant;
  ControllerKind controller = ControllerKind::kAic;
  AicConfig aic;
  MracConfig mrac;
  std::vector<SetPoint> schedule;  // strictly increasing times
  double duration = 0.0;           // s
  SensorNoise noise;
  JointVector initial_q;           // plant start pose, rad
  std::vector<PushEvent> pushes;
  std::vector<PayloadEvent> payload_events;
  double dt = 1e-3;                // control and integration period, s

  int dofs() const;
  void validate() const;
};

}  // namespace aict
