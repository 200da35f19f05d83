#pragma once

#include "aict/scenario.hpp"

namespace aict {

/// Nominal two-link desk-scale arm used by the bundled experiments.
PlanarArmModel nominal_arm();

/// Deliberately wrong variant of the nominal arm used for tuning: every
/// link mass off by up to 20%, gravity acting.
PlanarArmModel tuning_arm();

/// Plant the tuned controllers are transferred to without re-tuning:
/// nominal masses, firmware gravity compensation, added end-effector
/// mass.
PlanarArmModel transfer_arm();

/// Decoupled plant for scaling runs.
DecoupledPlantModel decoupled_plant(int dofs);

/// Tuned controller presets. Derived against tuning_arm() by the usual
/// staged procedure: unit confidences first, then the belief rate until
/// static estimation is fast, then the action rate until the arm tracks
/// with oscillation, then reduced sensor/velocity confidence to damp.
AicConfig aic_preset();
MracConfig mrac_preset(int dofs);

/// The three pick-and-place poses, truncated or zero-padded to n joints.
JointVector pose_a(int dofs);
JointVector pose_b(int dofs);
JointVector pose_c(int dofs);

/// 30 s pick-and-place cycle: A, B, C, B, A every 6 s on the nominal
/// arm, with measurement noise.
Scenario pick_place_cycle(ControllerKind kind);

}  // namespace aict
