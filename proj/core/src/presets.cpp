#include "aict/presets.hpp"

#include <algorithm>

namespace aict {
namespace {

JointVector from_seven(std::initializer_list<double> seven, int dofs) {
  JointVector out = JointVector::Zero(dofs);
  int i = 0;
  for (double v : seven) {
    if (i >= dofs) break;
    out[i++] = v;
  }
  return out;
}

}  // namespace

PlanarArmModel nominal_arm() {
  PlanarArmModel model;
  // Slender-rod links of desk-robot scale.
  model.links = {
      {3.0, 0.45, 0.225, 3.0 * 0.45 * 0.45 / 12.0},
      {2.0, 0.40, 0.200, 2.0 * 0.40 * 0.40 / 12.0},
  };
  model.gravity = 9.81;
  model.damping = (JointVector(2) << 1.0, 0.8).finished();
  return model;
}

PlanarArmModel tuning_arm() { return perturb_masses(nominal_arm(), 0.2, 7); }

PlanarArmModel transfer_arm() {
  PlanarArmModel model = with_payload(nominal_arm(), 0.2);
  model.gravity_compensated = true;
  return model;
}

DecoupledPlantModel decoupled_plant(int dofs) {
  DecoupledPlantModel model;
  model.inertia = JointVector::Constant(dofs, 1.0);
  model.damping = JointVector::Constant(dofs, 0.5);
  model.bias = JointVector::Zero(dofs);
  return model;
}

AicConfig aic_preset() {
  AicConfig cfg;
  cfg.prec.sigma_q = 1.0;
  cfg.prec.sigma_qd = 1.0;
  cfg.prec.sigma_mu = 1.0;
  cfg.prec.sigma_mup = 1.0;
  cfg.kappa_mu = 20.0;
  cfg.kappa_a = 400.0;
  cfg.dt = 1e-3;
  cfg.c_q = 1.0;
  cfg.c_qd = 1.0;
  cfg.torque_limit = 85.0;
  return cfg;
}

MracConfig mrac_preset(int dofs) {
  MracConfig cfg;
  cfg.zeta = 1.0;
  cfg.omega = JointVector::Constant(dofs, 2.0);
  std::tie(cfg.P2, cfg.P3) =
      MracConfig::default_error_weights(cfg.omega, cfg.zeta);
  cfg.E01 = JointVector::Constant(dofs, 1.0);
  cfg.E02 = JointVector::Constant(dofs, 0.1);
  cfg.E11 = JointVector::Constant(dofs, 1.0);
  cfg.E12 = JointVector::Constant(dofs, 0.1);
  cfg.F01 = JointVector::Constant(dofs, 1.0);
  cfg.F02 = JointVector::Constant(dofs, 0.1);
  cfg.F11 = JointVector::Constant(dofs, 0.1);
  cfg.F12 = JointVector::Constant(dofs, 0.1);
  cfg.alpha1 = JointVector::Constant(dofs, 10.0);
  cfg.alpha2 = JointVector::Constant(dofs, 0.2);
  cfg.dt = 1e-3;
  cfg.torque_limit = 85.0;
  return cfg;
}

JointVector pose_a(int dofs) {
  return from_seven({1.0, 0.5, 0.0, -2.0, 0.0, 2.5, 0.0}, dofs);
}

JointVector pose_b(int dofs) {
  return from_seven({0.0, 0.2, 0.0, -1.0, 0.0, 1.2, 0.0}, dofs);
}

JointVector pose_c(int dofs) {
  return from_seven({-1.0, 0.5, 0.0, -1.2, 0.0, 1.6, 0.0}, dofs);
}

Scenario pick_place_cycle(ControllerKind kind) {
  constexpr int n = 2;

  Scenario scn;
  scn.name = std::string("pick_place_") + to_string(kind);
  scn.plant = nominal_arm();
  scn.controller = kind;
  scn.aic = aic_preset();
  scn.mrac = mrac_preset(n);
  scn.schedule = {
      {0.0, pose_a(n)},  {6.0, pose_b(n)},  {12.0, pose_c(n)},
      {18.0, pose_b(n)}, {24.0, pose_a(n)},
  };
  scn.duration = 30.0;
  scn.noise = {1e-3, 1e-2, 1234};
  scn.initial_q = JointVector::Zero(n);
  scn.dt = 1e-3;
  return scn;
}

}  // namespace aict
