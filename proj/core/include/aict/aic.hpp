#pragma once

#include "aict/free_energy.hpp"
#include "aict/types.hpp"

namespace aict {

/// Tuning and loop parameters for the active inference controller.
struct AicConfig {
  Precisions prec;
  double kappa_mu = 10.0;    // belief learning rate, 1/s
  double kappa_a = 100.0;    // action learning rate
  double dt = 1e-3;          // control period, s
  double c_q = 1.0;          // assumed d(y_q)/du, positive constant
  double c_qd = 1.0;         // assumed d(y_qd)/du, positive constant
  double torque_limit = 85.0;  // N·m, symmetric saturation

  void validate() const;
};

struct AicState {
  GeneralizedBelief belief;
  JointVector u;     // commanded torque, N·m
  JointVector goal;  // desired joint positions, rad
};

/// Joint-space torque controller that runs gradient descent on the
/// manipulator free-energy: the belief follows the sensed state and the
/// internal goal attractor, the torque integrates the sensory
/// prediction errors. One instance is stepped sequentially; distinct
/// instances are independent.
class AicController {
 public:
  /// Initializes the belief from the first reading (mu = y_q,
  /// mu' = y_qd, mu'' = 0) and the torque to zero.
  AicController(const AicConfig& cfg, const SensoryReading& reading,
                const JointVector& goal);

  /// Euler-integrates the belief: d(mu)/dt = mu' - kappa_mu dF/dmu and
  /// likewise for the higher orders, where the shift terms mu', mu''
  /// come from the generalized-motion structure and are not scaled by
  /// the learning rate.
  void belief_step(const SensoryReading& reading);

  /// Euler-integrates the torque through the sensory channel:
  /// du/dt = -kappa_a (c_q dF/dy_q + c_qd dF/dy_qd), then clamps to
  /// +-torque_limit.
  void action_step(const SensoryReading& reading);

  /// One control tick: belief_step then action_step on the same
  /// reading. Belief gradients see the pre-step belief, action
  /// gradients the post-step belief. Returns the commanded torque.
  const JointVector& step(const SensoryReading& reading);

  /// Replaces the goal attractor. Belief and torque are kept, so the
  /// torque trajectory stays continuous across set-point switches.
  void set_goal(const JointVector& goal);

  double free_energy(const SensoryReading& reading) const;

  const GeneralizedBelief& belief() const { return state_.belief; }
  const JointVector& torque() const { return state_.u; }
  const JointVector& goal() const { return state_.goal; }
  const AicConfig& config() const { return cfg_; }
  int dofs() const { return n_; }

  /// Scalars a user adjusts to tune the closed loop: four variances and
  /// two learning rates. Independent of the DOF count.
  static int tuning_parameter_count(int /*dofs*/ = 0) { return 6; }

 private:
  AicConfig cfg_;
  AicState state_;
  int n_ = 0;
};

}  // namespace aict
