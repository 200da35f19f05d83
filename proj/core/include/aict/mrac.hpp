#pragma once

#include <utility>

#include "aict/types.hpp"

namespace aict {

/// Weights of the proportional-integral adaptation laws, the modified
/// error, and the per-joint second-order reference model. Diagonal
/// matrices are stored as n-vectors.
struct MracConfig {
  // Proportional / integral weights of the four gain laws.
  JointVector E01, E02;  // feedback position gain K0
  JointVector E11, E12;  // feedback velocity gain K1
  JointVector F01, F02;  // feedforward position gain Q0
  JointVector F11, F12;  // feedforward velocity gain Q1
  JointVector alpha1, alpha2;  // auxiliary signal f

  JointVector P2, P3;  // modified-error weights

  double zeta = 1.0;   // reference-model damping ratio, shared
  JointVector omega;   // reference-model natural frequencies, rad/s

  double dt = 1e-3;          // control period, s
  double torque_limit = 85.0;  // N·m

  int dofs() const { return static_cast<int>(omega.size()); }
  void validate() const;

  /// Standard modified-error weights derived from the reference model
  /// with unit output weighting: P2 = 1/(2 w^2), P3 = 1/(4 z w) + 1/(4 z w^3).
  static std::pair<JointVector, JointVector> default_error_weights(
      const JointVector& omega, double zeta);
};

/// Adaptive gain set produced by one update: torque is
/// u = f + K0 q + K1 qd + Q0 q_r + Q1 qd_r.
struct MracGains {
  Eigen::MatrixXd K0, K1, Q0, Q1;
  JointVector f;
};

struct MracState {
  // Running rectangle-rule integrals of qe * {q, qd, q_r, qd_r, 1}^T.
  Eigen::MatrixXd acc_K0, acc_K1, acc_Q0, acc_Q1;
  JointVector acc_f;
  JointVector ref_q, ref_qd;  // reference-model state
};

/// Model reference adaptive controller: every joint is forced to track
/// a second-order reference model via feedback/feedforward gain
/// matrices and an auxiliary signal, all adapted with PI laws driven by
/// the modified joint angle error. No plant model is used.
class MracController {
 public:
  /// Starts with zero gain accumulators and the reference model at
  /// rest on q0.
  MracController(const MracConfig& cfg, const JointVector& q0);

  /// Sets the raw set-point fed to the reference model.
  void set_command(const JointVector& q_cmd);

  /// One control tick: advance the reference model, form the modified
  /// error, adapt the gains, compose and clamp the torque.
  const JointVector& step(const SensoryReading& reading);

  /// qe = P2 (q_r - q) + P3 (qd_r - qd).
  static JointVector modified_error(const JointVector& q_r,
                                    const JointVector& qd_r,
                                    const JointVector& q,
                                    const JointVector& qd,
                                    const MracConfig& cfg);

  /// Advances the integral accumulators by dt * (qe x^T) and returns
  /// the gains: proportional part E.1 (qe x^T) plus integral part E.2
  /// times the accumulator. Accumulator rows of joints whose torque was
  /// saturated on the previous tick are frozen (anti-windup).
  const MracGains& update_gains(const JointVector& qe, const JointVector& q,
                                const JointVector& qd, const JointVector& q_r,
                                const JointVector& qd_r);

  /// u = f + K0 q + K1 qd + Q0 q_r + Q1 qd_r, clamped to the torque
  /// limit. Uses the gains from the last update_gains call.
  const JointVector& control(const JointVector& q, const JointVector& qd,
                             const JointVector& q_r, const JointVector& qd_r);

  /// Advances the per-joint reference model w^2/(s^2 + 2 z w s + w^2)
  /// by one period with the commanded set-point held constant, using
  /// the exact zero-order-hold discretization. Returns (q_r, qd_r).
  std::pair<JointVector, JointVector> reference_model_step(
      const JointVector& q_cmd);

  const MracState& state() const { return state_; }
  const MracGains& gains() const { return gains_; }
  const JointVector& torque() const { return u_; }
  const MracConfig& config() const { return cfg_; }
  int dofs() const { return n_; }

  /// Scalar tuning parameters for an n-DOF loop: the five adaptation
  /// laws each carry proportional, integral, and derivative weights
  /// (the derivative branch is identically zero here but belongs to
  /// the law family), plus the reference model's natural frequency and
  /// damping per joint: (5*3 + 2) * n.
  static int tuning_parameter_count(int dofs) { return 17 * dofs; }

 private:
  MracConfig cfg_;
  MracState state_;
  MracGains gains_;
  JointVector u_;
  JointVector q_cmd_;
  Eigen::Matrix<bool, Eigen::Dynamic, 1> saturated_;
  // Per-joint ZOH discretization of the reference model.
  std::vector<Eigen::Matrix2d> ref_Ad_;
  std::vector<Eigen::Vector2d> ref_Bd_;
  int n_ = 0;
};

}  // namespace aict
