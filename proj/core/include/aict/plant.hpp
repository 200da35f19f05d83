#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aict/types.hpp"

namespace aict {

/// One link of the planar chain. Angles are measured so that q = 0
/// points straight down (hanging equilibrium has zero gravity torque).
struct LinkParams {
  double mass = 1.0;     // kg
  double length = 0.5;   // m, joint-to-joint
  double com = 0.25;     // m, joint-to-center-of-mass along the link
  double inertia = 0.02; // kg·m^2 about the center of mass
};

/// Planar n-link arm with optional end-effector point mass. The
/// gravity_compensated flag models firmware that cancels the exact
/// gravity torque inside the plant.
struct PlanarArmModel {
  std::vector<LinkParams> links;
  double gravity = 9.81;         // m/s^2
  JointVector damping;           // N·m·s/rad, viscous, per joint
  double payload_mass = 0.0;     // kg, point mass at the tip
  bool gravity_compensated = false;

  int dofs() const { return static_cast<int>(links.size()); }
  void validate() const;
};

/// Independent per-joint plants (inertia + viscous damping + constant
/// bias torque). Used for large-n scaling runs where the full chain
/// dynamics add nothing.
struct DecoupledPlantModel {
  JointVector inertia;  // kg·m^2
  JointVector damping;  // N·m·s/rad
  JointVector bias;     // N·m

  int dofs() const { return static_cast<int>(inertia.size()); }
  void validate() const;
};

struct PlantState {
  JointVector q;   // rad
  JointVector qd;  // rad/s
  double t = 0.0;  // s

  static PlantState rest(int n) {
    return {JointVector::Zero(n), JointVector::Zero(n), 0.0};
  }
};

struct SensorNoise {
  double std_q = 0.0;   // rad
  double std_qd = 0.0;  // rad/s
  std::uint64_t seed = 0;
};

/// Seeded Gaussian measurement stream. A fixed seed reproduces the
/// exact same sequence of readings.
class NoiseStream {
 public:
  explicit NoiseStream(const SensorNoise& cfg);
  SensoryReading sense(const PlantState& state);

 private:
  SensorNoise cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_;
};

/// Rectangular torque pulse on selected joints, e.g. a human push.
struct PushEvent {
  double t_start = 0.0;
  double duration = 0.0;
  JointVector torque;  // N·m, added while active
};

/// Payload swap at the end-effector at a given instant.
struct PayloadEvent {
  double t = 0.0;
  double mass = 0.0;  // kg, new payload
};

// --- Lagrangian terms of the planar chain -------------------------------

/// Joint-space inertia matrix, symmetric positive definite.
Eigen::MatrixXd mass_matrix(const PlanarArmModel& model, const JointVector& q);

/// Analytic partial derivatives dM/dq_k, k = 0..n-1.
std::vector<Eigen::MatrixXd> mass_matrix_partials(const PlanarArmModel& model,
                                                  const JointVector& q);

/// Coriolis/centrifugal matrix from the Christoffel symbols of M, so
/// dM/dt - 2C is skew-symmetric.
Eigen::MatrixXd coriolis_matrix(const PlanarArmModel& model,
                                const JointVector& q, const JointVector& qd);

/// Gravity load torque (zero when model.gravity == 0).
JointVector gravity_torque(const PlanarArmModel& model, const JointVector& q);

/// Kinetic plus potential energy of the chain and payload.
double total_energy(const PlanarArmModel& model, const PlantState& state);

/// Planar tip position, for static-torque checks.
Eigen::Vector2d end_effector_position(const PlanarArmModel& model,
                                      const JointVector& q);

// --- Dynamics -----------------------------------------------------------

/// qdd = M^-1 (tau - C qd - D qd - g[q] unless compensated).
JointVector forward_dynamics(const PlanarArmModel& model,
                             const PlantState& state, const JointVector& tau);

JointVector forward_dynamics(const DecoupledPlantModel& model,
                             const PlantState& state, const JointVector& tau);

namespace detail {

template <typename Model>
std::pair<JointVector, JointVector> state_derivative(const Model& model,
                                                     const PlantState& s,
                                                     const JointVector& tau) {
  return {s.qd, forward_dynamics(model, s, tau)};
}

}  // namespace detail

/// Classic fixed-step RK4 with the torque held constant over the step.
template <typename Model>
PlantState rk4_step(const Model& model, const PlantState& state,
                    const JointVector& tau, double h) {
  require_positive(h, "step size h");
  const auto [k1q, k1v] = detail::state_derivative(model, state, tau);
  PlantState s2{state.q + 0.5 * h * k1q, state.qd + 0.5 * h * k1v, state.t};
  const auto [k2q, k2v] = detail::state_derivative(model, s2, tau);
  PlantState s3{state.q + 0.5 * h * k2q, state.qd + 0.5 * h * k2v, state.t};
  const auto [k3q, k3v] = detail::state_derivative(model, s3, tau);
  PlantState s4{state.q + h * k3q, state.qd + h * k3v, state.t};
  const auto [k4q, k4v] = detail::state_derivative(model, s4, tau);

  PlantState out;
  out.q = state.q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  out.qd = state.qd + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.t = state.t + h;
  if (!out.q.allFinite() || !out.qd.allFinite()) {
    throw DivergenceError("plant state diverged during integration", -1);
  }
  return out;
}

// --- Model edits --------------------------------------------------------

/// Scales every link mass by an independent uniform draw in
/// [1 - fraction, 1 + fraction].
PlanarArmModel perturb_masses(const PlanarArmModel& model, double fraction,
                              std::uint64_t seed);

/// Returns the model with the end-effector point mass replaced.
PlanarArmModel with_payload(const PlanarArmModel& model, double mass);

}  // namespace aict
