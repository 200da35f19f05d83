#include "aict/aic.hpp"

#include <cmath>

namespace aict {
namespace {

void check_finite(const JointVector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw DivergenceError(
          std::string(what) + " diverged at joint " + std::to_string(i),
          static_cast<int>(i));
    }
  }
}

}  // namespace

void AicConfig::validate() const {
  require_positive(prec.sigma_q, "sigma_q");
  require_positive(prec.sigma_qd, "sigma_qd");
  require_positive(prec.sigma_mu, "sigma_mu");
  require_positive(prec.sigma_mup, "sigma_mup");
  require_positive(kappa_mu, "kappa_mu");
  require_positive(kappa_a, "kappa_a");
  require_positive(dt, "dt");
  require_positive(c_q, "c_q");
  require_positive(c_qd, "c_qd");
  require_positive(torque_limit, "torque_limit");
}

AicController::AicController(const AicConfig& cfg,
                             const SensoryReading& reading,
                             const JointVector& goal)
    : cfg_(cfg) {
  cfg_.validate();
  require_same_size(reading.y_q, reading.y_qd, "reading.y_q vs reading.y_qd");
  require_same_size(reading.y_q, goal, "reading vs goal");
  n_ = reading.dofs();
  state_.belief.mu = reading.y_q;
  state_.belief.mu_p = reading.y_qd;
  state_.belief.mu_pp = JointVector::Zero(n_);
  state_.u = JointVector::Zero(n_);
  state_.goal = goal;
}

void AicController::belief_step(const SensoryReading& reading) {
  const fe::BeliefGradient g =
      fe::grad_belief(state_.belief, reading, state_.goal, cfg_.prec);

  // The d/dt shift supplies mu' and mu''; only the gradient is scaled.
  state_.belief.mu += cfg_.dt * (state_.belief.mu_p - cfg_.kappa_mu * g.d_mu);
  state_.belief.mu_p +=
      cfg_.dt * (state_.belief.mu_pp - cfg_.kappa_mu * g.d_mu_p);
  state_.belief.mu_pp += cfg_.dt * (-cfg_.kappa_mu * g.d_mu_pp);

  check_finite(state_.belief.mu, "belief mu");
  check_finite(state_.belief.mu_p, "belief mu'");
  check_finite(state_.belief.mu_pp, "belief mu''");
}

void AicController::action_step(const SensoryReading& reading) {
  const fe::SensoryGradient g =
      fe::grad_sensory(state_.belief, reading, cfg_.prec);

  const JointVector u_dot =
      -cfg_.kappa_a * (cfg_.c_q * g.d_y_q + cfg_.c_qd * g.d_y_qd);
  state_.u = (state_.u + cfg_.dt * u_dot)
                 .cwiseMax(-cfg_.torque_limit)
                 .cwiseMin(cfg_.torque_limit);
  check_finite(state_.u, "torque");
}

const JointVector& AicController::step(const SensoryReading& reading) {
  belief_step(reading);
  action_step(reading);
  return state_.u;
}

void AicController::set_goal(const JointVector& goal) {
  require_same_size(state_.goal, goal, "goal");
  state_.goal = goal;
}

double AicController::free_energy(const SensoryReading& reading) const {
  return fe::free_energy(state_.belief, reading, state_.goal, cfg_.prec);
}

}  // namespace aict
