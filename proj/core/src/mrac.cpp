#include "aict/mrac.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

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

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw DivergenceError(std::string(what) + " accumulator diverged", -1);
  }
}

void require_length(const JointVector& v, int n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected length " +
                         std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

}  // namespace

void MracConfig::validate() const {
  const int n = dofs();
  if (n < 1) throw ConfigError("MracConfig: omega must have length >= 1");
  for (const auto* v : {&E01, &E02, &E11, &E12, &F01, &F02, &F11, &F12,
                        &alpha1, &alpha2, &P2, &P3}) {
    require_length(*v, n, "MracConfig weight vector");
    if (!v->allFinite()) throw ConfigError("MracConfig: non-finite weight");
  }
  require_positive(dt, "dt");
  require_positive(zeta, "zeta");
  require_positive(torque_limit, "torque_limit");
  for (int i = 0; i < n; ++i) {
    require_positive(omega[i], "omega");
  }
}

std::pair<JointVector, JointVector> MracConfig::default_error_weights(
    const JointVector& omega, double zeta) {
  JointVector p2(omega.size()), p3(omega.size());
  for (Eigen::Index i = 0; i < omega.size(); ++i) {
    const double w = omega[i];
    p2[i] = 1.0 / (2.0 * w * w);
    p3[i] = 1.0 / (4.0 * zeta * w) + 1.0 / (4.0 * zeta * w * w * w);
  }
  return {p2, p3};
}

MracController::MracController(const MracConfig& cfg, const JointVector& q0)
    : cfg_(cfg) {
  cfg_.validate();
  n_ = cfg_.dofs();
  require_length(q0, n_, "q0");

  state_.acc_K0 = Eigen::MatrixXd::Zero(n_, n_);
  state_.acc_K1 = Eigen::MatrixXd::Zero(n_, n_);
  state_.acc_Q0 = Eigen::MatrixXd::Zero(n_, n_);
  state_.acc_Q1 = Eigen::MatrixXd::Zero(n_, n_);
  state_.acc_f = JointVector::Zero(n_);
  state_.ref_q = q0;
  state_.ref_qd = JointVector::Zero(n_);

  gains_.K0 = Eigen::MatrixXd::Zero(n_, n_);
  gains_.K1 = Eigen::MatrixXd::Zero(n_, n_);
  gains_.Q0 = Eigen::MatrixXd::Zero(n_, n_);
  gains_.Q1 = Eigen::MatrixXd::Zero(n_, n_);
  gains_.f = JointVector::Zero(n_);

  u_ = JointVector::Zero(n_);
  q_cmd_ = q0;
  saturated_.setConstant(n_, false);

  ref_Ad_.resize(n_);
  ref_Bd_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    const double w = cfg_.omega[i];
    Eigen::Matrix2d A;
    A << 0.0, 1.0, -w * w, -2.0 * cfg_.zeta * w;
    const Eigen::Matrix2d Ad = (A * cfg_.dt).exp();
    const Eigen::Vector2d B(0.0, w * w);
    // A is invertible (det = w^2), so the ZOH input matrix is exact.
    ref_Ad_[i] = Ad;
    ref_Bd_[i] = A.inverse() * (Ad - Eigen::Matrix2d::Identity()) * B;
  }
}

void MracController::set_command(const JointVector& q_cmd) {
  require_length(q_cmd, n_, "q_cmd");
  q_cmd_ = q_cmd;
}

JointVector MracController::modified_error(const JointVector& q_r,
                                           const JointVector& qd_r,
                                           const JointVector& q,
                                           const JointVector& qd,
                                           const MracConfig& cfg) {
  require_same_size(q_r, q, "q_r vs q");
  require_same_size(qd_r, qd, "qd_r vs qd");
  require_same_size(q_r, cfg.P2, "q_r vs P2");
  return cfg.P2.cwiseProduct(q_r - q) + cfg.P3.cwiseProduct(qd_r - qd);
}

const MracGains& MracController::update_gains(const JointVector& qe,
                                              const JointVector& q,
                                              const JointVector& qd,
                                              const JointVector& q_r,
                                              const JointVector& qd_r) {
  require_length(qe, n_, "qe");

  const Eigen::MatrixXd outer_q = qe * q.transpose();
  const Eigen::MatrixXd outer_qd = qe * qd.transpose();
  const Eigen::MatrixXd outer_qr = qe * q_r.transpose();
  const Eigen::MatrixXd outer_qdr = qe * qd_r.transpose();

  for (int i = 0; i < n_; ++i) {
    if (saturated_[i]) continue;  // anti-windup: hold row while clipped
    state_.acc_K0.row(i) += cfg_.dt * outer_q.row(i);
    state_.acc_K1.row(i) += cfg_.dt * outer_qd.row(i);
    state_.acc_Q0.row(i) += cfg_.dt * outer_qr.row(i);
    state_.acc_Q1.row(i) += cfg_.dt * outer_qdr.row(i);
    state_.acc_f[i] += cfg_.dt * qe[i];
  }
  check_finite(state_.acc_K0, "K0");
  check_finite(state_.acc_K1, "K1");
  check_finite(state_.acc_Q0, "Q0");
  check_finite(state_.acc_Q1, "Q1");
  check_finite(state_.acc_f, "f accumulator");

  gains_.K0 = cfg_.E01.asDiagonal() * outer_q + cfg_.E02.asDiagonal() * state_.acc_K0;
  gains_.K1 = cfg_.E11.asDiagonal() * outer_qd + cfg_.E12.asDiagonal() * state_.acc_K1;
  gains_.Q0 = cfg_.F01.asDiagonal() * outer_qr + cfg_.F02.asDiagonal() * state_.acc_Q0;
  gains_.Q1 = cfg_.F11.asDiagonal() * outer_qdr + cfg_.F12.asDiagonal() * state_.acc_Q1;
  gains_.f = cfg_.alpha1.cwiseProduct(qe) + cfg_.alpha2.cwiseProduct(state_.acc_f);
  return gains_;
}

const JointVector& MracController::control(const JointVector& q,
                                           const JointVector& qd,
                                           const JointVector& q_r,
                                           const JointVector& qd_r) {
  const JointVector raw = gains_.f + gains_.K0 * q + gains_.K1 * qd +
                          gains_.Q0 * q_r + gains_.Q1 * qd_r;
  check_finite(raw, "torque");
  for (int i = 0; i < n_; ++i) {
    saturated_[i] = std::abs(raw[i]) > cfg_.torque_limit;
  }
  u_ = raw.cwiseMax(-cfg_.torque_limit).cwiseMin(cfg_.torque_limit);
  return u_;
}

std::pair<JointVector, JointVector> MracController::reference_model_step(
    const JointVector& q_cmd) {
  require_length(q_cmd, n_, "q_cmd");
  for (int i = 0; i < n_; ++i) {
    const Eigen::Vector2d x(state_.ref_q[i], state_.ref_qd[i]);
    const Eigen::Vector2d next = ref_Ad_[i] * x + ref_Bd_[i] * q_cmd[i];
    state_.ref_q[i] = next[0];
    state_.ref_qd[i] = next[1];
  }
  return {state_.ref_q, state_.ref_qd};
}

const JointVector& MracController::step(const SensoryReading& reading) {
  require_length(reading.y_q, n_, "reading.y_q");
  require_length(reading.y_qd, n_, "reading.y_qd");

  const auto [q_r, qd_r] = reference_model_step(q_cmd_);
  const JointVector qe =
      modified_error(q_r, qd_r, reading.y_q, reading.y_qd, cfg_);
  update_gains(qe, reading.y_q, reading.y_qd, q_r, qd_r);
  return control(reading.y_q, reading.y_qd, q_r, qd_r);
}

}  // namespace aict
