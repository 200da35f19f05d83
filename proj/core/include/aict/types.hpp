#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace aict {

/// n-dimensional joint-space quantity (rad, rad/s or N·m depending on use).
using JointVector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contract violation: mismatched vector lengths between related quantities.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (non-positive variance, bad rate, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state or torque became non-finite during integration.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int joint)
      : Error(what), joint_(joint) {}
  int joint() const { return joint_; }

 private:
  int joint_ = -1;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

/// Internal estimate of the joint state as generalized motions up to
/// order two: position belief, its first and second derivative.
struct GeneralizedBelief {
  JointVector mu;     // rad
  JointVector mu_p;   // rad/s
  JointVector mu_pp;  // rad/s^2

  int dofs() const { return static_cast<int>(mu.size()); }

  static GeneralizedBelief Zero(int n) {
    return {JointVector::Zero(n), JointVector::Zero(n), JointVector::Zero(n)};
  }
};

/// Noisy joint position and velocity measurements.
struct SensoryReading {
  JointVector y_q;   // rad
  JointVector y_qd;  // rad/s

  int dofs() const { return static_cast<int>(y_q.size()); }
};

/// Scalar variances weighting the four prediction-error channels.
/// Each full covariance is sigma * I_n, so only the scalar is stored.
struct Precisions {
  double sigma_q = 1.0;    // position sensor
  double sigma_qd = 1.0;   // velocity sensor
  double sigma_mu = 1.0;   // state-dynamics model
  double sigma_mup = 1.0;  // derivative-dynamics model
};

inline void require_same_size(const JointVector& a, const JointVector& b,
                              const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": got lengths " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
}

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw ConfigError(std::string(what) + " must be positive, got " +
                      std::to_string(v));
  }
}

}  // namespace aict
