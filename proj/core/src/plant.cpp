#include "aict/plant.hpp"

#include <cmath>
#include <string>

namespace aict {
namespace {

inline Eigen::Vector2d perp(const Eigen::Vector2d& v) {
  return {-v.y(), v.x()};
}

// Forward kinematics of the chain plus the list of point bodies whose
// Jacobians assemble every Lagrangian term: one body per link center of
// mass, one for the payload at the tip when present.
struct Body {
  double mass;
  Eigen::Vector2d p;
  int last_joint;          // highest joint index moving this body
  Eigen::Matrix2Xd jac;    // 2 x n, column j = perp(p - o_j) for j <= last
};

struct ChainGeometry {
  std::vector<Eigen::Vector2d> origin;  // n+1 joint origins, back() = tip
  std::vector<Body> bodies;
};

ChainGeometry chain_geometry(const PlanarArmModel& model,
                             const JointVector& q) {
  const int n = model.dofs();
  if (q.size() != n) {
    throw DimensionError("q length " + std::to_string(q.size()) +
                         " does not match model with " + std::to_string(n) +
                         " links");
  }

  ChainGeometry geo;
  geo.origin.resize(n + 1);
  geo.origin[0] = Eigen::Vector2d::Zero();

  double theta = 0.0;
  std::vector<Eigen::Vector2d> dir(n);
  for (int i = 0; i < n; ++i) {
    theta += q[i];
    dir[i] = {std::sin(theta), -std::cos(theta)};  // q = 0 hangs down
    geo.origin[i + 1] = geo.origin[i] + model.links[i].length * dir[i];
  }

  geo.bodies.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    Body b;
    b.mass = model.links[i].mass;
    b.p = geo.origin[i] + model.links[i].com * dir[i];
    b.last_joint = i;
    geo.bodies.push_back(std::move(b));
  }
  if (model.payload_mass > 0.0) {
    geo.bodies.push_back({model.payload_mass, geo.origin[n], n - 1, {}});
  }

  for (Body& b : geo.bodies) {
    b.jac = Eigen::Matrix2Xd::Zero(2, n);
    for (int j = 0; j <= b.last_joint; ++j) {
      b.jac.col(j) = perp(b.p - geo.origin[j]);
    }
  }
  return geo;
}

}  // namespace

void PlanarArmModel::validate() const {
  if (links.empty()) throw ConfigError("planar arm needs at least one link");
  for (const LinkParams& l : links) {
    require_positive(l.mass, "link mass");
    require_positive(l.length, "link length");
    if (l.com < 0.0 || l.com > l.length) {
      throw ConfigError("link com offset must lie within the link");
    }
    if (l.inertia < 0.0) throw ConfigError("link inertia must be >= 0");
  }
  if (damping.size() != dofs()) {
    throw DimensionError("damping vector length does not match link count");
  }
  if ((damping.array() < 0.0).any()) {
    throw ConfigError("joint damping must be >= 0");
  }
  if (payload_mass < 0.0) throw ConfigError("payload mass must be >= 0");
  if (gravity < 0.0) throw ConfigError("gravity must be >= 0");
}

void DecoupledPlantModel::validate() const {
  const int n = dofs();
  if (n < 1) throw ConfigError("decoupled plant needs at least one joint");
  if (damping.size() != n || bias.size() != n) {
    throw DimensionError("decoupled plant vectors must share length");
  }
  for (int i = 0; i < n; ++i) require_positive(inertia[i], "joint inertia");
  if ((damping.array() < 0.0).any()) {
    throw ConfigError("joint damping must be >= 0");
  }
}

Eigen::MatrixXd mass_matrix(const PlanarArmModel& model, const JointVector& q) {
  const int n = model.dofs();
  const ChainGeometry geo = chain_geometry(model, q);

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (const Body& b : geo.bodies) {
    M.noalias() += b.mass * b.jac.transpose() * b.jac;
  }
  // Rotational inertia of link i couples every joint pair at or below i.
  for (int i = 0; i < n; ++i) {
    M.topLeftCorner(i + 1, i + 1).array() += model.links[i].inertia;
  }
  return M;
}

std::vector<Eigen::MatrixXd> mass_matrix_partials(const PlanarArmModel& model,
                                                  const JointVector& q) {
  const int n = model.dofs();
  const ChainGeometry geo = chain_geometry(model, q);

  std::vector<Eigen::MatrixXd> partials(n, Eigen::MatrixXd::Zero(n, n));
  Eigen::Matrix2Xd dJ(2, n);
  for (const Body& b : geo.bodies) {
    for (int c = 0; c < n; ++c) {
      dJ.setZero();
      const Eigen::Vector2d dp = (c <= b.last_joint)
                                     ? Eigen::Vector2d(b.jac.col(c))
                                     : Eigen::Vector2d::Zero();
      bool nonzero = c <= b.last_joint;
      for (int j = 0; j <= b.last_joint; ++j) {
        Eigen::Vector2d dv = dp;
        if (c < j) {
          dv -= perp(geo.origin[j] - geo.origin[c]);
          nonzero = true;
        }
        dJ.col(j) = perp(dv);
      }
      if (!nonzero) continue;
      partials[c].noalias() += b.mass * (dJ.transpose() * b.jac).eval();
      partials[c].noalias() += b.mass * (b.jac.transpose() * dJ).eval();
    }
  }
  return partials;
}

Eigen::MatrixXd coriolis_matrix(const PlanarArmModel& model,
                                const JointVector& q, const JointVector& qd) {
  const int n = model.dofs();
  require_same_size(q, qd, "q vs qd");
  const std::vector<Eigen::MatrixXd> dM = mass_matrix_partials(model, q);

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double cij = 0.0;
      for (int k = 0; k < n; ++k) {
        cij += 0.5 * (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * qd[k];
      }
      C(i, j) = cij;
    }
  }
  return C;
}

JointVector gravity_torque(const PlanarArmModel& model, const JointVector& q) {
  const int n = model.dofs();
  if (model.gravity == 0.0) return JointVector::Zero(n);

  const ChainGeometry geo = chain_geometry(model, q);
  JointVector g = JointVector::Zero(n);
  for (const Body& b : geo.bodies) {
    g += b.mass * model.gravity * b.jac.row(1).transpose();
  }
  return g;
}

double total_energy(const PlanarArmModel& model, const PlantState& state) {
  const ChainGeometry geo = chain_geometry(model, state.q);
  const Eigen::MatrixXd M = mass_matrix(model, state.q);
  double energy = 0.5 * state.qd.dot(M * state.qd);
  for (const Body& b : geo.bodies) {
    energy += b.mass * model.gravity * b.p.y();
  }
  return energy;
}

Eigen::Vector2d end_effector_position(const PlanarArmModel& model,
                                      const JointVector& q) {
  return chain_geometry(model, q).origin.back();
}

JointVector forward_dynamics(const PlanarArmModel& model,
                             const PlantState& state, const JointVector& tau) {
  require_same_size(state.q, tau, "state vs tau");
  require_same_size(state.q, model.damping, "state vs model damping");
  const Eigen::MatrixXd M = mass_matrix(model, state.q);
  const Eigen::MatrixXd C = coriolis_matrix(model, state.q, state.qd);

  JointVector rhs = tau - C * state.qd - model.damping.cwiseProduct(state.qd);
  if (!model.gravity_compensated) {
    rhs -= gravity_torque(model, state.q);
  }

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.rcond() < 1e-12) {
    throw SimulationError("mass matrix is not positive definite enough");
  }
  return ldlt.solve(rhs);
}

JointVector forward_dynamics(const DecoupledPlantModel& model,
                             const PlantState& state, const JointVector& tau) {
  require_same_size(state.q, tau, "state vs tau");
  require_same_size(state.q, model.inertia, "state vs model inertia");
  return (tau - model.damping.cwiseProduct(state.qd) - model.bias)
      .cwiseQuotient(model.inertia);
}

NoiseStream::NoiseStream(const SensorNoise& cfg)
    : cfg_(cfg), rng_(cfg.seed), unit_(0.0, 1.0) {
  if (cfg.std_q < 0.0 || cfg.std_qd < 0.0) {
    throw ConfigError("sensor noise std must be >= 0");
  }
}

SensoryReading NoiseStream::sense(const PlantState& state) {
  SensoryReading r{state.q, state.qd};
  if (cfg_.std_q > 0.0) {
    for (Eigen::Index i = 0; i < r.y_q.size(); ++i) {
      r.y_q[i] += cfg_.std_q * unit_(rng_);
    }
  }
  if (cfg_.std_qd > 0.0) {
    for (Eigen::Index i = 0; i < r.y_qd.size(); ++i) {
      r.y_qd[i] += cfg_.std_qd * unit_(rng_);
    }
  }
  return r;
}

PlanarArmModel perturb_masses(const PlanarArmModel& model, double fraction,
                              std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw ConfigError("mass perturbation fraction must be in [0, 1)");
  }
  PlanarArmModel out = model;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(1.0 - fraction, 1.0 + fraction);
  for (LinkParams& link : out.links) {
    link.mass *= scale(rng);
  }
  return out;
}

PlanarArmModel with_payload(const PlanarArmModel& model, double mass) {
  if (mass < 0.0) throw ConfigError("payload mass must be >= 0");
  PlanarArmModel out = model;
  out.payload_mass = mass;
  return out;
}

}  // namespace aict
