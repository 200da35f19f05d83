#include <cmath>
#include <random>

#include "aict/plant.hpp"
#include "aict/presets.hpp"
#include "doctest.h"

using namespace aict;

namespace {

PlanarArmModel pendulum() {
  PlanarArmModel m;
  m.links = {{1.0, 1.0, 1.0, 0.0}};  // point mass at the tip
  m.gravity = 9.81;
  m.damping = JointVector::Zero(1);
  return m;
}

PlanarArmModel two_link() {
  PlanarArmModel m;
  m.links = {{2.5, 0.6, 0.3, 0.08}, {1.2, 0.5, 0.22, 0.03}};
  m.gravity = 9.81;
  m.damping = (JointVector(2) << 0.5, 0.3).finished();
  return m;
}

// Textbook closed-form terms of the two-link arm, coded independently
// of the chain machinery. Angles are measured from the downward
// vertical, matching the model convention.
struct TwoLinkOracle {
  double a, b, d, m1r1_m2l1, m2r2, g;

  explicit TwoLinkOracle(const PlanarArmModel& m) {
    const double m1 = m.links[0].mass, m2 = m.links[1].mass;
    const double l1 = m.links[0].length;
    const double r1 = m.links[0].com, r2 = m.links[1].com;
    const double i1 = m.links[0].inertia, i2 = m.links[1].inertia;
    a = m1 * r1 * r1 + i1 + i2 + m2 * (l1 * l1 + r2 * r2);
    b = m2 * l1 * r2;
    d = i2 + m2 * r2 * r2;
    m1r1_m2l1 = m1 * r1 + m2 * l1;
    m2r2 = m2 * r2;
    g = m.gravity;
  }

  Eigen::Matrix2d mass(const JointVector& q) const {
    Eigen::Matrix2d M;
    M(0, 0) = a + 2.0 * b * std::cos(q[1]);
    M(0, 1) = M(1, 0) = d + b * std::cos(q[1]);
    M(1, 1) = d;
    return M;
  }

  Eigen::Matrix2d coriolis(const JointVector& q, const JointVector& qd) const {
    const double h = -b * std::sin(q[1]);
    Eigen::Matrix2d C;
    C(0, 0) = h * qd[1];
    C(0, 1) = h * (qd[0] + qd[1]);
    C(1, 0) = -h * qd[0];
    C(1, 1) = 0.0;
    return C;
  }

  Eigen::Vector2d gravity_load(const JointVector& q) const {
    return {m1r1_m2l1 * g * std::sin(q[0]) + m2r2 * g * std::sin(q[0] + q[1]),
            m2r2 * g * std::sin(q[0] + q[1])};
  }
};

JointVector random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> val(lo, hi);
  JointVector v(n);
  for (int i = 0; i < n; ++i) v[i] = val(rng);
  return v;
}

}  // namespace

TEST_CASE("pendulum inertia and hanging equilibrium") {
  const PlanarArmModel m = pendulum();
  const JointVector q0 = JointVector::Zero(1);
  CHECK(mass_matrix(m, q0)(0, 0) == doctest::Approx(1.0));
  CHECK(gravity_torque(m, q0)[0] == doctest::Approx(0.0));
  CHECK(gravity_torque(m, JointVector::Constant(1, M_PI / 2.0))[0] ==
        doctest::Approx(9.81));
}

TEST_CASE("two-link terms match the textbook closed form") {
  const PlanarArmModel m = two_link();
  const TwoLinkOracle oracle(m);
  std::mt19937_64 rng(2024);

  for (int trial = 0; trial < 100; ++trial) {
    const JointVector q = random_vec(rng, 2, -M_PI, M_PI);
    const JointVector qd = random_vec(rng, 2, -3.0, 3.0);

    CHECK(mass_matrix(m, q).isApprox(oracle.mass(q), 1e-12));
    CHECK(coriolis_matrix(m, q, qd).isApprox(oracle.coriolis(q, qd), 1e-12));
    CHECK(gravity_torque(m, q).isApprox(
        JointVector(oracle.gravity_load(q)), 1e-12));
  }

  // The elbow changes the coupling terms.
  JointVector bent(2), straight(2);
  straight << 0.3, 0.0;
  bent << 0.3, M_PI / 2.0;
  CHECK(mass_matrix(m, bent)(0, 1) != mass_matrix(m, straight)(0, 1));
}

TEST_CASE("gravity off means zero gravity torque everywhere") {
  PlanarArmModel m = two_link();
  m.gravity = 0.0;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(gravity_torque(m, random_vec(rng, 2, -M_PI, M_PI)).isZero(0.0));
  }
}

TEST_CASE("mass matrix is symmetric positive definite over the workspace") {
  const PlanarArmModel m = two_link();
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::MatrixXd M = mass_matrix(m, random_vec(rng, 2, -M_PI, M_PI));
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(M).info() == Eigen::Success);
  }
}

TEST_CASE("analytic mass-matrix partials match finite differences") {
  const PlanarArmModel m = two_link();
  std::mt19937_64 rng(31);
  const double h = 1e-6;

  for (int trial = 0; trial < 25; ++trial) {
    JointVector q = random_vec(rng, 2, -M_PI, M_PI);
    const auto partials = mass_matrix_partials(m, q);
    for (int c = 0; c < 2; ++c) {
      JointVector hi = q, lo = q;
      hi[c] += h;
      lo[c] -= h;
      const Eigen::MatrixXd fd =
          (mass_matrix(m, hi) - mass_matrix(m, lo)) / (2.0 * h);
      CHECK((partials[c] - fd).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("dM/dt - 2C is skew-symmetric") {
  const PlanarArmModel m = two_link();
  std::mt19937_64 rng(12);
  const double h = 1e-5;

  for (int trial = 0; trial < 100; ++trial) {
    const JointVector q = random_vec(rng, 2, -M_PI, M_PI);
    const JointVector qd = random_vec(rng, 2, -2.0, 2.0);

    // Mdot by finite differences along the motion.
    const Eigen::MatrixXd m_plus = mass_matrix(m, q + h * qd);
    const Eigen::MatrixXd m_minus = mass_matrix(m, q - h * qd);
    const Eigen::MatrixXd mdot = (m_plus - m_minus) / (2.0 * h);
    const Eigen::MatrixXd skew = mdot - 2.0 * coriolis_matrix(m, q, qd);
    CHECK(std::abs(qd.dot(skew * qd)) < 1e-9);
  }
}

TEST_CASE("forward dynamics trivia") {
  PlanarArmModel m = two_link();
  m.gravity = 0.0;
  m.damping = JointVector::Zero(2);
  const PlantState rest = PlantState::rest(2);
  CHECK(forward_dynamics(m, rest, JointVector::Zero(2)).isZero(1e-14));

  const PlanarArmModel p = pendulum();
  PlantState hang = PlantState::rest(1);
  CHECK(forward_dynamics(p, hang, JointVector::Constant(1, 2.0))[0] ==
        doctest::Approx(2.0));
}

TEST_CASE("inverse dynamics round trip") {
  const PlanarArmModel m = two_link();
  std::mt19937_64 rng(77);

  for (int trial = 0; trial < 50; ++trial) {
    PlantState s{random_vec(rng, 2, -M_PI, M_PI), random_vec(rng, 2, -2, 2),
                 0.0};
    const JointVector tau = random_vec(rng, 2, -20, 20);
    const JointVector qdd = forward_dynamics(m, s, tau);
    const JointVector back = mass_matrix(m, s.q) * qdd +
                             coriolis_matrix(m, s.q, s.qd) * s.qd +
                             m.damping.cwiseProduct(s.qd) +
                             gravity_torque(m, s.q);
    CHECK((back - tau).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("rk4 on zero dynamics only advances time") {
  PlanarArmModel m = two_link();
  m.gravity = 0.0;
  m.damping = JointVector::Zero(2);
  PlantState s{(JointVector(2) << 0.4, -0.7).finished(), JointVector::Zero(2),
               1.5};
  const PlantState next = rk4_step(m, s, JointVector::Zero(2), 1e-3);
  CHECK(next.q == s.q);
  CHECK(next.qd == s.qd);
  CHECK(next.t == doctest::Approx(1.501));
}

TEST_CASE("energy is conserved without gravity, damping, or input") {
  PlanarArmModel m = two_link();
  m.gravity = 0.0;
  m.damping = JointVector::Zero(2);

  PlantState s{(JointVector(2) << 0.3, -0.2).finished(),
               (JointVector(2) << 0.8, -0.5).finished(), 0.0};
  const double e0 = total_energy(m, s);
  double max_drift = 0.0;
  for (int k = 0; k < 10000; ++k) {
    s = rk4_step(m, s, JointVector::Zero(2), 1e-3);
    max_drift = std::max(max_drift, std::abs(total_energy(m, s) - e0));
  }
  CHECK(max_drift / std::abs(e0) < 1e-7);
}

TEST_CASE("energy never increases with damping only") {
  PlanarArmModel m = two_link();
  m.gravity = 0.0;  // damping stays on

  PlantState s{JointVector::Zero(2), (JointVector(2) << 1.5, -1.0).finished(),
               0.0};
  double prev = total_energy(m, s);
  for (int k = 0; k < 5000; ++k) {
    s = rk4_step(m, s, JointVector::Zero(2), 1e-3);
    const double e = total_energy(m, s);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("halving the step shrinks the error about sixteenfold") {
  PlanarArmModel m = two_link();
  m.gravity = 9.81;
  const PlantState start{(JointVector(2) << 0.5, 0.3).finished(),
                         JointVector::Zero(2), 0.0};
  const JointVector tau = (JointVector(2) << 2.0, -1.0).finished();

  const auto integrate = [&](double h, double horizon) {
    PlantState s = start;
    const long steps = std::lround(horizon / h);
    for (long k = 0; k < steps; ++k) s = rk4_step(m, s, tau, h);
    return s.q;
  };

  const JointVector ref = integrate(1e-5, 0.5);
  const double err_coarse = (integrate(4e-3, 0.5) - ref).norm();
  const double err_fine = (integrate(2e-3, 0.5) - ref).norm();
  const double ratio = err_coarse / err_fine;
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("sensing with zero noise returns the exact state") {
  NoiseStream stream(SensorNoise{0.0, 0.0, 42});
  const PlantState s{(JointVector(2) << 0.1, 0.2).finished(),
                     (JointVector(2) << -0.3, 0.4).finished(), 0.0};
  const SensoryReading r = stream.sense(s);
  CHECK(r.y_q == s.q);
  CHECK(r.y_qd == s.qd);
}

TEST_CASE("a fixed seed reproduces the same reading stream") {
  const SensorNoise cfg{0.01, 0.05, 777};
  NoiseStream a(cfg), b(cfg);
  const PlantState s = PlantState::rest(3);
  for (int k = 0; k < 100; ++k) {
    const SensoryReading ra = a.sense(s);
    const SensoryReading rb = b.sense(s);
    CHECK(ra.y_q == rb.y_q);
    CHECK(ra.y_qd == rb.y_qd);
  }
}

TEST_CASE("sample standard deviation matches the configured noise") {
  NoiseStream stream(SensorNoise{0.01, 0.0, 31337});
  const PlantState s = PlantState::rest(1);
  double sum = 0.0, sum_sq = 0.0;
  const int samples = 100000;
  for (int k = 0; k < samples; ++k) {
    const double v = stream.sense(s).y_q[0];
    sum += v;
    sum_sq += v * v;
  }
  const double var = (sum_sq - sum * sum / samples) / (samples - 1);
  CHECK(std::sqrt(var) == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("mass perturbation stays inside the stated band") {
  const PlanarArmModel m = two_link();

  const PlanarArmModel same = perturb_masses(m, 0.0, 5);
  CHECK(same.links[0].mass == m.links[0].mass);
  CHECK(same.links[1].mass == m.links[1].mass);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PlanarArmModel p = perturb_masses(m, 0.2, seed);
    for (std::size_t i = 0; i < p.links.size(); ++i) {
      CHECK(p.links[i].mass >= 0.8 * m.links[i].mass);
      CHECK(p.links[i].mass <= 1.2 * m.links[i].mass);
    }
  }

  const PlanarArmModel p1 = perturb_masses(m, 0.2, 9);
  const PlanarArmModel p2 = perturb_masses(m, 0.2, 9);
  CHECK(p1.links[0].mass == p2.links[0].mass);
  CHECK(p1.links[1].mass == p2.links[1].mass);
  CHECK_THROWS_AS(perturb_masses(m, 1.0, 0), ConfigError);
}

TEST_CASE("payload changes only what gravity sees at the tip") {
  const PlanarArmModel base = two_link();
  const PlanarArmModel same = with_payload(base, 0.0);
  const JointVector q = (JointVector(2) << 0.7, -0.4).finished();
  CHECK(mass_matrix(same, q) == mass_matrix(base, q));
  CHECK_THROWS_AS(with_payload(base, -0.1), ConfigError);

  // Static gravity-torque difference equals dm * g * moment arm, where
  // the moment arm of joint j is the horizontal tip offset from it.
  const PlanarArmModel light = with_payload(base, 0.1);
  const PlanarArmModel heavy = with_payload(base, 0.7);
  const JointVector diff = gravity_torque(heavy, q) - gravity_torque(light, q);

  const Eigen::Vector2d tip = end_effector_position(base, q);
  const double x_joint2 = base.links[0].length * std::sin(q[0]);
  CHECK(diff[0] == doctest::Approx(0.6 * 9.81 * tip.x()).epsilon(1e-12));
  CHECK(diff[1] ==
        doctest::Approx(0.6 * 9.81 * (tip.x() - x_joint2)).epsilon(1e-12));
}

TEST_CASE("decoupled plant integrates independent joints") {
  DecoupledPlantModel m = decoupled_plant(3);
  m.bias = (JointVector(3) << 0.5, 0.0, -0.5).finished();
  const PlantState rest = PlantState::rest(3);
  const JointVector qdd =
      forward_dynamics(m, rest, (JointVector(3) << 1.0, 0.0, 0.0).finished());
  CHECK(qdd[0] == doctest::Approx(0.5));
  CHECK(qdd[1] == doctest::Approx(0.0));
  CHECK(qdd[2] == doctest::Approx(0.5));
}

TEST_CASE("model validation rejects nonsense") {
  PlanarArmModel m = two_link();
  m.links[0].mass = 0.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);

  PlanarArmModel bad_com = two_link();
  bad_com.links[1].com = 2.0 * bad_com.links[1].length;
  CHECK_THROWS_AS(bad_com.validate(), ConfigError);

  PlanarArmModel bad_damp = two_link();
  bad_damp.damping = JointVector::Zero(1);
  CHECK_THROWS_AS(bad_damp.validate(), DimensionError);
}
