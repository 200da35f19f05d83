#include <cmath>
#include <random>

#include "aict/free_energy.hpp"
#include "doctest.h"

using namespace aict;

namespace {

// Independent re-evaluation of the free-energy, term by term and joint
// by joint, deliberately sharing no code with the implementation.
double fe_oracle(const GeneralizedBelief& b, const SensoryReading& r,
                 const JointVector& goal, const Precisions& p) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < b.mu.size(); ++i) {
    const double eq = r.y_q[i] - b.mu[i];
    const double eqd = r.y_qd[i] - b.mu_p[i];
    const double emu = b.mu_p[i] + b.mu[i] - goal[i];
    const double emup = b.mu_pp[i] + b.mu_p[i];
    total += 0.5 * (eq * eq / p.sigma_q + eqd * eqd / p.sigma_qd +
                    emu * emu / p.sigma_mu + emup * emup / p.sigma_mup);
  }
  return total;
}

struct RandomCase {
  GeneralizedBelief belief;
  SensoryReading reading;
  JointVector goal;
  Precisions prec;
};

RandomCase random_case(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_real_distribution<double> sig(0.1, 5.0);
  const auto vec = [&] {
    JointVector v(n);
    for (int i = 0; i < n; ++i) v[i] = val(rng);
    return v;
  };
  RandomCase c;
  c.belief = {vec(), vec(), vec()};
  c.reading = {vec(), vec()};
  c.goal = vec();
  c.prec = {sig(rng), sig(rng), sig(rng), sig(rng)};
  return c;
}

}  // namespace

TEST_CASE("free energy vanishes at the goal with matching reading") {
  const JointVector goal = (JointVector(3) << 0.4, -1.0, 2.2).finished();
  const GeneralizedBelief belief{goal, JointVector::Zero(3),
                                 JointVector::Zero(3)};
  const SensoryReading reading{goal, JointVector::Zero(3)};
  const Precisions prec{0.3, 2.0, 1.5, 0.7};
  CHECK(fe::free_energy(belief, reading, goal, prec) == 0.0);
}

TEST_CASE("free energy of a single unit error term is one half") {
  const GeneralizedBelief belief = GeneralizedBelief::Zero(1);
  const SensoryReading reading{JointVector::Constant(1, 1.0),
                               JointVector::Zero(1)};
  CHECK(fe::free_energy(belief, reading, JointVector::Zero(1), Precisions{}) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("free energy matches the per-joint oracle on random input") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomCase c = random_case(rng, 2);
    const double got = fe::free_energy(c.belief, c.reading, c.goal, c.prec);
    const double want = fe_oracle(c.belief, c.reading, c.goal, c.prec);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(got >= 0.0);
  }
}

TEST_CASE("free energy rejects bad input") {
  const GeneralizedBelief belief = GeneralizedBelief::Zero(2);
  const SensoryReading reading{JointVector::Zero(2), JointVector::Zero(2)};
  const SensoryReading short_reading{JointVector::Zero(1),
                                     JointVector::Zero(1)};
  CHECK_THROWS_AS(
      fe::free_energy(belief, short_reading, JointVector::Zero(2), {}),
      DimensionError);
  CHECK_THROWS_AS(fe::free_energy(belief, reading, JointVector::Zero(3), {}),
                  DimensionError);
  Precisions bad;
  bad.sigma_mu = 0.0;
  CHECK_THROWS_AS(fe::free_energy(belief, reading, JointVector::Zero(2), bad),
                  ConfigError);
}

TEST_CASE("belief gradient is zero at the fixed point") {
  const JointVector goal = (JointVector(2) << 0.7, -0.2).finished();
  const GeneralizedBelief belief{goal, JointVector::Zero(2),
                                 JointVector::Zero(2)};
  const SensoryReading reading{goal, JointVector::Zero(2)};
  const auto g = fe::grad_belief(belief, reading, goal, Precisions{});
  CHECK(g.d_mu.isZero(0.0));
  CHECK(g.d_mu_p.isZero(0.0));
  CHECK(g.d_mu_pp.isZero(0.0));
}

TEST_CASE("belief gradient with a single active sensory term") {
  const GeneralizedBelief belief = GeneralizedBelief::Zero(1);
  const SensoryReading reading{JointVector::Constant(1, 1.0),
                               JointVector::Zero(1)};
  const auto g =
      fe::grad_belief(belief, reading, JointVector::Zero(1), Precisions{});
  CHECK(g.d_mu[0] == doctest::Approx(-1.0));
  CHECK(g.d_mu_p[0] == doctest::Approx(0.0));
  CHECK(g.d_mu_pp[0] == doctest::Approx(0.0));
}

TEST_CASE("sensory gradient basics") {
  const GeneralizedBelief belief = GeneralizedBelief::Zero(1);
  SensoryReading reading{JointVector::Constant(1, 2.0), JointVector::Zero(1)};
  Precisions prec;
  prec.sigma_q = 4.0;
  const auto g = fe::grad_sensory(belief, reading, prec);
  CHECK(g.d_y_q[0] == doctest::Approx(0.5));
  CHECK(g.d_y_qd[0] == doctest::Approx(0.0));

  // Matching reading and belief leaves nothing to explain.
  const auto zero =
      fe::grad_sensory(belief, SensoryReading{belief.mu, belief.mu_p}, prec);
  CHECK(zero.d_y_q.isZero(0.0));
  CHECK(zero.d_y_qd.isZero(0.0));
}

TEST_CASE("analytic gradients match central finite differences") {
  constexpr double kStep = 1e-6;
  std::mt19937_64 rng(1234);

  for (int trial = 0; trial < 100; ++trial) {
    RandomCase c = random_case(rng, 3);
    const auto gb = fe::grad_belief(c.belief, c.reading, c.goal, c.prec);
    const auto gs = fe::grad_sensory(c.belief, c.reading, c.prec);

    const auto fd = [&](double* slot) {
      const double saved = *slot;
      *slot = saved + kStep;
      const double hi = fe::free_energy(c.belief, c.reading, c.goal, c.prec);
      *slot = saved - kStep;
      const double lo = fe::free_energy(c.belief, c.reading, c.goal, c.prec);
      *slot = saved;
      return (hi - lo) / (2.0 * kStep);
    };

    for (int i = 0; i < 3; ++i) {
      CHECK(gb.d_mu[i] == doctest::Approx(fd(&c.belief.mu[i])).epsilon(1e-5));
      CHECK(gb.d_mu_p[i] ==
            doctest::Approx(fd(&c.belief.mu_p[i])).epsilon(1e-5));
      CHECK(gb.d_mu_pp[i] ==
            doctest::Approx(fd(&c.belief.mu_pp[i])).epsilon(1e-5));
      CHECK(gs.d_y_q[i] ==
            doctest::Approx(fd(&c.reading.y_q[i])).epsilon(1e-5));
      CHECK(gs.d_y_qd[i] ==
            doctest::Approx(fd(&c.reading.y_qd[i])).epsilon(1e-5));
    }
  }
}

TEST_CASE("scaling all variances by c scales energy and gradients by 1/c") {
  std::mt19937_64 rng(7);
  const RandomCase c = random_case(rng, 4);
  for (const double scale : {0.25, 3.0, 817.0}) {
    Precisions scaled = c.prec;
    scaled.sigma_q *= scale;
    scaled.sigma_qd *= scale;
    scaled.sigma_mu *= scale;
    scaled.sigma_mup *= scale;

    const double f0 = fe::free_energy(c.belief, c.reading, c.goal, c.prec);
    const double f1 = fe::free_energy(c.belief, c.reading, c.goal, scaled);
    CHECK(f1 == doctest::Approx(f0 / scale).epsilon(1e-12));

    const auto g0 = fe::grad_belief(c.belief, c.reading, c.goal, c.prec);
    const auto g1 = fe::grad_belief(c.belief, c.reading, c.goal, scaled);
    CHECK((g1.d_mu * scale).isApprox(g0.d_mu, 1e-12));
    CHECK((g1.d_mu_p * scale).isApprox(g0.d_mu_p, 1e-12));
    CHECK((g1.d_mu_pp * scale).isApprox(g0.d_mu_pp, 1e-12));

    const auto s0 = fe::grad_sensory(c.belief, c.reading, c.prec);
    const auto s1 = fe::grad_sensory(c.belief, c.reading, scaled);
    CHECK((s1.d_y_q * scale).isApprox(s0.d_y_q, 1e-12));
    CHECK((s1.d_y_qd * scale).isApprox(s0.d_y_qd, 1e-12));
  }
}

TEST_CASE("permuting joints permutes every output identically") {
  std::mt19937_64 rng(99);
  const RandomCase c = random_case(rng, 5);
  const std::vector<int> perm = {3, 0, 4, 1, 2};

  const auto apply = [&](const JointVector& v) {
    JointVector out(v.size());
    for (int i = 0; i < 5; ++i) out[i] = v[perm[i]];
    return out;
  };
  const RandomCase p{{apply(c.belief.mu), apply(c.belief.mu_p),
                      apply(c.belief.mu_pp)},
                     {apply(c.reading.y_q), apply(c.reading.y_qd)},
                     apply(c.goal),
                     c.prec};

  CHECK(fe::free_energy(p.belief, p.reading, p.goal, p.prec) ==
        doctest::Approx(fe::free_energy(c.belief, c.reading, c.goal, c.prec))
            .epsilon(1e-14));

  const auto g = fe::grad_belief(c.belief, c.reading, c.goal, c.prec);
  const auto gp = fe::grad_belief(p.belief, p.reading, p.goal, p.prec);
  CHECK(gp.d_mu.isApprox(apply(g.d_mu), 1e-14));
  CHECK(gp.d_mu_p.isApprox(apply(g.d_mu_p), 1e-14));
  CHECK(gp.d_mu_pp.isApprox(apply(g.d_mu_pp), 1e-14));
}

TEST_CASE("free energy is additive across joints") {
  std::mt19937_64 rng(5);
  const RandomCase c = random_case(rng, 6);

  double sum = 0.0;
  for (int i = 0; i < 6; ++i) {
    const GeneralizedBelief b1{c.belief.mu.segment(i, 1),
                               c.belief.mu_p.segment(i, 1),
                               c.belief.mu_pp.segment(i, 1)};
    const SensoryReading r1{c.reading.y_q.segment(i, 1),
                            c.reading.y_qd.segment(i, 1)};
    sum += fe::free_energy(b1, r1, c.goal.segment(i, 1), c.prec);
  }
  CHECK(fe::free_energy(c.belief, c.reading, c.goal, c.prec) ==
        doctest::Approx(sum).epsilon(1e-12));
}
