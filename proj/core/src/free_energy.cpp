#include "aict/free_energy.hpp"

namespace aict::fe {
namespace {

void validate(const GeneralizedBelief& belief, const SensoryReading& reading,
              const Precisions& prec) {
  require_same_size(belief.mu, belief.mu_p, "belief.mu vs belief.mu_p");
  require_same_size(belief.mu, belief.mu_pp, "belief.mu vs belief.mu_pp");
  require_same_size(belief.mu, reading.y_q, "belief vs reading.y_q");
  require_same_size(belief.mu, reading.y_qd, "belief vs reading.y_qd");
  require_positive(prec.sigma_q, "sigma_q");
  require_positive(prec.sigma_qd, "sigma_qd");
  require_positive(prec.sigma_mu, "sigma_mu");
  require_positive(prec.sigma_mup, "sigma_mup");
}

}  // namespace

double free_energy(const GeneralizedBelief& belief,
                   const SensoryReading& reading, const JointVector& goal,
                   const Precisions& prec) {
  validate(belief, reading, prec);
  require_same_size(belief.mu, goal, "belief vs goal");

  const JointVector e_q = reading.y_q - belief.mu;
  const JointVector e_qd = reading.y_qd - belief.mu_p;
  const JointVector e_mu = belief.mu_p + belief.mu - goal;
  const JointVector e_mup = belief.mu_pp + belief.mu_p;

  return 0.5 * (e_q.squaredNorm() / prec.sigma_q +
                e_qd.squaredNorm() / prec.sigma_qd +
                e_mu.squaredNorm() / prec.sigma_mu +
                e_mup.squaredNorm() / prec.sigma_mup);
}

BeliefGradient grad_belief(const GeneralizedBelief& belief,
                           const SensoryReading& reading,
                           const JointVector& goal, const Precisions& prec) {
  validate(belief, reading, prec);
  require_same_size(belief.mu, goal, "belief vs goal");

  const JointVector e_q = (reading.y_q - belief.mu) / prec.sigma_q;
  const JointVector e_qd = (reading.y_qd - belief.mu_p) / prec.sigma_qd;
  const JointVector e_mu = (belief.mu_p + belief.mu - goal) / prec.sigma_mu;
  const JointVector e_mup = (belief.mu_pp + belief.mu_p) / prec.sigma_mup;

  BeliefGradient g;
  g.d_mu = -e_q + e_mu;
  g.d_mu_p = -e_qd + e_mu + e_mup;
  g.d_mu_pp = e_mup;
  return g;
}

SensoryGradient grad_sensory(const GeneralizedBelief& belief,
                             const SensoryReading& reading,
                             const Precisions& prec) {
  validate(belief, reading, prec);

  SensoryGradient g;
  g.d_y_q = (reading.y_q - belief.mu) / prec.sigma_q;
  g.d_y_qd = (reading.y_qd - belief.mu_p) / prec.sigma_qd;
  return g;
}

}  // namespace aict::fe
