#pragma once

#include "aict/types.hpp"

namespace aict::fe {

/// Gradient of the free-energy with respect to each belief order.
struct BeliefGradient {
  JointVector d_mu;
  JointVector d_mu_p;
  JointVector d_mu_pp;
};

/// Gradient of the free-energy with respect to the sensory channels.
struct SensoryGradient {
  JointVector d_y_q;
  JointVector d_y_qd;
};

/// Free-energy of a manipulator belief: a precision-weighted sum of
/// squared prediction errors over the two sensory channels and the two
/// internal-model channels. The additive constant from the Gaussian
/// normalizations is defined as zero. Always >= 0.
///
/// F = 1/2 [ |y_q - mu|^2/sigma_q + |y_qd - mu'|^2/sigma_qd
///         + |mu' + mu - goal|^2/sigma_mu + |mu'' + mu'|^2/sigma_mup ]
double free_energy(const GeneralizedBelief& belief,
                   const SensoryReading& reading, const JointVector& goal,
                   const Precisions& prec);

/// Analytic dF/d(mu, mu', mu'').
BeliefGradient grad_belief(const GeneralizedBelief& belief,
                           const SensoryReading& reading,
                           const JointVector& goal, const Precisions& prec);

/// Analytic dF/d(y_q, y_qd). The goal terms do not couple to the sensory
/// channels, so no goal argument is needed.
SensoryGradient grad_sensory(const GeneralizedBelief& belief,
                             const SensoryReading& reading,
                             const Precisions& prec);

}  // namespace aict::fe
