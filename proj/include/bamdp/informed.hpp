#pragma once

#include "bamdp/bamdp.hpp"
#include "bamdp/types.hpp"

namespace bamdp {

/// The hypothesis a resolved belief identifies: the unique theta with
/// p(theta) >= 1 - tol. Throws NotDirac when no coordinate qualifies.
Index identify_theta(const EpistemicState& belief, double tol = kZeroEntropyTol);

/// Informed value iteration. Solves each hypothesis MDP over the remaining
/// horizon H - I + 1 once, bootstraps those values at timestep I via
/// identify_theta, and backs up BAMDP values only for timesteps I-1 .. 1.
/// The supplied I must be a valid information horizon for the model; a
/// bootstrapped successor that still carries uncertainty raises
/// InfoHorizonViolated. The returned table stores timesteps 1..I.
BamdpValueTable informed_value_iteration(const BamdpModel& model, int info_horizon);

/// Convenience wrapper: computes the information horizon first and throws
/// InfiniteInformationHorizon when the model has none.
BamdpValueTable informed_value_iteration_auto(const BamdpModel& model);

}  // namespace bamdp
