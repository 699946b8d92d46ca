#pragma once

#include "bamdp/bamdp.hpp"
#include "bamdp/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace bamdp {

struct AbstractBamdp;

/// Certificate attached to an information-horizon result: a reachable
/// hyperstate whose belief still carries entropy, together with the
/// (action, observed next state) trace that reaches it from the start.
struct HorizonWitness {
    int timestep = 0;
    Index initial_state = 0;
    Index state = 0;
    Vector belief;
    double belief_entropy = 0.0;
    std::vector<std::pair<Index, Index>> trace;  // (action, next_state) per step
};

/// The first timestep at which every reachable belief has zero entropy,
/// or infinite when that never happens within the horizon.
struct InformationHorizon {
    std::optional<int> value;  // empty = infinite
    std::vector<std::size_t> layer_sizes;
    std::optional<HorizonWitness> witness;

    bool finite() const { return value.has_value(); }
};

/// Information horizon of a single policy: forward-propagates the layers
/// reachable under the policy's own actions.
InformationHorizon policy_information_horizon(const BamdpModel& model,
                                              const BamdpPolicy& policy,
                                              double entropy_tol = kZeroEntropyTol,
                                              std::size_t cap = kDefaultHyperstateCap);

/// Information horizon of the BAMDP: the supremum over the non-stationary
/// policy class. Computed by all-actions layer expansion — every action
/// trace is realized by some hyperstate policy, so the all-actions
/// reachable set at each timestep equals the union over policies of their
/// reachable sets.
InformationHorizon information_horizon(const BamdpModel& model,
                                       double entropy_tol = kZeroEntropyTol,
                                       std::size_t cap = kDefaultHyperstateCap);

/// Information horizon of an induced abstract BAMDP, with entropy
/// evaluated on the cover centers and reachability under the (stochastic)
/// abstract transitions.
InformationHorizon abstract_information_horizon(const AbstractBamdp& abstract_model,
                                                double entropy_tol = kZeroEntropyTol);

}  // namespace bamdp
