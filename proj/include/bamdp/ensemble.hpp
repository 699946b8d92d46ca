#pragma once

#include "bamdp/belief.hpp"
#include "bamdp/mdp.hpp"
#include "bamdp/types.hpp"

#include <vector>

namespace bamdp {

/// The finite known-MDP set: shared (S, A, R, beta, H) plus one transition
/// tensor per hypothesis. Uncertainty lives only in the transitions; the
/// reward is shared across hypotheses.
struct MdpEnsemble {
    Index num_states = 0;
    Index num_actions = 0;
    Matrix reward;       // |S| x |A|
    Vector initial_dist; // |S|
    int horizon = 0;
    std::vector<std::vector<Matrix>> hypotheses;  // [theta][action], |S| x |S|

    Index num_hypotheses() const { return static_cast<Index>(hypotheses.size()); }

    /// The known MDP for hypothesis theta, sharing R, beta, and H.
    Mdp mdp_for(Index theta) const;
    /// Same but with an overridden horizon, as used by informed planning.
    Mdp mdp_for(Index theta, int horizon_override) const;

    void validate() const;
};

/// A BAMDP hyperstate: physical state paired with the agent's belief.
struct Hyperstate {
    Index state = 0;
    EpistemicState belief;
};

/// Exact Bayes update of `belief` for the experience tuple (s, a, s_next).
/// Throws ImpossibleObservation when no supported hypothesis can produce
/// the tuple.
EpistemicState posterior_update(const MdpEnsemble& ensemble, const EpistemicState& belief,
                                Index s, Index a, Index s_next);

/// Predictive probability of landing in s_next from (s, a) under `belief`.
double predictive_probability(const MdpEnsemble& ensemble, const EpistemicState& belief,
                              Index s, Index a, Index s_next);

struct WeightedSuccessor {
    Hyperstate hyperstate;
    double probability = 0.0;
};

/// The BAMDP transition: one successor hyperstate per next state with
/// positive predictive probability, in ascending next-state order.
/// Probabilities sum to 1; zero-probability successors are omitted.
std::vector<WeightedSuccessor> bamdp_successors(const MdpEnsemble& ensemble,
                                                const Hyperstate& x, Index a);

}  // namespace bamdp
