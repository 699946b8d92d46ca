#include "bamdp/ensemble.hpp"

#include "bamdp/errors.hpp"

#include <string>

namespace bamdp {

Mdp MdpEnsemble::mdp_for(Index theta) const { return mdp_for(theta, horizon); }

Mdp MdpEnsemble::mdp_for(Index theta, int horizon_override) const {
    Mdp mdp;
    mdp.num_states = num_states;
    mdp.num_actions = num_actions;
    mdp.reward = reward;
    mdp.transition = hypotheses.at(static_cast<std::size_t>(theta));
    mdp.initial_dist = initial_dist;
    mdp.horizon = horizon_override;
    return mdp;
}

void MdpEnsemble::validate() const {
    if (num_hypotheses() < 1) {
        throw ValidationError("ensemble needs at least one hypothesis");
    }
    for (Index theta = 0; theta < num_hypotheses(); ++theta) {
        mdp_for(theta).validate();
    }
}

EpistemicState posterior_update(const MdpEnsemble& ensemble, const EpistemicState& belief,
                                Index s, Index a, Index s_next) {
    const Index K = ensemble.num_hypotheses();
    Vector unnormalized(K);
    double mass = 0.0;
    for (Index theta = 0; theta < K; ++theta) {
        unnormalized(theta) = ensemble.hypotheses[static_cast<std::size_t>(theta)][a](s, s_next) *
                              belief(theta);
        mass += unnormalized(theta);
    }
    if (mass <= 0.0) {
        throw ImpossibleObservation("tuple (s=" + std::to_string(s) + ", a=" +
                                    std::to_string(a) + ", s'=" + std::to_string(s_next) +
                                    ") has zero predictive probability");
    }
    return EpistemicState(unnormalized / mass);
}

double predictive_probability(const MdpEnsemble& ensemble, const EpistemicState& belief,
                              Index s, Index a, Index s_next) {
    double p = 0.0;
    for (Index theta = 0; theta < ensemble.num_hypotheses(); ++theta) {
        p += ensemble.hypotheses[static_cast<std::size_t>(theta)][a](s, s_next) * belief(theta);
    }
    return p;
}

std::vector<WeightedSuccessor> bamdp_successors(const MdpEnsemble& ensemble,
                                                const Hyperstate& x, Index a) {
    std::vector<WeightedSuccessor> successors;
    for (Index s_next = 0; s_next < ensemble.num_states; ++s_next) {
        const double p = predictive_probability(ensemble, x.belief, x.state, a, s_next);
        if (p <= 0.0) continue;
        successors.push_back(
            {Hyperstate{s_next, posterior_update(ensemble, x.belief, x.state, a, s_next)}, p});
    }
    return successors;
}

}  // namespace bamdp
