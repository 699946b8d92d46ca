#pragma once

// Test-only instance builders and independent oracles. The oracles
// recompute values by brute-force recursion over raw history trees and
// stay independent of the dynamic-programming paths they check.

#include "bamdp/bamdp.hpp"
#include "bamdp/ensemble.hpp"
#include "bamdp/envs.hpp"
#include "bamdp/info_horizon.hpp"
#include "bamdp/mdp.hpp"
#include "bamdp/rng.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace bamdp::testing {

/// Expectimax over the full depth-(H-h+1) action tree of an MDP.
inline double oracle_mdp_value(const Mdp& mdp, Index s, int h) {
    if (h > mdp.horizon) return 0.0;
    double best = 0.0;
    for (Index a = 0; a < mdp.num_actions; ++a) {
        double q = mdp.reward(s, a);
        for (Index s2 = 0; s2 < mdp.num_states; ++s2) {
            const double p = mdp.transition[static_cast<std::size_t>(a)](s, s2);
            if (p > 0.0) q += p * oracle_mdp_value(mdp, s2, h + 1);
        }
        if (a == 0 || q > best) best = q;
    }
    return best;
}

/// Bayes rule applied directly to raw likelihoods (no library calls).
inline Vector oracle_posterior(const MdpEnsemble& ens, const Vector& belief, Index s, Index a,
                               Index s2) {
    Vector post(belief.size());
    double mass = 0.0;
    for (Index k = 0; k < belief.size(); ++k) {
        post(k) = ens.hypotheses[static_cast<std::size_t>(k)][a](s, s2) * belief(k);
        mass += post(k);
    }
    return post / mass;
}

/// Expectimax over the full BAMDP history tree, carrying exact beliefs and
/// never merging hyperstates.
inline double oracle_bamdp_value(const MdpEnsemble& ens, const Vector& belief, Index s, int h) {
    if (h > ens.horizon) return 0.0;
    double best = 0.0;
    for (Index a = 0; a < ens.num_actions; ++a) {
        double q = ens.reward(s, a);
        for (Index s2 = 0; s2 < ens.num_states; ++s2) {
            double pred = 0.0;
            for (Index k = 0; k < belief.size(); ++k) {
                pred += ens.hypotheses[static_cast<std::size_t>(k)][a](s, s2) * belief(k);
            }
            if (pred > 0.0) {
                q += pred * oracle_bamdp_value(ens, oracle_posterior(ens, belief, s, a, s2), s2,
                                               h + 1);
            }
        }
        if (a == 0 || q > best) best = q;
    }
    return best;
}

/// Exact value of an arbitrary hyperstate policy by the same history
/// recursion, following the policy's action instead of maximizing.
using OraclePolicy = std::function<Index(int, Index, const Vector&)>;

inline double oracle_policy_value(const MdpEnsemble& ens, const OraclePolicy& policy,
                                  const Vector& belief, Index s, int h) {
    if (h > ens.horizon) return 0.0;
    const Index a = policy(h, s, belief);
    double q = ens.reward(s, a);
    for (Index s2 = 0; s2 < ens.num_states; ++s2) {
        double pred = 0.0;
        for (Index k = 0; k < belief.size(); ++k) {
            pred += ens.hypotheses[static_cast<std::size_t>(k)][a](s, s2) * belief(k);
        }
        if (pred > 0.0) {
            q += pred * oracle_policy_value(ens, policy, oracle_posterior(ens, belief, s, a, s2),
                                            s2, h + 1);
        }
    }
    return q;
}

/// Random MDP without belief structure (single hypothesis).
inline Mdp random_mdp(std::uint64_t seed, Index S, Index A, int H, double determinism = 0.0) {
    return make_random_bamdp(seed, S, A, 1, H, determinism).ensemble.mdp_for(0);
}

/// Deterministic ensemble whose hypotheses disagree at every (s, a): one
/// observation separates any pair of candidates from anywhere, so the
/// information horizon is 2 and informed planning is sound on the whole
/// grid. Needs num_states >= num_hypotheses.
inline BamdpModel make_separating_deterministic(std::uint64_t seed, Index S, Index A,
                                                Index K, int H) {
    Rng rng(seed);
    MdpEnsemble ens;
    ens.num_states = S;
    ens.num_actions = A;
    ens.horizon = H;
    ens.initial_dist = Vector::Constant(S, 1.0 / static_cast<double>(S));
    ens.reward = Matrix::Zero(S, A);
    for (Index s = 0; s < S; ++s) {
        for (Index a = 0; a < A; ++a) ens.reward(s, a) = rng.uniform01();
    }
    ens.hypotheses.assign(static_cast<std::size_t>(K),
                          std::vector<Matrix>(static_cast<std::size_t>(A), Matrix::Zero(S, S)));
    for (Index s = 0; s < S; ++s) {
        for (Index a = 0; a < A; ++a) {
            std::vector<Index> taken;
            for (Index k = 0; k < K; ++k) {
                Index target = rng.uniform_index(S);
                while (std::find(taken.begin(), taken.end(), target) != taken.end()) {
                    target = (target + 1) % S;
                }
                taken.push_back(target);
                ens.hypotheses[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)](
                    s, target) = 1.0;
            }
        }
    }
    ens.validate();
    return BamdpModel{std::move(ens), EpistemicState::uniform(K), nullptr};
}

/// Supremum of the policy information horizon by brute force: every
/// assignment of actions to the all-actions reachable hyperstates is a
/// distinct policy. Returns nullopt for an infinite supremum.
inline std::optional<int> exhaustive_policy_sup_info_horizon(const BamdpModel& model) {
    const BamdpModel with_space = model.space ? model : model.with_reachable_space();
    const LayeredSpace& layers = with_space.space->layered();

    std::vector<std::pair<int, SpaceKey>> slots;
    for (int h = 1; h <= static_cast<int>(layers.layers.size()); ++h) {
        for (const auto& x : layers.layers[static_cast<std::size_t>(h - 1)]) {
            slots.emplace_back(h, space_key(x));
        }
    }
    const Index A = model.num_actions();
    std::vector<Index> assignment(slots.size(), 0);

    std::optional<int> supremum = 1;
    bool any = false;
    while (true) {
        BamdpPolicy policy;
        policy.entries.resize(layers.layers.size());
        for (std::size_t i = 0; i < slots.size(); ++i) {
            policy.entries[static_cast<std::size_t>(slots[i].first - 1)][slots[i].second] =
                assignment[i];
        }
        const InformationHorizon ih = policy_information_horizon(with_space, policy);
        if (!ih.finite()) {
            return std::nullopt;  // one infinite policy makes the supremum infinite
        }
        if (!any || *ih.value > *supremum) supremum = *ih.value;
        any = true;

        std::size_t pos = 0;
        while (pos < assignment.size()) {
            if (++assignment[pos] < A) break;
            assignment[pos] = 0;
            ++pos;
        }
        if (pos == assignment.size()) break;
    }
    return supremum;
}

}  // namespace bamdp::testing
