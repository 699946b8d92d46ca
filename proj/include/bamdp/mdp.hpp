#pragma once

#include "bamdp/types.hpp"

#include <cstdint>
#include <vector>

namespace bamdp {

/// Finite-horizon tabular MDP with a deterministic reward in [0, 1].
/// Transitions are stored per action as a row-stochastic |S| x |S| matrix,
/// so `transition[a](s, s2)` is the probability of moving from s to s2.
struct Mdp {
    Index num_states = 0;
    Index num_actions = 0;
    Matrix reward;                   // |S| x |A|
    std::vector<Matrix> transition;  // per action, |S| x |S|
    Vector initial_dist;             // |S|
    int horizon = 0;

    /// Throws ValidationError naming the violated constraint.
    void validate() const;
};

/// Non-stationary deterministic policy: `policy[h-1](s)` is the action at
/// timestep h. Negative entries mark undefined assignments.
using MdpPolicy = std::vector<ActionVector>;

/// Value tables produced by backward induction. Timesteps are 1-based with
/// a sentinel layer H+1 of zeros, so `value(h, s)` accepts h in [1, H+1].
struct ValueTable {
    std::vector<Vector> v;                   // H+1 layers, layer i = timestep i+1
    std::vector<Matrix> q;                   // H layers, |S| x |A|
    std::vector<ActionVector> greedy_policy; // H layers
    std::int64_t backup_count = 0;

    int horizon() const { return static_cast<int>(q.size()); }
    double value(int h, Index s) const { return v.at(h - 1)(s); }
    double action_value(int h, Index s, Index a) const { return q.at(h - 1)(s, a); }
    Index greedy_action(int h, Index s) const { return greedy_policy.at(h - 1)(s); }

    /// The greedy policy as a standalone table.
    MdpPolicy greedy() const { return greedy_policy; }
};

/// Exact optimal values and a greedy optimal policy by backward induction.
/// Argmax ties break toward the lowest action index and expectation sums
/// run over next states in ascending order, so results are bit-stable.
ValueTable mdp_value_iteration(const Mdp& mdp);

/// Exact V^pi and Q^pi for a non-stationary policy. Throws IncompletePolicy
/// if the policy is undefined anywhere.
ValueTable evaluate_mdp_policy(const Mdp& mdp, const MdpPolicy& policy);

}  // namespace bamdp
