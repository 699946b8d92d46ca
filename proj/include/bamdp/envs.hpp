#pragma once

#include "bamdp/bamdp.hpp"

#include <cstdint>
#include <string>

namespace bamdp {

enum class ChainReward { Zero, IncrementBonus };

/// Two-hypothesis Bernoulli chain. Action "+" (index 0) increments the
/// state with probability q under the first hypothesis and with 1-q under
/// the second; action "o" (index 1) has the roles flipped. States run
/// 0..horizon with an absorbing top state, the prior is uniform, and the
/// agent starts at state 0. `IncrementBonus` pays the normalized height
/// s / horizon so that climbing is worth planning for; `Zero` pays nothing.
BamdpModel make_bernoulli_chain(double q, int horizon,
                                ChainReward reward = ChainReward::Zero);

/// One initial state feeding two deterministic N-stage chains (upper and
/// lower). Hypotheses are binary strings: theta_0 is all-ones and theta_n
/// flips bit n, so at each stage exactly one hypothesis routes the actions
/// the other way. Uniform prior over the N+1 hypotheses, zero rewards,
/// horizon N+2.
BamdpModel make_two_chain(int num_stages);

/// Seeded random instance. Transition rows are uniform simplex samples
/// blended toward random deterministic rows by `determinism` in [0, 1];
/// rewards are uniform in [0, 1]; the prior and the initial distribution
/// are uniform. Bit-reproducible for a fixed seed.
BamdpModel make_random_bamdp(std::uint64_t seed, Index num_states, Index num_actions,
                             Index num_hypotheses, int horizon, double determinism);

/// Builtin-instance mini-language: "chain:q=0.8,H=3,reward=increment_bonus",
/// "twochain:N=4", "random:seed=1,S=3,A=2,K=2,H=3,det=0.5".
BamdpModel make_env(const std::string& spec);

/// Problem-file codec (JSON). Round-trips are digest-identical.
void save_problem(const BamdpModel& model, const std::string& path);
BamdpModel load_problem(const std::string& path);

}  // namespace bamdp
