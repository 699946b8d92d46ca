#include "bamdp/mdp.hpp"

#include "bamdp/errors.hpp"
#include "bamdp/rng.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace bamdp;

namespace {

Mdp one_state_one_action(double reward, int horizon) {
    Mdp mdp;
    mdp.num_states = 1;
    mdp.num_actions = 1;
    mdp.reward = Matrix::Constant(1, 1, reward);
    mdp.transition = {Matrix::Constant(1, 1, 1.0)};
    mdp.initial_dist = Vector::Constant(1, 1.0);
    mdp.horizon = horizon;
    return mdp;
}

// s0 -> s1 under a0 with reward 0; s1 self-loops under a0 with reward 1;
// a1 self-loops everywhere with reward 0
Mdp two_state_chain(int horizon) {
    Mdp mdp;
    mdp.num_states = 2;
    mdp.num_actions = 2;
    mdp.reward = Matrix::Zero(2, 2);
    mdp.reward(1, 0) = 1.0;
    mdp.transition.assign(2, Matrix::Zero(2, 2));
    mdp.transition[0](0, 1) = 1.0;
    mdp.transition[0](1, 1) = 1.0;
    mdp.transition[1](0, 0) = 1.0;
    mdp.transition[1](1, 1) = 1.0;
    mdp.initial_dist = Vector::Zero(2);
    mdp.initial_dist(0) = 1.0;
    mdp.horizon = horizon;
    return mdp;
}

}  // namespace

TEST_CASE("value iteration on a single self-loop telescopes the reward") {
    const ValueTable table = mdp_value_iteration(one_state_one_action(1.0, 3));
    CHECK(table.value(1, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(table.value(2, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(table.value(4, 0) == 0.0);
}

TEST_CASE("all-zero rewards give an all-zero table") {
    Mdp mdp = testing::random_mdp(7, 3, 2, 4);
    mdp.reward.setZero();
    const ValueTable table = mdp_value_iteration(mdp);
    for (int h = 1; h <= mdp.horizon + 1; ++h) {
        for (Index s = 0; s < mdp.num_states; ++s) CHECK(table.value(h, s) == 0.0);
    }
}

TEST_CASE("two-state chain reaches value 2 over three steps") {
    const ValueTable table = mdp_value_iteration(two_state_chain(3));
    CHECK(table.value(1, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(table.greedy_action(1, 0) == 0);
}

TEST_CASE("horizon zero returns the all-zero sentinel table") {
    const ValueTable table = mdp_value_iteration(one_state_one_action(1.0, 0));
    CHECK(table.v.size() == 1);
    CHECK(table.value(1, 0) == 0.0);
    CHECK(table.backup_count == 0);
}

TEST_CASE("backup count is S*A*H") {
    const Mdp mdp = testing::random_mdp(11, 3, 2, 5);
    const ValueTable table = mdp_value_iteration(mdp);
    CHECK(table.backup_count == 3 * 2 * 5);
}

TEST_CASE("optimal values match brute-force expectimax on small instances") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Index S = 1 + static_cast<Index>(seed % 3);       // 1..3
        const Index A = 1 + static_cast<Index>((seed / 3) % 2); // 1..2
        const int H = 1 + static_cast<int>(seed % 5);           // 1..5
        if (S * A > 6) continue;
        const Mdp mdp = testing::random_mdp(100 + seed, S, A, H, seed % 2 ? 0.5 : 0.0);
        const ValueTable table = mdp_value_iteration(mdp);
        for (Index s = 0; s < S; ++s) {
            CHECK(table.value(1, s) ==
                  doctest::Approx(testing::oracle_mdp_value(mdp, s, 1)).epsilon(1e-9));
        }
        ++checked;
    }
    CHECK(checked == 30);
}

TEST_CASE("value table invariants hold on random instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Mdp mdp = testing::random_mdp(200 + seed, 4, 3, 6);
        const ValueTable table = mdp_value_iteration(mdp);
        for (int h = 1; h <= mdp.horizon; ++h) {
            for (Index s = 0; s < mdp.num_states; ++s) {
                CHECK(table.value(h, s) >= -1e-12);
                CHECK(table.value(h, s) <= mdp.horizon - h + 1 + 1e-9);
                double max_q = table.action_value(h, s, 0);
                for (Index a = 1; a < mdp.num_actions; ++a) {
                    max_q = std::max(max_q, table.action_value(h, s, a));
                }
                CHECK(table.value(h, s) == doctest::Approx(max_q).epsilon(1e-12));
                CHECK(table.action_value(h, s, table.greedy_action(h, s)) ==
                      doctest::Approx(table.value(h, s)).epsilon(1e-12));
            }
        }
        for (Index s = 0; s < mdp.num_states; ++s) CHECK(table.value(mdp.horizon + 1, s) == 0.0);
    }
}

TEST_CASE("evaluating the greedy policy reproduces the optimal table") {
    const Mdp mdp = testing::random_mdp(42, 4, 3, 5);
    const ValueTable optimal = mdp_value_iteration(mdp);
    const ValueTable evaluated = evaluate_mdp_policy(mdp, optimal.greedy());
    for (int h = 1; h <= mdp.horizon; ++h) {
        for (Index s = 0; s < mdp.num_states; ++s) {
            CHECK(evaluated.value(h, s) == doctest::Approx(optimal.value(h, s)).epsilon(1e-9));
        }
    }
}

TEST_CASE("always-idle policy earns nothing on the two-state chain") {
    const Mdp mdp = two_state_chain(3);
    MdpPolicy always_a1(3, ActionVector::Constant(2, 1));
    const ValueTable table = evaluate_mdp_policy(mdp, always_a1);
    CHECK(table.value(1, 0) == 0.0);
}

TEST_CASE("policy value never exceeds the optimal value") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Mdp mdp = testing::random_mdp(300 + trial, 3, 2, 4);
        const ValueTable optimal = mdp_value_iteration(mdp);
        MdpPolicy policy;
        for (int h = 0; h < mdp.horizon; ++h) {
            ActionVector actions(mdp.num_states);
            for (Index s = 0; s < mdp.num_states; ++s) {
                actions(s) = static_cast<int>(rng.uniform_index(mdp.num_actions));
            }
            policy.push_back(actions);
        }
        const ValueTable evaluated = evaluate_mdp_policy(mdp, policy);
        for (int h = 1; h <= mdp.horizon; ++h) {
            for (Index s = 0; s < mdp.num_states; ++s) {
                CHECK(evaluated.value(h, s) <= optimal.value(h, s) + 1e-9);
            }
        }
    }
}

TEST_CASE("incomplete policies are rejected") {
    const Mdp mdp = two_state_chain(3);
    MdpPolicy too_short(2, ActionVector::Zero(2));
    CHECK_THROWS_AS(evaluate_mdp_policy(mdp, too_short), IncompletePolicy);

    MdpPolicy undefined(3, ActionVector::Zero(2));
    undefined[1](1) = -1;
    CHECK_THROWS_AS(evaluate_mdp_policy(mdp, undefined), IncompletePolicy);
}

TEST_CASE("validation names the violated constraint") {
    Mdp mdp = two_state_chain(3);
    mdp.transition[0](0, 1) = 0.9;
    CHECK_THROWS_WITH_AS(mdp.validate(),
                         doctest::Contains("row-stochasticity"), ValidationError);

    Mdp bad_reward = two_state_chain(3);
    bad_reward.reward(0, 0) = 1.5;
    CHECK_THROWS_AS(bad_reward.validate(), ValidationError);
}
