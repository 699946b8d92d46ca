#include "bamdp/bamdp.hpp"

#include "bamdp/envs.hpp"
#include "bamdp/errors.hpp"
#include "bamdp/mdp.hpp"
#include "bamdp/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace bamdp;

TEST_CASE("posterior update applies Bayes rule on the chain") {
    const BamdpModel chain = make_bernoulli_chain(0.8, 3);
    // action "+" (0), observe an increment from state 0
    const EpistemicState post = posterior_update(chain.ensemble, chain.prior, 0, 0, 1);
    CHECK(post(0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(post(1) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("Dirac beliefs are fixed points of the posterior") {
    const BamdpModel chain = make_bernoulli_chain(0.8, 3);
    const EpistemicState dirac = EpistemicState::dirac(0, 2);
    const EpistemicState post = posterior_update(chain.ensemble, dirac, 0, 0, 1);
    CHECK(post(0) == 1.0);
    CHECK(post(1) == 0.0);
}

TEST_CASE("a zero-likelihood observation eliminates the hypothesis exactly") {
    const BamdpModel chain = make_bernoulli_chain(1.0, 3);
    const EpistemicState post = posterior_update(chain.ensemble, chain.prior, 0, 0, 1);
    CHECK(post(0) == 1.0);
    CHECK(post(1) == 0.0);
}

TEST_CASE("impossible observations raise ImpossibleObservation") {
    const BamdpModel chain = make_bernoulli_chain(1.0, 3);
    CHECK_THROWS_AS(posterior_update(chain.ensemble, chain.prior, 0, 0, 2),
                    ImpossibleObservation);
}

TEST_CASE("two sequential updates equal one batch update on the joint likelihood") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BamdpModel model = make_random_bamdp(400 + seed, 3, 2, 3, 3, 0.0);
        const EpistemicState step1 = posterior_update(model.ensemble, model.prior, 0, 1, 2);
        const EpistemicState step2 = posterior_update(model.ensemble, step1, 2, 0, 1);

        Vector batch(3);
        for (Index k = 0; k < 3; ++k) {
            batch(k) = model.prior(k) * model.ensemble.hypotheses[k][1](0, 2) *
                       model.ensemble.hypotheses[k][0](2, 1);
        }
        batch /= batch.sum();
        for (Index k = 0; k < 3; ++k) {
            CHECK(step2(k) == doctest::Approx(batch(k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("bamdp transition mixes predictives and updates beliefs on the chain") {
    const BamdpModel chain = make_bernoulli_chain(0.8, 3);
    const auto successors = bamdp_transition(chain, {0, chain.prior}, 0);
    REQUIRE(successors.size() == 2);
    // ascending next-state order: staying first, incrementing second
    CHECK(successors[0].hyperstate.state == 0);
    CHECK(successors[0].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(successors[0].hyperstate.belief(0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(successors[1].hyperstate.state == 1);
    CHECK(successors[1].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(successors[1].hyperstate.belief(0) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("transition from a Dirac belief reduces to the known MDP") {
    const BamdpModel model = make_random_bamdp(17, 3, 2, 2, 3, 0.0);
    const EpistemicState dirac = EpistemicState::dirac(1, 2);
    for (Index a = 0; a < 2; ++a) {
        for (const auto& succ : bamdp_transition(model, {0, dirac}, a)) {
            CHECK(succ.probability ==
                  doctest::Approx(model.ensemble.hypotheses[1][a](0, succ.hyperstate.state))
                      .epsilon(1e-12));
            CHECK(succ.hyperstate.belief(1) == 1.0);  // absorbed exactly
        }
    }
}

TEST_CASE("agreeing deterministic hypotheses give a single certain successor") {
    BamdpModel model = make_two_chain(2);
    // both actions from the final stage self-loop identically across hypotheses
    const auto successors = bamdp_transition(model, {3, model.prior}, 0);
    REQUIRE(successors.size() == 1);
    CHECK(successors[0].probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(successors[0].hyperstate.belief.approx_equals(model.prior));
}

TEST_CASE("transition probabilities always sum to one") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BamdpModel model =
            make_random_bamdp(500 + seed, 3, 2, 2, 3, seed % 2 ? 0.8 : 0.0).with_reachable_space();
        const LayeredSpace& layers = model.space->layered();
        for (const auto& layer : layers.layers) {
            for (const auto& x : layer) {
                for (Index a = 0; a < model.num_actions(); ++a) {
                    double total = 0.0;
                    std::set<Index> states;
                    for (const auto& succ : bamdp_transition(model, x, a)) {
                        total += succ.probability;
                        CHECK(states.insert(succ.hyperstate.state).second);
                    }
                    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("reachable layers under a Dirac prior stay within |S| per layer") {
    BamdpModel chain = make_bernoulli_chain(0.8, 3);
    chain.prior = EpistemicState::dirac(0, 2);
    const BamdpModel model = chain.with_reachable_space();
    for (const auto& layer : model.space->layered().layers) {
        CHECK(layer.size() <= 4);
        for (const auto& x : layer) CHECK(x.belief(0) == 1.0);
    }
}

TEST_CASE("a one-step horizon enumerates only the initial layer") {
    const BamdpModel model = make_bernoulli_chain(0.8, 1).with_reachable_space();
    CHECK(model.space->layered().layers.size() == 1);
    CHECK(model.space->layered().layers[0].size() == 1);
}

TEST_CASE("chain layer-3 beliefs match brute-force history enumeration") {
    const BamdpModel model = make_bernoulli_chain(0.8, 3).with_reachable_space();

    // every (action, next-state) history of length 2, Bayes applied by hand
    std::vector<Vector> expected;
    auto add_unique = [&expected](const Vector& p) {
        for (const auto& q : expected) {
            if ((p - q).cwiseAbs().maxCoeff() <= 1e-9) return;
        }
        expected.push_back(p);
    };
    const MdpEnsemble& ens = model.ensemble;
    for (Index a1 = 0; a1 < 2; ++a1) {
        for (Index s2 = 0; s2 < ens.num_states; ++s2) {
            double pred1 = 0.0;
            for (Index k = 0; k < 2; ++k) pred1 += 0.5 * ens.hypotheses[k][a1](0, s2);
            if (pred1 <= 0.0) continue;
            const Vector p1 = testing::oracle_posterior(ens, model.prior.probs(), 0, a1, s2);
            for (Index a2 = 0; a2 < 2; ++a2) {
                for (Index s3 = 0; s3 < ens.num_states; ++s3) {
                    double pred2 = 0.0;
                    for (Index k = 0; k < 2; ++k) pred2 += p1(k) * ens.hypotheses[k][a2](s2, s3);
                    if (pred2 <= 0.0) continue;
                    add_unique(testing::oracle_posterior(ens, p1, s2, a2, s3));
                }
            }
        }
    }

    const auto& layer3 = model.space->layered().layers[2];
    std::vector<Vector> actual;
    for (const auto& x : layer3) {
        bool seen = false;
        for (const auto& p : actual) {
            if ((p - x.belief.probs()).cwiseAbs().maxCoeff() <= 1e-9) seen = true;
        }
        if (!seen) actual.push_back(x.belief.probs());
    }
    CHECK(actual.size() == expected.size());
    for (const auto& p : expected) {
        bool found = false;
        for (const auto& q : actual) {
            if ((p - q).cwiseAbs().maxCoeff() <= 1e-9) found = true;
        }
        CHECK(found);
    }
    // the worst-case concentration after two informative observations is 16/17
    bool has_16_17 = false;
    for (const auto& p : actual) {
        if (std::abs(p.maxCoeff() - 16.0 / 17.0) <= 1e-9) has_16_17 = true;
    }
    CHECK(has_16_17);
}

TEST_CASE("enumeration raises SpaceExplosion beyond the cap") {
    const BamdpModel chain = make_bernoulli_chain(0.8, 4);
    CHECK_THROWS_WITH_AS(chain.with_reachable_space(3), doctest::Contains("layer"),
                         SpaceExplosion);
}

TEST_CASE("quantized grids enumerate the simplex lattice") {
    const BamdpModel chain = make_bernoulli_chain(0.8, 3);
    const BamdpModel grid2 = chain.with_grid_space(2);
    const auto& beliefs = grid2.space->grid().beliefs;
    REQUIRE(beliefs.size() == 3);
    CHECK(beliefs[0](0) == 0.0);   // (0, 1)
    CHECK(beliefs[1](0) == 0.5);   // (0.5, 0.5)
    CHECK(beliefs[2](0) == 1.0);   // (1, 0)

    const BamdpModel tri = make_random_bamdp(1, 2, 2, 3, 2, 0.0);
    CHECK(tri.with_grid_space(1).space->grid().beliefs.size() == 3);
    CHECK(tri.with_grid_space(4).space->grid().beliefs.size() == 15);
    CHECK_THROWS_AS(tri.with_grid_space(4, 10), SpaceExplosion);
}

TEST_CASE("snapping picks the nearest grid point with lexicographic ties") {
    const BamdpModel chain = make_bernoulli_chain(0.8, 3).with_grid_space(2);
    const HyperstateSpace& space = *chain.space;

    const EpistemicState on_grid(Vector{{0.5, 0.5}});
    CHECK(snap_to_grid(on_grid, space).probs() == on_grid.probs());

    const EpistemicState near_vertex(Vector{{0.9, 0.1}});
    CHECK(snap_to_grid(near_vertex, space)(0) == 1.0);

    // distance 0.25 to both (1,0) and (0.5,0.5); the lexicographically
    // smaller grid vector wins
    const EpistemicState tie(Vector{{0.75, 0.25}});
    CHECK(snap_to_grid(tie, space)(0) == 0.5);
}

TEST_CASE("value iteration under a Dirac prior matches the known-MDP solution") {
    BamdpModel chain = make_bernoulli_chain(0.8, 3, ChainReward::IncrementBonus);
    for (Index theta = 0; theta < 2; ++theta) {
        chain.prior = EpistemicState::dirac(theta, 2);
        const BamdpModel model = chain.with_reachable_space();
        const BamdpValueTable table = bamdp_value_iteration(model);
        const ValueTable known = mdp_value_iteration(model.ensemble.mdp_for(theta));
        const LayeredSpace& layers = model.space->layered();
        for (int h = 1; h <= model.horizon(); ++h) {
            for (const auto& x : layers.layers[h - 1]) {
                CHECK(table.value(h, x) == doctest::Approx(known.value(h, x.state)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("zero rewards solve to zero everywhere") {
    const BamdpModel model = make_bernoulli_chain(0.8, 3).with_reachable_space();
    const BamdpValueTable table = bamdp_value_iteration(model);
    for (int h = 1; h <= 3; ++h) {
        CHECK(table.v[h - 1].cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("reachable-backend values match brute-force history expectimax") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BamdpModel model =
            make_random_bamdp(600 + seed, 3, 2, 2, 3, 0.0).with_reachable_space();
        const BamdpValueTable table = bamdp_value_iteration(model);
        for (const auto& x : model.initial_hyperstates()) {
            CHECK(table.value(1, x) ==
                  doctest::Approx(
                      testing::oracle_bamdp_value(model.ensemble, model.prior.probs(), x.state, 1))
                      .epsilon(1e-9));
        }
    }
}

TEST_CASE("bayes-optimal value never beats the omniscient mixture") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BamdpModel model =
            make_random_bamdp(700 + seed, 3, 2, 2, 3, 0.5).with_reachable_space();
        const BamdpValueTable table = bamdp_value_iteration(model);
        std::vector<ValueTable> per_theta;
        for (Index k = 0; k < 2; ++k) {
            per_theta.push_back(mdp_value_iteration(model.ensemble.mdp_for(k)));
        }
        for (const auto& x : model.initial_hyperstates()) {
            double mixture = 0.0;
            for (Index k = 0; k < 2; ++k) {
                mixture += model.prior(k) * per_theta[k].value(1, x.state);
            }
            CHECK(table.value(1, x) <= mixture + 1e-9);
        }
    }
}

TEST_CASE("grid and reachable backends agree when all beliefs lie on the grid") {
    // with q = 1 the only reachable beliefs are the uniform prior and the
    // two vertices, all of which sit on the resolution-2 lattice
    const BamdpModel base = make_bernoulli_chain(1.0, 3, ChainReward::IncrementBonus);
    const BamdpModel reachable = base.with_reachable_space();
    const BamdpModel grid = base.with_grid_space(2);
    const BamdpValueTable exact = bamdp_value_iteration(reachable);
    const BamdpValueTable quantized = bamdp_value_iteration(grid);
    const LayeredSpace& layers = reachable.space->layered();
    for (int h = 1; h <= base.horizon(); ++h) {
        for (const auto& x : layers.layers[h - 1]) {
            CHECK(quantized.value(h, x) == doctest::Approx(exact.value(h, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("backup counts follow the backend accounting") {
    const BamdpModel reachable = make_bernoulli_chain(0.8, 3).with_reachable_space();
    const BamdpValueTable exact = bamdp_value_iteration(reachable);
    std::int64_t expected = 0;
    for (const auto& layer : reachable.space->layered().layers) {
        expected += static_cast<std::int64_t>(layer.size()) * 2;
    }
    CHECK(exact.backup_count == expected);

    const BamdpModel grid = make_bernoulli_chain(0.8, 3).with_grid_space(2);
    const BamdpValueTable quantized = bamdp_value_iteration(grid);
    CHECK(quantized.backup_count == 4 * 3 * 2 * 3);  // |S| * |grid| * |A| * H
}

TEST_CASE("value table invariants hold for BAMDP solves") {
    const BamdpModel model = make_random_bamdp(812, 3, 2, 2, 4, 0.3).with_reachable_space();
    const BamdpValueTable table = bamdp_value_iteration(model);
    for (int h = 1; h <= model.horizon(); ++h) {
        const auto& layer = model.space->layered().layers[h - 1];
        for (Index i = 0; i < static_cast<Index>(layer.size()); ++i) {
            const double v = table.v[h - 1](i);
            CHECK(v >= -1e-12);
            CHECK(v <= model.horizon() - h + 1 + 1e-9);
            CHECK(v == doctest::Approx(table.q[h - 1].row(i).maxCoeff()).epsilon(1e-12));
        }
    }
}

TEST_CASE("evaluating the greedy policy reproduces the optimal values") {
    for (const bool use_grid : {false, true}) {
        const BamdpModel base = make_random_bamdp(900, 3, 2, 2, 3, 0.4);
        const BamdpModel model = use_grid ? base.with_grid_space(3) : base.with_reachable_space();
        const BamdpValueTable optimal = bamdp_value_iteration(model);
        const BamdpPolicy greedy = greedy_policy_from_values(model, optimal);
        const BamdpValueTable evaluated = evaluate_bamdp_policy(model, greedy);
        for (int h = 1; h <= model.horizon(); ++h) {
            CHECK((optimal.v[h - 1] - evaluated.v[h - 1]).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
}

TEST_CASE("policy values never exceed optimal values") {
    Rng rng(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BamdpModel model =
            make_random_bamdp(1000 + seed, 3, 2, 2, 3, 0.0).with_reachable_space();
        const BamdpValueTable optimal = bamdp_value_iteration(model);
        const BamdpPolicy random_policy =
            BamdpPolicy::constant(model.horizon(), rng.uniform_index(model.num_actions()));
        const BamdpValueTable evaluated = evaluate_bamdp_policy(model, random_policy);
        for (int h = 1; h <= model.horizon(); ++h) {
            CHECK((evaluated.v[h - 1] - optimal.v[h - 1]).maxCoeff() <= 1e-9);
        }
    }
}

TEST_CASE("constant-action policies on the chain match the history oracle") {
    // an informative prior separates the always-+ and always-o policies;
    // under the uniform prior the hypothesis/action symmetry makes them equal
    BamdpModel chain = make_bernoulli_chain(0.8, 2, ChainReward::IncrementBonus);

    const BamdpPolicy always_plus = BamdpPolicy::constant(2, 0);
    const BamdpPolicy always_stay = BamdpPolicy::constant(2, 1);

    SUBCASE("informative prior strictly favors the climbing action") {
        chain.prior = EpistemicState(Vector{{0.7, 0.3}});
        const BamdpModel model = chain.with_reachable_space();
        const BamdpValueTable plus = evaluate_bamdp_policy(model, always_plus);
        const BamdpValueTable stay = evaluate_bamdp_policy(model, always_stay);
        const Hyperstate start{0, chain.prior};

        const double oracle_plus = testing::oracle_policy_value(
            model.ensemble, [](int, Index, const Vector&) { return Index{0}; },
            chain.prior.probs(), 0, 1);
        const double oracle_stay = testing::oracle_policy_value(
            model.ensemble, [](int, Index, const Vector&) { return Index{1}; },
            chain.prior.probs(), 0, 1);
        CHECK(plus.value(1, start) == doctest::Approx(oracle_plus).epsilon(1e-9));
        CHECK(stay.value(1, start) == doctest::Approx(oracle_stay).epsilon(1e-9));
        CHECK(plus.value(1, start) > stay.value(1, start) + 1e-6);
    }

    SUBCASE("uniform prior makes the constant policies symmetric") {
        const BamdpModel model = chain.with_reachable_space();
        const BamdpValueTable plus = evaluate_bamdp_policy(model, always_plus);
        const BamdpValueTable stay = evaluate_bamdp_policy(model, always_stay);
        const Hyperstate start{0, chain.prior};
        CHECK(plus.value(1, start) == doctest::Approx(stay.value(1, start)).epsilon(1e-12));
    }
}

TEST_CASE("greedy policy from zero values is myopic") {
    const BamdpModel model = make_random_bamdp(77, 3, 2, 2, 3, 0.0).with_reachable_space();
    const BamdpPolicy myopic =
        greedy_policy_from_values(model, [](int, const Hyperstate&) { return 0.0; });
    for (int h = 1; h <= model.horizon(); ++h) {
        for (const auto& x : model.space->layered().layers[h - 1]) {
            Index best = 0;
            for (Index a = 1; a < model.num_actions(); ++a) {
                if (model.ensemble.reward(x.state, a) > model.ensemble.reward(x.state, best)) {
                    best = a;
                }
            }
            CHECK(myopic.action_at(h, x) == best);
        }
    }
}

TEST_CASE("policies without coverage raise IncompletePolicy") {
    const BamdpModel model = make_bernoulli_chain(0.8, 3).with_reachable_space();
    BamdpPolicy empty;
    empty.entries.resize(3);
    CHECK_THROWS_AS(evaluate_bamdp_policy(model, empty), IncompletePolicy);
}

TEST_CASE("value lookups outside the space raise InconsistentSpace") {
    const BamdpModel model = make_bernoulli_chain(0.8, 3).with_reachable_space();
    const BamdpValueTable table = bamdp_value_iteration(model);
    const Hyperstate foreign{0, EpistemicState(Vector{{0.123, 0.877}})};
    CHECK_THROWS_AS(table.value(2, foreign), InconsistentSpace);
}

TEST_CASE("model digests are stable and sensitive") {
    const BamdpModel a = make_random_bamdp(1, 3, 2, 2, 3, 0.0);
    const BamdpModel b = make_random_bamdp(1, 3, 2, 2, 3, 0.0);
    const BamdpModel c = make_random_bamdp(2, 3, 2, 2, 3, 0.0);
    CHECK(model_digest(a) == model_digest(b));
    CHECK(model_digest(a) != model_digest(c));
}
