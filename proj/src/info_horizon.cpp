#include "bamdp/info_horizon.hpp"

#include "bamdp/abstraction.hpp"
#include "bamdp/errors.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace bamdp {

namespace {

/// Forward layer expansion with an action selector per hyperstate.
/// `actions(h, x)` yields the actions to expand at timestep h.
LayeredSpace expand_layers(const MdpEnsemble& ensemble, const EpistemicState& prior,
                           std::size_t cap,
                           const std::function<std::vector<Index>(int, const Hyperstate&)>& actions) {
    LayeredSpace space;
    const int H = ensemble.horizon;
    space.layers.resize(static_cast<std::size_t>(H));
    space.parents.resize(static_cast<std::size_t>(H));
    space.index.resize(static_cast<std::size_t>(H));

    std::size_t total = 0;
    for (Index s = 0; s < ensemble.num_states; ++s) {
        if (ensemble.initial_dist(s) <= 0.0) continue;
        Hyperstate x{s, prior};
        space.index[0].emplace(space_key(x), static_cast<Index>(space.layers[0].size()));
        space.layers[0].push_back(std::move(x));
        space.parents[0].push_back({});
        ++total;
    }
    for (int h = 1; h < H; ++h) {
        const auto& frontier = space.layers[static_cast<std::size_t>(h - 1)];
        auto& layer = space.layers[static_cast<std::size_t>(h)];
        auto& parents = space.parents[static_cast<std::size_t>(h)];
        auto& index = space.index[static_cast<std::size_t>(h)];
        for (Index i = 0; i < static_cast<Index>(frontier.size()); ++i) {
            for (Index a : actions(h, frontier[static_cast<std::size_t>(i)])) {
                for (auto& succ :
                     bamdp_successors(ensemble, frontier[static_cast<std::size_t>(i)], a)) {
                    SpaceKey key = space_key(succ.hyperstate);
                    if (index.find(key) != index.end()) continue;
                    index.emplace(std::move(key), static_cast<Index>(layer.size()));
                    parents.push_back({i, a, succ.hyperstate.state});
                    layer.push_back(std::move(succ.hyperstate));
                    if (++total > cap) {
                        throw SpaceExplosion("policy reachability exceeded cap " +
                                             std::to_string(cap) + " at layer " +
                                             std::to_string(h + 1));
                    }
                }
            }
        }
    }
    return space;
}

HorizonWitness trace_witness(const LayeredSpace& space, int layer_h, Index pos) {
    HorizonWitness witness;
    witness.timestep = layer_h;
    const Hyperstate& x = space.layers[static_cast<std::size_t>(layer_h - 1)]
                                      [static_cast<std::size_t>(pos)];
    witness.state = x.state;
    witness.belief = x.belief.probs();
    witness.belief_entropy = entropy(x.belief);

    Index cursor = pos;
    for (int h = layer_h; h > 1; --h) {
        const ParentLink& link =
            space.parents[static_cast<std::size_t>(h - 1)][static_cast<std::size_t>(cursor)];
        witness.trace.emplace_back(link.action, link.next_state);
        cursor = link.parent;
    }
    std::reverse(witness.trace.begin(), witness.trace.end());
    witness.initial_state = space.layers[0][static_cast<std::size_t>(cursor)].state;
    return witness;
}

InformationHorizon horizon_from_layers(const LayeredSpace& space, double entropy_tol) {
    InformationHorizon result;
    result.layer_sizes = space.layer_sizes();
    const int H = static_cast<int>(space.layers.size());

    // first timestep with all reachable beliefs resolved
    int first_resolved = 0;
    std::pair<int, Index> last_unresolved{0, -1};
    for (int h = 1; h <= H; ++h) {
        bool all_resolved = true;
        const auto& layer = space.layers[static_cast<std::size_t>(h - 1)];
        for (Index i = 0; i < static_cast<Index>(layer.size()); ++i) {
            if (!is_resolved(layer[static_cast<std::size_t>(i)].belief, entropy_tol)) {
                all_resolved = false;
                last_unresolved = {h, i};
                break;
            }
        }
        if (all_resolved && first_resolved == 0) {
            first_resolved = h;
            break;
        }
    }
    if (first_resolved > 0) {
        result.value = first_resolved;
        if (first_resolved > 1 && last_unresolved.second >= 0) {
            result.witness = trace_witness(space, last_unresolved.first, last_unresolved.second);
        }
    } else if (last_unresolved.second >= 0) {
        result.witness = trace_witness(space, last_unresolved.first, last_unresolved.second);
    }
    return result;
}

}  // namespace

InformationHorizon policy_information_horizon(const BamdpModel& model,
                                              const BamdpPolicy& policy, double entropy_tol,
                                              std::size_t cap) {
    LayeredSpace space = expand_layers(
        model.ensemble, model.prior, cap,
        [&policy](int h, const Hyperstate& x) {
            return std::vector<Index>{policy.action_at(h, x)};
        });
    return horizon_from_layers(space, entropy_tol);
}

InformationHorizon information_horizon(const BamdpModel& model, double entropy_tol,
                                       std::size_t cap) {
    std::vector<Index> all(static_cast<std::size_t>(model.num_actions()));
    for (Index a = 0; a < model.num_actions(); ++a) all[static_cast<std::size_t>(a)] = a;
    LayeredSpace space = expand_layers(model.ensemble, model.prior, cap,
                                       [&all](int, const Hyperstate&) { return all; });
    return horizon_from_layers(space, entropy_tol);
}

InformationHorizon abstract_information_horizon(const AbstractBamdp& abstract_model,
                                                double entropy_tol) {
    const auto layers = abstract_reachable_layers(abstract_model);
    InformationHorizon result;
    result.layer_sizes.reserve(layers.size());
    for (const auto& layer : layers) result.layer_sizes.push_back(layer.size());

    for (int h = 1; h <= static_cast<int>(layers.size()); ++h) {
        bool all_resolved = true;
        Index unresolved = -1;
        for (Index id : layers[static_cast<std::size_t>(h - 1)]) {
            const auto [s, c] = abstract_model.state_center(id);
            if (!is_resolved(abstract_model.center(c), entropy_tol)) {
                all_resolved = false;
                unresolved = id;
                break;
            }
        }
        if (all_resolved) {
            result.value = h;
            return result;
        }
        if (h == static_cast<int>(layers.size()) && unresolved >= 0) {
            const auto [s, c] = abstract_model.state_center(unresolved);
            HorizonWitness witness;
            witness.timestep = h;
            witness.state = s;
            witness.belief = abstract_model.center(c).probs();
            witness.belief_entropy = entropy(abstract_model.center(c));
            result.witness = witness;
        }
    }
    return result;
}

}  // namespace bamdp
