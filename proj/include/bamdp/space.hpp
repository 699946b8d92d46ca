#pragma once

#include "bamdp/belief.hpp"
#include "bamdp/ensemble.hpp"
#include "bamdp/types.hpp"

#include <cstddef>
#include <memory>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace bamdp {

/// Lookup key for a hyperstate: physical state plus quantized belief.
struct SpaceKey {
    Index state = 0;
    BeliefKey belief;
    bool operator==(const SpaceKey& other) const {
        return state == other.state && belief == other.belief;
    }
};

struct SpaceKeyHash {
    std::size_t operator()(const SpaceKey& key) const {
        return BeliefKeyHash{}(key.belief) * 1000003u + static_cast<std::size_t>(key.state);
    }
};

inline SpaceKey space_key(const Hyperstate& x) { return {x.state, belief_key(x.belief)}; }

/// Backpointer from a layer element to the element it was first expanded
/// from: (parent position in the previous layer, action taken, state landed).
struct ParentLink {
    Index parent = -1;
    Index action = -1;
    Index next_state = -1;
};

/// Exact per-timestep enumeration of reachable hyperstates. Layer i holds
/// the hyperstates reachable at timestep h = i+1; layer 0 is the support of
/// the initial distribution paired with the prior.
struct LayeredSpace {
    std::vector<std::vector<Hyperstate>> layers;
    std::vector<std::vector<ParentLink>> parents;
    std::vector<std::unordered_map<SpaceKey, Index, SpaceKeyHash>> index;

    /// Position of x within layer h (1-based), or -1 when absent.
    Index find(int h, const Hyperstate& x) const;
    std::size_t total_size() const;
    std::vector<std::size_t> layer_sizes() const;
};

/// Fixed quantization of the simplex: the k/m lattice crossed with every
/// physical state, shared across timesteps. Beliefs are kept in ascending
/// lexicographic order so tie-breaks are deterministic.
struct GridSpace {
    std::vector<EpistemicState> beliefs;
    int resolution = 0;

    /// Index of the lattice point nearest in total variation; ties go to
    /// the lexicographically smallest belief vector.
    Index snap_index(const EpistemicState& p) const;

    Index num_beliefs() const { return static_cast<Index>(beliefs.size()); }
    Index num_hyperstates(Index num_states) const { return num_beliefs() * num_states; }
    Index flat_id(Index state, Index belief_idx) const {
        return state * num_beliefs() + belief_idx;
    }
};

struct HyperstateSpace {
    std::variant<LayeredSpace, GridSpace> backend;

    bool is_grid() const { return std::holds_alternative<GridSpace>(backend); }
    const LayeredSpace& layered() const { return std::get<LayeredSpace>(backend); }
    const GridSpace& grid() const { return std::get<GridSpace>(backend); }
};

/// All simplex lattice points with coordinates k/m summing to m, in
/// ascending lexicographic order. Contains every basis vector.
std::vector<EpistemicState> simplex_lattice(Index dimension, int resolution);

/// Number of points in the resolution-m lattice: C(m + K - 1, K - 1).
std::size_t simplex_lattice_size(Index dimension, int resolution);

/// Breadth-first enumeration of the reachable hyperstate layers under all
/// actions. Beliefs are deduplicated at the kBeliefDedupTol resolution.
/// Throws SpaceExplosion naming the offending layer when `cap` is exceeded.
LayeredSpace enumerate_reachable_layers(const MdpEnsemble& ensemble,
                                        const EpistemicState& prior,
                                        std::size_t cap = kDefaultHyperstateCap);

HyperstateSpace make_reachable_space(const MdpEnsemble& ensemble, const EpistemicState& prior,
                                     std::size_t cap = kDefaultHyperstateCap);

HyperstateSpace build_quantized_space(const MdpEnsemble& ensemble, int resolution,
                                      std::size_t cap = kDefaultHyperstateCap);

/// The grid point nearest to `belief` in total variation (lexicographic
/// tie-break). `space` must use the QuantizedGrid backend.
EpistemicState snap_to_grid(const EpistemicState& belief, const HyperstateSpace& space);

}  // namespace bamdp
