#include "bamdp/space.hpp"

#include "bamdp/errors.hpp"

#include <string>

namespace bamdp {

Index LayeredSpace::find(int h, const Hyperstate& x) const {
    const auto& map = index.at(static_cast<std::size_t>(h - 1));
    auto it = map.find(space_key(x));
    return it == map.end() ? -1 : it->second;
}

std::size_t LayeredSpace::total_size() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.size();
    return n;
}

std::vector<std::size_t> LayeredSpace::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(layers.size());
    for (const auto& layer : layers) sizes.push_back(layer.size());
    return sizes;
}

Index GridSpace::snap_index(const EpistemicState& p) const {
    Index best = -1;
    double best_dist = 2.0;
    for (Index i = 0; i < num_beliefs(); ++i) {
        const double d = tv_distance(p, beliefs[static_cast<std::size_t>(i)]);
        if (d < best_dist) {  // strict: first minimum wins, and beliefs are lex-sorted
            best_dist = d;
            best = i;
        }
    }
    return best;
}

namespace {

void lattice_recurse(Index dimension, int resolution, Index coord, int remaining,
                     Vector& point, std::vector<EpistemicState>& out) {
    if (coord == dimension - 1) {
        point(coord) = static_cast<double>(remaining) / resolution;
        out.emplace_back(point);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        point(coord) = static_cast<double>(k) / resolution;
        lattice_recurse(dimension, resolution, coord + 1, remaining - k, point, out);
    }
}

}  // namespace

std::vector<EpistemicState> simplex_lattice(Index dimension, int resolution) {
    std::vector<EpistemicState> out;
    out.reserve(simplex_lattice_size(dimension, resolution));
    Vector point(dimension);
    lattice_recurse(dimension, resolution, 0, resolution, point, out);
    return out;
}

std::size_t simplex_lattice_size(Index dimension, int resolution) {
    // C(m + K - 1, K - 1)
    std::size_t n = 1;
    for (Index i = 1; i < dimension; ++i) {
        n = n * static_cast<std::size_t>(resolution + i) / static_cast<std::size_t>(i);
    }
    return n;
}

LayeredSpace enumerate_reachable_layers(const MdpEnsemble& ensemble,
                                        const EpistemicState& prior, std::size_t cap) {
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
            for (Index a = 0; a < ensemble.num_actions; ++a) {
                for (auto& succ : bamdp_successors(ensemble, frontier[static_cast<std::size_t>(i)], a)) {
                    SpaceKey key = space_key(succ.hyperstate);
                    if (index.find(key) != index.end()) continue;
                    index.emplace(std::move(key), static_cast<Index>(layer.size()));
                    parents.push_back({i, a, succ.hyperstate.state});
                    layer.push_back(std::move(succ.hyperstate));
                    if (++total > cap) {
                        throw SpaceExplosion("reachable hyperstates exceeded cap " +
                                             std::to_string(cap) + " while expanding layer " +
                                             std::to_string(h + 1));
                    }
                }
            }
        }
    }
    return space;
}

HyperstateSpace make_reachable_space(const MdpEnsemble& ensemble, const EpistemicState& prior,
                                     std::size_t cap) {
    return HyperstateSpace{enumerate_reachable_layers(ensemble, prior, cap)};
}

HyperstateSpace build_quantized_space(const MdpEnsemble& ensemble, int resolution,
                                      std::size_t cap) {
    if (resolution < 1) throw ValidationError("grid resolution must be >= 1");
    const std::size_t grid_points = simplex_lattice_size(ensemble.num_hypotheses(), resolution);
    if (grid_points * static_cast<std::size_t>(ensemble.num_states) > cap) {
        throw SpaceExplosion("quantized grid of " + std::to_string(grid_points) +
                             " beliefs x " + std::to_string(ensemble.num_states) +
                             " states exceeds cap " + std::to_string(cap));
    }
    GridSpace grid;
    grid.resolution = resolution;
    grid.beliefs = simplex_lattice(ensemble.num_hypotheses(), resolution);
    return HyperstateSpace{std::move(grid)};
}

EpistemicState snap_to_grid(const EpistemicState& belief, const HyperstateSpace& space) {
    if (!space.is_grid()) {
        throw ValidationError("snap_to_grid requires a QuantizedGrid space");
    }
    const GridSpace& grid = space.grid();
    return grid.beliefs[static_cast<std::size_t>(grid.snap_index(belief))];
}

}  // namespace bamdp
