#include "bamdp/bamdp.hpp"

#include "bamdp/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace bamdp {

namespace {

std::string describe(const Hyperstate& x) {
    std::ostringstream out;
    out << "(s=" << x.state << ", p=[";
    for (Index i = 0; i < x.belief.size(); ++i) {
        if (i > 0) out << ", ";
        out << x.belief(i);
    }
    out << "])";
    return out.str();
}

class Fnv64 {
public:
    void feed(const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            hash_ ^= bytes[i];
            hash_ *= 1099511628211ull;
        }
    }
    void feed(double x) { feed(&x, sizeof(x)); }
    void feed(std::int64_t x) { feed(&x, sizeof(x)); }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 1469598103934665603ull;
};

}  // namespace

BamdpModel BamdpModel::with_reachable_space(std::size_t cap) const {
    BamdpModel out = *this;
    out.space = std::make_shared<HyperstateSpace>(make_reachable_space(ensemble, prior, cap));
    return out;
}

BamdpModel BamdpModel::with_grid_space(int resolution, std::size_t cap) const {
    BamdpModel out = *this;
    out.space =
        std::make_shared<HyperstateSpace>(build_quantized_space(ensemble, resolution, cap));
    return out;
}

std::vector<Hyperstate> BamdpModel::initial_hyperstates() const {
    std::vector<Hyperstate> initial;
    for (Index s = 0; s < ensemble.num_states; ++s) {
        if (ensemble.initial_dist(s) > 0.0) initial.push_back({s, prior});
    }
    return initial;
}

void BamdpModel::validate() const {
    ensemble.validate();
    if (prior.size() != ensemble.num_hypotheses()) {
        throw ValidationError("prior dimension must equal the number of hypotheses");
    }
}

std::string model_digest(const BamdpModel& model) {
    Fnv64 fnv;
    fnv.feed(static_cast<std::int64_t>(model.ensemble.num_states));
    fnv.feed(static_cast<std::int64_t>(model.ensemble.num_actions));
    fnv.feed(static_cast<std::int64_t>(model.ensemble.num_hypotheses()));
    fnv.feed(static_cast<std::int64_t>(model.ensemble.horizon));
    for (Index s = 0; s < model.ensemble.num_states; ++s) {
        for (Index a = 0; a < model.ensemble.num_actions; ++a) {
            fnv.feed(model.ensemble.reward(s, a));
        }
    }
    for (Index s = 0; s < model.ensemble.num_states; ++s) fnv.feed(model.ensemble.initial_dist(s));
    for (const auto& hypothesis : model.ensemble.hypotheses) {
        for (const auto& t : hypothesis) {
            for (Index s = 0; s < t.rows(); ++s) {
                for (Index s2 = 0; s2 < t.cols(); ++s2) fnv.feed(t(s, s2));
            }
        }
    }
    for (Index i = 0; i < model.prior.size(); ++i) fnv.feed(model.prior(i));

    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv.value()));
    return std::string(buf);
}

std::vector<WeightedSuccessor> bamdp_transition(const BamdpModel& model, const Hyperstate& x,
                                                Index a) {
    return bamdp_successors(model.ensemble, x, a);
}

Index BamdpValueTable::position(int h, const Hyperstate& x) const {
    if (!space) throw InconsistentSpace("value table has no hyperstate space");
    if (space->is_grid()) {
        const GridSpace& grid = space->grid();
        return grid.flat_id(x.state, grid.snap_index(x.belief));
    }
    const Index pos = space->layered().find(h, x);
    if (pos < 0) {
        throw InconsistentSpace("hyperstate " + describe(x) + " not present at timestep " +
                                std::to_string(h));
    }
    return pos;
}

double BamdpValueTable::value(int h, const Hyperstate& x) const {
    if (h == horizon + 1) return 0.0;
    if (h < 1 || h > max_timestep) {
        throw InconsistentSpace("no values stored at timestep " + std::to_string(h));
    }
    const double val = v[static_cast<std::size_t>(h - 1)](position(h, x));
    if (std::isnan(val)) {
        throw InfoHorizonViolated("hyperstate " + describe(x) + " at timestep " +
                                  std::to_string(h) + " still carries uncertainty");
    }
    return val;
}

double BamdpValueTable::action_value(int h, const Hyperstate& x, Index a) const {
    return q.at(static_cast<std::size_t>(h - 1))(position(h, x), a);
}

Index BamdpValueTable::greedy_action(int h, const Hyperstate& x) const {
    return greedy.at(static_cast<std::size_t>(h - 1))(position(h, x));
}

Index BamdpPolicy::action_at(int h, const Hyperstate& x) const {
    if (h >= 1 && h <= static_cast<int>(entries.size())) {
        const auto& map = entries[static_cast<std::size_t>(h - 1)];
        auto it = map.find(space_key(x));
        if (it != map.end()) return it->second;
    }
    if (fallback_action) return *fallback_action;
    throw IncompletePolicy("policy undefined at timestep " + std::to_string(h) +
                           " for hyperstate " + describe(x));
}

BamdpPolicy BamdpPolicy::constant(int horizon, Index action) {
    BamdpPolicy policy;
    policy.entries.resize(static_cast<std::size_t>(horizon));
    policy.fallback_action = action;
    return policy;
}

namespace {

BamdpValueTable make_table(const BamdpModel& model, const char* tag) {
    BamdpValueTable table;
    table.algorithm_tag = tag;
    table.backend_tag = model.space->is_grid() ? "grid" : "reachable";
    table.instance_digest = model_digest(model);
    table.space = model.space;
    table.horizon = model.horizon();
    table.max_timestep = model.horizon();
    return table;
}

void require_space(const BamdpModel& model) {
    if (!model.space) {
        throw InconsistentSpace("model has no hyperstate space attached; call "
                                "with_reachable_space or with_grid_space first");
    }
}

/// Backward induction driver shared by value iteration and policy
/// evaluation. `select` receives (h, position, hyperstate, q-row) and
/// returns the action whose Q-value becomes v at that hyperstate.
template <typename Select>
BamdpValueTable backward_induction(const BamdpModel& model, const char* tag, Select select) {
    require_space(model);
    const MdpEnsemble& ens = model.ensemble;
    const int H = model.horizon();
    BamdpValueTable table = make_table(model, tag);
    table.v.resize(static_cast<std::size_t>(H));
    table.q.resize(static_cast<std::size_t>(H));
    table.greedy.resize(static_cast<std::size_t>(H));

    if (model.space->is_grid()) {
        const GridSpace& grid = model.space->grid();
        const Index num_ids = grid.num_hyperstates(ens.num_states);
        // successor positions do not depend on the timestep; resolve once
        std::vector<std::vector<std::vector<std::pair<Index, double>>>> succ(
            static_cast<std::size_t>(num_ids));
        for (Index s = 0; s < ens.num_states; ++s) {
            for (Index b = 0; b < grid.num_beliefs(); ++b) {
                const Index id = grid.flat_id(s, b);
                auto& per_action = succ[static_cast<std::size_t>(id)];
                per_action.resize(static_cast<std::size_t>(ens.num_actions));
                const Hyperstate x{s, grid.beliefs[static_cast<std::size_t>(b)]};
                for (Index a = 0; a < ens.num_actions; ++a) {
                    for (const auto& w : bamdp_successors(ens, x, a)) {
                        per_action[static_cast<std::size_t>(a)].emplace_back(
                            grid.flat_id(w.hyperstate.state, grid.snap_index(w.hyperstate.belief)),
                            w.probability);
                    }
                }
            }
        }
        for (int h = H; h >= 1; --h) {
            Vector& values = table.v[static_cast<std::size_t>(h - 1)];
            values = Vector::Zero(num_ids);
            Matrix& q = table.q[static_cast<std::size_t>(h - 1)];
            q = Matrix::Zero(num_ids, ens.num_actions);
            ActionVector& chosen = table.greedy[static_cast<std::size_t>(h - 1)];
            chosen = ActionVector::Zero(num_ids);
            const Vector* next = h < H ? &table.v[static_cast<std::size_t>(h)] : nullptr;
            for (Index s = 0; s < ens.num_states; ++s) {
                for (Index b = 0; b < grid.num_beliefs(); ++b) {
                    const Index id = grid.flat_id(s, b);
                    const Hyperstate x{s, grid.beliefs[static_cast<std::size_t>(b)]};
                    for (Index a = 0; a < ens.num_actions; ++a) {
                        double expected = 0.0;
                        if (next) {
                            for (const auto& [succ_id, p] : succ[static_cast<std::size_t>(id)]
                                                                 [static_cast<std::size_t>(a)]) {
                                expected += p * (*next)(succ_id);
                            }
                        }
                        q(id, a) = ens.reward(s, a) + expected;
                        ++table.backup_count;
                    }
                    const Index act = select(h, id, x, q.row(id));
                    values(id) = q(id, act);
                    chosen(id) = static_cast<int>(act);
                }
            }
        }
        return table;
    }

    const LayeredSpace& layers = model.space->layered();
    for (int h = H; h >= 1; --h) {
        const auto& layer = layers.layers[static_cast<std::size_t>(h - 1)];
        const Index n = static_cast<Index>(layer.size());
        Vector& values = table.v[static_cast<std::size_t>(h - 1)];
        values = Vector::Zero(n);
        Matrix& q = table.q[static_cast<std::size_t>(h - 1)];
        q = Matrix::Zero(n, ens.num_actions);
        ActionVector& chosen = table.greedy[static_cast<std::size_t>(h - 1)];
        chosen = ActionVector::Zero(n);
        const Vector* next = h < H ? &table.v[static_cast<std::size_t>(h)] : nullptr;
        for (Index i = 0; i < n; ++i) {
            const Hyperstate& x = layer[static_cast<std::size_t>(i)];
            for (Index a = 0; a < ens.num_actions; ++a) {
                double expected = 0.0;
                if (next) {
                    for (const auto& w : bamdp_successors(ens, x, a)) {
                        const Index pos = layers.find(h + 1, w.hyperstate);
                        if (pos < 0) {
                            throw InconsistentSpace("successor " + describe(w.hyperstate) +
                                                    " missing from layer " +
                                                    std::to_string(h + 1));
                        }
                        expected += w.probability * (*next)(pos);
                    }
                }
                q(i, a) = ens.reward(x.state, a) + expected;
                ++table.backup_count;
            }
            const Index act = select(h, i, x, q.row(i));
            values(i) = q(i, act);
            chosen(i) = static_cast<int>(act);
        }
    }
    return table;
}

template <typename Row>
Index argmax_row(const Row& q_row) {
    Index best = 0;
    for (Index a = 1; a < q_row.size(); ++a) {
        if (q_row(a) > q_row(best)) best = a;
    }
    return best;
}

}  // namespace

BamdpValueTable bamdp_value_iteration(const BamdpModel& model) {
    return backward_induction(
        model, "naive",
        [](int, Index, const Hyperstate&, const auto& q_row) { return argmax_row(q_row); });
}

BamdpValueTable evaluate_bamdp_policy(const BamdpModel& model, const BamdpPolicy& policy) {
    return backward_induction(model, "policy-eval",
                              [&policy](int h, Index, const Hyperstate& x, const auto&) {
                                  return policy.action_at(h, x);
                              });
}

BamdpPolicy greedy_policy_from_values(const BamdpModel& model, const ValueQuery& values) {
    require_space(model);
    const MdpEnsemble& ens = model.ensemble;
    const int H = model.horizon();
    BamdpPolicy policy;
    policy.entries.resize(static_cast<std::size_t>(H));

    auto next_value = [&](int h, const Hyperstate& x) {
        return h == H + 1 ? 0.0 : values(h, x);
    };
    auto greedy_at = [&](int h, const Hyperstate& x) {
        Index best = 0;
        double best_q = -1.0;
        for (Index a = 0; a < ens.num_actions; ++a) {
            double q = ens.reward(x.state, a);
            for (const auto& w : bamdp_successors(ens, x, a)) {
                q += w.probability * next_value(h + 1, w.hyperstate);
            }
            if (q > best_q) {
                best_q = q;
                best = a;
            }
        }
        return best;
    };

    if (model.space->is_grid()) {
        const GridSpace& grid = model.space->grid();
        for (int h = 1; h <= H; ++h) {
            auto& entries = policy.entries[static_cast<std::size_t>(h - 1)];
            for (Index s = 0; s < ens.num_states; ++s) {
                for (Index b = 0; b < grid.num_beliefs(); ++b) {
                    const Hyperstate x{s, grid.beliefs[static_cast<std::size_t>(b)]};
                    entries.emplace(space_key(x), greedy_at(h, x));
                }
            }
        }
        return policy;
    }

    const LayeredSpace& layers = model.space->layered();
    for (int h = 1; h <= H; ++h) {
        auto& entries = policy.entries[static_cast<std::size_t>(h - 1)];
        for (const Hyperstate& x : layers.layers[static_cast<std::size_t>(h - 1)]) {
            entries.emplace(space_key(x), greedy_at(h, x));
        }
    }
    return policy;
}

BamdpPolicy greedy_policy_from_values(const BamdpModel& model, const BamdpValueTable& values) {
    return greedy_policy_from_values(
        model, [&values](int h, const Hyperstate& x) { return values.value(h, x); });
}

}  // namespace bamdp
