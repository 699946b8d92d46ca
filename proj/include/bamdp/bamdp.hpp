#pragma once

#include "bamdp/belief.hpp"
#include "bamdp/ensemble.hpp"
#include "bamdp/space.hpp"
#include "bamdp/types.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace bamdp {

/// A BAMDP over a finite hypothesis set: ensemble, prior belief, and a
/// finite hyperstate backend (exact reachable layers or a quantized grid).
struct BamdpModel {
    MdpEnsemble ensemble;
    EpistemicState prior;
    std::shared_ptr<const HyperstateSpace> space;  // null until a backend is attached

    int horizon() const { return ensemble.horizon; }
    Index num_states() const { return ensemble.num_states; }
    Index num_actions() const { return ensemble.num_actions; }
    Index num_hypotheses() const { return ensemble.num_hypotheses(); }

    BamdpModel with_reachable_space(std::size_t cap = kDefaultHyperstateCap) const;
    BamdpModel with_grid_space(int resolution, std::size_t cap = kDefaultHyperstateCap) const;

    /// Initial hyperstates: support of the initial distribution x prior.
    std::vector<Hyperstate> initial_hyperstates() const;

    void validate() const;
};

/// Stable fingerprint of the model's defining data (not its backend).
std::string model_digest(const BamdpModel& model);

/// The BAMDP transition T-bar at (x, a): exact Bayes successors. See
/// bamdp_successors for the contract.
std::vector<WeightedSuccessor> bamdp_transition(const BamdpModel& model, const Hyperstate& x,
                                                Index a);

/// Per-timestep value maps over hyperstates. Storage is positional: one
/// value per layer element (ReachableLayers) or per grid hyperstate id
/// (QuantizedGrid). `value(h, x)` resolves positions through the space and
/// returns 0 at the boundary layer h = H+1.
struct BamdpValueTable {
    std::string algorithm_tag;
    std::string backend_tag;
    std::string instance_digest;
    std::shared_ptr<const HyperstateSpace> space;
    int horizon = 0;

    /// Deepest timestep with stored values: H for full solves, the supplied
    /// information horizon for informed solves (its bootstrap layer).
    int max_timestep = 0;

    std::vector<Vector> v;             // per timestep, from h = 1
    std::vector<Matrix> q;             // per backed-up timestep
    std::vector<ActionVector> greedy;  // per backed-up timestep

    std::int64_t backup_count = 0;      // hyperstate backups
    std::int64_t mdp_backup_count = 0;  // per-hypothesis MDP backups (informed)
    std::optional<int> info_horizon_used;

    double value(int h, const Hyperstate& x) const;
    double action_value(int h, const Hyperstate& x, Index a) const;
    Index greedy_action(int h, const Hyperstate& x) const;

    /// Position of x at timestep h within this table's storage; throws
    /// InconsistentSpace when the hyperstate is unknown to the backend.
    Index position(int h, const Hyperstate& x) const;
};

/// Non-stationary BAMDP policy: per-timestep hyperstate -> action map with
/// an optional fallback for hyperstates outside the stored set.
struct BamdpPolicy {
    std::vector<std::unordered_map<SpaceKey, Index, SpaceKeyHash>> entries;
    std::optional<Index> fallback_action;

    Index action_at(int h, const Hyperstate& x) const;

    /// A total policy playing one fixed action everywhere.
    static BamdpPolicy constant(int horizon, Index action);
};

/// Value query v(h, x) used for greedy policy extraction. Queries at
/// h = H+1 are never issued; the boundary is handled internally.
using ValueQuery = std::function<double(int, const Hyperstate&)>;

/// Naive value iteration over the model's finite backend (all timesteps
/// 1..H). On the grid backend, successor beliefs snap to the grid before
/// each value lookup.
BamdpValueTable bamdp_value_iteration(const BamdpModel& model);

/// Exact V^pi and Q^pi by backward induction over the model's backend.
/// On the grid backend the evaluation follows the grid-closed dynamics.
BamdpValueTable evaluate_bamdp_policy(const BamdpModel& model, const BamdpPolicy& policy);

/// One-step greedy policy with respect to a value query, defined on every
/// hyperstate of the model's backend. Ties break to the lowest action.
BamdpPolicy greedy_policy_from_values(const BamdpModel& model, const ValueQuery& values);
BamdpPolicy greedy_policy_from_values(const BamdpModel& model, const BamdpValueTable& values);

}  // namespace bamdp
