#pragma once

#include "bamdp/abstraction.hpp"
#include "bamdp/bamdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bamdp {

enum class Proposition { ApproxError, GreedyLoss, PerfLoss, ValueOfInformation };

const char* proposition_name(Proposition proposition);

struct BoundRow {
    int h = 0;
    double measured_gap = 0.0;
    double bound_value = 0.0;
    /// The bound exceeds the attainable value range H-h+1, so passing it
    /// certifies nothing.
    bool vacuous = false;
};

/// Measured-gap-versus-bound certificate for one instance. `pass` holds
/// exactly when measured_gap <= bound_value + 1e-9 at every timestep.
struct BoundReport {
    Proposition proposition = Proposition::ApproxError;
    std::vector<BoundRow> per_timestep;
    bool pass = false;
    double max_ratio = 0.0;
    std::optional<double> epsilon_used;  // GreedyLoss only
    /// epsilon is measured over matched belief pairs (q = p), a weaker
    /// premise than the quantifier in the stated hypothesis.
    std::string epsilon_semantics;
    std::optional<double> delta_used;
    std::string weighting;
    std::string instance_digest;
};

/// Gap between optimal ground values and lifted optimal abstract values,
/// measured over the reachable hyperstates at every timestep, against
/// 2 delta (H-h)(H-h+1).
BoundReport check_approx_error_bound(const BamdpModel& model,
                                     const EpistemicAbstraction& abstraction);

/// Loss of the greedy policy built from an arbitrary candidate value
/// function, against 2 epsilon (H-h+1) with epsilon measured as the
/// largest deviation from V* over reachable hyperstates.
BoundReport check_greedy_loss_bound(const BamdpModel& model, const ValueQuery& values);

/// Loss of the policy greedy with respect to lifted optimal abstract
/// values, evaluated exactly in the ground BAMDP, against
/// 4 delta (H-h)(H-h+1)^2.
BoundReport check_performance_loss_bound(const BamdpModel& model,
                                         const EpistemicAbstraction& abstraction);

/// Bayes-optimal value from each initial state never exceeds the
/// prior-weighted mixture of the per-hypothesis optimal values.
BoundReport check_value_of_information(const BamdpModel& model);

struct ComplexityRow {
    std::string algorithm_tag;
    std::string backend_tag;
    std::int64_t backups = 0;
    std::int64_t mdp_backups = 0;
    std::optional<std::int64_t> predicted_backups;
    bool matches_prediction = true;
    std::optional<int> info_horizon;
    std::vector<std::size_t> layer_sizes;
    std::int64_t num_hyperstates = 0;
};

/// Backup counts and layer sizes for solves of one instance, alongside the
/// analytic count each algorithm should have performed on its backend.
struct ComplexityReport {
    std::string instance_digest;
    std::vector<ComplexityRow> rows;
    bool predictions_hold = true;
};

/// Throws MismatchedInstances if the tables come from different models.
ComplexityReport planning_complexity_report(const std::vector<BamdpValueTable>& tables);

}  // namespace bamdp
