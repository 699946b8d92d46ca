#include "bamdp/verification.hpp"

#include "bamdp/errors.hpp"
#include "bamdp/mdp.hpp"

#include <cmath>
#include <limits>

namespace bamdp {

namespace {

/// Bound checks run against the exact ground solution, so they need the
/// reachable-layers backend regardless of how the model arrived.
BamdpModel ground_model(const BamdpModel& model) {
    if (model.space && !model.space->is_grid()) return model;
    return model.with_reachable_space();
}

void finalize(BoundReport& report) {
    report.pass = true;
    report.max_ratio = 0.0;
    for (const auto& row : report.per_timestep) {
        if (row.measured_gap > row.bound_value + kValueTol) report.pass = false;
        double ratio = 0.0;
        if (row.bound_value > 0.0) {
            ratio = row.measured_gap / row.bound_value;
        } else if (row.measured_gap > kValueTol) {
            ratio = std::numeric_limits<double>::infinity();
        }
        report.max_ratio = std::max(report.max_ratio, ratio);
    }
}

double approx_error_bound(double delta, int H, int h) {
    return 2.0 * delta * (H - h) * (H - h + 1);
}

double perf_loss_bound(double delta, int H, int h) {
    return 4.0 * delta * (H - h) * (H - h + 1) * (H - h + 1);
}

}  // namespace

const char* proposition_name(Proposition proposition) {
    switch (proposition) {
        case Proposition::ApproxError: return "approx-error";
        case Proposition::GreedyLoss: return "greedy-loss";
        case Proposition::PerfLoss: return "perf-loss";
        case Proposition::ValueOfInformation: return "value-of-information";
    }
    return "unknown";
}

BoundReport check_approx_error_bound(const BamdpModel& model,
                                     const EpistemicAbstraction& abstraction) {
    const BamdpModel ground = ground_model(model);
    const int H = ground.horizon();
    const BamdpValueTable exact = bamdp_value_iteration(ground);
    const AbstractBamdp ab = induce_abstract_bamdp(ground, abstraction);
    const AbstractValueTable abstract_values = abstract_value_iteration(ab);

    BoundReport report;
    report.proposition = Proposition::ApproxError;
    report.instance_digest = exact.instance_digest;
    report.delta_used = abstraction.cover.delta;
    report.weighting = weighting_name(abstraction.weighting);

    const LayeredSpace& layers = ground.space->layered();
    for (int h = 1; h <= H; ++h) {
        double gap = 0.0;
        const auto& layer = layers.layers[static_cast<std::size_t>(h - 1)];
        for (Index i = 0; i < static_cast<Index>(layer.size()); ++i) {
            const Hyperstate& x = layer[static_cast<std::size_t>(i)];
            const double lifted = abstract_values.value(
                h, ab.id_of(x.state, abstraction.project_index(x.belief)));
            gap = std::max(gap,
                           std::abs(exact.v[static_cast<std::size_t>(h - 1)](i) - lifted));
        }
        const double bound = approx_error_bound(abstraction.cover.delta, H, h);
        report.per_timestep.push_back({h, gap, bound, bound >= H - h + 1});
    }
    finalize(report);
    return report;
}

BoundReport check_greedy_loss_bound(const BamdpModel& model, const ValueQuery& values) {
    const BamdpModel ground = ground_model(model);
    const int H = ground.horizon();
    const BamdpValueTable exact = bamdp_value_iteration(ground);
    const LayeredSpace& layers = ground.space->layered();

    double epsilon = 0.0;
    for (int h = 1; h <= H; ++h) {
        const auto& layer = layers.layers[static_cast<std::size_t>(h - 1)];
        for (Index i = 0; i < static_cast<Index>(layer.size()); ++i) {
            const double candidate = values(h, layer[static_cast<std::size_t>(i)]);
            epsilon = std::max(
                epsilon, std::abs(exact.v[static_cast<std::size_t>(h - 1)](i) - candidate));
        }
    }

    const BamdpPolicy greedy = greedy_policy_from_values(ground, values);
    const BamdpValueTable achieved = evaluate_bamdp_policy(ground, greedy);

    BoundReport report;
    report.proposition = Proposition::GreedyLoss;
    report.instance_digest = exact.instance_digest;
    report.epsilon_used = epsilon;
    report.epsilon_semantics = "matched-pairs";
    for (int h = 1; h <= H; ++h) {
        const double gap = (exact.v[static_cast<std::size_t>(h - 1)] -
                            achieved.v[static_cast<std::size_t>(h - 1)])
                               .cwiseAbs()
                               .maxCoeff();
        const double bound = 2.0 * epsilon * (H - h + 1);
        report.per_timestep.push_back({h, gap, bound, bound >= H - h + 1});
    }
    finalize(report);
    return report;
}

BoundReport check_performance_loss_bound(const BamdpModel& model,
                                         const EpistemicAbstraction& abstraction) {
    const BamdpModel ground = ground_model(model);
    const int H = ground.horizon();
    const BamdpValueTable exact = bamdp_value_iteration(ground);
    const AbstractBamdp ab = induce_abstract_bamdp(ground, abstraction);
    const AbstractValueTable abstract_values = abstract_value_iteration(ab);

    const BamdpPolicy abstract_greedy =
        greedy_policy_from_values(ground, lifted_value_query(ab, abstract_values));
    const BamdpValueTable achieved = evaluate_bamdp_policy(ground, abstract_greedy);

    BoundReport report;
    report.proposition = Proposition::PerfLoss;
    report.instance_digest = exact.instance_digest;
    report.delta_used = abstraction.cover.delta;
    report.weighting = weighting_name(abstraction.weighting);
    for (int h = 1; h <= H; ++h) {
        const double gap = (exact.v[static_cast<std::size_t>(h - 1)] -
                            achieved.v[static_cast<std::size_t>(h - 1)])
                               .cwiseAbs()
                               .maxCoeff();
        const double bound = perf_loss_bound(abstraction.cover.delta, H, h);
        report.per_timestep.push_back({h, gap, bound, bound >= H - h + 1});
    }
    finalize(report);
    return report;
}

BoundReport check_value_of_information(const BamdpModel& model) {
    const BamdpModel ground = ground_model(model);
    const BamdpValueTable exact = bamdp_value_iteration(ground);

    std::vector<ValueTable> per_theta;
    per_theta.reserve(static_cast<std::size_t>(ground.num_hypotheses()));
    for (Index theta = 0; theta < ground.num_hypotheses(); ++theta) {
        per_theta.push_back(mdp_value_iteration(ground.ensemble.mdp_for(theta)));
    }

    BoundReport report;
    report.proposition = Proposition::ValueOfInformation;
    report.instance_digest = exact.instance_digest;
    for (const Hyperstate& x : ground.initial_hyperstates()) {
        const double bayes_optimal = exact.value(1, x);
        double omniscient = 0.0;
        for (Index theta = 0; theta < ground.num_hypotheses(); ++theta) {
            omniscient += ground.prior(theta) *
                          per_theta[static_cast<std::size_t>(theta)].value(1, x.state);
        }
        report.per_timestep.push_back({1, bayes_optimal, omniscient, false});
    }
    finalize(report);
    return report;
}

ComplexityReport planning_complexity_report(const std::vector<BamdpValueTable>& tables) {
    ComplexityReport report;
    for (const auto& table : tables) {
        if (report.instance_digest.empty()) {
            report.instance_digest = table.instance_digest;
        } else if (report.instance_digest != table.instance_digest) {
            throw MismatchedInstances("value tables come from different instances: " +
                                      report.instance_digest + " vs " + table.instance_digest);
        }
        ComplexityRow row;
        row.algorithm_tag = table.algorithm_tag;
        row.backend_tag = table.backend_tag;
        row.backups = table.backup_count;
        row.mdp_backups = table.mdp_backup_count;
        row.info_horizon = table.info_horizon_used;

        if (table.space && table.space->is_grid()) {
            const std::int64_t X =
                table.v.empty() ? 0 : static_cast<std::int64_t>(table.v.front().size());
            row.num_hyperstates = X;
            const std::int64_t A =
                table.q.empty() ? 0 : static_cast<std::int64_t>(table.q.front().cols());
            if (table.algorithm_tag == "naive") {
                row.predicted_backups = X * A * table.horizon;
            } else if (table.algorithm_tag == "informed" && table.info_horizon_used) {
                // zero actions only happens for I = 1, where the count is 0 anyway
                row.predicted_backups = X * A * (*table.info_horizon_used - 1);
            }
        } else if (table.space) {
            const auto& layers = table.space->layered();
            row.layer_sizes = layers.layer_sizes();
            row.num_hyperstates = static_cast<std::int64_t>(layers.total_size());
            const std::int64_t A =
                table.q.empty() ? 0 : static_cast<std::int64_t>(table.q.front().cols());
            const int depth = table.algorithm_tag == "informed" && table.info_horizon_used
                                  ? *table.info_horizon_used - 1
                                  : table.horizon;
            std::int64_t predicted = 0;
            for (int h = 1; h <= depth; ++h) {
                predicted +=
                    static_cast<std::int64_t>(row.layer_sizes[static_cast<std::size_t>(h - 1)]) *
                    A;
            }
            row.predicted_backups = predicted;
        }
        if (row.predicted_backups && *row.predicted_backups != row.backups) {
            row.matches_prediction = false;
            report.predictions_hold = false;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace bamdp
