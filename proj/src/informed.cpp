#include "bamdp/informed.hpp"

#include "bamdp/errors.hpp"
#include "bamdp/info_horizon.hpp"
#include "bamdp/mdp.hpp"

#include <cmath>
#include <sstream>
#include <string>

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

}  // namespace

Index identify_theta(const EpistemicState& belief, double tol) {
    Index best = 0;
    for (Index i = 1; i < belief.size(); ++i) {
        if (belief(i) > belief(best)) best = i;
    }
    if (belief(best) >= 1.0 - tol) return best;
    std::ostringstream out;
    out << "belief has entropy " << entropy(belief) << "; max coordinate " << belief(best)
        << " < 1 - tol";
    throw NotDirac(out.str());
}

BamdpValueTable informed_value_iteration(const BamdpModel& model, int info_horizon) {
    if (!model.space) {
        throw InconsistentSpace("model has no hyperstate space attached; call "
                                "with_reachable_space or with_grid_space first");
    }
    const MdpEnsemble& ens = model.ensemble;
    const int H = model.horizon();
    const int I = info_horizon;
    if (I < 1 || I > H) {
        throw ValidationError("information horizon " + std::to_string(I) +
                              " must lie in [1, " + std::to_string(H) + "]");
    }

    BamdpValueTable table;
    table.algorithm_tag = "informed";
    table.backend_tag = model.space->is_grid() ? "grid" : "reachable";
    table.instance_digest = model_digest(model);
    table.space = model.space;
    table.horizon = H;
    table.max_timestep = I;
    table.info_horizon_used = I;

    // Once the environment is identified at timestep I, the agent has
    // H - I + 1 decision epochs left (timesteps I..H inclusive), so each
    // hypothesis MDP is solved over that remaining horizon.
    std::vector<ValueTable> per_theta;
    per_theta.reserve(static_cast<std::size_t>(ens.num_hypotheses()));
    for (Index theta = 0; theta < ens.num_hypotheses(); ++theta) {
        per_theta.push_back(mdp_value_iteration(ens.mdp_for(theta, H - I + 1)));
        table.mdp_backup_count += per_theta.back().backup_count;
    }
    auto bootstrap = [&](const Hyperstate& x) {
        Index theta;
        try {
            theta = identify_theta(x.belief);
        } catch (const NotDirac&) {
            throw InfoHorizonViolated("hyperstate " + describe(x) + " at timestep " +
                                      std::to_string(I) +
                                      " still carries uncertainty; the supplied "
                                      "information horizon is too small");
        }
        return per_theta[static_cast<std::size_t>(theta)].value(1, x.state);
    };

    table.v.resize(static_cast<std::size_t>(I));
    table.q.resize(static_cast<std::size_t>(I > 0 ? I - 1 : 0));
    table.greedy.resize(static_cast<std::size_t>(I > 0 ? I - 1 : 0));

    if (model.space->is_grid()) {
        const GridSpace& grid = model.space->grid();
        const Index num_ids = grid.num_hyperstates(ens.num_states);

        // bootstrap layer I: per-hypothesis optimal values where the belief
        // is resolved, NaN elsewhere (an error only if a backup reads it)
        Vector& boot = table.v[static_cast<std::size_t>(I - 1)];
        boot = Vector::Constant(num_ids, std::nan(""));
        for (Index s = 0; s < ens.num_states; ++s) {
            for (Index b = 0; b < grid.num_beliefs(); ++b) {
                const EpistemicState& p = grid.beliefs[static_cast<std::size_t>(b)];
                if (!is_resolved(p)) continue;
                boot(grid.flat_id(s, b)) =
                    per_theta[static_cast<std::size_t>(identify_theta(p))].value(1, s);
            }
        }
        for (int h = I - 1; h >= 1; --h) {
            Vector& values = table.v[static_cast<std::size_t>(h - 1)];
            values = Vector::Zero(num_ids);
            Matrix& q = table.q[static_cast<std::size_t>(h - 1)];
            q = Matrix::Zero(num_ids, ens.num_actions);
            ActionVector& chosen = table.greedy[static_cast<std::size_t>(h - 1)];
            chosen = ActionVector::Zero(num_ids);
            const Vector& next = table.v[static_cast<std::size_t>(h)];
            for (Index s = 0; s < ens.num_states; ++s) {
                for (Index b = 0; b < grid.num_beliefs(); ++b) {
                    const Index id = grid.flat_id(s, b);
                    const Hyperstate x{s, grid.beliefs[static_cast<std::size_t>(b)]};
                    Index best = 0;
                    for (Index a = 0; a < ens.num_actions; ++a) {
                        double expected = 0.0;
                        for (const auto& w : bamdp_successors(ens, x, a)) {
                            const double val = next(grid.flat_id(
                                w.hyperstate.state, grid.snap_index(w.hyperstate.belief)));
                            if (std::isnan(val)) {
                                throw InfoHorizonViolated(
                                    "hyperstate " + describe(w.hyperstate) + " at timestep " +
                                    std::to_string(h + 1) +
                                    " still carries uncertainty; the supplied "
                                    "information horizon is too small");
                            }
                            expected += w.probability * val;
                        }
                        q(id, a) = ens.reward(s, a) + expected;
                        ++table.backup_count;
                        if (q(id, a) > q(id, best)) best = a;
                    }
                    values(id) = q(id, best);
                    chosen(id) = static_cast<int>(best);
                }
            }
        }
        return table;
    }

    const LayeredSpace& layers = model.space->layered();
    {
        const auto& boot_layer = layers.layers[static_cast<std::size_t>(I - 1)];
        Vector& boot = table.v[static_cast<std::size_t>(I - 1)];
        boot = Vector::Zero(static_cast<Index>(boot_layer.size()));
        for (Index i = 0; i < static_cast<Index>(boot_layer.size()); ++i) {
            boot(i) = bootstrap(boot_layer[static_cast<std::size_t>(i)]);
        }
    }
    for (int h = I - 1; h >= 1; --h) {
        const auto& layer = layers.layers[static_cast<std::size_t>(h - 1)];
        const Index n = static_cast<Index>(layer.size());
        Vector& values = table.v[static_cast<std::size_t>(h - 1)];
        values = Vector::Zero(n);
        Matrix& q = table.q[static_cast<std::size_t>(h - 1)];
        q = Matrix::Zero(n, ens.num_actions);
        ActionVector& chosen = table.greedy[static_cast<std::size_t>(h - 1)];
        chosen = ActionVector::Zero(n);
        const Vector& next = table.v[static_cast<std::size_t>(h)];
        for (Index i = 0; i < n; ++i) {
            const Hyperstate& x = layer[static_cast<std::size_t>(i)];
            Index best = 0;
            for (Index a = 0; a < ens.num_actions; ++a) {
                double expected = 0.0;
                for (const auto& w : bamdp_successors(ens, x, a)) {
                    const Index pos = layers.find(h + 1, w.hyperstate);
                    if (pos < 0) {
                        throw InconsistentSpace("successor " + describe(w.hyperstate) +
                                                " missing from layer " + std::to_string(h + 1));
                    }
                    expected += w.probability * next(pos);
                }
                q(i, a) = ens.reward(x.state, a) + expected;
                ++table.backup_count;
                if (q(i, a) > q(i, best)) best = a;
            }
            values(i) = q(i, best);
            chosen(i) = static_cast<int>(best);
        }
    }
    return table;
}

BamdpValueTable informed_value_iteration_auto(const BamdpModel& model) {
    const InformationHorizon horizon = information_horizon(model);
    if (!horizon.finite()) {
        throw InfiniteInformationHorizon(
            "the model's information horizon is infinite; informed value iteration "
            "needs a finite one (consider an epistemic state abstraction)");
    }
    return informed_value_iteration(model, *horizon.value);
}

}  // namespace bamdp
