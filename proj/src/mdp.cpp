#include "bamdp/mdp.hpp"

#include "bamdp/errors.hpp"

#include <cmath>
#include <string>

namespace bamdp {

namespace {

void check_stochastic_rows(const Matrix& t, const std::string& what) {
    for (Index s = 0; s < t.rows(); ++s) {
        double sum = 0.0;
        for (Index s2 = 0; s2 < t.cols(); ++s2) {
            if (t(s, s2) < -kProbTol) {
                throw ValidationError(what + ": negative probability in row " +
                                      std::to_string(s));
            }
            sum += t(s, s2);
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            throw ValidationError(what + ": row-stochasticity violated in row " +
                                  std::to_string(s) + " (sum " + std::to_string(sum) + ")");
        }
    }
}

}  // namespace

void Mdp::validate() const {
    if (num_states <= 0) throw ValidationError("num_states must be positive");
    if (num_actions <= 0) throw ValidationError("num_actions must be positive");
    if (horizon < 0) throw ValidationError("horizon must be nonnegative");
    if (reward.rows() != num_states || reward.cols() != num_actions) {
        throw ValidationError("reward table must be |S| x |A|");
    }
    for (Index s = 0; s < num_states; ++s) {
        for (Index a = 0; a < num_actions; ++a) {
            if (reward(s, a) < 0.0 || reward(s, a) > 1.0) {
                throw ValidationError("reward out of [0,1] at state " + std::to_string(s) +
                                      ", action " + std::to_string(a));
            }
        }
    }
    if (static_cast<Index>(transition.size()) != num_actions) {
        throw ValidationError("transition must hold one matrix per action");
    }
    for (Index a = 0; a < num_actions; ++a) {
        if (transition[a].rows() != num_states || transition[a].cols() != num_states) {
            throw ValidationError("transition matrix for action " + std::to_string(a) +
                                  " must be |S| x |S|");
        }
        check_stochastic_rows(transition[a], "transition for action " + std::to_string(a));
    }
    if (initial_dist.size() != num_states) {
        throw ValidationError("initial_dist must have one entry per state");
    }
    double beta_sum = 0.0;
    for (Index s = 0; s < num_states; ++s) {
        if (initial_dist(s) < -kProbTol) {
            throw ValidationError("initial_dist has a negative entry");
        }
        beta_sum += initial_dist(s);
    }
    if (std::abs(beta_sum - 1.0) > kProbTol) {
        throw ValidationError("initial_dist must sum to 1");
    }
}

ValueTable mdp_value_iteration(const Mdp& mdp) {
    const int H = mdp.horizon;
    ValueTable table;
    table.v.assign(H + 1, Vector::Zero(mdp.num_states));
    table.q.assign(H, Matrix::Zero(mdp.num_states, mdp.num_actions));
    table.greedy_policy.assign(H, ActionVector::Zero(mdp.num_states));

    for (int h = H; h >= 1; --h) {
        const Vector& next = table.v[h];
        Matrix& q = table.q[h - 1];
        for (Index s = 0; s < mdp.num_states; ++s) {
            Index best_a = 0;
            double best = -1.0;
            for (Index a = 0; a < mdp.num_actions; ++a) {
                q(s, a) = mdp.reward(s, a) + ordered_dot(mdp.transition[a].row(s), next);
                ++table.backup_count;
                if (q(s, a) > best) {
                    best = q(s, a);
                    best_a = a;
                }
            }
            table.v[h - 1](s) = best;
            table.greedy_policy[h - 1](s) = static_cast<int>(best_a);
        }
    }
    return table;
}

ValueTable evaluate_mdp_policy(const Mdp& mdp, const MdpPolicy& policy) {
    const int H = mdp.horizon;
    if (static_cast<int>(policy.size()) != H) {
        throw IncompletePolicy("policy must define all " + std::to_string(H) +
                               " timesteps, got " + std::to_string(policy.size()));
    }
    ValueTable table;
    table.v.assign(H + 1, Vector::Zero(mdp.num_states));
    table.q.assign(H, Matrix::Zero(mdp.num_states, mdp.num_actions));
    table.greedy_policy.assign(H, ActionVector::Zero(mdp.num_states));

    for (int h = H; h >= 1; --h) {
        const ActionVector& pi_h = policy[h - 1];
        if (pi_h.size() != mdp.num_states) {
            throw IncompletePolicy("policy at timestep " + std::to_string(h) +
                                   " must cover every state");
        }
        const Vector& next = table.v[h];
        Matrix& q = table.q[h - 1];
        for (Index s = 0; s < mdp.num_states; ++s) {
            const Index chosen = pi_h(s);
            if (chosen < 0 || chosen >= mdp.num_actions) {
                throw IncompletePolicy("policy undefined at timestep " + std::to_string(h) +
                                       ", state " + std::to_string(s));
            }
            for (Index a = 0; a < mdp.num_actions; ++a) {
                q(s, a) = mdp.reward(s, a) + ordered_dot(mdp.transition[a].row(s), next);
                ++table.backup_count;
            }
            table.v[h - 1](s) = q(s, chosen);
            table.greedy_policy[h - 1](s) = static_cast<int>(chosen);
        }
    }
    return table;
}

}  // namespace bamdp
