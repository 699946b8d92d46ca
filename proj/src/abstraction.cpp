#include "bamdp/abstraction.hpp"

#include "bamdp/errors.hpp"
#include "bamdp/info_horizon.hpp"
#include "bamdp/informed.hpp"
#include "bamdp/mdp.hpp"
#include "bamdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>

namespace bamdp {

namespace {

std::string describe_vector(const Vector& v) {
    std::ostringstream out;
    out << "[";
    for (Index i = 0; i < v.size(); ++i) {
        if (i > 0) out << ", ";
        out << v(i);
    }
    out << "]";
    return out.str();
}

}  // namespace

Index DeltaCover::nearest(const EpistemicState& p) const {
    Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < size(); ++c) {
        const double d = tv_distance(p, centers[static_cast<std::size_t>(c)]);
        if (d < best_dist) {  // centers are lex-sorted, so first minimum wins ties
            best_dist = d;
            best = c;
        }
    }
    return best;
}

void DeltaCover::validate() const {
    if (delta <= 0.0 || delta > 1.0) {
        throw ValidationError("cover delta must lie in (0, 1]");
    }
    if (centers.empty()) throw ValidationError("cover has no centers");
    const Index K = dimension();
    std::unordered_set<BeliefKey, BeliefKeyHash> keys;
    for (const auto& center : centers) {
        if (center.size() != K) throw ValidationError("cover centers have mixed dimensions");
        if (!keys.insert(belief_key(center)).second) {
            throw ValidationError("cover centers are not pairwise distinct");
        }
    }
    for (Index i = 0; i < K; ++i) {
        const EpistemicState basis = EpistemicState::dirac(i, K);
        bool found = false;
        for (const auto& center : centers) {
            if (tv_distance(center, basis) <= kZeroEntropyTol) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw ValidationError("cover is missing basis vector e_" + std::to_string(i + 1));
        }
    }
}

double measure_cover_radius(const DeltaCover& cover, const CertificationOptions& options,
                            double stop_above) {
    const Index K = cover.dimension();
    double radius = 0.0;
    auto probe = [&](const EpistemicState& p) {
        const double d =
            tv_distance(p, cover.centers[static_cast<std::size_t>(cover.nearest(p))]);
        if (d > radius) radius = d;
        return radius > stop_above;
    };

    if (probe(EpistemicState::uniform(K))) return radius;
    for (const auto& p : options.extra_points) {
        if (probe(p)) return radius;
    }

    int probe_resolution = options.probe_resolution;
    if (probe_resolution <= 0) {
        for (int r = 4; r <= 64; r *= 2) {
            if (simplex_lattice_size(K, r) > 50000) break;
            probe_resolution = r;
        }
    }
    if (probe_resolution > 0 && simplex_lattice_size(K, probe_resolution) <= 200000) {
        for (const auto& p : simplex_lattice(K, probe_resolution)) {
            if (probe(p)) return radius;
        }
    }

    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.samples; ++i) {
        if (probe(EpistemicState(rng.simplex_point(K)))) return radius;
    }
    return radius;
}

double certify_cover(DeltaCover& cover, const CertificationOptions& options) {
    cover.certified_radius =
        measure_cover_radius(cover, options, std::numeric_limits<double>::infinity());
    cover.certification_seed = options.seed;
    cover.certification_samples = options.samples;
    return cover.certified_radius;
}

DeltaCover build_lattice_cover(Index num_hypotheses, double delta,
                               const CertificationOptions& options, int max_resolution) {
    if (delta <= 0.0 || delta > 1.0) {
        throw ValidationError("cover delta must lie in (0, 1]");
    }
    for (int m = 1; m <= max_resolution; ++m) {
        if (simplex_lattice_size(num_hypotheses, m) > 1000000) {
            throw CoverTooFine("lattice at resolution " + std::to_string(m) +
                               " exceeds one million centers before certifying at delta " +
                               std::to_string(delta));
        }
        DeltaCover cover;
        cover.delta = delta;
        cover.centers = simplex_lattice(num_hypotheses, m);

        CertificationOptions probe = options;
        if (probe.probe_resolution <= 0) {
            if (simplex_lattice_size(num_hypotheses, 4 * m) <= 200000) {
                probe.probe_resolution = 4 * m;
            } else if (simplex_lattice_size(num_hypotheses, 2 * m) <= 200000) {
                probe.probe_resolution = 2 * m;
            }
        }
        if (measure_cover_radius(cover, probe, delta) <= delta) {
            certify_cover(cover, probe);
            return cover;
        }
    }
    throw CoverTooFine("no lattice resolution up to " + std::to_string(max_resolution) +
                       " certifies at delta " + std::to_string(delta));
}

DeltaCover build_greedy_cover(const std::vector<EpistemicState>& candidates, double delta,
                              const CertificationOptions& options) {
    if (candidates.empty()) throw ValidationError("greedy cover needs candidates");
    if (delta <= 0.0 || delta > 1.0) {
        throw ValidationError("cover delta must lie in (0, 1]");
    }
    const Index K = candidates.front().size();
    DeltaCover cover;
    cover.delta = delta;
    for (Index i = 0; i < K; ++i) cover.centers.push_back(EpistemicState::dirac(i, K));

    auto dist_to_cover = [&cover](const EpistemicState& p) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& center : cover.centers) {
            best = std::min(best, tv_distance(p, center));
        }
        return best;
    };
    // farthest-point insertion; first maximum wins so the result is
    // deterministic in the candidate order
    while (true) {
        Index farthest = -1;
        double far_dist = delta;
        for (Index i = 0; i < static_cast<Index>(candidates.size()); ++i) {
            const double d = dist_to_cover(candidates[static_cast<std::size_t>(i)]);
            if (d > far_dist) {
                far_dist = d;
                farthest = i;
            }
        }
        if (farthest < 0) break;
        cover.centers.push_back(candidates[static_cast<std::size_t>(farthest)]);
    }
    std::sort(cover.centers.begin(), cover.centers.end(),
              [](const EpistemicState& a, const EpistemicState& b) {
                  return lex_less(a.probs(), b.probs());
              });

    CertificationOptions probe = options;
    probe.extra_points.insert(probe.extra_points.end(), candidates.begin(), candidates.end());
    certify_cover(cover, probe);
    return cover;
}

const char* weighting_name(Weighting weighting) {
    return weighting == Weighting::CenterDirac ? "center" : "uniform";
}

EpistemicAbstraction EpistemicAbstraction::center_dirac(DeltaCover cover) {
    cover.validate();
    EpistemicAbstraction abstraction;
    abstraction.weighting = Weighting::CenterDirac;
    abstraction.representatives.reserve(cover.centers.size());
    for (const auto& center : cover.centers) {
        abstraction.representatives.push_back({center});
    }
    abstraction.cover = std::move(cover);
    return abstraction;
}

EpistemicAbstraction EpistemicAbstraction::uniform_over_assigned(
    DeltaCover cover, const std::vector<EpistemicState>& samples) {
    cover.validate();
    EpistemicAbstraction abstraction;
    abstraction.weighting = Weighting::UniformOverAssigned;
    abstraction.representatives.resize(cover.centers.size());
    std::vector<std::unordered_set<BeliefKey, BeliefKeyHash>> seen(cover.centers.size());
    abstraction.cover = std::move(cover);
    for (const auto& sample : samples) {
        const auto cell = static_cast<std::size_t>(abstraction.cover.nearest(sample));
        if (seen[cell].insert(belief_key(sample)).second) {
            abstraction.representatives[cell].push_back(sample);
        }
    }
    return abstraction;
}

EpistemicState apply_abstraction(const EpistemicAbstraction& abstraction,
                                 const EpistemicState& belief) {
    return abstraction.center(abstraction.project_index(belief));
}

AbstractBamdp induce_abstract_bamdp(const BamdpModel& model,
                                    const EpistemicAbstraction& abstraction) {
    abstraction.cover.validate();
    if (abstraction.cover.dimension() != model.num_hypotheses()) {
        throw ValidationError("cover dimension must equal the number of hypotheses");
    }
    AbstractBamdp ab;
    ab.ensemble = model.ensemble;
    ab.abstraction = abstraction;
    const Index S = ab.ensemble.num_states;
    const Index A = ab.ensemble.num_actions;
    const Index C = ab.num_centers();

    ab.transition.resize(static_cast<std::size_t>(S * C));
    for (Index s = 0; s < S; ++s) {
        for (Index c = 0; c < C; ++c) {
            const auto& reps = abstraction.representatives[static_cast<std::size_t>(c)];
            if (reps.empty()) {
                throw EmptyCell("cover cell of center " +
                                describe_vector(abstraction.center(c).probs()) +
                                " has no representative");
            }
            const double weight = 1.0 / static_cast<double>(reps.size());
            auto& per_action = ab.transition[static_cast<std::size_t>(ab.id_of(s, c))];
            per_action.resize(static_cast<std::size_t>(A));
            for (Index a = 0; a < A; ++a) {
                std::map<Index, double> mass;  // ordered: rows come out ascending by id
                for (const auto& rep : reps) {
                    for (const auto& w : bamdp_successors(ab.ensemble, Hyperstate{s, rep}, a)) {
                        const Index succ_id = ab.id_of(
                            w.hyperstate.state, abstraction.project_index(w.hyperstate.belief));
                        mass[succ_id] += weight * w.probability;
                    }
                }
                auto& row = per_action[static_cast<std::size_t>(a)];
                double total = 0.0;
                row.reserve(mass.size());
                for (const auto& [id, p] : mass) {
                    row.emplace_back(id, p);
                    total += p;
                }
                if (std::abs(total - 1.0) > kProbTol) {
                    throw ValidationError("abstract transition row mass " +
                                          std::to_string(total) + " is not 1");
                }
            }
        }
    }

    const Index initial_center = abstraction.project_index(model.prior);
    for (Index s = 0; s < S; ++s) {
        if (ab.ensemble.initial_dist(s) > 0.0) {
            ab.initial.emplace_back(ab.id_of(s, initial_center), ab.ensemble.initial_dist(s));
        }
    }
    return ab;
}

std::vector<std::vector<Index>> abstract_reachable_layers(const AbstractBamdp& abstract_model) {
    const int H = abstract_model.horizon();
    std::vector<std::vector<Index>> layers(static_cast<std::size_t>(H));
    std::unordered_set<Index> seen;
    for (const auto& [id, p] : abstract_model.initial) {
        if (p > 0.0 && seen.insert(id).second) layers[0].push_back(id);
    }
    for (int h = 1; h < H; ++h) {
        seen.clear();
        for (Index id : layers[static_cast<std::size_t>(h - 1)]) {
            for (Index a = 0; a < abstract_model.ensemble.num_actions; ++a) {
                for (const auto& [succ_id, p] :
                     abstract_model.transition[static_cast<std::size_t>(id)]
                                              [static_cast<std::size_t>(a)]) {
                    if (p > 0.0 && seen.insert(succ_id).second) {
                        layers[static_cast<std::size_t>(h)].push_back(succ_id);
                    }
                }
            }
        }
    }
    return layers;
}

AbstractValueTable abstract_value_iteration(const AbstractBamdp& abstract_model) {
    const int H = abstract_model.horizon();
    const Index n = abstract_model.num_hyperstates();
    const Index A = abstract_model.ensemble.num_actions;
    AbstractValueTable table;
    table.horizon = H;
    table.v.assign(static_cast<std::size_t>(H), Vector::Zero(n));
    table.q.assign(static_cast<std::size_t>(H), Matrix::Zero(n, A));
    table.greedy.assign(static_cast<std::size_t>(H), ActionVector::Zero(n));

    for (int h = H; h >= 1; --h) {
        const Vector* next = h < H ? &table.v[static_cast<std::size_t>(h)] : nullptr;
        Matrix& q = table.q[static_cast<std::size_t>(h - 1)];
        for (Index id = 0; id < n; ++id) {
            const auto [s, c] = abstract_model.state_center(id);
            Index best = 0;
            for (Index a = 0; a < A; ++a) {
                double expected = 0.0;
                if (next) {
                    for (const auto& [succ_id, p] :
                         abstract_model.transition[static_cast<std::size_t>(id)]
                                                  [static_cast<std::size_t>(a)]) {
                        expected += p * (*next)(succ_id);
                    }
                }
                q(id, a) = abstract_model.ensemble.reward(s, a) + expected;
                ++table.backup_count;
                if (q(id, a) > q(id, best)) best = a;
            }
            table.v[static_cast<std::size_t>(h - 1)](id) = q(id, best);
            table.greedy[static_cast<std::size_t>(h - 1)](id) = static_cast<int>(best);
        }
    }
    return table;
}

ValueQuery lifted_value_query(const AbstractBamdp& abstract_model,
                              const AbstractValueTable& values) {
    return [&abstract_model, &values](int h, const Hyperstate& x) {
        return values.value(
            h, abstract_model.id_of(x.state, abstract_model.abstraction.project_index(x.belief)));
    };
}

double AbstractPlanResult::lifted_value(int h, const Hyperstate& x) const {
    if (h == model.horizon() + 1) return 0.0;
    if (h < 1 || h > info_horizon) {
        throw InconsistentSpace("informed abstract solve stores timesteps 1.." +
                                std::to_string(info_horizon) + "; asked for " +
                                std::to_string(h));
    }
    const Index id = model.id_of(x.state, model.abstraction.project_index(x.belief));
    const double val = v[static_cast<std::size_t>(h - 1)](id);
    if (std::isnan(val)) {
        throw InconsistentSpace("abstract hyperstate (s=" + std::to_string(x.state) +
                                ", center " +
                                describe_vector(model.center(model.state_center(id).second).probs()) +
                                ") is not reachable at timestep " + std::to_string(h));
    }
    return val;
}

AbstractPlanResult informed_abstract_value_iteration(const BamdpModel& model,
                                                     const EpistemicAbstraction& abstraction) {
    AbstractPlanResult result;
    result.model = induce_abstract_bamdp(model, abstraction);
    const AbstractBamdp& ab = result.model;

    const InformationHorizon horizon = abstract_information_horizon(ab);
    if (!horizon.finite()) {
        throw AbstractHorizonInfinite(
            "the abstract information horizon is infinite; use a larger delta or a "
            "different cover");
    }
    const int I = *horizon.value;
    const int H = ab.horizon();
    result.info_horizon = I;
    result.layers = abstract_reachable_layers(ab);
    result.layers.resize(static_cast<std::size_t>(I));

    std::vector<ValueTable> per_theta;
    per_theta.reserve(static_cast<std::size_t>(ab.ensemble.num_hypotheses()));
    for (Index theta = 0; theta < ab.ensemble.num_hypotheses(); ++theta) {
        per_theta.push_back(mdp_value_iteration(ab.ensemble.mdp_for(theta, H - I + 1)));
        result.mdp_backup_count += per_theta.back().backup_count;
    }

    const Index n = ab.num_hyperstates();
    result.v.assign(static_cast<std::size_t>(I), Vector::Constant(n, std::nan("")));
    result.greedy.assign(static_cast<std::size_t>(I > 0 ? I - 1 : 0),
                         ActionVector::Constant(n, -1));

    for (Index id : result.layers[static_cast<std::size_t>(I - 1)]) {
        const auto [s, c] = ab.state_center(id);
        Index theta;
        try {
            theta = identify_theta(ab.center(c));
        } catch (const NotDirac&) {
            throw InfoHorizonViolated("abstract center " +
                                      describe_vector(ab.center(c).probs()) +
                                      " reachable at the abstract information horizon still "
                                      "carries uncertainty");
        }
        result.v[static_cast<std::size_t>(I - 1)](id) =
            per_theta[static_cast<std::size_t>(theta)].value(1, s);
    }

    for (int h = I - 1; h >= 1; --h) {
        const Vector& next = result.v[static_cast<std::size_t>(h)];
        for (Index id : result.layers[static_cast<std::size_t>(h - 1)]) {
            const auto [s, c] = ab.state_center(id);
            Index best = 0;
            double best_q = -1.0;
            for (Index a = 0; a < ab.ensemble.num_actions; ++a) {
                double expected = 0.0;
                for (const auto& [succ_id, p] :
                     ab.transition[static_cast<std::size_t>(id)][static_cast<std::size_t>(a)]) {
                    const double val = next(succ_id);
                    if (std::isnan(val)) {
                        throw InconsistentSpace(
                            "abstract successor missing from reachable layer " +
                            std::to_string(h + 1));
                    }
                    expected += p * val;
                }
                const double q = ab.ensemble.reward(s, a) + expected;
                ++result.backup_count;
                if (q > best_q) {
                    best_q = q;
                    best = a;
                }
            }
            result.v[static_cast<std::size_t>(h - 1)](id) = best_q;
            result.greedy[static_cast<std::size_t>(h - 1)](id) = static_cast<int>(best);
        }
    }
    return result;
}

}  // namespace bamdp
