#pragma once

#include "bamdp/bamdp.hpp"
#include "bamdp/belief.hpp"
#include "bamdp/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace bamdp {

/// A finite set of simplex points within total-variation distance delta of
/// every point it claims to cover. Always contains all basis vectors, held
/// in ascending lexicographic order. `certified_radius` is the measured
/// maximum projection distance over the certification set; the cover is
/// certified once that measurement is at most delta.
struct DeltaCover {
    double delta = 0.0;
    std::vector<EpistemicState> centers;
    double certified_radius = 2.0;
    std::uint64_t certification_seed = 0;
    std::size_t certification_samples = 0;

    Index size() const { return static_cast<Index>(centers.size()); }
    Index dimension() const { return centers.empty() ? 0 : centers.front().size(); }
    bool certified() const { return certified_radius <= delta; }

    /// Index of the TV-nearest center; ties break to the lexicographically
    /// smallest center vector.
    Index nearest(const EpistemicState& p) const;

    void validate() const;
};

struct CertificationOptions {
    std::uint64_t seed = 90210;
    std::size_t samples = 100000;
    int probe_resolution = 0;  // 0 = pick automatically
    std::vector<EpistemicState> extra_points;
};

/// Max projection distance over the certification set (random simplex
/// samples, lattice probes, vertices, extra points). Stops early once the
/// measurement exceeds `stop_above`.
double measure_cover_radius(const DeltaCover& cover, const CertificationOptions& options,
                            double stop_above);

/// Full-pass measurement that records certified_radius, seed, and sample
/// count on the cover. Returns the measured radius.
double certify_cover(DeltaCover& cover, const CertificationOptions& options = {});

/// Simplex lattice at the smallest resolution whose certified covering
/// radius is at most delta. Throws CoverTooFine when no resolution up to
/// `max_resolution` certifies.
DeltaCover build_lattice_cover(Index num_hypotheses, double delta,
                               const CertificationOptions& options = {},
                               int max_resolution = 256);

/// Farthest-point greedy cover of a candidate set, seeded with the basis
/// vectors. Guarantees every candidate lies within delta of some center;
/// the full-simplex certified radius is measured and recorded but may
/// exceed delta for sparse candidate sets.
DeltaCover build_greedy_cover(const std::vector<EpistemicState>& candidates, double delta,
                              const CertificationOptions& options = {});

enum class Weighting { CenterDirac, UniformOverAssigned };

const char* weighting_name(Weighting weighting);

/// The projection phi onto a delta-cover plus the weighting omega realized
/// over a finite representative set per cell: the center itself
/// (CenterDirac) or the assigned members of a caller-provided sample set
/// with equal weights (UniformOverAssigned).
struct EpistemicAbstraction {
    DeltaCover cover;
    Weighting weighting = Weighting::CenterDirac;
    std::vector<std::vector<EpistemicState>> representatives;  // per center

    static EpistemicAbstraction center_dirac(DeltaCover cover);
    static EpistemicAbstraction uniform_over_assigned(DeltaCover cover,
                                                      const std::vector<EpistemicState>& samples);

    Index project_index(const EpistemicState& p) const { return cover.nearest(p); }
    const EpistemicState& center(Index c) const {
        return cover.centers[static_cast<std::size_t>(c)];
    }
};

/// phi applied to a belief: the TV-nearest cover center.
EpistemicState apply_abstraction(const EpistemicAbstraction& abstraction,
                                 const EpistemicState& belief);

/// The induced abstract BAMDP over X_phi = S x centers. Abstract hyperstate
/// ids are s * num_centers + center index. The abstract reward equals the
/// ground reward, and transitions aggregate the projected ground successors
/// of each cell representative under the weighting.
struct AbstractBamdp {
    MdpEnsemble ensemble;
    EpistemicAbstraction abstraction;
    // transition[id][a] -> (successor id, probability), ascending by id
    std::vector<std::vector<std::vector<std::pair<Index, double>>>> transition;
    std::vector<std::pair<Index, double>> initial;  // (id, probability)

    Index num_centers() const { return abstraction.cover.size(); }
    Index num_hyperstates() const { return num_centers() * ensemble.num_states; }
    Index id_of(Index state, Index center) const { return state * num_centers() + center; }
    std::pair<Index, Index> state_center(Index id) const {
        return {id / num_centers(), id % num_centers()};
    }
    const EpistemicState& center(Index c) const { return abstraction.center(c); }
    int horizon() const { return ensemble.horizon; }
};

/// Builds the abstract model. Throws EmptyCell naming the center if a cell
/// has no representative under UniformOverAssigned.
AbstractBamdp induce_abstract_bamdp(const BamdpModel& model,
                                    const EpistemicAbstraction& abstraction);

/// Abstract hyperstate ids reachable at each timestep 1..H under all
/// actions, starting from the abstract initial distribution.
std::vector<std::vector<Index>> abstract_reachable_layers(const AbstractBamdp& abstract_model);

/// Optimal abstract values over the full X_phi at every timestep, by plain
/// backward induction over the abstract transitions. This is the total
/// solve used for bound verification and lifted queries at arbitrary
/// hyperstates.
struct AbstractValueTable {
    int horizon = 0;
    std::vector<Vector> v;             // per timestep, size |X_phi|
    std::vector<Matrix> q;             // per timestep, |X_phi| x |A|
    std::vector<ActionVector> greedy;  // per timestep
    std::int64_t backup_count = 0;

    double value(int h, Index id) const {
        return h == horizon + 1 ? 0.0 : v.at(static_cast<std::size_t>(h - 1))(id);
    }
};

AbstractValueTable abstract_value_iteration(const AbstractBamdp& abstract_model);

/// Lifted value query V(h, <s, p>) = V_phi(h, <s, phi(p)>) over a full
/// abstract solve. The returned closure references both arguments.
ValueQuery lifted_value_query(const AbstractBamdp& abstract_model,
                              const AbstractValueTable& values);

/// Output of informed abstract value iteration: abstract values over the
/// reachable abstract layers up to the abstract information horizon, the
/// bootstrap layer included, plus the lifted query.
struct AbstractPlanResult {
    AbstractBamdp model;
    int info_horizon = 0;  // I_phi
    std::vector<std::vector<Index>> layers;  // reachable ids, timesteps 1..I_phi
    std::vector<Vector> v;                   // dense over X_phi, NaN off-layer
    std::vector<ActionVector> greedy;        // timesteps 1..I_phi-1, -1 off-layer
    std::int64_t backup_count = 0;
    std::int64_t mdp_backup_count = 0;

    /// V(h, <s, p>) via phi for h in [1, I_phi]; 0 at h = H+1.
    double lifted_value(int h, const Hyperstate& x) const;
};

/// Informed value iteration run on the abstract BAMDP: per-hypothesis MDP
/// solutions bootstrap the abstract layer at I_phi, then abstract backups
/// run over the reachable abstract layers for h = I_phi-1 .. 1. Throws
/// AbstractHorizonInfinite when I_phi does not exist.
AbstractPlanResult informed_abstract_value_iteration(const BamdpModel& model,
                                                     const EpistemicAbstraction& abstraction);

}  // namespace bamdp
