#pragma once

#include "bamdp/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace bamdp {

/// A point of the (|Theta|-1)-simplex: the agent's posterior over the
/// hypothesis set. Normalized on construction; equality is per-coordinate
/// within kBeliefDedupTol.
class EpistemicState {
public:
    /// Validates nonnegativity and near-unit mass, then normalizes exactly.
    explicit EpistemicState(Vector probs);

    static EpistemicState dirac(Index component, Index size);
    static EpistemicState uniform(Index size);

    const Vector& probs() const { return probs_; }
    Index size() const { return probs_.size(); }
    double operator()(Index i) const { return probs_(i); }

    bool approx_equals(const EpistemicState& other, double tol = kBeliefDedupTol) const;

private:
    Vector probs_;
};

/// Shannon entropy in nats, with 0 ln 0 = 0. Result lies in [0, ln |Theta|].
double entropy(const EpistemicState& p);

/// Total variation distance: half the L1 distance between the two vectors.
double tv_distance(const EpistemicState& p, const EpistemicState& q);

/// True when the belief has (numerically) exhausted all uncertainty.
bool is_resolved(const EpistemicState& p, double entropy_tol = kZeroEntropyTol);

/// Strict lexicographic order on the underlying vectors, used for
/// deterministic tie-breaking.
bool lex_less(const Vector& a, const Vector& b);

/// Quantized fingerprint of a belief at the dedup resolution. Beliefs whose
/// coordinates agree to within kBeliefDedupTol map to the same key, which
/// makes tolerance-based dedup consistent with later lookups.
struct BeliefKey {
    std::vector<std::int64_t> q;
    bool operator==(const BeliefKey& other) const { return q == other.q; }
};

BeliefKey belief_key(const EpistemicState& p);

struct BeliefKeyHash {
    std::size_t operator()(const BeliefKey& key) const;
};

}  // namespace bamdp
