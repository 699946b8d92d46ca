#include "bamdp/belief.hpp"

#include "bamdp/errors.hpp"

#include <cmath>
#include <string>

namespace bamdp {

EpistemicState::EpistemicState(Vector probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) {
        throw ValidationError("belief must have at least one coordinate");
    }
    double sum = 0.0;
    for (Index i = 0; i < probs_.size(); ++i) {
        if (probs_(i) < -kProbTol) {
            throw ValidationError("belief has a negative coordinate at index " +
                                  std::to_string(i));
        }
        if (probs_(i) < 0.0) probs_(i) = 0.0;
        sum += probs_(i);
    }
    if (std::abs(sum - 1.0) > kProbTol) {
        throw ValidationError("belief mass " + std::to_string(sum) + " is not 1");
    }
    probs_ /= sum;
}

EpistemicState EpistemicState::dirac(Index component, Index size) {
    Vector p = Vector::Zero(size);
    p(component) = 1.0;
    return EpistemicState(std::move(p));
}

EpistemicState EpistemicState::uniform(Index size) {
    return EpistemicState(Vector::Constant(size, 1.0 / static_cast<double>(size)));
}

bool EpistemicState::approx_equals(const EpistemicState& other, double tol) const {
    if (size() != other.size()) return false;
    for (Index i = 0; i < size(); ++i) {
        if (std::abs(probs_(i) - other.probs_(i)) > tol) return false;
    }
    return true;
}

double entropy(const EpistemicState& p) {
    double h = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
        const double pi = p(i);
        if (pi > 0.0) h -= pi * std::log(pi);
    }
    return h < 0.0 ? 0.0 : h;
}

double tv_distance(const EpistemicState& p, const EpistemicState& q) {
    if (p.size() != q.size()) {
        throw ValidationError("tv_distance: dimension mismatch (" +
                              std::to_string(p.size()) + " vs " + std::to_string(q.size()) +
                              ")");
    }
    return 0.5 * (p.probs() - q.probs()).cwiseAbs().sum();
}

bool is_resolved(const EpistemicState& p, double entropy_tol) {
    return entropy(p) <= entropy_tol;
}

bool lex_less(const Vector& a, const Vector& b) {
    for (Index i = 0; i < a.size() && i < b.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return a.size() < b.size();
}

BeliefKey belief_key(const EpistemicState& p) {
    BeliefKey key;
    key.q.resize(static_cast<std::size_t>(p.size()));
    for (Index i = 0; i < p.size(); ++i) {
        key.q[static_cast<std::size_t>(i)] = std::llround(p(i) / kBeliefDedupTol);
    }
    return key;
}

std::size_t BeliefKeyHash::operator()(const BeliefKey& key) const {
    std::size_t h = 1469598103934665603ull;  // FNV-1a
    for (std::int64_t v : key.q) {
        auto u = static_cast<std::uint64_t>(v);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (u >> (8 * byte)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace bamdp
