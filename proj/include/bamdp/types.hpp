#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace bamdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ActionVector = Eigen::VectorXi;
using Index = Eigen::Index;

/// Tolerance for stochasticity and normalization checks.
inline constexpr double kProbTol = 1e-9;

/// Tolerance for value comparisons between exact dynamic programs.
inline constexpr double kValueTol = 1e-9;

/// Per-coordinate tolerance under which two beliefs are considered equal.
inline constexpr double kBeliefDedupTol = 1e-9;

/// Entropy below this threshold counts as fully resolved (zero entropy).
inline constexpr double kZeroEntropyTol = 1e-12;

/// Default cap on enumerated hyperstates before SpaceExplosion is raised.
inline constexpr std::size_t kDefaultHyperstateCap = 10'000'000;

/// Dot product accumulated in ascending index order. Backups use this so
/// floating-point results are bit-stable across runs and schedules.
template <typename DerivedA, typename DerivedB>
double ordered_dot(const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b) {
    double acc = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        acc += a(i) * b(i);
    }
    return acc;
}

}  // namespace bamdp
