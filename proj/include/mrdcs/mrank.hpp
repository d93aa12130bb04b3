#pragma once

#include <cstddef>
#include <vector>

#include "mrdcs/lds.hpp"
#include "mrdcs/matrix.hpp"

namespace mrdcs::mrank {

// Image of a sample under the empirical rank map: row i is the target point
// assigned to sample row i. Rows are a permutation of the target set, so
// every coordinate lies in (0,1].
struct RankCloud {
    Matrix points;
    lds::Generator generator = lds::Generator::grid1d;
    bool ties_adjusted = false;                // duplicate rows were jittered
    std::vector<std::size_t> target_of_row;    // the permutation itself
};

// Deterministic de-duplication: the k-th repeat of an exact duplicate row
// (k = 1, 2, ...) gets +k*eps added to its first coordinate, with
// eps = 2^-40 * scale of the first column. Distinct rows pass through
// untouched. Keeps downstream assignments well defined on tied data without
// introducing any randomness.
Matrix ties_policy(const Matrix& sample);

// Optimal-transport rank map of `sample` onto `targets`: row i of the result
// is targets[sigma(i)] where sigma minimizes the total squared Euclidean
// matching cost. d = 1 uses the sorting shortcut (monotone matching is
// optimal on the line); d >= 2 solves the assignment problem exactly.
RankCloud rank_map(const Matrix& sample, const lds::TargetPointSet& targets);

// Convenience pipeline: jitter ties, pick the canonical target set for the
// sample's shape (grid for d = 1, Sobol otherwise), and rank-map onto it.
RankCloud ranks(const Matrix& sample,
                const lds::DirectionNumberTable& table = lds::DirectionNumberTable::builtin());

}  // namespace mrdcs::mrank
