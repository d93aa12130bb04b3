#pragma once

#include <cstddef>
#include <vector>

#include "mrdcs/matrix.hpp"

namespace mrdcs::assignment {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct AssignmentResult {
    std::vector<std::size_t> column_of_row;  // sigma: row i -> column sigma(i)
    double total_cost = 0.0;
};

// Exact minimum-cost perfect matching on a square cost matrix, via the
// shortest-augmenting-path form of the Hungarian method. O(n^3) time,
// O(n^2) memory. Deterministic: rows are processed in ascending index and
// each Dijkstra step settles the lowest-index minimal column, so ties
// between equally optimal permutations always resolve the same way.
AssignmentResult solve_lsap(const Matrix& cost);

}  // namespace mrdcs::assignment
