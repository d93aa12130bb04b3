#include "mrdcs/assignment.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mrdcs/error.hpp"

namespace mrdcs::assignment {

AssignmentResult solve_lsap(const Matrix& cost) {
    if (cost.rows() != cost.cols()) {
        throw ShapeError("assignment: cost matrix must be square, got " +
                         std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()));
    }
    if (!cost.all_finite()) {
        throw DomainError("assignment: cost matrix contains non-finite entries");
    }
    const std::size_t n = cost.rows();
    AssignmentResult result;
    result.column_of_row.assign(n, npos);
    if (n == 0) return result;

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n, 0.0), v(n, 0.0);   // dual potentials
    std::vector<std::size_t> col_of_row(n, npos);
    std::vector<std::size_t> row_of_col(n, npos);
    std::vector<double> shortest(n);   // tentative path cost to each column
    std::vector<std::size_t> path(n);  // predecessor row on the best path to column j
    std::vector<char> scanned_row(n), scanned_col(n);

    for (std::size_t cur_row = 0; cur_row < n; ++cur_row) {
        std::fill(shortest.begin(), shortest.end(), inf);
        std::fill(path.begin(), path.end(), npos);
        std::fill(scanned_row.begin(), scanned_row.end(), 0);
        std::fill(scanned_col.begin(), scanned_col.end(), 0);

        double min_val = 0.0;
        std::size_t i = cur_row;
        std::size_t sink = npos;
        while (sink == npos) {
            scanned_row[i] = 1;
            double lowest = inf;
            std::size_t j_low = npos;
            for (std::size_t j = 0; j < n; ++j) {
                if (scanned_col[j]) continue;
                const double r = min_val + cost(i, j) - u[i] - v[j];
                if (r < shortest[j]) {
                    shortest[j] = r;
                    path[j] = i;
                }
                // strict < keeps the lowest-index column on ties
                if (shortest[j] < lowest) {
                    lowest = shortest[j];
                    j_low = j;
                }
            }
            min_val = lowest;
            const std::size_t j = j_low;
            scanned_col[j] = 1;
            if (row_of_col[j] == npos) {
                sink = j;
            } else {
                i = row_of_col[j];
            }
        }

        u[cur_row] += min_val;
        for (std::size_t k = 0; k < n; ++k) {
            if (scanned_row[k] && k != cur_row) {
                u[k] += min_val - shortest[col_of_row[k]];
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (scanned_col[j]) {
                v[j] -= min_val - shortest[j];
            }
        }

        // flip matched/unmatched edges along the augmenting path
        std::size_t j = sink;
        for (;;) {
            const std::size_t pi = path[j];
            row_of_col[j] = pi;
            std::swap(col_of_row[pi], j);
            if (pi == cur_row) break;
        }
    }

    result.column_of_row = col_of_row;
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) total += cost(r, col_of_row[r]);
    result.total_cost = total;
    return result;
}

}  // namespace mrdcs::assignment
