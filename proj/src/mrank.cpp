#include "mrdcs/mrank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>

#include "mrdcs/assignment.hpp"
#include "mrdcs/error.hpp"

namespace mrdcs::mrank {

namespace {

// Jitter step relative to the spread of the first column; falls back to the
// magnitude of the column (or 1) when the column is constant.
double jitter_scale(const Matrix& sample) {
    double lo = sample(0, 0), hi = sample(0, 0);
    for (std::size_t i = 1; i < sample.rows(); ++i) {
        lo = std::min(lo, sample(i, 0));
        hi = std::max(hi, sample(i, 0));
    }
    const double span = hi - lo;
    if (span > 0.0) return span;
    return std::max(1.0, std::abs(hi));
}

}  // namespace

Matrix ties_policy(const Matrix& sample) {
    if (sample.rows() == 0 || sample.cols() == 0) {
        throw ShapeError("ties_policy: empty sample");
    }
    Matrix out = sample;
    std::map<std::vector<double>, std::size_t> seen;
    bool any = false;
    std::vector<double> key(sample.cols());
    for (std::size_t i = 0; i < sample.rows(); ++i) {
        auto row = sample.row(i);
        key.assign(row.begin(), row.end());
        const std::size_t k = seen[key]++;
        if (k > 0) any = true;
    }
    if (!any) return out;

    const double eps = std::ldexp(jitter_scale(sample), -40);
    seen.clear();
    for (std::size_t i = 0; i < sample.rows(); ++i) {
        auto row = sample.row(i);
        key.assign(row.begin(), row.end());
        const std::size_t k = seen[key]++;
        if (k > 0) out(i, 0) += static_cast<double>(k) * eps;
    }
    return out;
}

RankCloud rank_map(const Matrix& sample, const lds::TargetPointSet& targets) {
    const std::size_t n = sample.rows();
    const std::size_t d = sample.cols();
    if (n != targets.points.rows() || d != targets.points.cols()) {
        throw ShapeError("rank_map: sample is " + std::to_string(n) + "x" + std::to_string(d) +
                         " but targets are " + std::to_string(targets.points.rows()) + "x" +
                         std::to_string(targets.points.cols()));
    }
    if (!sample.all_finite()) {
        throw DomainError("rank_map: sample contains non-finite entries");
    }

    RankCloud cloud;
    cloud.generator = targets.generator;
    cloud.points = Matrix(n, d);
    cloud.target_of_row.resize(n);

    if (d == 1) {
        // Monotone matching: i-th smallest sample value -> i-th smallest target.
        std::vector<std::size_t> sample_order(n), target_order(n);
        std::iota(sample_order.begin(), sample_order.end(), 0);
        std::iota(target_order.begin(), target_order.end(), 0);
        std::stable_sort(sample_order.begin(), sample_order.end(),
                         [&](std::size_t a, std::size_t b) { return sample(a, 0) < sample(b, 0); });
        std::stable_sort(target_order.begin(), target_order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return targets.points(a, 0) < targets.points(b, 0);
                         });
        for (std::size_t i = 0; i < n; ++i) {
            cloud.target_of_row[sample_order[i]] = target_order[i];
        }
    } else {
        Matrix cost(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                double sq = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    const double diff = sample(i, c) - targets.points(k, c);
                    sq += diff * diff;
                }
                cost(i, k) = sq;
            }
        }
        cloud.target_of_row = assignment::solve_lsap(cost).column_of_row;
    }

    for (std::size_t i = 0; i < n; ++i) {
        auto src = targets.points.row(cloud.target_of_row[i]);
        std::copy(src.begin(), src.end(), cloud.points.row(i).begin());
    }
    return cloud;
}

RankCloud ranks(const Matrix& sample, const lds::DirectionNumberTable& table) {
    Matrix adjusted = ties_policy(sample);
    const bool changed = !(adjusted == sample);
    RankCloud cloud = rank_map(adjusted, lds::targets_for(sample.rows(), sample.cols(), table));
    cloud.ties_adjusted = changed;
    return cloud;
}

}  // namespace mrdcs::mrank
