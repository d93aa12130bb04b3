#include "mrdcs/dcor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrdcs/error.hpp"
#include "mrdcs/mrank.hpp"

namespace mrdcs::dcor {

namespace {

constexpr double kNegativeFloor = -1e-12;

double clamp_dcov2(double value) {
    if (value < 0.0 && value >= kNegativeFloor) return 0.0;
    return value;
}

// dvar = S1 + S2 - 2*S3 of a cloud with itself, from its own distances.
double self_dcov2(const std::vector<double>& dist, const std::vector<double>& row_mean,
                  double grand_mean, std::size_t n, std::vector<double>& scratch,
                  std::vector<double>& row_acc) {
    for (std::size_t k = 0; k < n; ++k) {
        const double* row = dist.data() + k * n;
        for (std::size_t l = 0; l < n; ++l) scratch[l] = row[l] * row[l];
        row_acc[k] = pairwise_sum(std::span<const double>(scratch.data(), n));
    }
    const double s1 = pairwise_sum(std::span<const double>(row_acc.data(), n)) /
                      (static_cast<double>(n) * static_cast<double>(n));
    const double s2 = grand_mean * grand_mean;
    for (std::size_t l = 0; l < n; ++l) scratch[l] = row_mean[l] * row_mean[l];
    const double s3 =
        pairwise_sum(std::span<const double>(scratch.data(), n)) / static_cast<double>(n);
    return clamp_dcov2(s1 + s2 - 2.0 * s3);
}

}  // namespace

bool constant_rows(const Matrix& sample) {
    if (sample.rows() == 0) return true;
    auto first = sample.row(0);
    for (std::size_t i = 1; i < sample.rows(); ++i) {
        auto row = sample.row(i);
        if (!std::equal(first.begin(), first.end(), row.begin())) return false;
    }
    return true;
}

PairwiseDistanceSummary summarize(const Matrix& cloud) {
    const std::size_t n = cloud.rows();
    const std::size_t d = cloud.cols();
    if (n < 2) throw DomainError("distance summary: need at least 2 observations, got " +
                                 std::to_string(n));
    if (!cloud.all_finite()) throw DomainError("distance summary: non-finite entries");

    PairwiseDistanceSummary s;
    s.n = n;
    s.dim = d;
    s.dist.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = cloud(i, c) - cloud(j, c);
                sq += diff * diff;
            }
            const double dist = std::sqrt(sq);
            s.dist[i * n + j] = dist;
            s.dist[j * n + i] = dist;
        }
    }

    s.row_mean.resize(n);
    std::vector<double> scratch(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.row_mean[k] = pairwise_sum(std::span<const double>(s.dist.data() + k * n, n)) /
                        static_cast<double>(n);
    }
    s.grand_mean =
        pairwise_sum(std::span<const double>(s.row_mean.data(), n)) / static_cast<double>(n);

    std::vector<double> row_acc(n);
    s.dvar = self_dcov2(s.dist, s.row_mean, s.grand_mean, n, scratch, row_acc);
    return s;
}

DcovTerms dcov_terms(const PairwiseDistanceSummary& x, const PairwiseDistanceSummary& y) {
    if (x.n != y.n) {
        throw ShapeError("dcov: clouds have different sample counts: " + std::to_string(x.n) +
                         " vs " + std::to_string(y.n));
    }
    const std::size_t n = x.n;
    if (n < 2) throw DomainError("dcov: need at least 2 observations");

    DcovTerms t;
    t.n = n;
    t.dim_x = x.dim;
    t.dim_y = y.dim;

    std::vector<double> scratch(n), row_acc(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double* ax = x.dist.data() + k * n;
        const double* by = y.dist.data() + k * n;
        for (std::size_t l = 0; l < n; ++l) scratch[l] = ax[l] * by[l];
        row_acc[k] = pairwise_sum(std::span<const double>(scratch.data(), n));
    }
    t.s1 = pairwise_sum(std::span<const double>(row_acc.data(), n)) /
           (static_cast<double>(n) * static_cast<double>(n));
    t.s2 = x.grand_mean * y.grand_mean;
    for (std::size_t l = 0; l < n; ++l) scratch[l] = x.row_mean[l] * y.row_mean[l];
    t.s3 = pairwise_sum(std::span<const double>(scratch.data(), n)) / static_cast<double>(n);
    t.dcov2 = clamp_dcov2(t.s1 + t.s2 - 2.0 * t.s3);
    t.dvar_x = x.dvar;
    t.dvar_y = y.dvar;
    return t;
}

DcovTerms dcov_terms(const Matrix& x, const Matrix& y) {
    return dcov_terms(summarize(x), summarize(y));
}

double dcor(const PairwiseDistanceSummary& x, const PairwiseDistanceSummary& y) {
    const DcovTerms t = dcov_terms(x, y);
    if (!(t.dvar_x > 0.0) || !(t.dvar_y > 0.0)) {
        throw DegenerateInput("dcor: zero distance variance (constant cloud)");
    }
    const double ratio = t.dcov2 / std::sqrt(t.dvar_x * t.dvar_y);
    return std::clamp(std::sqrt(std::max(ratio, 0.0)), 0.0, 1.0);
}

double dcor(const Matrix& x, const Matrix& y) {
    return dcor(summarize(x), summarize(y));
}

double mrdc(const Matrix& sample_x, const Matrix& sample_y, const lds::DirectionNumberTable& table) {
    if (sample_x.rows() != sample_y.rows()) {
        throw ShapeError("mrdc: samples have different sizes: " + std::to_string(sample_x.rows()) +
                         " vs " + std::to_string(sample_y.rows()));
    }
    if (constant_rows(sample_x)) throw DegenerateInput("mrdc: first sample has all rows identical");
    if (constant_rows(sample_y)) throw DegenerateInput("mrdc: second sample has all rows identical");
    const auto rx = mrank::ranks(sample_x, table);
    const auto ry = mrank::ranks(sample_y, table);
    const double r = dcor(summarize(rx.points), summarize(ry.points));
    return r * r;
}

double mrdc_vs_summary(const Matrix& sample_x, const PairwiseDistanceSummary& rank_y,
                       const lds::DirectionNumberTable& table) {
    if (sample_x.rows() != rank_y.n) {
        throw ShapeError("mrdc: sample has " + std::to_string(sample_x.rows()) +
                         " rows but response summary has " + std::to_string(rank_y.n));
    }
    if (constant_rows(sample_x)) throw DegenerateInput("mrdc: sample has all rows identical");
    const auto rx = mrank::ranks(sample_x, table);
    const double r = dcor(summarize(rx.points), rank_y);
    return r * r;
}

}  // namespace mrdcs::dcor
