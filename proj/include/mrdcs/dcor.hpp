#pragma once

#include <cstddef>
#include <vector>

#include "mrdcs/lds.hpp"
#include "mrdcs/matrix.hpp"

namespace mrdcs::dcor {

// Pairwise Euclidean distances of one point cloud plus the averages every
// dependence term needs. Built once per cloud and shared read-only; in a
// screening run the response's summary is reused across all predictors.
struct PairwiseDistanceSummary {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> dist;       // n*n row-major, symmetric, zero diagonal
    std::vector<double> row_mean;   // length n
    double grand_mean = 0.0;
    double dvar = 0.0;              // squared distance variance of the cloud

    double operator()(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
};

PairwiseDistanceSummary summarize(const Matrix& cloud);

// The three moment terms of squared distance covariance:
//   S1 = (1/n^2) sum_kl a_kl*b_kl, S2 = mean(a)*mean(b),
//   S3 = (1/n) sum_l abar_l*bbar_l, dcov2 = S1 + S2 - 2*S3.
// S3's row-mean form collapses the defining triple sum to O(n^2).
struct DcovTerms {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double dcov2 = 0.0;
    double dvar_x = 0.0, dvar_y = 0.0;
    std::size_t n = 0;
    std::size_t dim_x = 0, dim_y = 0;
};

DcovTerms dcov_terms(const PairwiseDistanceSummary& x, const PairwiseDistanceSummary& y);
DcovTerms dcov_terms(const Matrix& x, const Matrix& y);

// Distance correlation sqrt(dcov2 / sqrt(dvar_x*dvar_y)), clamped to [0,1].
// Throws DegenerateInput when either cloud has zero distance variance.
double dcor(const PairwiseDistanceSummary& x, const PairwiseDistanceSummary& y);
double dcor(const Matrix& x, const Matrix& y);

// Dependence score on multivariate ranks: rank-map both samples onto their
// canonical target sets, then return the squared distance correlation of the
// rank clouds. Throws DegenerateInput if either sample has all rows
// identical (no ordering information survives).
double mrdc(const Matrix& sample_x, const Matrix& sample_y,
            const lds::DirectionNumberTable& table = lds::DirectionNumberTable::builtin());

// Same score against a response whose rank cloud was summarized in advance.
double mrdc_vs_summary(const Matrix& sample_x, const PairwiseDistanceSummary& rank_y,
                       const lds::DirectionNumberTable& table = lds::DirectionNumberTable::builtin());

// True when every row of the sample equals the first row; such samples carry
// no rank information and are treated as degenerate upstream.
bool constant_rows(const Matrix& sample);

}  // namespace mrdcs::dcor
