#pragma once

#include <span>

#include "mrdcs/matrix.hpp"

namespace mrdcs::baselines {

// |Pearson correlation| between two univariate samples. Throws
// DegenerateInput when either side has zero variance.
double sis_score(std::span<const double> x, std::span<const double> y);

// Matrix form; rejects multivariate input with CapabilityError since the
// Pearson screener is inherently univariate.
double sis_score(const Matrix& x, const Matrix& y);

// Squared distance correlation of the raw clouds (no rank map) — the plain
// distance-correlation screener. Throws DegenerateInput when either cloud
// has zero distance variance.
double dcsis_score(const Matrix& x, const Matrix& y);

}  // namespace mrdcs::baselines
