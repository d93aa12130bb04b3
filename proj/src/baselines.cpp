#include "mrdcs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mrdcs/dcor.hpp"
#include "mrdcs/error.hpp"

namespace mrdcs::baselines {

double sis_score(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) {
        throw ShapeError("sis: samples have different sizes: " + std::to_string(n) + " vs " +
                         std::to_string(y.size()));
    }
    if (n < 2) throw DomainError("sis: need at least 2 observations");
    for (double v : x)
        if (!std::isfinite(v)) throw DomainError("sis: non-finite predictor value");
    for (double v : y)
        if (!std::isfinite(v)) throw DomainError("sis: non-finite response value");

    const double mx = pairwise_sum(x) / static_cast<double>(n);
    const double my = pairwise_sum(y) / static_cast<double>(n);
    std::vector<double> cross(n), xx(n), yy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        cross[i] = dx * dy;
        xx[i] = dx * dx;
        yy[i] = dy * dy;
    }
    const double sxx = pairwise_sum(xx);
    const double syy = pairwise_sum(yy);
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateInput("sis: zero variance sample");
    const double r = pairwise_sum(cross) / std::sqrt(sxx * syy);
    return std::min(std::abs(r), 1.0);
}

double sis_score(const Matrix& x, const Matrix& y) {
    if (x.cols() != 1 || y.cols() != 1) {
        throw CapabilityError("sis handles only univariate data; got " + std::to_string(x.cols()) +
                              "-dim predictor and " + std::to_string(y.cols()) + "-dim response");
    }
    std::vector<double> xv(x.rows()), yv(y.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) xv[i] = x(i, 0);
    for (std::size_t i = 0; i < y.rows(); ++i) yv[i] = y(i, 0);
    return sis_score(xv, yv);
}

double dcsis_score(const Matrix& x, const Matrix& y) {
    const double r = dcor::dcor(x, y);
    return r * r;
}

}  // namespace mrdcs::baselines
