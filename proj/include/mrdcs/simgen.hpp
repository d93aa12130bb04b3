#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrdcs/matrix.hpp"
#include "mrdcs/screening.hpp"

namespace mrdcs::simgen {

// Declarative description of one synthetic experiment. Loaded from JSON:
// {"example": ..., "n": ..., "p": ..., "reps": ..., "seed": ...,
//  "thresholds": [1,2,3], "rho": ...}.
struct SimDesign {
    std::string example;  // ex1-case1 | ex1-case2 | ex2 | ex3-case1 | ex3-case2 | gaussian-rho
    std::size_t n = 200;
    std::size_t p = 1000;
    std::size_t reps = 50;
    std::uint64_t seed = 1;
    std::vector<std::size_t> threshold_multipliers{1, 2, 3};
    double rho = 0.5;  // gaussian-rho only

    void validate() const;
    std::size_t response_dim() const;   // q implied by the example
    std::size_t predictor_dim() const;  // d implied by the example
    std::vector<std::size_t> active_set() const;  // 0-based predictor indices

    static SimDesign from_json(const nlohmann::json& j);
    static SimDesign load_file(const std::string& path);
    nlohmann::json to_json() const;
};

// The data-generating truth of one replicate: which predictors are active,
// and the coefficient/platform draws behind each active response component.
struct TrueModel {
    std::vector<std::size_t> active;
    std::vector<std::array<double, 4>> beta;       // per active response component
    std::vector<std::array<int, 4>> platform_ids;  // per active response component, 0-based
};

struct Replicate {
    Tensor3 X;
    Matrix Y;
    TrueModel truth;
};

// Rows i.i.d. N(0, Sigma) with Sigma_jk = rho^|j-k|, via the AR(1)
// recurrence Z_j = rho*Z_{j-1} + sqrt(1-rho^2)*eps_j (exact for this
// covariance, O(np) instead of a Cholesky solve).
Matrix gen_ar1_gaussian(std::size_t n, std::size_t p, double rho, std::uint64_t seed);

// Rows from the classical multivariate t: Gaussian AR(1) row divided by
// sqrt(W/df) with one chi-square W per row. For df = 1 the "covariance" is
// read as the scale-matrix parameter (the distribution has no moments).
Matrix gen_mvt(std::size_t n, std::size_t p, double rho, unsigned df, std::uint64_t seed);

// Gaussian-copula construction with exact Pareto(shape, scale) marginals:
// U = Phi(AR(1) Gaussian), X = scale * U^(-1/shape).
Matrix gen_mv_pareto(std::size_t n, std::size_t p, double rho, double shape, double scale,
                     std::uint64_t seed);

// Deterministic function of (design, replicate): same pair, same data.
Replicate build_example(const SimDesign& design, std::size_t replicate);

// Aggregated screening quality over replicates:
//   S  = minimum selection size covering all active predictors;
//   Ps = per-active inclusion rate within each threshold;
//   Pa = rate of all actives inside the threshold simultaneously.
struct SimReport {
    std::string example;
    std::string method;
    std::size_t n = 0, p = 0, reps = 0;
    std::vector<std::size_t> active;
    std::vector<std::size_t> thresholds;  // absolute selection sizes d1 < d2 < ...
    std::vector<std::size_t> s_values;    // per replicate
    double s_mean = 0.0;
    double s_std = 0.0;  // NaN when reps < 2 (serialized as null)
    std::vector<std::vector<double>> ps;  // [active index][threshold]
    std::vector<double> pa;               // [threshold]
    std::vector<double> rank_gaps;        // per replicate
    double rank_gap_positive_rate = 0.0;

    nlohmann::json to_json() const;
    std::string table() const;  // human-readable summary block
};

SimReport evaluate(const std::vector<screening::ScreenReport>& reports,
                   const std::vector<std::size_t>& active,
                   const std::vector<std::size_t>& thresholds);

// Full harness: generate every replicate, screen it with `method`, and
// aggregate. Replicates run in parallel; results are merged by replicate
// index so the thread count never changes the report.
SimReport run_design(const SimDesign& design, screening::Method method, unsigned threads = 0);

// Side-by-side table for several methods on one design.
std::string comparison_table(const std::vector<SimReport>& reports);

}  // namespace mrdcs::simgen
