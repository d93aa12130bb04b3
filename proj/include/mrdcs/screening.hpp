#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mrdcs/matrix.hpp"

namespace mrdcs::screening {

enum class Method { mrdc, dcsis, sis };

Method method_from_string(const std::string& name);  // "mrdc" | "dcsis" | "sis"
std::string to_string(Method m);

// How many top-ranked predictors survive. All rules cut a prefix of the
// descending-score ranking.
struct ThresholdRule {
    enum class Kind { hard, max_ratio, top_k, cutoff };
    Kind kind = Kind::hard;
    std::size_t multiplier = 1;  // hard: multiplier * floor(n/ln n)
    std::size_t k = 0;           // top_k
    double c = 0.0;              // cutoff: keep scores >= c * n^-kappa
    double kappa = 0.0;

    static ThresholdRule hard(std::size_t multiplier);
    static ThresholdRule max_ratio();
    static ThresholdRule top(std::size_t k);
    static ThresholdRule cutoff(double c, double kappa);
    // CLI syntax: "hard:M" | "max-ratio" | "top:K".
    static ThresholdRule parse(const std::string& text);
    std::string describe() const;
};

struct ScreenReport {
    std::size_t n = 0, p = 0, d = 0, q = 0;
    Method method = Method::mrdc;
    ThresholdRule rule;
    std::vector<double> scores;           // per predictor, index order
    std::vector<std::size_t> ranking;     // predictor indices, best first
    std::vector<std::size_t> selected;    // prefix of ranking
    std::vector<std::string> warnings;    // degeneracy notes, predictor order
    double elapsed_seconds = 0.0;

    // 1-based position of predictor j in the ranking.
    std::size_t position_of(std::size_t j) const;
};

// Score every predictor against the response, rank descending (ties broken
// by ascending index), and apply the threshold rule. The response-side
// preprocessing (rank map and distance summary) happens once and is shared
// across predictors. Per-predictor degeneracies score 0 with a warning;
// a degenerate response aborts the whole run with DegenerateInput.
ScreenReport screen(const Tensor3& X, const Matrix& Y, Method method, const ThresholdRule& rule,
                    unsigned threads = 0);

// floor(n / ln n) scaled by the multiplier; the conventional model-size cap.
std::size_t hard_size(std::size_t n, std::size_t multiplier);

// Top hard_size(n, multiplier) predictor indices by descending score.
std::vector<std::size_t> hard_threshold(const std::vector<double>& scores, std::size_t n,
                                        std::size_t multiplier);

// Position j in 1..p-1 maximizing sorted[j-1]/sorted[j] over the descending
// score vector; earliest j wins ties. A zero successor after a positive score
// counts as an infinite ratio; 0/0 counts as 1. All-zero scores are an error.
std::size_t max_ratio_threshold(const std::vector<double>& sorted_desc);

// Smallest active score minus largest inactive score; positive iff the
// active set is ranked strictly on top.
double rank_gap(const std::vector<double>& scores, const std::vector<std::size_t>& active);

// Indices 0..p-1 ordered by descending score, ties by ascending index.
std::vector<std::size_t> rank_descending(const std::vector<double>& scores);

}  // namespace mrdcs::screening
