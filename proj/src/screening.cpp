#include "mrdcs/screening.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "mrdcs/baselines.hpp"
#include "mrdcs/dcor.hpp"
#include "mrdcs/error.hpp"
#include "mrdcs/mrank.hpp"
#include "mrdcs/parallel.hpp"

namespace mrdcs::screening {

Method method_from_string(const std::string& name) {
    if (name == "mrdc") return Method::mrdc;
    if (name == "dcsis") return Method::dcsis;
    if (name == "sis") return Method::sis;
    throw ConfigError("unknown method '" + name + "' (expected mrdc, dcsis, or sis)");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::mrdc: return "mrdc";
        case Method::dcsis: return "dcsis";
        case Method::sis: return "sis";
    }
    return "?";
}

ThresholdRule ThresholdRule::hard(std::size_t multiplier) {
    if (multiplier < 1) throw ConfigError("hard rule: multiplier must be >= 1");
    ThresholdRule r;
    r.kind = Kind::hard;
    r.multiplier = multiplier;
    return r;
}

ThresholdRule ThresholdRule::max_ratio() {
    ThresholdRule r;
    r.kind = Kind::max_ratio;
    return r;
}

ThresholdRule ThresholdRule::top(std::size_t k) {
    if (k < 1) throw ConfigError("top rule: k must be >= 1");
    ThresholdRule r;
    r.kind = Kind::top_k;
    r.k = k;
    return r;
}

ThresholdRule ThresholdRule::cutoff(double c, double kappa) {
    if (!(c > 0.0)) throw ConfigError("cutoff rule: c must be positive");
    if (kappa < 0.0) throw ConfigError("cutoff rule: kappa must be nonnegative");
    ThresholdRule r;
    r.kind = Kind::cutoff;
    r.c = c;
    r.kappa = kappa;
    return r;
}

ThresholdRule ThresholdRule::parse(const std::string& text) {
    if (text == "max-ratio") return max_ratio();
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto parse_count = [&](const char* what) -> std::size_t {
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(tail, &pos);
            if (pos != tail.size() || tail.empty()) throw std::invalid_argument(tail);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string("rule '") + text + "': expected " + what);
        }
    };
    if (head == "hard") return hard(parse_count("hard:M with integer M >= 1"));
    if (head == "top") return top(parse_count("top:K with integer K >= 1"));
    throw ConfigError("unknown rule '" + text + "' (expected hard:M, max-ratio, or top:K)");
}

std::string ThresholdRule::describe() const {
    switch (kind) {
        case Kind::hard: return "hard:" + std::to_string(multiplier);
        case Kind::max_ratio: return "max-ratio";
        case Kind::top_k: return "top:" + std::to_string(k);
        case Kind::cutoff:
            return "cutoff:c=" + std::to_string(c) + ",kappa=" + std::to_string(kappa);
    }
    return "?";
}

std::size_t ScreenReport::position_of(std::size_t j) const {
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (ranking[i] == j) return i + 1;
    }
    throw DomainError("position_of: predictor index " + std::to_string(j) + " out of range");
}

std::vector<std::size_t> rank_descending(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

std::size_t hard_size(std::size_t n, std::size_t multiplier) {
    if (n < 2) throw DomainError("hard_size: need n >= 2");
    if (multiplier < 1) throw DomainError("hard_size: multiplier must be >= 1");
    const auto base = static_cast<std::size_t>(std::floor(static_cast<double>(n) / std::log(static_cast<double>(n))));
    return multiplier * base;
}

std::vector<std::size_t> hard_threshold(const std::vector<double>& scores, std::size_t n,
                                        std::size_t multiplier) {
    const auto order = rank_descending(scores);
    const std::size_t keep = std::min(order.size(), hard_size(n, multiplier));
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep)};
}

std::size_t max_ratio_threshold(const std::vector<double>& sorted_desc) {
    const std::size_t p = sorted_desc.size();
    if (p < 2) throw DomainError("max-ratio: need at least 2 scores");
    bool any_positive = false;
    for (std::size_t i = 0; i < p; ++i) {
        if (sorted_desc[i] < 0.0) throw DomainError("max-ratio: scores must be nonnegative");
        if (i + 1 < p && sorted_desc[i] < sorted_desc[i + 1]) {
            throw DomainError("max-ratio: scores must be sorted descending");
        }
        if (sorted_desc[i] > 0.0) any_positive = true;
    }
    if (!any_positive) throw DegenerateInput("max-ratio: all scores are zero");

    double best = -1.0;
    std::size_t s0 = 0;
    for (std::size_t j = 1; j < p; ++j) {
        const double num = sorted_desc[j - 1];
        const double den = sorted_desc[j];
        double ratio;
        if (den > 0.0) {
            ratio = num / den;
        } else if (num > 0.0) {
            ratio = std::numeric_limits<double>::infinity();
        } else {
            ratio = 1.0;  // 0/0: no evidence of a gap
        }
        if (ratio > best) {  // strict: earliest maximizer wins
            best = ratio;
            s0 = j;
        }
    }
    return s0;
}

double rank_gap(const std::vector<double>& scores, const std::vector<std::size_t>& active) {
    const std::size_t p = scores.size();
    if (active.empty()) throw DomainError("rank_gap: active set is empty");
    std::vector<char> is_active(p, 0);
    for (std::size_t j : active) {
        if (j >= p) throw DomainError("rank_gap: active index " + std::to_string(j) + " out of range");
        is_active[j] = 1;
    }
    double min_active = std::numeric_limits<double>::infinity();
    double max_inactive = -std::numeric_limits<double>::infinity();
    bool any_inactive = false;
    for (std::size_t j = 0; j < p; ++j) {
        if (is_active[j]) {
            min_active = std::min(min_active, scores[j]);
        } else {
            any_inactive = true;
            max_inactive = std::max(max_inactive, scores[j]);
        }
    }
    if (!any_inactive) throw DomainError("rank_gap: active set covers all predictors");
    return min_active - max_inactive;
}

namespace {

std::vector<std::size_t> apply_rule(const std::vector<double>& scores,
                                    const std::vector<std::size_t>& ranking, std::size_t n,
                                    const ThresholdRule& rule) {
    const std::size_t p = scores.size();
    std::size_t keep = 0;
    switch (rule.kind) {
        case ThresholdRule::Kind::hard:
            keep = std::min(p, hard_size(n, rule.multiplier));
            break;
        case ThresholdRule::Kind::max_ratio: {
            std::vector<double> sorted(p);
            for (std::size_t i = 0; i < p; ++i) sorted[i] = scores[ranking[i]];
            keep = max_ratio_threshold(sorted);
            break;
        }
        case ThresholdRule::Kind::top_k:
            keep = std::min(p, rule.k);
            break;
        case ThresholdRule::Kind::cutoff: {
            const double cut = rule.c * std::pow(static_cast<double>(n), -rule.kappa);
            while (keep < p && scores[ranking[keep]] >= cut) ++keep;
            break;
        }
    }
    return {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(keep)};
}

}  // namespace

ScreenReport screen(const Tensor3& X, const Matrix& Y, Method method, const ThresholdRule& rule,
                    unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = X.n();
    const std::size_t p = X.p();
    if (n != Y.rows()) {
        throw ShapeError("screen: predictors have " + std::to_string(n) + " samples but response has " +
                         std::to_string(Y.rows()));
    }
    if (n < 2) throw DomainError("screen: need at least 2 samples");
    if (p < 1) throw DomainError("screen: need at least 1 predictor");
    if (Y.cols() < 1) throw DomainError("screen: response has no columns");
    if (!Y.all_finite()) throw DomainError("screen: response contains non-finite entries");
    if (threads == 0) threads = default_thread_count();

    ScreenReport report;
    report.n = n;
    report.p = p;
    report.d = X.d();
    report.q = Y.cols();
    report.method = method;
    report.rule = rule;
    report.scores.assign(p, 0.0);
    std::vector<std::string> warn(p);

    auto warn_degenerate = [&](std::size_t j, const char* detail) {
        warn[j] = "predictor " + std::to_string(j) + " scored 0: " + detail;
    };

    if (method == Method::sis) {
        if (X.d() != 1 || Y.cols() != 1) {
            throw CapabilityError("sis handles only univariate predictors and response (d=1, q=1); got d=" +
                                  std::to_string(X.d()) + ", q=" + std::to_string(Y.cols()));
        }
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = Y(i, 0);
        {
            // fail the whole run early when the response carries no signal
            const double mean = pairwise_sum(y) / static_cast<double>(n);
            double ss = 0.0;
            for (double v : y) ss += (v - mean) * (v - mean);
            if (!(ss > 0.0)) throw DegenerateInput("screen: response is constant");
        }
        parallel_for(p, threads, [&](std::size_t begin, std::size_t end) {
            std::vector<double> x(n);
            for (std::size_t j = begin; j < end; ++j) {
                for (std::size_t i = 0; i < n; ++i) x[i] = X.at(i, j, 0);
                try {
                    report.scores[j] = baselines::sis_score(x, y);
                } catch (const DegenerateInput&) {
                    report.scores[j] = 0.0;
                    warn_degenerate(j, "zero variance");
                }
            }
        });
    } else if (method == Method::dcsis) {
        const auto ysum = dcor::summarize(Y);
        if (!(ysum.dvar > 0.0)) throw DegenerateInput("screen: response has zero distance variance");
        parallel_for(p, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j) {
                try {
                    const auto xsum = dcor::summarize(X.predictor(j));
                    if (!(xsum.dvar > 0.0)) throw DegenerateInput("constant predictor");
                    const double r = dcor::dcor(xsum, ysum);
                    report.scores[j] = r * r;
                } catch (const DegenerateInput& e) {
                    report.scores[j] = 0.0;
                    warn_degenerate(j, e.what());
                }
            }
        });
    } else {
        if (dcor::constant_rows(Y)) throw DegenerateInput("screen: response has all rows identical");
        const auto ry = mrank::ranks(Y);
        const auto ysum = dcor::summarize(ry.points);
        parallel_for(p, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j) {
                try {
                    report.scores[j] = dcor::mrdc_vs_summary(X.predictor(j), ysum);
                } catch (const DegenerateInput& e) {
                    report.scores[j] = 0.0;
                    warn_degenerate(j, e.what());
                }
            }
        });
    }

    report.ranking = rank_descending(report.scores);
    report.selected = apply_rule(report.scores, report.ranking, n, rule);
    for (auto& w : warn) {
        if (!w.empty()) report.warnings.push_back(std::move(w));
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace mrdcs::screening
