#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mrdcs/error.hpp"
#include "mrdcs/rng.hpp"
#include "mrdcs/screening.hpp"

using namespace mrdcs;
using screening::ThresholdRule;

namespace {

// n samples, p univariate predictors; the response tracks predictor 0 with a
// small noise floor so every method should rank it first.
struct Fixture {
    Tensor3 X;
    Matrix Y;
};

Fixture linear_fixture(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    Fixture f;
    f.X = Tensor3(n, p, 1);
    f.Y = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) f.X.at(i, j, 0) = rng.normal();
        f.Y(i, 0) = 3.0 * f.X.at(i, 0, 0) + 0.1 * rng.normal();
    }
    return f;
}

}  // namespace

TEST_CASE("hard threshold size is floor(n / ln n) times the multiplier") {
    CHECK(screening::hard_size(200, 1) == 37);
    CHECK(screening::hard_size(200, 2) == 74);
    CHECK(screening::hard_size(200, 3) == 111);
    CHECK(screening::hard_size(8, 1) == 3);
    CHECK(screening::hard_size(3, 1) == 2);
    CHECK_THROWS_AS(screening::hard_size(1, 1), DomainError);
    CHECK_THROWS_AS(screening::hard_size(0, 1), DomainError);
    CHECK_THROWS_AS(screening::hard_size(200, 0), DomainError);
}

TEST_CASE("max-ratio picks the largest consecutive score drop") {
    CHECK(screening::max_ratio_threshold({0.9, 0.8, 0.7, 0.1, 0.05}) == 3);
    CHECK(screening::max_ratio_threshold({1.0, 0.5}) == 1);
    CHECK(screening::max_ratio_threshold({0.9, 0.9, 0.3, 0.3}) == 2);
    // a zero after a positive score is an infinite drop
    CHECK(screening::max_ratio_threshold({0.5, 0.4, 0.0, 0.0}) == 2);
    // equal maximal ratios: earliest split wins (3 == 3)
    CHECK(screening::max_ratio_threshold({0.9, 0.3, 0.1}) == 1);
}

TEST_CASE("max-ratio input validation") {
    CHECK_THROWS_AS(screening::max_ratio_threshold({0.5}), DomainError);
    CHECK_THROWS_AS(screening::max_ratio_threshold({0.5, -0.1}), DomainError);
    CHECK_THROWS_AS(screening::max_ratio_threshold({0.1, 0.5}), DomainError);
    CHECK_THROWS_AS(screening::max_ratio_threshold({0.0, 0.0, 0.0}), DegenerateInput);
}

TEST_CASE("descending ranking breaks ties by ascending index") {
    CHECK(screening::rank_descending({0.1, 0.5, 0.5, 0.2}) ==
          std::vector<std::size_t>{1, 2, 3, 0});
    CHECK(screening::rank_descending({}).empty());
}

TEST_CASE("hard_threshold returns the top slice of the ranking") {
    const std::vector<double> scores{0.3, 0.9, 0.1, 0.5, 0.2, 0.05, 0.4, 0.35};
    const auto kept = screening::hard_threshold(scores, 8, 1);  // floor(8/ln 8) = 3
    CHECK(kept == std::vector<std::size_t>{1, 3, 6});
}

TEST_CASE("rank gap separates active from inactive scores") {
    const std::vector<double> scores{5, 1, 4, 2};
    CHECK(screening::rank_gap(scores, {0, 2}) == 2.0);
    CHECK(screening::rank_gap(scores, {1}) == 1.0 - 5.0);
    CHECK_THROWS_AS(screening::rank_gap(scores, {}), DomainError);
    CHECK_THROWS_AS(screening::rank_gap(scores, {4}), DomainError);
    CHECK_THROWS_AS(screening::rank_gap(scores, {0, 1, 2, 3}), DomainError);
}

TEST_CASE("threshold rules parse and describe round-trip") {
    CHECK(ThresholdRule::parse("hard:2").kind == ThresholdRule::Kind::hard);
    CHECK(ThresholdRule::parse("hard:2").multiplier == 2);
    CHECK(ThresholdRule::parse("max-ratio").kind == ThresholdRule::Kind::max_ratio);
    CHECK(ThresholdRule::parse("top:10").kind == ThresholdRule::Kind::top_k);
    CHECK(ThresholdRule::parse("top:10").k == 10);
    CHECK(ThresholdRule::parse("hard:3").describe() == "hard:3");
    CHECK(ThresholdRule::parse("top:5").describe() == "top:5");
    CHECK(ThresholdRule::parse("max-ratio").describe() == "max-ratio");

    CHECK_THROWS_AS(ThresholdRule::parse("hard:0"), ConfigError);
    CHECK_THROWS_AS(ThresholdRule::parse("hard:x"), ConfigError);
    CHECK_THROWS_AS(ThresholdRule::parse("top:"), ConfigError);
    CHECK_THROWS_AS(ThresholdRule::parse("bogus"), ConfigError);
    CHECK_THROWS_AS(ThresholdRule::cutoff(-1.0, 0.5), ConfigError);
}

TEST_CASE("method names round-trip") {
    using screening::Method;
    CHECK(screening::method_from_string("mrdc") == Method::mrdc);
    CHECK(screening::method_from_string("dcsis") == Method::dcsis);
    CHECK(screening::method_from_string("sis") == Method::sis);
    CHECK(screening::to_string(Method::dcsis) == "dcsis");
    CHECK_THROWS_AS(screening::method_from_string("pearson"), ConfigError);
}

TEST_CASE("every method ranks the driving predictor first on a linear signal") {
    const auto f = linear_fixture(80, 8, 42);
    for (auto method : {screening::Method::mrdc, screening::Method::dcsis,
                        screening::Method::sis}) {
        const auto report = screening::screen(f.X, f.Y, method, ThresholdRule::hard(1), 1);
        CHECK(report.ranking[0] == 0);
        CHECK(report.n == 80);
        CHECK(report.p == 8);
        CHECK(report.d == 1);
        CHECK(report.q == 1);
        CHECK(report.scores.size() == 8);
        CHECK(report.warnings.empty());
        CHECK(report.elapsed_seconds >= 0.0);
        // p < floor(n/ln n), so the hard rule keeps everything
        CHECK(report.selected.size() == 8);
        CHECK(report.position_of(0) == 1);
    }
}

TEST_CASE("selected is always a prefix of the ranking") {
    const auto f = linear_fixture(60, 10, 7);
    for (const auto& rule : {ThresholdRule::hard(1), ThresholdRule::max_ratio(),
                             ThresholdRule::top(4), ThresholdRule::cutoff(0.5, 0.25)}) {
        const auto report =
            screening::screen(f.X, f.Y, screening::Method::mrdc, rule, 1);
        REQUIRE(report.selected.size() <= report.ranking.size());
        for (std::size_t i = 0; i < report.selected.size(); ++i) {
            CHECK(report.selected[i] == report.ranking[i]);
        }
    }
    const auto top4 = screening::screen(f.X, f.Y, screening::Method::mrdc,
                                        ThresholdRule::top(4), 1);
    CHECK(top4.selected.size() == 4);
}

TEST_CASE("scores are deterministic and independent of the thread count") {
    const auto f = linear_fixture(50, 12, 99);
    const auto one = screening::screen(f.X, f.Y, screening::Method::mrdc,
                                       ThresholdRule::hard(1), 1);
    const auto four = screening::screen(f.X, f.Y, screening::Method::mrdc,
                                        ThresholdRule::hard(1), 4);
    CHECK(one.scores == four.scores);
    CHECK(one.ranking == four.ranking);
    CHECK(one.selected == four.selected);

    const auto again = screening::screen(f.X, f.Y, screening::Method::mrdc,
                                         ThresholdRule::hard(1), 1);
    CHECK(one.scores == again.scores);
}

TEST_CASE("rank-based scores ignore monotone rescaling of the data") {
    auto f = linear_fixture(50, 6, 5);
    const auto base = screening::screen(f.X, f.Y, screening::Method::mrdc,
                                        ThresholdRule::hard(1), 1);
    Fixture scaled = f;
    for (double& v : scaled.X.storage()) v *= 4.0;  // exact in floating point
    for (double& v : scaled.Y.storage()) v *= 4.0;
    const auto moved = screening::screen(scaled.X, scaled.Y, screening::Method::mrdc,
                                         ThresholdRule::hard(1), 1);
    CHECK(base.scores == moved.scores);
}

TEST_CASE("constant predictors score zero with a warning instead of failing the run") {
    auto f = linear_fixture(40, 5, 12);
    for (std::size_t i = 0; i < 40; ++i) f.X.at(i, 3, 0) = 2.5;
    for (auto method : {screening::Method::mrdc, screening::Method::dcsis,
                        screening::Method::sis}) {
        const auto report = screening::screen(f.X, f.Y, method, ThresholdRule::hard(1), 1);
        CHECK(report.scores[3] == 0.0);
        REQUIRE(report.warnings.size() == 1);
        CHECK(report.warnings[0].find("predictor 3") != std::string::npos);
        CHECK(report.ranking.back() == 3);  // zero score sinks to the bottom
    }
}

TEST_CASE("a constant response fails the whole run") {
    auto f = linear_fixture(30, 4, 8);
    for (std::size_t i = 0; i < 30; ++i) f.Y(i, 0) = 1.0;
    for (auto method : {screening::Method::mrdc, screening::Method::dcsis,
                        screening::Method::sis}) {
        CHECK_THROWS_AS(screening::screen(f.X, f.Y, method, ThresholdRule::hard(1), 1),
                        DegenerateInput);
    }
}

TEST_CASE("the correlation screener refuses multivariate data") {
    Rng rng(3);
    Tensor3 X(20, 3, 2);
    for (double& v : X.storage()) v = rng.normal();
    Matrix y1(20, 1);
    for (std::size_t i = 0; i < 20; ++i) y1(i, 0) = rng.normal();
    CHECK_THROWS_AS(screening::screen(X, y1, screening::Method::sis,
                                      ThresholdRule::hard(1), 1),
                    CapabilityError);

    Tensor3 X1(20, 3, 1);
    for (double& v : X1.storage()) v = rng.normal();
    Matrix y2(20, 2);
    for (double& v : y2.storage()) v = rng.normal();
    CHECK_THROWS_AS(screening::screen(X1, y2, screening::Method::sis,
                                      ThresholdRule::hard(1), 1),
                    CapabilityError);
    // the rank-based and distance screeners accept the same inputs
    CHECK_NOTHROW(screening::screen(X, y2, screening::Method::mrdc, ThresholdRule::hard(1), 1));
    CHECK_NOTHROW(screening::screen(X, y2, screening::Method::dcsis, ThresholdRule::hard(1), 1));
}

TEST_CASE("shape and domain validation on screen inputs") {
    const auto f = linear_fixture(20, 3, 1);
    Matrix wrong(10, 1);
    CHECK_THROWS_AS(screening::screen(f.X, wrong, screening::Method::mrdc,
                                      ThresholdRule::hard(1), 1),
                    ShapeError);
    Matrix bad = f.Y;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(screening::screen(f.X, bad, screening::Method::mrdc,
                                      ThresholdRule::hard(1), 1),
                    DomainError);
    Tensor3 empty(20, 0, 1);
    CHECK_THROWS_AS(screening::screen(empty, f.Y, screening::Method::mrdc,
                                      ThresholdRule::hard(1), 1),
                    DomainError);
}
