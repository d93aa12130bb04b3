#include "mrdcs/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "mrdcs/error.hpp"
#include "mrdcs/parallel.hpp"
#include "mrdcs/rng.hpp"

namespace mrdcs::simgen {

namespace {

constexpr const char* kExamples[] = {"ex1-case1", "ex1-case2", "ex2",
                                     "ex3-case1", "ex3-case2", "gaussian-rho"};

bool known_example(const std::string& id) {
    return std::find(std::begin(kExamples), std::end(kExamples), id) != std::end(kExamples);
}

// Fixed sub-stream labels inside one replicate.
enum Stream : std::uint64_t {
    kPlatformU = 0,
    kPlatformV = 1,
    kPlatformW = 2,
    kModel = 3,
    kNoise = 4,
    kInert = 5,
};

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

}  // namespace

void SimDesign::validate() const {
    if (!known_example(example)) {
        throw ConfigError("unknown example '" + example +
                          "' (expected ex1-case1, ex1-case2, ex2, ex3-case1, ex3-case2, "
                          "or gaussian-rho)");
    }
    if (n < 2) throw ConfigError("design: n must be >= 2");
    if (reps < 1) throw ConfigError("design: reps must be >= 1");
    const auto active = active_set();
    const std::size_t need = *std::max_element(active.begin(), active.end()) + 1;
    if (p < need) {
        throw ConfigError("design: example " + example + " needs p >= " + std::to_string(need) +
                          ", got " + std::to_string(p));
    }
    if (example == "gaussian-rho") {
        if (p != 1) throw ConfigError("design: gaussian-rho uses exactly p = 1");
        if (!(std::abs(rho) < 1.0)) throw ConfigError("design: |rho| must be < 1");
    }
    if (threshold_multipliers.empty()) throw ConfigError("design: thresholds must be nonempty");
    for (std::size_t i = 0; i < threshold_multipliers.size(); ++i) {
        if (threshold_multipliers[i] < 1) throw ConfigError("design: threshold multipliers must be >= 1");
        if (i > 0 && threshold_multipliers[i] <= threshold_multipliers[i - 1]) {
            throw ConfigError("design: threshold multipliers must be strictly increasing");
        }
    }
}

std::size_t SimDesign::response_dim() const {
    if (example == "ex2" || example == "ex3-case1" || example == "ex3-case2") return 10;
    return 1;
}

std::size_t SimDesign::predictor_dim() const {
    if (example == "ex2" || example == "ex3-case1" || example == "ex3-case2") return 3;
    return 1;
}

std::vector<std::size_t> SimDesign::active_set() const {
    if (example == "ex1-case1" || example == "ex1-case2") return {0, 5, 11, 21};
    if (example == "ex2") return {1, 3, 100, 101};
    if (example == "ex3-case1" || example == "ex3-case2") return {1, 2, 100, 101};
    if (example == "gaussian-rho") return {0};
    throw ConfigError("unknown example '" + example + "'");
}

SimDesign SimDesign::from_json(const nlohmann::json& j) {
    SimDesign d;
    try {
        d.example = j.at("example").get<std::string>();
        d.n = j.at("n").get<std::size_t>();
        d.p = j.at("p").get<std::size_t>();
        d.reps = j.at("reps").get<std::size_t>();
        d.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("thresholds")) {
            d.threshold_multipliers = j.at("thresholds").get<std::vector<std::size_t>>();
        }
        if (j.contains("rho")) d.rho = j.at("rho").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("design JSON: ") + e.what());
    }
    d.validate();
    return d;
}

SimDesign SimDesign::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open design file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("design file " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json SimDesign::to_json() const {
    nlohmann::json j{{"example", example}, {"n", n},       {"p", p},
                     {"reps", reps},       {"seed", seed}, {"thresholds", threshold_multipliers}};
    if (example == "gaussian-rho") j["rho"] = rho;
    return j;
}

Matrix gen_ar1_gaussian(std::size_t n, std::size_t p, double rho, std::uint64_t seed) {
    if (!(std::abs(rho) < 1.0)) throw DomainError("gen_ar1_gaussian: require |rho| < 1");
    if (n < 1 || p < 1) throw DomainError("gen_ar1_gaussian: need n >= 1 and p >= 1");
    Matrix out(n, p);
    Rng rng(seed);
    const double innov = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        double z = rng.normal();
        out(i, 0) = z;
        for (std::size_t j = 1; j < p; ++j) {
            z = rho * z + innov * rng.normal();
            out(i, j) = z;
        }
    }
    return out;
}

Matrix gen_mvt(std::size_t n, std::size_t p, double rho, unsigned df, std::uint64_t seed) {
    if (df < 1) throw DomainError("gen_mvt: df must be >= 1");
    if (!(std::abs(rho) < 1.0)) throw DomainError("gen_mvt: require |rho| < 1");
    if (n < 1 || p < 1) throw DomainError("gen_mvt: need n >= 1 and p >= 1");
    Matrix out(n, p);
    Rng rng(seed);
    const double innov = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        double z = rng.normal();
        out(i, 0) = z;
        for (std::size_t j = 1; j < p; ++j) {
            z = rho * z + innov * rng.normal();
            out(i, j) = z;
        }
        const double scale = std::sqrt(rng.chi_squared(df) / static_cast<double>(df));
        for (std::size_t j = 0; j < p; ++j) out(i, j) /= scale;
    }
    return out;
}

Matrix gen_mv_pareto(std::size_t n, std::size_t p, double rho, double shape, double scale,
                     std::uint64_t seed) {
    if (!(shape > 0.0)) throw DomainError("gen_mv_pareto: shape must be positive");
    if (!(scale > 0.0)) throw DomainError("gen_mv_pareto: scale must be positive");
    Matrix out = gen_ar1_gaussian(n, p, rho, seed);
    for (double& v : out.storage()) {
        const double u = normal_cdf(v);
        v = scale * std::pow(u, -1.0 / shape);
    }
    return out;
}

namespace {

Tensor3 to_tensor(const Matrix& m) {
    Tensor3 t(m.rows(), m.cols(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t.at(i, j, 0) = m(i, j);
    return t;
}

Tensor3 stack_platforms(const Matrix& u, const Matrix& v, const Matrix& w) {
    Tensor3 t(u.rows(), u.cols(), 3);
    for (std::size_t i = 0; i < u.rows(); ++i) {
        for (std::size_t j = 0; j < u.cols(); ++j) {
            t.at(i, j, 0) = u(i, j);
            t.at(i, j, 1) = v(i, j);
            t.at(i, j, 2) = w(i, j);
        }
    }
    return t;
}

// Replace a response column by its empirical quartile bin (0..3); bin sizes
// are n/4 up to integer rounding.
void discretize_quartiles(Matrix& y, std::size_t col) {
    const std::size_t n = y.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return y(a, col) < y(b, col); });
    for (std::size_t pos = 0; pos < n; ++pos) {
        y(order[pos], col) = static_cast<double>(pos * 4 / n);
    }
}

Replicate build_ex1(const SimDesign& design, std::uint64_t rep_seed, bool normal_noise) {
    const std::size_t n = design.n, p = design.p;
    const Matrix x = gen_mvt(n, p, 0.5, 1, split_seed(rep_seed, kPlatformU));

    Replicate rep;
    rep.truth.active = design.active_set();
    Rng model(split_seed(rep_seed, kModel));
    std::array<double, 4> beta{};
    for (double& b : beta) b = model.uniform(2.0, 5.0);
    rep.truth.beta.push_back(beta);

    Rng noise(split_seed(rep_seed, kNoise));
    rep.Y = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double eps = normal_noise ? noise.normal() : noise.student_t(1);
        rep.Y(i, 0) = beta[0] * x(i, 0) + beta[1] * x(i, 5) + beta[2] * x(i, 11) * x(i, 11) +
                      beta[3] * x(i, 21) + eps;
    }
    rep.X = to_tensor(x);
    return rep;
}

// Shared scaffold for the two three-platform examples: four active response
// components each mix platform-sampled terms at the active columns, the
// rest are pure noise.
template <typename NoiseFn, typename InertFn>
Replicate build_platform_example(const SimDesign& design, std::uint64_t rep_seed, const Matrix& u,
                                 const Matrix& v, const Matrix& w,
                                 const std::array<std::size_t, 4>& cols, NoiseFn&& draw_noise,
                                 InertFn&& draw_inert) {
    const std::size_t n = design.n;
    const std::size_t q = design.response_dim();
    const Matrix* plat[3] = {&u, &v, &w};

    Replicate rep;
    rep.truth.active = design.active_set();
    Rng model(split_seed(rep_seed, kModel));
    Rng noise(split_seed(rep_seed, kNoise));
    rep.Y = Matrix(n, q);
    for (std::size_t k = 0; k < 4; ++k) {
        std::array<int, 4> ids{};
        for (int& id : ids) id = static_cast<int>(model.uniform_int(3));
        std::array<double, 4> beta{};
        for (double& b : beta) b = model.uniform(1.0, 2.0);
        rep.truth.platform_ids.push_back(ids);
        rep.truth.beta.push_back(beta);
        for (std::size_t i = 0; i < n; ++i) {
            const double t4 = (*plat[ids[3]])(i, cols[3]);
            rep.Y(i, k) = beta[0] * (*plat[ids[0]])(i, cols[0]) +
                          beta[1] * (*plat[ids[1]])(i, cols[1]) +
                          beta[2] * (*plat[ids[2]])(i, cols[2]) + beta[3] * t4 * t4 +
                          draw_noise(noise);
        }
    }
    Rng inert(split_seed(rep_seed, kInert));
    for (std::size_t k = 4; k < q; ++k) {
        for (std::size_t i = 0; i < n; ++i) rep.Y(i, k) = draw_inert(inert);
    }
    rep.X = stack_platforms(u, v, w);
    return rep;
}

Replicate build_ex2(const SimDesign& design, std::uint64_t rep_seed) {
    const std::size_t n = design.n, p = design.p;
    const Matrix u = gen_mvt(n, p, 0.8, 2, split_seed(rep_seed, kPlatformU));
    const Matrix v = gen_mvt(n, p, 0.8, 1, split_seed(rep_seed, kPlatformV));
    const Matrix w = gen_mvt(n, p, 0.8, 3, split_seed(rep_seed, kPlatformW));
    return build_platform_example(
        design, rep_seed, u, v, w, {1, 3, 100, 101},
        [](Rng& r) { return r.student_t(1); }, [](Rng& r) { return r.student_t(1); });
}

Replicate build_ex3(const SimDesign& design, std::uint64_t rep_seed, bool discretize) {
    const std::size_t n = design.n, p = design.p;
    const Matrix u = gen_mv_pareto(n, p, 0.8, 10.0, 15.0, split_seed(rep_seed, kPlatformU));
    Matrix v(n, p);
    {
        Rng vr(split_seed(rep_seed, kPlatformV));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j)
                v(i, j) = static_cast<double>(vr.binomial(4, 0.3));
    }
    const Matrix w = gen_mv_pareto(n, p, 0.8, 12.0, 30.0, split_seed(rep_seed, kPlatformW));
    Replicate rep = build_platform_example(
        design, rep_seed, u, v, w, {1, 2, 100, 101},
        [](Rng& r) { return r.pareto(10.0, 15.0); }, [](Rng& r) { return r.pareto(10.0, 15.0); });
    if (discretize) discretize_quartiles(rep.Y, 1);
    return rep;
}

Replicate build_gaussian_rho(const SimDesign& design, std::uint64_t rep_seed) {
    const Matrix g = gen_ar1_gaussian(design.n, 2, design.rho, split_seed(rep_seed, kPlatformU));
    Replicate rep;
    rep.truth.active = {0};
    rep.X = Tensor3(design.n, 1, 1);
    rep.Y = Matrix(design.n, 1);
    for (std::size_t i = 0; i < design.n; ++i) {
        rep.X.at(i, 0, 0) = g(i, 0);
        rep.Y(i, 0) = g(i, 1);
    }
    return rep;
}

}  // namespace

Replicate build_example(const SimDesign& design, std::size_t replicate) {
    design.validate();
    if (replicate >= design.reps) {
        throw DomainError("build_example: replicate " + std::to_string(replicate) +
                          " out of range (reps = " + std::to_string(design.reps) + ")");
    }
    const std::uint64_t rep_seed = design.seed ^ static_cast<std::uint64_t>(replicate);
    if (design.example == "ex1-case1") return build_ex1(design, rep_seed, true);
    if (design.example == "ex1-case2") return build_ex1(design, rep_seed, false);
    if (design.example == "ex2") return build_ex2(design, rep_seed);
    if (design.example == "ex3-case1") return build_ex3(design, rep_seed, false);
    if (design.example == "ex3-case2") return build_ex3(design, rep_seed, true);
    if (design.example == "gaussian-rho") return build_gaussian_rho(design, rep_seed);
    throw ConfigError("unknown example '" + design.example + "'");
}

SimReport evaluate(const std::vector<screening::ScreenReport>& reports,
                   const std::vector<std::size_t>& active,
                   const std::vector<std::size_t>& thresholds) {
    if (reports.empty()) throw DomainError("evaluate: no replicate reports");
    if (active.empty()) throw DomainError("evaluate: active set is empty");
    if (thresholds.empty()) throw DomainError("evaluate: no thresholds");
    const std::size_t p = reports[0].p;
    for (const auto& r : reports) {
        if (r.p != p) throw ShapeError("evaluate: replicate reports disagree on p");
    }
    for (std::size_t a : active) {
        if (a >= p) throw DomainError("evaluate: active index " + std::to_string(a) + " out of range");
    }
    for (std::size_t t = 1; t < thresholds.size(); ++t) {
        if (thresholds[t] <= thresholds[t - 1]) {
            throw DomainError("evaluate: thresholds must be strictly increasing");
        }
    }

    SimReport out;
    out.method = screening::to_string(reports[0].method);
    out.n = reports[0].n;
    out.p = p;
    out.reps = reports.size();
    out.active = active;
    out.thresholds = thresholds;
    out.ps.assign(active.size(), std::vector<double>(thresholds.size(), 0.0));
    out.pa.assign(thresholds.size(), 0.0);

    std::vector<std::size_t> position(p);
    for (const auto& rep : reports) {
        for (std::size_t i = 0; i < p; ++i) position[rep.ranking[i]] = i + 1;
        std::size_t s = 0;
        for (std::size_t ai = 0; ai < active.size(); ++ai) {
            const std::size_t pos = position[active[ai]];
            s = std::max(s, pos);
            for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
                if (pos <= thresholds[ti]) out.ps[ai][ti] += 1.0;
            }
        }
        for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
            if (s <= thresholds[ti]) out.pa[ti] += 1.0;
        }
        out.s_values.push_back(s);
        out.rank_gaps.push_back(screening::rank_gap(rep.scores, active));
    }

    const auto reps = static_cast<double>(out.reps);
    for (auto& row : out.ps)
        for (double& v : row) v /= reps;
    for (double& v : out.pa) v /= reps;

    double mean = 0.0;
    for (std::size_t s : out.s_values) mean += static_cast<double>(s);
    mean /= reps;
    out.s_mean = mean;
    if (out.reps < 2) {
        out.s_std = std::numeric_limits<double>::quiet_NaN();
    } else {
        double ss = 0.0;
        for (std::size_t s : out.s_values) {
            const double d = static_cast<double>(s) - mean;
            ss += d * d;
        }
        out.s_std = std::sqrt(ss / (reps - 1.0));
    }
    std::size_t positive = 0;
    for (double g : out.rank_gaps)
        if (g > 0.0) ++positive;
    out.rank_gap_positive_rate = static_cast<double>(positive) / reps;
    return out;
}

SimReport run_design(const SimDesign& design, screening::Method method, unsigned threads) {
    design.validate();
    if (threads == 0) threads = default_thread_count();
    std::vector<std::size_t> thresholds;
    for (std::size_t m : design.threshold_multipliers) {
        thresholds.push_back(screening::hard_size(design.n, m));
    }
    std::vector<screening::ScreenReport> reports(design.reps);
    const auto rule = screening::ThresholdRule::hard(design.threshold_multipliers.front());
    parallel_for(design.reps, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const Replicate rep = build_example(design, r);
            reports[r] = screening::screen(rep.X, rep.Y, method, rule, 1);
        }
    });
    SimReport report = evaluate(reports, design.active_set(), thresholds);
    report.example = design.example;
    return report;
}

nlohmann::json SimReport::to_json() const {
    nlohmann::json j;
    j["example"] = example;
    j["method"] = method;
    j["n"] = n;
    j["p"] = p;
    j["reps"] = reps;
    j["active"] = active;
    j["thresholds"] = thresholds;
    j["s"] = {{"values", s_values}, {"mean", s_mean}};
    if (std::isnan(s_std)) {
        j["s"]["std"] = nullptr;
    } else {
        j["s"]["std"] = s_std;
    }
    j["ps"] = ps;
    j["pa"] = pa;
    j["rank_gap"] = {{"values", rank_gaps}, {"positive_rate", rank_gap_positive_rate}};
    return j;
}

std::string SimReport::table() const {
    std::ostringstream os;
    char buf[64];
    os << "design " << example << ", method " << method << ": n=" << n << " p=" << p
       << " reps=" << reps << "\n";
    os << "  S: mean " << fmt(s_mean, 2) << ", std " << (std::isnan(s_std) ? "n/a" : fmt(s_std, 2))
       << "\n";
    auto cell = [&](const std::string& text) {
        std::snprintf(buf, sizeof(buf), " %7s", text.c_str());
        os << buf;
    };
    std::snprintf(buf, sizeof(buf), "  %-10s", "");
    os << buf;
    for (std::size_t t : thresholds) cell("d=" + std::to_string(t));
    os << "\n";
    for (std::size_t ai = 0; ai < active.size(); ++ai) {
        std::snprintf(buf, sizeof(buf), "  %-10s", ("Ps[x" + std::to_string(active[ai]) + "]").c_str());
        os << buf;
        for (double v : ps[ai]) cell(fmt(v));
        os << "\n";
    }
    std::snprintf(buf, sizeof(buf), "  %-10s", "Pa");
    os << buf;
    for (double v : pa) cell(fmt(v));
    os << "\n";
    os << "  rank gap > 0 in " << fmt(100.0 * rank_gap_positive_rate, 1) << "% of replicates\n";
    return os.str();
}

std::string comparison_table(const std::vector<SimReport>& reports) {
    std::ostringstream os;
    if (reports.empty()) return "";
    const auto& first = reports.front();
    os << "design " << first.example << " (n=" << first.n << ", p=" << first.p
       << ", reps=" << first.reps << "); thresholds";
    for (std::size_t t : first.thresholds) os << " " << t;
    os << "\n";
    os << "metric      ";
    for (const auto& r : reports) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %10s", r.method.c_str());
        os << buf;
    }
    os << "\n";
    auto row = [&](const std::string& name, auto getter) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%-12s", name.c_str());
        os << buf;
        for (const auto& r : reports) {
            std::snprintf(buf, sizeof(buf), " %10s", getter(r).c_str());
            os << buf;
        }
        os << "\n";
    };
    row("S.mean", [](const SimReport& r) { return fmt(r.s_mean, 2); });
    row("S.std", [](const SimReport& r) { return std::isnan(r.s_std) ? std::string("n/a") : fmt(r.s_std, 2); });
    for (std::size_t ti = 0; ti < first.thresholds.size(); ++ti) {
        row("Pa(" + std::to_string(first.thresholds[ti]) + ")",
            [ti](const SimReport& r) { return fmt(r.pa[ti]); });
    }
    for (std::size_t ti = 0; ti < first.thresholds.size(); ++ti) {
        for (std::size_t ai = 0; ai < first.active.size(); ++ai) {
            row("Ps[x" + std::to_string(first.active[ai]) + "](" +
                    std::to_string(first.thresholds[ti]) + ")",
                [ai, ti](const SimReport& r) { return fmt(r.ps[ai][ti]); });
        }
    }
    return os.str();
}

}  // namespace mrdcs::simgen
