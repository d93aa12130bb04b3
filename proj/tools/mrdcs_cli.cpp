// mrdcs: rank predictors by multivariate-rank distance correlation, run the
// synthetic benchmark designs, or dump low-discrepancy point sets.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrdcs/error.hpp"
#include "mrdcs/io.hpp"
#include "mrdcs/lds.hpp"
#include "mrdcs/parallel.hpp"
#include "mrdcs/screening.hpp"
#include "mrdcs/simgen.hpp"
#include "mrdcs/version.hpp"

namespace fs = std::filesystem;
using namespace mrdcs;

namespace {

struct ScreenArgs {
    std::string manifest;
    std::string method = "mrdc";
    std::string rule = "hard:1";
    std::string out;
    unsigned threads = 0;
};

struct SimulateArgs {
    std::string design;
    std::string methods = "mrdc";
    std::string out;
    unsigned threads = 0;
};

struct SobolArgs {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::string table;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

int cmd_screen(const ScreenArgs& args) {
    const auto manifest = io::DatasetManifest::load_file(args.manifest);
    const auto method = screening::method_from_string(args.method);
    const auto rule = screening::ThresholdRule::parse(args.rule);
    const unsigned threads = args.threads ? args.threads : default_thread_count();

    const io::Dataset ds = io::load_dataset(manifest);
    std::fprintf(stderr, "loaded %zu samples x %zu features x %zu platforms, %zu response columns\n",
                 ds.X.n(), ds.X.p(), ds.X.d(), ds.Y.cols());

    const auto report = screening::screen(ds.X, ds.Y, method, rule, threads);

    // threads deliberately left out: they must not change results
    const std::string config =
        manifest.to_json().dump() + "|method=" + args.method + "|rule=" + rule.describe();
    const auto paths = io::write_report(report, args.out, config, ds.feature_names);

    std::printf("method %s, rule %s: n=%zu p=%zu d=%zu q=%zu\n", args.method.c_str(),
                rule.describe().c_str(), report.n, report.p, report.d, report.q);
    std::printf("selected %zu of %zu predictors; %zu warning(s); %.2f s\n", report.selected.size(),
                report.p, report.warnings.size(), report.elapsed_seconds);
    std::printf("%5s  %8s  %-24s  %s\n", "rank", "index", "feature", "score");
    const std::size_t show = std::min<std::size_t>(20, report.p);
    for (std::size_t i = 0; i < show; ++i) {
        const std::size_t j = report.ranking[i];
        const std::string name = ds.feature_names.empty() ? "" : ds.feature_names[j];
        std::printf("%5zu  %8zu  %-24s  %.6g\n", i + 1, j, name.c_str(), report.scores[j]);
    }
    std::printf("report: %s, %s\n", paths.json.c_str(), paths.csv.c_str());
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    const auto design = simgen::SimDesign::load_file(args.design);
    const auto method_names = split_list(args.methods);
    if (method_names.empty()) throw ConfigError("simulate: --methods list is empty");
    std::vector<screening::Method> methods;
    for (const auto& name : method_names) methods.push_back(screening::method_from_string(name));
    const unsigned threads = args.threads ? args.threads : default_thread_count();

    std::vector<simgen::SimReport> reports;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        std::fprintf(stderr, "running %s on %s (%zu replicates)...\n", method_names[m].c_str(),
                     design.example.c_str(), design.reps);
        simgen::SimReport report = simgen::run_design(design, methods[m], threads);
        const std::string path =
            (fs::path(args.out) / (design.example + "-" + method_names[m] + ".json")).string();
        io::atomic_write(path, report.to_json().dump(2) + "\n");
        std::printf("%s", report.table().c_str());
        std::printf("written: %s\n", path.c_str());
        reports.push_back(std::move(report));
    }
    const std::string comparison = simgen::comparison_table(reports);
    std::printf("%s", comparison.c_str());
    const std::string cmp_path =
        (fs::path(args.out) / (design.example + "-comparison.txt")).string();
    io::atomic_write(cmp_path, comparison);
    std::printf("written: %s\n", cmp_path.c_str());
    return 0;
}

int cmd_sobol(const SobolArgs& args) {
    lds::TargetPointSet points;
    if (args.table.empty()) {
        points = lds::sobol_points(args.n, args.dim);
    } else {
        const auto table = lds::load_direction_numbers_file(args.table);
        points = lds::sobol_points(args.n, args.dim, table);
    }
    for (std::size_t i = 0; i < points.points.rows(); ++i) {
        for (std::size_t j = 0; j < points.points.cols(); ++j) {
            std::printf("%s%.17g", j ? "," : "", points.points(i, j));
        }
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multivariate-rank distance-correlation feature screening"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    ScreenArgs screen_args;
    auto* screen = app.add_subcommand("screen", "screen a dataset described by a manifest");
    screen->add_option("--manifest", screen_args.manifest, "dataset manifest JSON")->required();
    screen->add_option("--method", screen_args.method, "mrdc | dcsis | sis");
    screen->add_option("--rule", screen_args.rule, "hard:M | max-ratio | top:K");
    screen->add_option("--out", screen_args.out, "output stem or .json path")->required();
    screen->add_option("--threads", screen_args.threads, "worker threads (default: auto)");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "run a synthetic benchmark design");
    simulate->add_option("--design", sim_args.design, "design JSON")->required();
    simulate->add_option("--methods", sim_args.methods, "comma-separated: mrdc,dcsis,sis");
    simulate->add_option("--out", sim_args.out, "output directory")->required();
    simulate->add_option("--threads", sim_args.threads, "worker threads (default: auto)");

    SobolArgs sobol_args;
    auto* sobol = app.add_subcommand("sobol", "print a Sobol point set as CSV");
    sobol->add_option("--n", sobol_args.n, "number of points")->required();
    sobol->add_option("--dim", sobol_args.dim, "dimension")->required();
    sobol->add_option("--table", sobol_args.table, "direction-number file for high dimensions");

    try {
        app.parse(argc, argv);
        if (screen->parsed()) return cmd_screen(screen_args);
        if (simulate->parsed()) return cmd_simulate(sim_args);
        if (sobol->parsed()) return cmd_sobol(sobol_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // flag problems are configuration errors
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const CapabilityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const DegenerateInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
