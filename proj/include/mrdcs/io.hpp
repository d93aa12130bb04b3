#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrdcs/matrix.hpp"
#include "mrdcs/screening.hpp"

namespace mrdcs::io {

enum class MissingPolicy { drop_sample, drop_feature };

// Describes a multi-platform dataset on disk. JSON schema:
// {"response": {"path": ..., "id_col": ..., "columns": [...]},
//  "platforms": [{"path": ..., "id_col": ...}, ...],
//  "missing": "drop-sample" | "drop-feature"}
struct DatasetManifest {
    struct ResponseSpec {
        std::string path;
        std::string id_col;
        std::vector<std::string> columns;
    };
    struct PlatformSpec {
        std::string path;
        std::string id_col;
    };

    ResponseSpec response;
    std::vector<PlatformSpec> platforms;
    MissingPolicy missing = MissingPolicy::drop_sample;

    static DatasetManifest from_json(const nlohmann::json& j);
    // Relative file paths resolve against the manifest's own directory.
    static DatasetManifest load_file(const std::string& path);
    nlohmann::json to_json() const;
};

struct Dataset {
    Tensor3 X;                                // n x p x d, d = platform count
    Matrix Y;                                 // n x q
    std::vector<std::string> sample_ids;      // n, in response-file order
    std::vector<std::string> feature_names;   // p, lexicographic
    std::vector<std::string> response_names;  // q, manifest order
};

// Align platforms and response on their shared sample IDs and shared feature
// names, apply the missing-value policy, and stack into the screening
// inputs. Cells that are empty or read NA/NaN/null (case-insensitive) count
// as missing.
Dataset load_dataset(const DatasetManifest& manifest);

// Minimal CSV with double-quote escaping; header row required.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;     // each padded to header size
    std::vector<std::size_t> line_numbers;          // source line of each row
};
CsvTable read_csv(std::istream& in, const std::string& name_for_errors);
CsvTable read_csv_file(const std::string& path);

// Persist a screening report: `<out>.json` with full-precision scores and
// `<out>.csv` with one (rank, index, feature, score) row per predictor. If
// `out` already ends in .json the stem is reused. Files land via temp +
// rename so readers never see partial output. `config` feeds the
// provenance hash stored alongside the tool version.
struct ReportPaths {
    std::string json;
    std::string csv;
};
ReportPaths write_report(const screening::ScreenReport& report, const std::string& out,
                         const std::string& config,
                         const std::vector<std::string>& feature_names = {});

nlohmann::json report_to_json(const screening::ScreenReport& report, const std::string& config,
                              const std::vector<std::string>& feature_names = {});

// FNV-1a over the canonical config string; stable across runs and platforms.
std::uint64_t config_hash(const std::string& config);

// Write `content` to `path` atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

}  // namespace mrdcs::io
