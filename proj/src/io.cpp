#include "mrdcs/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mrdcs/error.hpp"
#include "mrdcs/version.hpp"

namespace fs = std::filesystem;

namespace mrdcs::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_missing_token(const std::string& raw) {
    std::string t = trim(raw);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return t.empty() || t == "na" || t == "nan" || t == "null";
}

// One platform or response file parsed into numeric cells; nullopt = missing.
struct NumericTable {
    std::vector<std::string> columns;  // headers minus the id column
    std::vector<std::string> ids;      // file order
    std::vector<std::vector<std::optional<double>>> cells;  // [row][column]
    std::unordered_map<std::string, std::size_t> id_row;
    std::unordered_map<std::string, std::size_t> col_index;
};

NumericTable parse_numeric(const CsvTable& csv, const std::string& file, const std::string& id_col,
                           const std::vector<std::size_t>& line_of_row) {
    NumericTable t;
    std::size_t id_idx = csv.header.size();
    for (std::size_t c = 0; c < csv.header.size(); ++c) {
        if (csv.header[c] == id_col) {
            id_idx = c;
            break;
        }
    }
    if (id_idx == csv.header.size()) {
        throw IngestionError(file + ": sample-ID column '" + id_col + "' not found");
    }
    for (std::size_t c = 0; c < csv.header.size(); ++c) {
        if (c == id_idx) continue;
        if (!t.col_index.emplace(csv.header[c], t.columns.size()).second) {
            throw IngestionError(file + ": duplicate column '" + csv.header[c] + "'");
        }
        t.columns.push_back(csv.header[c]);
    }
    t.cells.reserve(csv.rows.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string id = trim(row[id_idx]);
        if (id.empty()) {
            throw IngestionError(file + " line " + std::to_string(line_of_row[r]) +
                                 ": empty sample ID");
        }
        if (!t.id_row.emplace(id, t.ids.size()).second) {
            throw IngestionError(file + " line " + std::to_string(line_of_row[r]) +
                                 ": duplicate sample ID '" + id + "'");
        }
        t.ids.push_back(id);
        std::vector<std::optional<double>> cells;
        cells.reserve(csv.header.size() - 1);
        for (std::size_t c = 0; c < csv.header.size(); ++c) {
            if (c == id_idx) continue;
            const std::string& raw = row[c];
            if (is_missing_token(raw)) {
                cells.emplace_back(std::nullopt);
                continue;
            }
            const std::string text = trim(raw);
            char* end = nullptr;
            const double v = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size()) {
                throw ParseError(file + " line " + std::to_string(line_of_row[r]) + ", column '" +
                                 csv.header[c] + "': non-numeric value '" + raw + "'");
            }
            cells.emplace_back(v);
        }
        t.cells.push_back(std::move(cells));
    }
    return t;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& name) {
    CsvTable table;
    std::vector<std::string> field_row;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;
    std::size_t line = 1, row_start_line = 1;
    std::vector<std::size_t> line_of_row;

    auto end_field = [&]() {
        field_row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        if (field_row.size() == 1 && trim(field_row[0]).empty()) {
            field_row.clear();  // blank line
            return;
        }
        if (table.header.empty()) {
            table.header = std::move(field_row);
        } else {
            if (field_row.size() != table.header.size()) {
                throw ParseError(name + " line " + std::to_string(row_start_line) + ": expected " +
                                 std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(field_row.size()));
            }
            table.rows.push_back(std::move(field_row));
            line_of_row.push_back(row_start_line);
        }
        field_row.clear();
        row_has_content = false;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!trim(field).empty()) {
                    throw ParseError(name + " line " + std::to_string(line) +
                                     ": quote inside unquoted field");
                }
                field.clear();
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                end_field();
                row_has_content = true;
                break;
            case '\r':
                break;  // handled with the following \n (or ignored)
            case '\n':
                end_row();
                ++line;
                row_start_line = line;
                break;
            default:
                field += c;
                row_has_content = true;
                break;
        }
    }
    if (in_quotes) throw ParseError(name + ": unterminated quoted field");
    if (row_has_content || !field.empty() || !field_row.empty()) end_row();
    if (table.header.empty()) throw ParseError(name + ": empty file (expected a header row)");

    // stash row line numbers at the end of the table via a parallel vector;
    // exposed through a second return channel below
    table.line_numbers = std::move(line_of_row);
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open file: " + path);
    return read_csv(in, path);
}

DatasetManifest DatasetManifest::from_json(const nlohmann::json& j) {
    DatasetManifest m;
    try {
        const auto& resp = j.at("response");
        m.response.path = resp.at("path").get<std::string>();
        m.response.id_col = resp.at("id_col").get<std::string>();
        m.response.columns = resp.at("columns").get<std::vector<std::string>>();
        for (const auto& pj : j.at("platforms")) {
            PlatformSpec spec;
            spec.path = pj.at("path").get<std::string>();
            spec.id_col = pj.at("id_col").get<std::string>();
            m.platforms.push_back(std::move(spec));
        }
        if (j.contains("missing")) {
            const auto text = j.at("missing").get<std::string>();
            if (text == "drop-sample") m.missing = MissingPolicy::drop_sample;
            else if (text == "drop-feature") m.missing = MissingPolicy::drop_feature;
            else throw ConfigError("manifest: unknown missing policy '" + text +
                                   "' (expected drop-sample or drop-feature)");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest JSON: ") + e.what());
    }
    if (m.response.columns.empty()) throw ConfigError("manifest: response.columns is empty");
    if (m.platforms.empty()) throw ConfigError("manifest: platforms is empty");
    return m;
}

DatasetManifest DatasetManifest::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest " + path + ": " + e.what());
    }
    DatasetManifest m = from_json(j);
    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).string();
    };
    resolve(m.response.path);
    for (auto& plat : m.platforms) resolve(plat.path);
    return m;
}

nlohmann::json DatasetManifest::to_json() const {
    nlohmann::json j;
    j["response"] = {{"path", response.path},
                     {"id_col", response.id_col},
                     {"columns", response.columns}};
    j["platforms"] = nlohmann::json::array();
    for (const auto& p : platforms) {
        j["platforms"].push_back({{"path", p.path}, {"id_col", p.id_col}});
    }
    j["missing"] = missing == MissingPolicy::drop_sample ? "drop-sample" : "drop-feature";
    return j;
}

Dataset load_dataset(const DatasetManifest& manifest) {
    const CsvTable resp_csv = read_csv_file(manifest.response.path);
    const NumericTable resp = parse_numeric(resp_csv, manifest.response.path,
                                            manifest.response.id_col, resp_csv.line_numbers);
    std::vector<std::size_t> resp_cols;
    for (const auto& name : manifest.response.columns) {
        const auto it = resp.col_index.find(name);
        if (it == resp.col_index.end()) {
            throw IngestionError(manifest.response.path + ": response column '" + name +
                                 "' not found");
        }
        resp_cols.push_back(it->second);
    }

    std::vector<NumericTable> platforms;
    platforms.reserve(manifest.platforms.size());
    for (const auto& spec : manifest.platforms) {
        const CsvTable csv = read_csv_file(spec.path);
        platforms.push_back(parse_numeric(csv, spec.path, spec.id_col, csv.line_numbers));
    }

    // shared feature names, lexicographic
    std::vector<std::string> features = platforms.front().columns;
    std::sort(features.begin(), features.end());
    for (std::size_t k = 1; k < platforms.size(); ++k) {
        std::vector<std::string> keep;
        for (const auto& f : features) {
            if (platforms[k].col_index.count(f)) keep.push_back(f);
        }
        features = std::move(keep);
    }
    if (features.empty()) {
        throw IngestionError("no feature names shared by all " +
                             std::to_string(platforms.size()) + " platform files");
    }

    // shared sample IDs, response-file order
    std::vector<std::string> samples;
    for (const auto& id : resp.ids) {
        bool everywhere = true;
        for (const auto& plat : platforms) {
            if (!plat.id_row.count(id)) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) samples.push_back(id);
    }
    if (samples.empty()) {
        throw IngestionError("no sample IDs shared by the response and all platform files");
    }

    auto resp_missing = [&](const std::string& id) {
        const auto& cells = resp.cells[resp.id_row.at(id)];
        for (std::size_t c : resp_cols) {
            if (!cells[c].has_value()) return true;
        }
        return false;
    };
    auto feature_missing_for = [&](const std::string& id, const std::string& feature) {
        for (const auto& plat : platforms) {
            const auto& cell = plat.cells[plat.id_row.at(id)][plat.col_index.at(feature)];
            if (!cell.has_value()) return true;
        }
        return false;
    };

    if (manifest.missing == MissingPolicy::drop_sample) {
        std::vector<std::string> keep;
        for (const auto& id : samples) {
            if (resp_missing(id)) continue;
            bool ok = true;
            for (const auto& f : features) {
                if (feature_missing_for(id, f)) {
                    ok = false;
                    break;
                }
            }
            if (ok) keep.push_back(id);
        }
        samples = std::move(keep);
    } else {
        std::vector<std::string> keep_samples;
        for (const auto& id : samples) {
            if (!resp_missing(id)) keep_samples.push_back(id);
        }
        samples = std::move(keep_samples);
        std::vector<std::string> keep_features;
        for (const auto& f : features) {
            bool ok = true;
            for (const auto& id : samples) {
                if (feature_missing_for(id, f)) {
                    ok = false;
                    break;
                }
            }
            if (ok) keep_features.push_back(f);
        }
        features = std::move(keep_features);
    }
    if (samples.empty()) throw IngestionError("all samples dropped by the missing-value policy");
    if (features.empty()) throw IngestionError("all features dropped by the missing-value policy");

    Dataset ds;
    const std::size_t n = samples.size();
    const std::size_t p = features.size();
    const std::size_t d = platforms.size();
    const std::size_t q = resp_cols.size();
    ds.sample_ids = samples;
    ds.feature_names = features;
    ds.response_names = manifest.response.columns;
    ds.X = Tensor3(n, p, d);
    ds.Y = Matrix(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rcells = resp.cells[resp.id_row.at(samples[i])];
        for (std::size_t c = 0; c < q; ++c) ds.Y(i, c) = rcells[resp_cols[c]].value();
        for (std::size_t k = 0; k < d; ++k) {
            const auto& plat = platforms[k];
            const auto& cells = plat.cells[plat.id_row.at(samples[i])];
            for (std::size_t j = 0; j < p; ++j) {
                ds.X.at(i, j, k) = cells[plat.col_index.at(features[j])].value();
            }
        }
    }
    return ds;
}

std::uint64_t config_hash(const std::string& config) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : config) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

nlohmann::json report_to_json(const screening::ScreenReport& report, const std::string& config,
                              const std::vector<std::string>& feature_names) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    nlohmann::json j;
    j["version"] = kVersion;
    j["config_hash"] = hash;
    j["method"] = screening::to_string(report.method);
    j["rule"] = report.rule.describe();
    j["n"] = report.n;
    j["p"] = report.p;
    j["d"] = report.d;
    j["q"] = report.q;
    j["scores"] = report.scores;
    j["ranking"] = report.ranking;
    j["selected"] = report.selected;
    j["warnings"] = report.warnings;
    j["elapsed_seconds"] = report.elapsed_seconds;
    if (!feature_names.empty()) j["features"] = feature_names;
    return j;
}

void atomic_write(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + target.parent_path().string() + ": " +
                              ec.message());
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
    }
}

ReportPaths write_report(const screening::ScreenReport& report, const std::string& out,
                         const std::string& config, const std::vector<std::string>& feature_names) {
    if (!feature_names.empty() && feature_names.size() != report.p) {
        throw ShapeError("write_report: " + std::to_string(feature_names.size()) +
                         " feature names for " + std::to_string(report.p) + " predictors");
    }
    ReportPaths paths;
    std::string stem = out;
    if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json") {
        stem = stem.substr(0, stem.size() - 5);
    }
    paths.json = stem + ".json";
    paths.csv = stem + ".csv";

    atomic_write(paths.json, report_to_json(report, config, feature_names).dump(2) + "\n");

    std::ostringstream csv;
    csv << "rank,index,feature,score\n";
    char num[64];
    for (std::size_t i = 0; i < report.ranking.size(); ++i) {
        const std::size_t j = report.ranking[i];
        std::snprintf(num, sizeof(num), "%.17g", report.scores[j]);
        csv << (i + 1) << "," << j << ","
            << (feature_names.empty() ? "" : csv_escape(feature_names[j])) << "," << num << "\n";
    }
    atomic_write(paths.csv, csv.str());
    return paths;
}

}  // namespace mrdcs::io
