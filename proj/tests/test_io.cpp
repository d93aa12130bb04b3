#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mrdcs/error.hpp"
#include "mrdcs/io.hpp"

using namespace mrdcs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& rel, const std::string& content) const {
        const fs::path p = path / rel;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
};

io::CsvTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    return io::read_csv(in, "test.csv");
}

// Three-platform-free baseline: one response file, two platform files with a
// partially overlapping feature set and scrambled sample order.
io::DatasetManifest basic_manifest(const TempDir& dir, const std::string& missing = "drop-sample",
                                   const std::string& resp_override = "",
                                   const std::string& plat_a_override = "") {
    const std::string resp = !resp_override.empty() ? resp_override
                                                    : "id,y\n"
                                                      "s1,0.5\n"
                                                      "s2,1.5\n"
                                                      "s3,2.5\n"
                                                      "s4,3.5\n"
                                                      "s5,9.9\n";
    const std::string plat_a = !plat_a_override.empty() ? plat_a_override
                                                        : "id,g1,g2,g3\n"
                                                          "s1,10,11,12\n"
                                                          "s2,20,21,22\n"
                                                          "s3,30,31,32\n"
                                                          "s4,40,41,42\n"
                                                          "s9,90,91,92\n";
    const std::string plat_b =
        "sample,g2,g3,g4\n"
        "s4,401,402,403\n"
        "s2,201,202,203\n"
        "s1,101,102,103\n"
        "s3,301,302,303\n";
    dir.file("response.csv", resp);
    dir.file("plat_a.csv", plat_a);
    dir.file("plat_b.csv", plat_b);

    io::DatasetManifest m;
    m.response.path = (dir.path / "response.csv").string();
    m.response.id_col = "id";
    m.response.columns = {"y"};
    m.platforms.push_back({(dir.path / "plat_a.csv").string(), "id"});
    m.platforms.push_back({(dir.path / "plat_b.csv").string(), "sample"});
    m.missing = missing == "drop-sample" ? io::MissingPolicy::drop_sample
                                         : io::MissingPolicy::drop_feature;
    return m;
}

}  // namespace

TEST_CASE("csv parsing handles quoting, escapes, and line endings") {
    const auto t = parse_csv("a,b,c\r\n1,\"x,y\",3\n4,\"say \"\"hi\"\"\",6\n");
    CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"1", "x,y", "3"});
    CHECK(t.rows[1] == std::vector<std::string>{"4", "say \"hi\"", "6"});

    // newline inside a quoted field
    const auto nl = parse_csv("a,b\n\"line1\nline2\",2\n");
    REQUIRE(nl.rows.size() == 1);
    CHECK(nl.rows[0][0] == "line1\nline2");

    // missing trailing newline
    const auto last = parse_csv("a,b\n1,2");
    REQUIRE(last.rows.size() == 1);
    CHECK(last.rows[0] == std::vector<std::string>{"1", "2"});
}

TEST_CASE("csv parsing records source line numbers and skips blank lines") {
    const auto t = parse_csv("a,b\n1,2\n\n3,4\n");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.line_numbers == std::vector<std::size_t>{2, 4});
}

TEST_CASE("csv structural errors carry the offending line") {
    try {
        parse_csv("a,b\n1,2,3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("expected 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_csv("a,b\n\"unterminated,2\n"), ParseError);
    CHECK_THROWS_AS(parse_csv("a,b\nx\"y\",2\n"), ParseError);
    CHECK_THROWS_AS(parse_csv(""), ParseError);
    CHECK_THROWS_AS(io::read_csv_file("/nonexistent/really/not/here.csv"), IngestionError);
}

TEST_CASE("manifest JSON round-trips and validates") {
    nlohmann::json j = {
        {"response",
         {{"path", "resp.csv"}, {"id_col", "id"}, {"columns", {"y1", "y2"}}}},
        {"platforms",
         {{{"path", "a.csv"}, {"id_col", "id"}}, {{"path", "b.csv"}, {"id_col", "sid"}}}},
        {"missing", "drop-feature"}};
    const auto m = io::DatasetManifest::from_json(j);
    CHECK(m.response.path == "resp.csv");
    CHECK(m.response.columns == std::vector<std::string>{"y1", "y2"});
    REQUIRE(m.platforms.size() == 2);
    CHECK(m.platforms[1].id_col == "sid");
    CHECK(m.missing == io::MissingPolicy::drop_feature);
    CHECK(io::DatasetManifest::from_json(m.to_json()).to_json() == m.to_json());

    auto bad = j;
    bad["missing"] = "ignore";
    CHECK_THROWS_AS(io::DatasetManifest::from_json(bad), ConfigError);
    bad = j;
    bad.erase("response");
    CHECK_THROWS_AS(io::DatasetManifest::from_json(bad), ConfigError);
    bad = j;
    bad["platforms"] = nlohmann::json::array();
    CHECK_THROWS_AS(io::DatasetManifest::from_json(bad), ConfigError);
    CHECK_THROWS_AS(io::DatasetManifest::load_file("/nonexistent/manifest.json"), ConfigError);
}

TEST_CASE("manifest file paths resolve relative to the manifest directory") {
    TempDir dir("mrdcs_io_manifest");
    dir.file("sub/data/resp.csv", "id,y\ns1,1\n");
    const std::string mpath = dir.file("sub/manifest.json", R"({
        "response": {"path": "data/resp.csv", "id_col": "id", "columns": ["y"]},
        "platforms": [{"path": "data/plat.csv", "id_col": "id"}]
    })");
    const auto m = io::DatasetManifest::load_file(mpath);
    CHECK(m.response.path == (dir.path / "sub/data/resp.csv").string());
    CHECK(m.platforms[0].path == (dir.path / "sub/data/plat.csv").string());
}

TEST_CASE("dataset alignment intersects features and keeps response sample order") {
    TempDir dir("mrdcs_io_align");
    const auto ds = io::load_dataset(basic_manifest(dir));
    CHECK(ds.sample_ids == std::vector<std::string>{"s1", "s2", "s3", "s4"});
    CHECK(ds.feature_names == std::vector<std::string>{"g2", "g3"});
    CHECK(ds.response_names == std::vector<std::string>{"y"});
    REQUIRE(ds.X.n() == 4);
    REQUIRE(ds.X.p() == 2);
    REQUIRE(ds.X.d() == 2);
    REQUIRE(ds.Y.rows() == 4);
    REQUIRE(ds.Y.cols() == 1);

    CHECK(ds.Y(0, 0) == 0.5);
    CHECK(ds.Y(3, 0) == 3.5);
    // platform 0 holds the first file's cells, aligned by sample ID
    CHECK(ds.X.at(0, 0, 0) == 11.0);  // s1, g2, plat_a
    CHECK(ds.X.at(2, 1, 0) == 32.0);  // s3, g3, plat_a
    // platform 1 rows were scrambled on disk but align by ID
    CHECK(ds.X.at(0, 0, 1) == 101.0);  // s1, g2, plat_b
    CHECK(ds.X.at(3, 1, 1) == 402.0);  // s4, g3, plat_b
}

TEST_CASE("drop-sample removes rows with any missing cell") {
    TempDir dir("mrdcs_io_dropsample");
    const std::string plat_a =
        "id,g1,g2,g3\n"
        "s1,10,11,12\n"
        "s2,20,NA,22\n"
        "s3,30,31,32\n"
        "s4,40,41,42\n";
    const auto ds = io::load_dataset(basic_manifest(dir, "drop-sample", "", plat_a));
    CHECK(ds.sample_ids == std::vector<std::string>{"s1", "s3", "s4"});
    CHECK(ds.feature_names == std::vector<std::string>{"g2", "g3"});
}

TEST_CASE("drop-feature removes columns with any missing cell instead") {
    TempDir dir("mrdcs_io_dropfeature");
    const std::string plat_a =
        "id,g1,g2,g3\n"
        "s1,10,11,12\n"
        "s2,20, null ,22\n"
        "s3,30,31,32\n"
        "s4,40,41,42\n";
    const auto ds = io::load_dataset(basic_manifest(dir, "drop-feature", "", plat_a));
    CHECK(ds.sample_ids == std::vector<std::string>{"s1", "s2", "s3", "s4"});
    CHECK(ds.feature_names == std::vector<std::string>{"g3"});
}

TEST_CASE("a missing response cell always drops the sample") {
    for (const char* policy : {"drop-sample", "drop-feature"}) {
        TempDir dir(std::string("mrdcs_io_respmiss_") + policy);
        const std::string resp =
            "id,y\n"
            "s1,0.5\n"
            "s2,\n"
            "s3,2.5\n"
            "s4,3.5\n";
        const auto ds = io::load_dataset(basic_manifest(dir, policy, resp));
        CHECK(ds.sample_ids == std::vector<std::string>{"s1", "s3", "s4"});
        CHECK(ds.feature_names == std::vector<std::string>{"g2", "g3"});
    }
}

TEST_CASE("alignment failures raise ingestion errors") {
    {
        TempDir dir("mrdcs_io_nofeat");
        auto m = basic_manifest(dir);
        // platform with entirely different feature names
        m.platforms[1].path = dir.file("plat_c.csv", "sample,h1,h2\ns1,1,2\ns2,3,4\n");
        CHECK_THROWS_AS(io::load_dataset(m), IngestionError);
    }
    {
        TempDir dir("mrdcs_io_nosample");
        auto m = basic_manifest(dir);
        m.platforms[1].path = dir.file("plat_d.csv", "sample,g2,g3\nz1,1,2\nz2,3,4\n");
        CHECK_THROWS_AS(io::load_dataset(m), IngestionError);
    }
    {
        TempDir dir("mrdcs_io_allmiss");
        const std::string plat_a =
            "id,g1,g2,g3\n"
            "s1,10,NA,12\n"
            "s2,20,NA,22\n"
            "s3,30,NA,NaN\n"
            "s4,40,NA,42\n";
        auto m = basic_manifest(dir, "drop-sample", "", plat_a);
        CHECK_THROWS_AS(io::load_dataset(m), IngestionError);
    }
}

TEST_CASE("table-level defects are reported with file context") {
    {
        TempDir dir("mrdcs_io_dupid");
        const std::string resp = "id,y\ns1,1\ns1,2\n";
        auto m = basic_manifest(dir, "drop-sample", resp);
        try {
            io::load_dataset(m);
            FAIL("expected IngestionError");
        } catch (const IngestionError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("duplicate sample ID 's1'") != std::string::npos);
            CHECK(msg.find("line 3") != std::string::npos);
        }
    }
    {
        TempDir dir("mrdcs_io_dupcol");
        auto m = basic_manifest(dir);
        m.platforms[0].path = dir.file("dup.csv", "id,g2,g2\ns1,1,2\n");
        CHECK_THROWS_AS(io::load_dataset(m), IngestionError);
    }
    {
        TempDir dir("mrdcs_io_badnum");
        const std::string resp = "id,y\ns1,1\ns2,abc\n";
        auto m = basic_manifest(dir, "drop-sample", resp);
        try {
            io::load_dataset(m);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("line 3") != std::string::npos);
            CHECK(msg.find("'abc'") != std::string::npos);
        }
    }
    {
        TempDir dir("mrdcs_io_noid");
        auto m = basic_manifest(dir);
        m.response.id_col = "patient";
        CHECK_THROWS_AS(io::load_dataset(m), IngestionError);
    }
    {
        TempDir dir("mrdcs_io_nocol");
        auto m = basic_manifest(dir);
        m.response.columns = {"z"};
        CHECK_THROWS_AS(io::load_dataset(m), IngestionError);
    }
}

TEST_CASE("config hash matches the reference test vectors") {
    CHECK(io::config_hash("") == 14695981039346656037ULL);
    CHECK(io::config_hash("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(io::config_hash("abc") != io::config_hash("abd"));
    CHECK(io::config_hash("same") == io::config_hash("same"));
}

TEST_CASE("report serialization round-trips scores at full precision") {
    screening::ScreenReport r;
    r.n = 10;
    r.p = 3;
    r.d = 2;
    r.q = 1;
    r.method = screening::Method::mrdc;
    r.rule = screening::ThresholdRule::hard(2);
    r.scores = {0.1234567890123456789, 1.0 / 3.0, 0.9999999999999999};
    r.ranking = {2, 1, 0};
    r.selected = {2, 1};
    r.warnings = {"predictor 0 scored 0: test"};
    r.elapsed_seconds = 0.25;

    const auto j = io::report_to_json(r, "cfg", {"fa", "f,b", "fc"});
    CHECK(j["version"] == "0.1.0");
    CHECK(j["config_hash"].get<std::string>().size() == 16);
    CHECK(j["method"] == "mrdc");
    CHECK(j["rule"] == "hard:2");
    CHECK(j["n"] == 10);
    CHECK(j["features"][1] == "f,b");

    const auto back = nlohmann::json::parse(j.dump());
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back["scores"][i].get<double>() == r.scores[i]);
    }
    CHECK(io::report_to_json(r, "cfg").dump() == io::report_to_json(r, "cfg").dump());
    CHECK(io::report_to_json(r, "cfg")["config_hash"] !=
          io::report_to_json(r, "other")["config_hash"]);
}

TEST_CASE("written reports produce both artifacts with consistent content") {
    TempDir dir("mrdcs_io_report");
    screening::ScreenReport r;
    r.n = 6;
    r.p = 3;
    r.d = 1;
    r.q = 1;
    r.method = screening::Method::sis;
    r.rule = screening::ThresholdRule::top(2);
    r.scores = {0.25, 0.75, 1.0 / 7.0};
    r.ranking = {1, 0, 2};
    r.selected = {1, 0};

    const auto paths =
        io::write_report(r, (dir.path / "out" / "run1").string(), "cfg", {"alpha", "be,ta", "gamma"});
    CHECK(fs::exists(paths.json));
    CHECK(fs::exists(paths.csv));
    CHECK(paths.json == (dir.path / "out" / "run1.json").string());

    std::ifstream jin(paths.json);
    nlohmann::json j;
    jin >> j;
    CHECK(j["method"] == "sis");
    CHECK(j["selected"] == nlohmann::json({1, 0}));

    std::ifstream cin_(paths.csv);
    std::string line;
    std::getline(cin_, line);
    CHECK(line == "rank,index,feature,score");
    std::getline(cin_, line);
    CHECK(line == "1,1,\"be,ta\",0.75");
    std::getline(cin_, line);
    CHECK(line.rfind("2,0,alpha,0.25", 0) == 0);
    std::getline(cin_, line);
    const auto comma = line.rfind(',');
    CHECK(std::strtod(line.c_str() + comma + 1, nullptr) == 1.0 / 7.0);

    // a .json suffix on the stem is not doubled
    const auto paths2 = io::write_report(r, (dir.path / "direct.json").string(), "cfg");
    CHECK(paths2.json == (dir.path / "direct.json").string());
    CHECK(paths2.csv == (dir.path / "direct.csv").string());

    // no temporary files left behind
    for (const auto& entry : fs::recursive_directory_iterator(dir.path)) {
        CHECK(entry.path().extension() != ".tmp");
    }
}

TEST_CASE("atomic_write creates parents and replaces content whole") {
    TempDir dir("mrdcs_io_atomic");
    const std::string target = (dir.path / "deep" / "nest" / "file.txt").string();
    io::atomic_write(target, "first");
    io::atomic_write(target, "second");
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second");
    CHECK_FALSE(fs::exists(target + ".tmp"));
}
