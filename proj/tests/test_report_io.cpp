#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cyclecap/report_io.hpp"

using namespace cyclecap;
namespace fs = std::filesystem;

TEST_CASE("csv writing: header row, LF endings, empty report") {
    CsvTable t;
    t.header = {"n", "alpha", "value"};
    CHECK(t.to_string() == "n,alpha,value\n");  // header-only when empty
    t.add_row({"5", "2", format_double(0.5)});
    CHECK(t.to_string() == "n,alpha,value\n5,2,0.5\n");
    CHECK_THROWS(t.add_row({"1", "2"}));

    fs::path p = fs::temp_directory_path() / "cyclecap_test.csv";
    write_csv(t, p.string());
    std::ifstream is(p, std::ios::binary);
    std::string body((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    CHECK(body == "n,alpha,value\n5,2,0.5\n");
    CHECK(body.find('\r') == std::string::npos);
    fs::remove(p);
}

TEST_CASE("manifest schema and round trip") {
    nlohmann::json m = make_manifest("experiment bridge");
    CHECK(m["tool"] == "cyclecap");
    CHECK(m["rng"] == "philox4x64-10");
    CHECK(m["format_version"] == kOutputFormatVersion);
    m["config"] = {{"seed", 7}, {"n", 100}};
    fs::path p = fs::temp_directory_path() / "cyclecap_test.manifest.json";
    write_manifest(m, p.string());
    nlohmann::json back = read_manifest(p.string());
    CHECK(back == m);
    fs::remove(p);
}

TEST_CASE("manifest path derivation") {
    CHECK(manifest_path_for("out/bridge.csv") == "out/bridge.manifest.json");
    CHECK(manifest_path_for("samples.txt") == "samples.txt.manifest.json");
}

TEST_CASE("doubles format round-trippably") {
    for (double v : {0.1, 1.0 / 3.0, 6.02e23, -1.5e-300}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("unwritable path raises") {
    CsvTable t;
    t.header = {"a"};
    CHECK_THROWS(write_csv(t, "/nonexistent_dir_xyz/out.csv"));
}
