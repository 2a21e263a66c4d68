#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwlab/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dwlab;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DWLAB_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir(const char* tag) : path(fs::temp_directory_path() / (std::string("dwlab_") + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("slug and file naming are deterministic") {
    CHECK(map_slug("catalog:disk:z/(2-z)") == "catalog-disk-z-2-z");
    CHECK(map_slug("catalog:halfplane:z+1-1/z") == "catalog-halfplane-z-1-1-z");
    CHECK(map_slug("___") == "map");
    CHECK(report_filename("classify", "m", 7, "json") == "classify-m-7.json");
}

TEST_CASE("csv writer emits RFC-4180 rows") {
    TempDir dir("csv");
    const fs::path p = dir.path / "t.csv";
    CsvTable tab;
    tab.header = {"a", "b"};
    tab.rows = {{"1", "plain"}, {"2", "needs,quote"}, {"3", "has\"quote"}};
    write_csv_file(p.string(), tab);
    const std::string text = slurp(p);
    CHECK(text == "a,b\r\n1,plain\r\n2,\"needs,quote\"\r\n3,\"has\"\"quote\"\r\n");
}

TEST_CASE("schema validator accepts envelopes and rejects corruption") {
    const json schema = json::parse(slurp(DWLAB_SCHEMA_PATH));
    json doc = report_envelope("classify", 1, json::object());
    std::string err;
    CHECK(validate_schema(doc, schema, &err));

    json bad = doc;
    bad.erase("seed");
    CHECK(!validate_schema(bad, schema, &err));
    CHECK(err.find("seed") != std::string::npos);

    json wrong_type = doc;
    wrong_type["seed"] = "seven";
    CHECK(!validate_schema(wrong_type, schema, &err));

    json bad_check = doc;
    bad_check["checks"].push_back(json{{"name", "x"}}); // missing pass
    CHECK(!validate_schema(bad_check, schema, &err));
}

TEST_CASE("cli: exit codes follow the taxonomy") {
    TempDir dir("exit");
    const std::string out = " --out-dir " + dir.path.string();
    CHECK(run_cli("classify catalog:halfplane:z+1" + out) == 0);
    CHECK(run_cli("classify --map 'z +'" + out) == 1);            // usage
    CHECK(run_cli("classify --map 'w'" + out) == 1);              // unknown identifier
    CHECK(run_cli("probe-p2 catalog:halfplane:z+1 --samples 100" + out) == 1); // wrong type
    // rotation-like map: rejected as a suspected elliptic automorphism
    CHECK(run_cli("classify --map '(0.54030230586814+0.841470984807897i)*(z - 0.3)/(1 - 0.3*z)'" +
                  out) == 3);
    CHECK(run_cli("nosuchcommand" + out) != 0);
}

TEST_CASE("cli: every emitted report validates against the shipped schema") {
    TempDir dir("schema");
    const std::string out = " --out-dir " + dir.path.string();
    REQUIRE(run_cli("classify catalog:disk:z/2 --seed 5" + out) == 0);
    REQUIRE(run_cli("orbit catalog:halfplane:z+i --n-max 50 --seed 5" + out) == 0);
    REQUIRE(run_cli("conjugate catalog:halfplane:2z+i --depth 30 --seed 5" + out) == 0);
    REQUIRE(run_cli("boundary catalog:disk:z^2 --n-max 8 --samples 120 --seed 5" + out) == 0);
    REQUIRE(run_cli("probe-p2 catalog:halfplane:z+i --n-max 40 --samples 100 --seed 5 "
                    "--escape-modulus 30" +
                    out) == 0);
    const json schema = json::parse(slurp(DWLAB_SCHEMA_PATH));
    long json_count = 0;
    for (const auto& entry : fs::directory_iterator(dir.path)) {
        if (entry.path().extension() != ".json") continue;
        ++json_count;
        std::string err;
        const json doc = json::parse(slurp(entry.path()));
        CHECK_MESSAGE(validate_schema(doc, schema, &err), entry.path().string(), ": ", err);
    }
    CHECK(json_count == 5);
}

TEST_CASE("cli: identical config and seed give byte-identical outputs") {
    TempDir dir_a("det_a");
    TempDir dir_b("det_b");
    const std::string cmd = "boundary 'catalog:disk:z/(2-z)' --n-max 12 --samples 150 --seed 99";
    REQUIRE(run_cli(cmd + " --out-dir " + dir_a.path.string()) == 0);
    REQUIRE(run_cli(cmd + " --out-dir " + dir_b.path.string()) == 0);
    long files = 0;
    for (const auto& entry : fs::directory_iterator(dir_a.path)) {
        ++files;
        const fs::path twin = dir_b.path / entry.path().filename();
        REQUIRE(fs::exists(twin));
        CHECK(slurp(entry.path()) == slurp(twin));
    }
    CHECK(files >= 2); // json report + csv series
}

TEST_CASE("cli: thread cap does not change the bytes") {
    TempDir dir_a("thr_a");
    TempDir dir_b("thr_b");
    const std::string cmd = std::string(DWLAB_BIN) +
                            " boundary catalog:halfplane:z+1-1/z --n-max 40 --samples 80 "
                            "--seed 3 --escape-modulus 50 --out-dir ";
    REQUIRE(WEXITSTATUS(std::system((cmd + dir_a.path.string() + " >/dev/null 2>&1").c_str())) ==
            0);
    REQUIRE(WEXITSTATUS(std::system(("DWLAB_THREADS=1 " + cmd + dir_b.path.string() +
                                     " >/dev/null 2>&1")
                                        .c_str())) == 0);
    for (const auto& entry : fs::directory_iterator(dir_a.path)) {
        const fs::path twin = dir_b.path / entry.path().filename();
        REQUIRE(fs::exists(twin));
        CHECK(slurp(entry.path()) == slurp(twin));
    }
}

TEST_CASE("cli: config file keys are read and flags override them") {
    TempDir dir("cfg");
    const fs::path cfg = dir.path / "exp.cfg";
    {
        std::ofstream out(cfg);
        out << "samples=140\nn-max=9\n";
    }
    const std::string out_dir = " --out-dir " + dir.path.string();
    REQUIRE(run_cli("boundary catalog:disk:z^2 --config " + cfg.string() + out_dir +
                    " --seed 4 --n-max 10") == 0);
    const json doc = json::parse(slurp(dir.path / "boundary-catalog-disk-z-2-4.json"));
    CHECK(doc["config"]["samples"] == 140); // from the file
    CHECK(doc["config"]["n_max"] == 10);    // flag wins
}

TEST_CASE("cli: boundary csv carries the contracted summary header") {
    TempDir dir("hdr");
    REQUIRE(run_cli("boundary catalog:disk:z^2 --n-max 8 --samples 100 --seed 2 --out-dir " +
                    dir.path.string()) == 0);
    const std::string text = slurp(dir.path / "boundary-catalog-disk-z-2-2.csv");
    CHECK(text.rfind("n,fraction_converged,fraction_mod1,fraction_undecided\r\n", 0) == 0);
}

TEST_CASE("cli: omega_decay.csv and exhaustion pgm names follow the contract") {
    TempDir dir("files");
    const std::string out = " --out-dir " + dir.path.string();
    REQUIRE(run_cli("harmonic catalog:disk:z/2 --grid 128 --samples 10 --levels 3 --seed 8" +
                    out) == 0);
    CHECK(fs::exists(dir.path / "omega_decay.csv"));
    const std::string text = slurp(dir.path / "omega_decay.csv");
    CHECK(text.rfind("n,omega,residual,h\r\n", 0) == 0);

    REQUIRE(run_cli("exhaustion catalog:disk:z/2 --grid 128 --levels 3 --t0 0.1 --seed 8" + out) ==
            0);
    for (int n = 1; n <= 3; ++n)
        CHECK(fs::exists(dir.path / ("omega_region_n" + std::to_string(n) + ".pgm")));
}
