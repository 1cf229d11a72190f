#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mshift/cli.hpp"
#include "mshift/json_io.hpp"
#include "mshift/oracle.hpp"
#include "mshift/render.hpp"

using namespace mshift;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(MSHIFT_TEST_DATA_DIR) + "/" + name; }

std::filesystem::path temp_file(const char* name) { return std::filesystem::temp_directory_path() / name; }

void check_bracket(const Json& b) {
    REQUIRE(b.is_object());
    REQUIRE(b.size() == 2);
    REQUIRE(b["lo"].is_number());
    REQUIRE(b["hi"].is_number());
    CHECK(b["lo"].get<double>() <= b["hi"].get<double>());
}

}  // namespace

TEST_SUITE("render") {

TEST_CASE("golden N = 1 leaves out the word 11") {
    const RenderGrid g = render_interleaved(build_automaton(preset_spec("golden")), 2, 1);
    CHECK(g.count_set() == 3);
    CHECK(g.at(0, 0));
    CHECK(g.at(0, 1));
    CHECK(g.at(1, 0));
    CHECK_FALSE(g.at(1, 1));
}

TEST_CASE("set pixels equal the X-prefix count") {
    for (const char* name : {"golden", "forbidden111", "beta:1.8"}) {
        const PrefixAutomaton aut = build_automaton(preset_spec(name));
        for (int n = 1; n <= 10; ++n) {
            CAPTURE(name);
            CAPTURE(n);
            CHECK(BigInt(render_interleaved(aut, 2, n).count_set()) == product_count(aut, 2, 2L * n));
        }
    }
    CHECK(render_interleaved(build_automaton(OmegaSpec::full_shift(2, 2)), 2, 3).count_set() == 64);
}

TEST_CASE("unsupported alphabets and bases are rejected") {
    CHECK_THROWS_AS(render_interleaved(build_automaton(preset_spec("tribonacci")), 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(render_interleaved(build_automaton(preset_spec("golden", 3)), 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(render_interleaved(build_automaton(preset_spec("golden")), 2, 13), std::invalid_argument);
}

TEST_CASE("PGM and CSV output") {
    const RenderGrid g = render_interleaved(build_automaton(preset_spec("golden")), 2, 2);
    std::ostringstream pgm;
    write_pgm(g, pgm);
    const std::string bytes = pgm.str();
    const std::string header = "P5\n4 4\n255\n";
    REQUIRE(bytes.size() == header.size() + 16);
    CHECK(bytes.substr(0, header.size()) == header);
    long black = 0;
    for (std::size_t i = header.size(); i < bytes.size(); ++i) black += bytes[i] == '\0' ? 1 : 0;
    CHECK(black == g.count_set());

    std::ostringstream csv;
    write_csv(g, csv);
    long lines = 0;
    for (char c : csv.str()) lines += c == '\n' ? 1 : 0;
    CHECK(lines == g.count_set() + 1);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("dim reports brackets and a verdict") {
    const Run r = run({"dim", "--preset", "golden"});
    REQUIRE(r.code == kExitOk);
    const Json doc = Json::parse(r.out);
    check_bracket(doc["hausdorff"]);
    check_bracket(doc["minkowski"]);
    CHECK(doc["verdict"] == "StrictlyLess");
    CHECK(doc["converged"] == true);
    CHECK(doc["hausdorff"]["lo"].get<double>() < 0.81137 + 5e-6);
    CHECK(doc["hausdorff"]["hi"].get<double>() > 0.81137 - 5e-6);
    CHECK_FALSE(doc.contains("timing_ms"));
    for (const auto& [state, bracket] : doc["t"].items()) {
        REQUIRE(bracket.size() == 2);
        CHECK(bracket[0].get<double>() <= bracket[1].get<double>());
    }
    CHECK(Json::parse(run({"dim", "--preset", "golden", "--timing"}).out).contains("timing_ms"));
}

TEST_CASE("full shift and tribonacci from the command line") {
    const Json full = Json::parse(run({"dim", "--full-shift", "2", "--q", "2"}).out);
    CHECK(full["verdict"] == "Equal");
    CHECK(full["hausdorff"]["hi"].get<double>() == 1.0);
    const Json trib = Json::parse(run({"dim", "--preset", "tribonacci"}).out);
    CHECK(std::abs(trib["hausdorff"]["lo"].get<double>() - 0.726227) < 5e-6);
    CHECK(std::abs(trib["minkowski"]["lo"].get<double>() - 0.75373) < 1e-4);
}

TEST_CASE("spec files") {
    const Run r = run({"dim", "--spec", data("golden_spec.json")});
    CHECK(r.code == kExitOk);
    CHECK(Json::parse(r.out)["verdict"] == "StrictlyLess");

    const auto bad = temp_file("mshift_bad_spec.json");
    std::ofstream(bad) << R"({"variant":"sft","matrix":[[1,1],[1,0]],"extra":true})";
    const Run rejected = run({"dim", "--spec", bad.string()});
    CHECK(rejected.code == kExitInvalidInput);
    CHECK(rejected.err.find("extra") != std::string::npos);
    std::filesystem::remove(bad);
}

TEST_CASE("exit codes") {
    CHECK(run({"dim", "--preset", "carpet"}).code == kExitInvalidInput);
    CHECK(run({"dim"}).code == kExitInvalidInput);
    CHECK(run({"dim", "--preset", "golden", "--spec", "x.json"}).code == kExitInvalidInput);
    CHECK(run({"frobnicate"}).code == kExitInvalidInput);
    CHECK(run({"dim", "--preset", "golden", "--format", "pgm"}).code == kExitInvalidInput);
    CHECK(run({"render", "--preset", "tribonacci", "--n", "3"}).code == kExitInvalidInput);
    CHECK(run({"measure", "--preset", "beta:golden"}).code == kExitInvalidInput);
    CHECK(run({"dim", "--preset", "golden", "--tol", "1e-40"}).code == kExitNotConverged);
    CHECK(run({"measure", "--preset", "golden", "--tol", "1e-40"}).code == kExitNotConverged);
}

TEST_CASE("measure output") {
    const Json golden = Json::parse(run({"measure", "--preset", "golden"}).out);
    CHECK(std::abs(golden["initial"][0].get<double>() - 0.5698402909980533) < 1e-12);
    CHECK(golden["transitions"]["1"] == Json::parse("[1.0, 0.0]"));
    const Json full = Json::parse(run({"measure", "--preset", "full:3"}).out);
    for (const auto& p : full["initial"]) CHECK(std::abs(p.get<double>() - 1.0 / 3) < 1e-15);
}

TEST_CASE("verify passes on presets and fails on a corrupted measure") {
    for (const char* name : {"golden", "full:2", "forbidden111", "beta:golden"}) {
        const Run r = run({"verify", "--preset", name});
        CAPTURE(name);
        CHECK(r.code == kExitOk);
        CHECK(Json::parse(r.out)["pass"] == true);
    }
    const Run bad = run({"verify", "--spec", data("golden_spec.json"), "--measure", data("golden_corrupted_measure.json")});
    CHECK(bad.code == kExitVerificationFailed);
    const Json doc = Json::parse(bad.out);
    CHECK(doc["pass"] == false);
    bool dominance_failed = false;
    for (const auto& c : doc["checks"]) dominance_failed = dominance_failed || (c["name"] == "dominance" && c["status"] == "fail");
    CHECK(dominance_failed);
}

TEST_CASE("count and sample") {
    const Json counts = Json::parse(run({"count", "--preset", "golden", "--n", "4"}).out);
    const auto& rows = counts["X_prefix_counts"];
    REQUIRE(rows.size() == 4);
    CHECK(rows[1]["count"] == "3");
    CHECK(rows[2]["count"] == "6");
    CHECK(rows[3]["count"] == "10");
    CHECK(rows[3]["enumerated"] == "10");

    const Run csv = run({"count", "--preset", "golden", "--n", "8", "--format", "csv"});
    CHECK(csv.out.rfind("n,count,convergent\n", 0) == 0);

    const std::vector<std::string> args{"sample", "--preset", "golden", "--n", "4096", "--replicates", "5", "--seed", "9"};
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    const Json s = Json::parse(a.out);
    CHECK(s["values"].size() == 5);
    CHECK(s["seed"] == 9);
}

TEST_CASE("identical invocations give byte-identical output") {
    for (const char* cmd : {"dim", "measure", "verify"}) {
        const Run a = run({cmd, "--preset", "forbidden111"});
        const Run b = run({cmd, "--preset", "forbidden111"});
        CHECK(a.out == b.out);
    }
}

TEST_CASE("render to a file") {
    const auto path = temp_file("mshift_render_test.pgm");
    const Run r = run({"render", "--preset", "golden", "--n", "5", "--out", path.string()});
    REQUIRE(r.code == kExitOk);
    const Json doc = Json::parse(r.out);
    CHECK(doc["set_pixels"] == 288);
    CHECK(doc["prefix_count"] == "288");
    CHECK(std::filesystem::file_size(path) == std::string("P5\n32 32\n255\n").size() + 1024);
    std::filesystem::remove(path);

    const Run csv = run({"render", "--preset", "golden", "--n", "1", "--format", "csv"});
    CHECK(csv.out == "x,y\n0,1\n0,0\n1,0\n");
}

}  // TEST_SUITE
