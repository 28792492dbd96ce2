#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sympquot/io.hpp"
#include "sympquot/version.hpp"

using namespace sympquot;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;  // stdout and stderr merged
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + std::string(SYMPQUOT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("sympquot-cli-test-" + std::to_string(getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& contents) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << contents;
    return p.string();
}

std::string diag_t_one_file() {
    const int k = QuotPoint::default_truncation(1, 1);
    JetMatrix a(2, 2, k);
    a.at(0, 0) = Jet::variable(k);
    a.at(1, 1) = Jet::constant(k, Scalar(1));
    const QuotPoint q(1, 1, {{SupportPoint{Scalar(0)}, std::move(a)}});
    return write_file("diag_t_one.json", to_json(q).dump(2) + "\n");
}

std::string non_lagrangian_quotient_file() {
    ScalarMatrix bad(4, 2);
    bad.at(0, 0) = Scalar(1);
    bad.at(2, 1) = Scalar(1);  // span(e_1, e_3): omega = 1
    const int k = QuotPoint::default_truncation(2, 1);
    const QuotPoint q(2, 1, {{SupportPoint{Scalar(0)}, subspace_quotient_model(bad, 1, k)}});
    return write_file("non_lagrangian.json", to_json(q).dump(2) + "\n");
}

}  // namespace

TEST_CASE("check accepts a member and reports its divisor") {
    const RunResult r = run_cli("check --input " + diag_t_one_file());
    CHECK(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["in_tilde_q"] == true);
    CHECK(doc["in_q"] == true);
    CHECK(doc["total_colength"] == 1);
    CHECK(doc["perfect_pairing"] == true);
    REQUIRE(doc["divisor"].size() == 1);
    CHECK(doc["divisor"][0]["point"] == "0");
    CHECK(doc["divisor"][0]["mult"] == 1);
    CHECK(doc["provenance"]["tool_version"] == tool_version);
}

TEST_CASE("check rejects non-members with exit 3") {
    const RunResult r = run_cli("check --input " + non_lagrangian_quotient_file());
    CHECK(r.exit_code == 3);
    const json doc = json::parse(r.out);
    CHECK(doc["in_tilde_q"] == true);
    CHECK(doc["in_q"] == false);
}

TEST_CASE("check reports parse errors with exit 2") {
    const std::string malformed = write_file("malformed.json", "{ \"r\": 1,\n  oops\n}");
    const RunResult r = run_cli("check --input " + malformed);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("line 2") != std::string::npos);

    const json base = json::parse(std::ifstream(diag_t_one_file()));
    json repeated = base;
    repeated["models"].push_back(base["models"][0]);
    const std::string repeated_path = write_file("repeated.json", repeated.dump());
    const RunResult rr = run_cli("check --input " + repeated_path);
    CHECK(rr.exit_code == 2);
    CHECK(rr.out.find("repeated support points") != std::string::npos);

    const RunResult missing = run_cli("check --input " + (scratch_dir() / "nope.json").string());
    CHECK(missing.exit_code == 2);
}

TEST_CASE("divisor and tangent commands") {
    const RunResult div = run_cli("divisor --input " + diag_t_one_file());
    CHECK(div.exit_code == 0);
    const json ddoc = json::parse(div.out);
    CHECK(ddoc["degree"] == 1);

    const RunResult tan = run_cli("tangent --input " + diag_t_one_file());
    CHECK(tan.exit_code == 0);
    const json tdoc = json::parse(tan.out);
    CHECK(tdoc["hom_dim"] == 2);
    CHECK(tdoc["tangent_dim"] == 2);
    CHECK(tdoc["divisor_type"] == "reduced");

    const RunResult bad = run_cli("tangent --input " + non_lagrangian_quotient_file());
    CHECK(bad.exit_code == 3);
    CHECK(json::parse(bad.out)["in_q"] == false);
}

TEST_CASE("fiber builds members that round trip through check") {
    const std::string pts = write_file("pts.json", R"(["0", "1"])");
    const std::string lags = write_file("lags.json", R"([
      [["1","0"],["0","1"],["1","2"],["2","3"]],
      [["1","0"],["0","1"],["0","0"],["0","0"]]
    ])");
    const std::string out = (scratch_dir() / "fiber_out.json").string();
    const RunResult r = run_cli("fiber --points " + pts + " --lagrangians " + lags +
                                " --output " + out);
    REQUIRE(r.exit_code == 0);
    const RunResult chk = run_cli("check --input " + out);
    CHECK(chk.exit_code == 0);
    CHECK(json::parse(chk.out)["in_q"] == true);

    const std::string dup = write_file("dup_pts.json", R"(["0", "0"])");
    CHECK(run_cli("fiber --points " + dup + " --lagrangians " + lags).exit_code == 2);

    const std::string one = write_file("one_pt.json", R"(["0"])");
    CHECK(run_cli("fiber --points " + one + " --lagrangians " + lags).exit_code == 2);

    const std::string bad_lags = write_file("bad_lags.json", R"([
      [["1","0"],["0","1"],["1","2"],["2","3"]],
      [["1","0"],["0","0"],["0","1"],["0","0"]]
    ])");
    const RunResult bad = run_cli("fiber --points " + pts + " --lagrangians " + bad_lags);
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("lagrangians[1]") != std::string::npos);
}

TEST_CASE("sample produces members of the requested kind") {
    const std::string out = (scratch_dir() / "sample_q.json").string();
    REQUIRE(run_cli("sample --r 2 --d 2 --seed 9 --output " + out).exit_code == 0);
    const RunResult chk = run_cli("check --input " + out);
    CHECK(chk.exit_code == 0);

    const std::string tq = (scratch_dir() / "sample_tildeq.json").string();
    REQUIRE(run_cli("sample --r 2 --d 1 --seed 9 --kind tildeq --output " + tq).exit_code == 0);
    const json doc = json::parse(run_cli("check --input " + tq).out);
    CHECK(doc["in_tilde_q"] == true);

    CHECK(run_cli("sample --r 2 --d 2 --seed 9 --kind bogus").exit_code == 2);
    CHECK(run_cli("sample --r 2 --d 2").exit_code == 2);  // seed is mandatory
}

TEST_CASE("report sweeps the grid") {
    const RunResult r = run_cli("report --r 1 --d 1 --samples 1 --seed 5");
    CHECK(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc["grid"].size() == 1);
    CHECK(doc["grid"][0]["hom_dim"] == 2);
    CHECK(doc["grid"][0]["tangent_dim"] == 2);
    CHECK(doc["all_match"] == true);

    CHECK(run_cli("report --r 0 --d 1 --samples 1 --seed 5").exit_code == 2);

    const RunResult text = run_cli("report --r 2 --d 2 --samples 2 --seed 7 --format text");
    CHECK(text.exit_code == 0);
    CHECK(text.out.find("all rows match") != std::string::npos);
}

TEST_CASE("effectiveness verifies the action") {
    const RunResult r = run_cli("effectiveness --r 1 --seed 3 --samples 50");
    CHECK(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["verified"] == true);
    CHECK(doc["matrices"].size() == 22);  // +-identity plus 20 sampled elements
    CHECK(doc["matrices"][0]["witness"].is_null());
    CHECK(doc["matrices"][1]["witness"].is_null());

    CHECK(run_cli("effectiveness --r 1 --seed 3 --samples 0").exit_code == 2);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("check").exit_code == 2);  // --input required
}

TEST_CASE("fixed seeds give byte-identical output") {
    const std::string cmds[] = {
        "sample --r 2 --d 2 --seed 42",
        "sample --r 3 --d 1 --seed 1 --kind tildeq",
        "report --r 2 --d 2 --samples 2 --seed 11",
        "effectiveness --r 2 --seed 5 --samples 50",
        "check --input " + diag_t_one_file(),
    };
    for (const auto& cmd : cmds) {
        const RunResult a = run_cli(cmd);
        const RunResult b = run_cli(cmd);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("raising the truncation cap changes no result") {
    const std::string base = run_cli("check --input " + diag_t_one_file()).out;
    const std::string doubled =
        run_cli("check --input " + diag_t_one_file(), "SYMPQUOT_MAX_K=6 ").out;
    json a = json::parse(base), b = json::parse(doubled);
    CHECK(a["provenance"]["K"] == 3);
    CHECK(b["provenance"]["K"] == 6);
    a.erase("provenance");
    b.erase("provenance");
    CHECK(a == b);

    const RunResult too_low = run_cli("check --input " + diag_t_one_file(), "SYMPQUOT_MAX_K=2 ");
    CHECK(too_low.exit_code == 2);

    // sample + tangent under a doubled cap: identical verdict and dimensions
    const std::string out1 = (scratch_dir() / "cap1.json").string();
    const std::string out2 = (scratch_dir() / "cap2.json").string();
    REQUIRE(run_cli("sample --r 2 --d 2 --seed 13 --output " + out1).exit_code == 0);
    REQUIRE(run_cli("sample --r 2 --d 2 --seed 13 --output " + out2, "SYMPQUOT_MAX_K=18 ").exit_code == 0);
    json t1 = json::parse(run_cli("tangent --input " + out1).out);
    json t2 = json::parse(run_cli("tangent --input " + out2).out);
    t1.erase("provenance");
    t2.erase("provenance");
    CHECK(t1 == t2);
}
