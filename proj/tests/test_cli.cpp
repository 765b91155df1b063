#include <doctest.h>

#include <sstream>

#include "ea/cli.hpp"
#include "support/fixtures.hpp"

namespace ts = testsupport;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = ea::tools::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string bundle() { return ts::credit_bundle().string(); }
std::string sample() {
    return (ts::credit_bundle() / "sample" / "decision-1.csv").string();
}

} // namespace

TEST_CASE("cli explain renders sentences, one per line") {
    CliResult result =
        run({"explain", "--bundle", bundle(), "--bindings", sample(),
             "--explanation", "score-impact", "--profile", "borrower"});
    CHECK(result.code == 0);
    CHECK(result.out ==
          "Your credit score was impacted by your salary (records/960) and a "
          "late payment (records/956).\n");
}

TEST_CASE("cli expand prints PROV-N") {
    std::vector<std::string> args{"expand", "-b", sample()};
    for (const auto& entry : std::filesystem::directory_iterator(
             ts::credit_bundle() / "templates")) {
        args.push_back("-t");
        args.push_back(entry.path().string());
    }
    CliResult result = run(args);
    CHECK(result.code == 0);
    CHECK(result.out.rfind("document\n", 0) == 0);
    CHECK(result.out.find("entity(cs:decisions/1") != std::string::npos);
}

TEST_CASE("cli query prints the result table as JSON") {
    ts::TempDir dir("cli-query");
    // Reuse the expand output as the query input.
    std::vector<std::string> args{"expand", "-b", sample()};
    for (const auto& entry : std::filesystem::directory_iterator(
             ts::credit_bundle() / "templates")) {
        args.push_back("-t");
        args.push_back(entry.path().string());
    }
    CliResult expanded = run(args);
    REQUIRE(expanded.code == 0);
    ts::write_file(dir.path() / "trace.provn", expanded.out);

    CliResult result = run(
        {"query", "-q",
         (ts::credit_bundle() / "queries" / "score-impact.pq").string(),
         "-p", (dir.path() / "trace.provn").string()});
    CHECK(result.code == 0);
    CHECK(result.out.find("\"decision\": \"cs:decisions/1\"") !=
          std::string::npos);
    CHECK(result.out.find("cs:records/960") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    SUBCASE("usage error for unknown flags") {
        CliResult result = run({"explain", "--bogus"});
        CHECK(result.code == 64);
    }
    SUBCASE("data error for a bad bindings file") {
        ts::TempDir dir("cli-bad");
        ts::write_file(dir.path() / "bad.csv", "not,a,bindings,header\nx\n");
        CliResult result =
            run({"explain", "--bundle", bundle(), "--bindings",
                 (dir.path() / "bad.csv").string(), "--explanation",
                 "score-impact", "--profile", "borrower"});
        CHECK(result.code == 1);
        CHECK(result.err.find("error:") != std::string::npos);
    }
    SUBCASE("config error for a broken bundle") {
        ts::TempDir dir("cli-broken");
        auto broken = ts::copy_bundle(dir, ts::credit_bundle());
        ts::write_file(broken / "queries" / "score-impact.pq", "nope");
        CliResult result = run({"stats", "--bundle", broken.string()});
        CHECK(result.code == 2);
    }
    SUBCASE("expand with a missing binding names the variable") {
        ts::TempDir dir("cli-missing");
        ts::write_file(dir.path() / "partial.csv",
                       "template,instance,variable,value\n"
                       "record-attribution,1,record,cs:records/1\n"
                       "record-attribution,1,rectype,cs:Salary\n");
        CliResult result =
            run({"expand", "-t",
                 (ts::credit_bundle() / "templates" /
                  "record-attribution.provn")
                     .string(),
                 "-b", (dir.path() / "partial.csv").string()});
        CHECK(result.code == 1);
        CHECK(result.err.find("provider") != std::string::npos);
    }
    SUBCASE("validate exit code reflects findings") {
        CliResult clean = run({"validate", "--bundle", bundle()});
        CHECK(clean.code == 0);

        ts::TempDir dir("cli-validate");
        auto broken = ts::copy_bundle(dir, ts::credit_bundle());
        ts::write_file(broken / "queries" / "score-impact.pq", "nope");
        CliResult bad = run({"validate", "--bundle", broken.string()});
        CHECK(bad.code == 2);
        CHECK(bad.out.find("V5") != std::string::npos);
    }
}

TEST_CASE("cli stats emits table and json") {
    CliResult table = run({"stats", "--bundle", bundle()});
    CHECK(table.code == 0);
    CHECK(table.out.find("Profiles") != std::string::npos);

    CliResult as_json = run({"stats", "--bundle", bundle(), "--json"});
    CHECK(as_json.code == 0);
    CHECK(as_json.out.find("\"profiles\": 2") != std::string::npos);
}

TEST_CASE("generated fictitious bindings validate and explain") {
    if (std::system("python3 --version > /dev/null 2>&1") != 0) {
        MESSAGE("python3 not available; skipping generator check");
        return;
    }
    ts::TempDir dir("generated");
    for (const auto& [bundle_dir, explanation, profile] :
         {std::tuple{ts::credit_bundle(), "score-impact", "borrower"},
          std::tuple{ts::school_bundle(), "allocation-impact", "guardian"}}) {
        for (int seed : {1, 7, 42}) {
            auto csv = dir.path() / ("bindings-" + std::to_string(seed) +
                                     ".csv");
            std::string command = "python3 " +
                                  (bundle_dir / "generate.py").string() +
                                  " --seed " + std::to_string(seed) + " > " +
                                  csv.string();
            REQUIRE(std::system(command.c_str()) == 0);

            CliResult validated =
                run({"validate", "--bundle", bundle_dir.string(),
                     "--bindings", csv.string()});
            CHECK(validated.code == 0);
            CHECK(validated.out.find("0 error(s), 0 warning(s)") !=
                  std::string::npos);

            CliResult explained =
                run({"explain", "--bundle", bundle_dir.string(),
                     "--bindings", csv.string(), "--explanation", explanation,
                     "--profile", profile});
            CHECK(explained.code == 0);
            CHECK(explained.out.find("Your") == 0);
        }
    }
}
