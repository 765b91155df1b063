#include <doctest.h>

#include <random>

#include "ea/bundle.hpp"
#include "ea/provn.hpp"
#include "support/fixtures.hpp"

using namespace ea;
using namespace ea::service;
namespace ts = testsupport;

TEST_CASE("the credit bundle loads with every cross-reference intact") {
    Bundle bundle = load_bundle(ts::credit_bundle());
    CHECK(bundle.app == "credit-card-mini");
    CHECK(bundle.templates.size() == 5);
    CHECK(bundle.queries.size() == 3);
    CHECK(bundle.plans.size() == 3);
    CHECK(bundle.dictionary.profiles.size() == 2);
    CHECK(bundle.manifest.size() == 3);
    CHECK(bundle.decision_type.compact() == "pl:Decision");
    REQUIRE(bundle.find_explanation("score-impact"));
    CHECK(bundle.find_explanation("score-impact")->plans ==
          std::vector<std::string>{"score-impact"});
    CHECK(bundle.find_template("decision") != nullptr);
    CHECK(bundle.find_explanation("nope") == nullptr);
}

TEST_CASE("the school bundle loads") {
    Bundle bundle = load_bundle(ts::school_bundle());
    CHECK(bundle.app == "school-allocation-mini");
    CHECK(bundle.templates.size() == 4);
    CHECK(bundle.dictionary.profiles.count("guardian") == 1);
}

TEST_CASE("an empty manifest is a valid bundle") {
    ts::TempDir dir("empty-bundle");
    ts::write_file(dir.path() / "bundle" / "manifest.json",
                   R"({"app":"empty","namespaces":
                       {"pl":"http://openprovenance.org/ns/plead#"},
                       "decision_type":"pl:Decision","explanations":[]})");
    ts::write_file(dir.path() / "bundle" / "dictionary.json", "{}");
    Bundle bundle = load_bundle(dir.path() / "bundle");
    CHECK(bundle.manifest.empty());
    CHECK(bundle.templates.empty());
    CHECK(bundle.queries.empty());
}

TEST_CASE("load failures are atomic and name the offending artifact") {
    ts::TempDir dir("broken-bundle");

    SUBCASE("plan referencing a variable its query does not provide") {
        auto bundle_dir = ts::copy_bundle(dir, ts::credit_bundle());
        std::string plan =
            ts::read_file(bundle_dir / "plans" / "score-impact.json");
        auto pos = plan.find("\"record\"");
        REQUIRE(pos != std::string::npos);
        plan.replace(pos, 8, "\"rec\"");
        ts::write_file(bundle_dir / "plans" / "score-impact.json", plan);

        try {
            load_bundle(bundle_dir);
            FAIL("expected a config error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Config);
            std::string message = e.what();
            CHECK(message.find("score-impact") != std::string::npos);
            CHECK(message.find("rec") != std::string::npos);
        }
    }
    SUBCASE("missing profile key") {
        auto bundle_dir = ts::copy_bundle(dir, ts::credit_bundle());
        ts::write_file(bundle_dir / "dictionary.json", R"({
          "sections": {},
          "profiles": {"borrower": {"borrower-possessive": "your",
                                    "org-subject": "we"},
                       "staff": {"org-subject": "the bank"}}})");
        CHECK_THROWS_WITH_AS(load_bundle(bundle_dir),
                             doctest::Contains("borrower-possessive"), Error);
    }
    SUBCASE("manifest referencing an unknown query") {
        auto bundle_dir = ts::copy_bundle(dir, ts::credit_bundle());
        std::string manifest = ts::read_file(bundle_dir / "manifest.json");
        auto pos = manifest.find("\"query\": \"score-impact\"");
        REQUIRE(pos != std::string::npos);
        manifest.replace(pos, 23, "\"query\": \"missing-query\"");
        ts::write_file(bundle_dir / "manifest.json", manifest);
        CHECK_THROWS_WITH_AS(load_bundle(bundle_dir),
                             doctest::Contains("missing-query"), Error);
    }
    SUBCASE("unparseable query file") {
        auto bundle_dir = ts::copy_bundle(dir, ts::credit_bundle());
        ts::write_file(bundle_dir / "queries" / "score-impact.pq",
                       "select oops");
        CHECK_THROWS_WITH_AS(load_bundle(bundle_dir),
                             doctest::Contains("score-impact.pq"), Error);
    }
    SUBCASE("missing dictionary") {
        auto bundle_dir = ts::copy_bundle(dir, ts::credit_bundle());
        std::filesystem::remove(bundle_dir / "dictionary.json");
        CHECK_THROWS_WITH_AS(load_bundle(bundle_dir),
                             doctest::Contains("dictionary.json"), Error);
    }
    SUBCASE("missing bundle directory") {
        CHECK_THROWS_WITH_AS(load_bundle(dir.path() / "nowhere"),
                             doctest::Contains("does not exist"), Error);
    }
}

TEST_CASE("no variable marker survives expansion of any shipped template") {
    std::mt19937 rng(4242);
    for (const auto& path : {ts::credit_bundle(), ts::school_bundle()}) {
        Bundle bundle = load_bundle(path);
        for (const tmpl::Template& t : bundle.templates) {
            for (int round = 0; round < 5; ++round) {
                tmpl::BindingSet bindings;
                int n = 0;
                for (const std::string& variable : t.variables) {
                    // Random identifiers; every position accepts a qname.
                    std::string local =
                        "fuzz/" + std::to_string(rng() % 1000) + "-" +
                        std::to_string(n++);
                    bindings.emplace(
                        variable,
                        bundle.namespaces.resolve(
                            path == ts::credit_bundle() ? "cs" : "sa", local));
                }
                ProvDocument doc;
                doc.merge_namespaces(t.body.namespaces());
                for (Statement& statement : tmpl::expand(t, bindings))
                    doc.add_or_merge(statement);
                CHECK(write_provn(doc).find("var:") == std::string::npos);
            }
        }
    }
}

TEST_CASE("load_bundle_checked reports all findings at once") {
    ts::TempDir dir("multi-broken");
    auto bundle_dir = ts::copy_bundle(dir, ts::credit_bundle());
    ts::write_file(bundle_dir / "queries" / "score-impact.pq", "select oops");
    ts::write_file(bundle_dir / "plans" / "automated-notice.json", "{broken");

    LoadOutcome outcome = load_bundle_checked(bundle_dir);
    CHECK(!outcome.bundle.has_value());
    CHECK(outcome.findings.size() >= 2);
    bool saw_query = false;
    bool saw_plan = false;
    for (const Finding& finding : outcome.findings) {
        saw_query = saw_query || finding.code == "V5";
        saw_plan = saw_plan || finding.code == "B4";
    }
    CHECK(saw_query);
    CHECK(saw_plan);
}
