#include <doctest.h>

#include <algorithm>

#include "ea/stats.hpp"
#include "ea/validate.hpp"
#include "support/fixtures.hpp"

using namespace ea;
using namespace ea::tools;
namespace ts = testsupport;

namespace {

bool has_finding(const ValidationReport& report, const std::string& code,
                 service::Finding::Severity severity) {
    return std::any_of(report.findings.begin(), report.findings.end(),
                       [&](const service::Finding& f) {
                           return f.code == code && f.severity == severity;
                       });
}

const service::Finding* find_code(const ValidationReport& report,
                                  const std::string& code) {
    for (const service::Finding& f : report.findings)
        if (f.code == code)
            return &f;
    return nullptr;
}

} // namespace

TEST_CASE("the shipped bundles validate cleanly with their samples") {
    for (const auto& [bundle, sample] :
         {std::pair{ts::credit_bundle(),
                    ts::credit_bundle() / "sample" / "decision-1.csv"},
          std::pair{ts::school_bundle(),
                    ts::school_bundle() / "sample" / "decision-1.csv"}}) {
        ValidationReport report =
            validate_bundle(bundle, ts::read_file(sample));
        CHECK(report.errors() == 0);
        CHECK(report.warnings() == 0);
    }
}

TEST_CASE("seeded defects are caught with the right codes") {
    ts::TempDir dir("validator");
    using Severity = service::Finding::Severity;

    SUBCASE("V1: disconnected trace") {
        auto bundle = ts::copy_bundle(dir, ts::credit_bundle());
        // An agent no template links to anything: a floating attribution
        // target only reachable from itself.
        std::string csv = ts::credit_sample_csv() +
                          "record-attribution,9,record,cs:records/888\n"
                          "record-attribution,9,rectype,cs:Salary\n"
                          "record-attribution,9,provider,cs:agencies/lonely\n";
        ValidationReport report = validate_bundle(bundle, csv);
        CHECK(report.errors() == 0);
        const service::Finding* v1 = find_code(report, "V1");
        REQUIRE(v1);
        CHECK(v1->severity == Severity::Warning);
        CHECK(v1->message.find("cs:records/888") != std::string::npos);
        CHECK(v1->message.find("cs:agencies/lonely") != std::string::npos);
    }
    SUBCASE("V2: dangling plan variable") {
        auto bundle = ts::copy_bundle(dir, ts::credit_bundle());
        std::string plan =
            ts::read_file(bundle / "plans" / "score-impact.json");
        auto pos = plan.find("\"@variable\": \"record\"");
        REQUIRE(pos != std::string::npos);
        plan.replace(pos, 21, "\"@variable\": \"recordz\"");
        ts::write_file(bundle / "plans" / "score-impact.json", plan);
        ValidationReport report = validate_bundle(bundle, std::nullopt);
        CHECK(has_finding(report, "V2", Severity::Error));
        CHECK(find_code(report, "V2")->message.find("recordz") !=
              std::string::npos);
    }
    SUBCASE("V3: missing profile key") {
        auto bundle = ts::copy_bundle(dir, ts::credit_bundle());
        ts::write_file(bundle / "dictionary.json", R"({
          "sections": {"csd": {
            "cs:Salary": {"type": "noun_phrase", "head": "salary",
                          "specifier": "##borrower-possessive"}}},
          "profiles": {"borrower": {"org-subject": "we"},
                       "staff": {"org-subject": "the bank"}}})");
        ValidationReport report = validate_bundle(bundle, std::nullopt);
        CHECK(has_finding(report, "V3", Severity::Error));
        CHECK(find_code(report, "V3")->message.find("borrower-possessive") !=
              std::string::npos);
    }
    SUBCASE("V4: unbound template variable") {
        auto bundle = ts::copy_bundle(dir, ts::credit_bundle());
        std::string csv = ts::credit_sample_csv() +
                          "record-attribution,9,record,cs:records/888\n"
                          "record-attribution,9,rectype,cs:Salary\n";
        ValidationReport report = validate_bundle(bundle, csv);
        CHECK(report.errors() == 0);
        const service::Finding* v4 = find_code(report, "V4");
        REQUIRE(v4);
        CHECK(v4->severity == Severity::Warning);
        CHECK(v4->message.find("provider") != std::string::npos);
    }
    SUBCASE("V5: unparseable query") {
        auto bundle = ts::copy_bundle(dir, ts::credit_bundle());
        ts::write_file(bundle / "queries" / "score-impact.pq",
                       "select * from x a prov:Nope");
        ValidationReport report = validate_bundle(bundle, std::nullopt);
        CHECK(has_finding(report, "V5", Severity::Error));
        CHECK(find_code(report, "V5")->artifact == "queries/score-impact.pq");
    }
}

TEST_CASE("zero validation errors if and only if the bundle loads") {
    ts::TempDir dir("iff");

    SUBCASE("clean bundle: no errors and loads") {
        ValidationReport report =
            validate_bundle(ts::credit_bundle(), std::nullopt);
        CHECK(report.ok());
        CHECK_NOTHROW(service::load_bundle(ts::credit_bundle()));
    }
    SUBCASE("error-level defect: reported and load fails") {
        auto bundle = ts::copy_bundle(dir, ts::credit_bundle());
        ts::write_file(bundle / "queries" / "score-impact.pq", "bogus");
        CHECK(!validate_bundle(bundle, std::nullopt).ok());
        CHECK_THROWS_AS(service::load_bundle(bundle), Error);
    }
    SUBCASE("warning-level defect: still loads") {
        auto bundle = ts::copy_bundle(dir, ts::credit_bundle());
        std::string csv = ts::credit_sample_csv() +
                          "record-attribution,9,record,cs:records/888\n";
        ValidationReport report = validate_bundle(bundle, csv);
        CHECK(report.ok());
        CHECK(report.warnings() > 0);
        CHECK_NOTHROW(service::load_bundle(bundle));
    }
}

TEST_CASE("stats reproduce the fixture-declared counts") {
    SUBCASE("credit-card-mini") {
        StatsReport stats =
            compute_stats(service::load_bundle(ts::credit_bundle()));
        CHECK(stats.templates == 5);
        CHECK(stats.template_statements == 23);
        CHECK(stats.queries == 3);
        CHECK(stats.query_joins == 8);
        CHECK(stats.query_filters == 7);
        CHECK(stats.plans == 3);
        CHECK(stats.plan_nodes == 19);
        CHECK(stats.dictionary_terms == 10);
        CHECK(stats.profiles == 2);
        CHECK(stats.sentences == 4);
    }
    SUBCASE("school-allocation-mini") {
        StatsReport stats =
            compute_stats(service::load_bundle(ts::school_bundle()));
        CHECK(stats.templates == 4);
        CHECK(stats.template_statements == 20);
        CHECK(stats.queries == 2);
        CHECK(stats.query_joins == 4);
        CHECK(stats.query_filters == 4);
        CHECK(stats.plans == 3);
        CHECK(stats.plan_nodes == 19);
        CHECK(stats.dictionary_terms == 8);
        CHECK(stats.profiles == 2);
        CHECK(stats.sentences == 4);
    }
    SUBCASE("empty bundle is all zeros") {
        ts::TempDir dir("empty-stats");
        ts::write_file(dir.path() / "b" / "manifest.json",
                       R"({"app":"empty","namespaces":
                           {"pl":"http://openprovenance.org/ns/plead#"},
                           "decision_type":"pl:Decision",
                           "explanations":[]})");
        ts::write_file(dir.path() / "b" / "dictionary.json", "{}");
        StatsReport stats =
            compute_stats(service::load_bundle(dir.path() / "b"));
        CHECK(stats.templates == 0);
        CHECK(stats.template_statements == 0);
        CHECK(stats.queries == 0);
        CHECK(stats.query_joins == 0);
        CHECK(stats.query_filters == 0);
        CHECK(stats.plans == 0);
        CHECK(stats.plan_nodes == 0);
        CHECK(stats.dictionary_terms == 0);
        CHECK(stats.profiles == 0);
        CHECK(stats.sentences == 0);
    }
}
