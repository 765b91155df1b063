#include <doctest.h>

#include <random>

#include "ea/provn.hpp"
#include "ea/template_engine.hpp"
#include "support/generators.hpp"

using namespace ea;
using namespace ea::tmpl;

namespace {

const char* kCs = "http://openprovenance.org/ns/creditscoring#";

// The attribution pattern: an entity attributed to an agent, both identified
// by variables.
const char* kAttributionTemplate = R"(document
  prefix cs <http://openprovenance.org/ns/creditscoring#>
  prefix var <http://openprovenance.org/var#>
  entity(var:record, [prov:type='cs:ElectoralRegistryEntry'])
  agent(var:provider, [prov:type='cs:DataProvider'])
  wasAttributedTo(var:record, var:provider)
endDocument
)";

Template attribution() {
    return load_template(parse_provn(kAttributionTemplate), "attribution");
}

QualifiedName cs(const std::string& local) {
    return QualifiedName{"cs", local, std::string(kCs) + local};
}

} // namespace

TEST_CASE("load_template collects the variable set") {
    SUBCASE("attribution pattern has record and provider") {
        Template t = attribution();
        CHECK(t.variables == std::set<std::string>{"record", "provider"});
    }
    SUBCASE("fully concrete document has none") {
        Template t = load_template(
            parse_provn("document\n prefix cs <http://x#>\n entity(cs:e1)\n"
                        "endDocument"),
            "concrete");
        CHECK(t.variables.empty());
    }
    SUBCASE("variables in attribute values are collected") {
        Template t = load_template(parse_provn(R"(document
  prefix cs <http://openprovenance.org/ns/creditscoring#>
  prefix var <http://openprovenance.org/var#>
  entity(var:e, [cs:recordedAt='var:when'])
endDocument)"),
                                   "timed");
        CHECK(t.variables == std::set<std::string>{"e", "when"});
    }
    SUBCASE("var prefix must use the reserved namespace") {
        CHECK_THROWS_WITH_AS(
            load_template(parse_provn("document\n prefix var <http://no#>\n"
                                      " entity(var:e)\nendDocument"),
                          "bad"),
            doctest::Contains("must be bound"), Error);
    }
    SUBCASE("variables may not name attributes") {
        CHECK_THROWS_WITH_AS(
            load_template(parse_provn("document\n"
                                      "  prefix var "
                                      "<http://openprovenance.org/var#>\n"
                                      "  entity(var:e, [var:name=\"x\"])\n"
                                      "endDocument"),
                          "bad"),
            doctest::Contains("attribute-name position"), Error);
    }
}

TEST_CASE("bindings CSV parsing") {
    NamespaceTable ns;
    ns.declare("cs", kCs);

    SUBCASE("qualified names, strings and typed literals") {
        // Typed literals keep their quotes through the CSV layer, so the
        // cell itself is quoted with doubled inner quotes.
        BindingsTable table = parse_bindings_csv(
            "template,instance,variable,value\n"
            "attribution,1,record,cs:records/956\n"
            "attribution,1,note,\"looks fine\"\n"
            "attribution,1,when,\"\"\"2021-04-01T00:00:00\"\"^^xsd:dateTime\"\n",
            ns);
        REQUIRE(table.groups.size() == 1);
        const BindingSet& bindings = table.groups.front().bindings;
        CHECK(std::get<QualifiedName>(bindings.at("record")).compact() ==
              "cs:records/956");
        CHECK(std::get<StringLiteral>(bindings.at("note")).value ==
              "looks fine");
        CHECK(std::get<TypedLiteral>(bindings.at("when")).lexical ==
              "2021-04-01T00:00:00");
    }
    SUBCASE("empty body yields an empty table") {
        BindingsTable table =
            parse_bindings_csv("template,instance,variable,value\n", ns);
        CHECK(table.rows.empty());
        CHECK(table.groups.empty());
    }
    SUBCASE("two instances form two groups") {
        BindingsTable table = parse_bindings_csv(
            "template,instance,variable,value\n"
            "attribution,1,record,cs:records/960\n"
            "attribution,2,record,cs:records/956\n",
            ns);
        CHECK(table.groups.size() == 2);
    }
    SUBCASE("missing header") {
        CHECK_THROWS_WITH_AS(parse_bindings_csv("a,b,c,d\nx,y,z,w\n", ns),
                             doctest::Contains("missing bindings header"),
                             Error);
    }
    SUBCASE("unknown prefix in a qname-shaped value") {
        CHECK_THROWS_WITH_AS(
            parse_bindings_csv("template,instance,variable,value\n"
                               "attribution,1,record,zz:records/1\n",
                               ns),
            doctest::Contains("unknown prefix 'zz'"), Error);
    }
    SUBCASE("duplicate binding") {
        CHECK_THROWS_WITH_AS(
            parse_bindings_csv("template,instance,variable,value\n"
                               "attribution,1,record,cs:a\n"
                               "attribution,1,record,cs:b\n",
                               ns),
            doctest::Contains("duplicate binding"), Error);
    }
    SUBCASE("bare values fall back to string literals") {
        BindingsTable table =
            parse_bindings_csv("template,instance,variable,value\n"
                               "attribution,1,outcome,rejected\n",
                               ns);
        CHECK(std::get<StringLiteral>(
                  table.groups.front().bindings.at("outcome"))
                  .value == "rejected");
    }
    SUBCASE("quoted cells may carry commas, newlines and doubled quotes") {
        BindingsTable table = parse_bindings_csv(
            "template,instance,variable,value\r\n"
            "attribution,1,note,\"a, \"\"quoted\"\"\nvalue\"\r\n",
            ns);
        CHECK(std::get<StringLiteral>(
                  table.groups.front().bindings.at("note"))
                  .value == "a, \"quoted\"\nvalue");
    }
    SUBCASE("wrong field count is reported with its row number") {
        CHECK_THROWS_WITH_AS(
            parse_bindings_csv("template,instance,variable,value\n"
                               "attribution,1,record\n",
                               ns),
            doctest::Contains("row 2"), Error);
    }
    SUBCASE("invalid dateTime typed literal is rejected") {
        CHECK_THROWS_WITH_AS(
            parse_bindings_csv(
                "template,instance,variable,value\n"
                "attribution,1,when,\"\"\"soon\"\"^^xsd:dateTime\"\n",
                ns),
            doctest::Contains("not a valid xsd:dateTime"), Error);
    }
}

TEST_CASE("expand substitutes every variable occurrence") {
    Template t = attribution();
    BindingSet bindings{{"record", cs("records/956")},
                        {"provider", cs("agencies/cra1")}};
    std::vector<Statement> statements = expand(t, bindings);
    REQUIRE(statements.size() == 3);

    const auto& entity = std::get<Element>(statements[0]);
    CHECK(entity.id == cs("records/956"));
    CHECK(std::get<QualifiedName>(entity.attributes[0].second).local ==
          "ElectoralRegistryEntry");
    const auto& agent = std::get<Element>(statements[1]);
    CHECK(agent.id == cs("agencies/cra1"));
    const auto& attribution_rel = std::get<Relation>(statements[2]);
    CHECK(attribution_rel.first == cs("records/956"));
    CHECK(attribution_rel.second == cs("agencies/cra1"));
}

TEST_CASE("expand errors") {
    Template t = attribution();
    SUBCASE("unbound variable is named") {
        BindingSet bindings{{"record", cs("records/956")}};
        CHECK_THROWS_WITH_AS(expand(t, bindings),
                             doctest::Contains("unbound variable 'provider'"),
                             Error);
    }
    SUBCASE("string literal in an identifier position") {
        BindingSet bindings{{"record", StringLiteral{"oops"}},
                            {"provider", cs("agencies/cra1")}};
        CHECK_THROWS_WITH_AS(expand(t, bindings),
                             doctest::Contains("identifier position"), Error);
    }
}

TEST_CASE("zero-variable template expands to its body") {
    Template t = load_template(
        parse_provn("document\n  prefix cs <http://x#>\n  entity(cs:e1)\n"
                    "endDocument"),
        "concrete");
    std::vector<Statement> statements = expand(t, {});
    REQUIRE(statements.size() == 1);
    CHECK(std::get<Element>(statements[0]).id.compact() == "cs:e1");
}

TEST_CASE("expand_decision merges groups and dedups shared statements") {
    std::vector<Template> templates;
    templates.push_back(attribution());

    BindingsTable table = parse_bindings_csv(
        "template,instance,variable,value\n"
        "attribution,1,record,cs:records/960\n"
        "attribution,1,provider,cs:agencies/cra1\n"
        "attribution,2,record,cs:records/956\n"
        "attribution,2,provider,cs:agencies/cra1\n",
        templates.front().body.namespaces());

    ProvDocument doc = expand_decision(templates, table);
    // 2 entities + 1 shared agent + 2 attributions
    CHECK(doc.statements().size() == 5);
    CHECK(doc.find_element(cs("agencies/cra1").iri) != nullptr);

    SUBCASE("no var: name survives expansion") {
        CHECK(write_provn(doc).find("var:") == std::string::npos);
    }
    SUBCASE("synthetic relation ids are renumbered in document order") {
        const auto& last = std::get<Relation>(doc.statements().back());
        CHECK(last.id.compact() == "_:r2");
    }
    SUBCASE("unknown template name") {
        BindingsTable bad = parse_bindings_csv(
            "template,instance,variable,value\nnope,1,x,cs:e1\n",
            templates.front().body.namespaces());
        CHECK_THROWS_WITH_AS(expand_decision(templates, bad),
                             doctest::Contains("unknown template 'nope'"),
                             Error);
    }
    SUBCASE("group errors name template and instance") {
        BindingsTable bad = parse_bindings_csv(
            "template,instance,variable,value\n"
            "attribution,7,record,cs:records/1\n",
            templates.front().body.namespaces());
        CHECK_THROWS_WITH_AS(expand_decision(templates, bad),
                             doctest::Contains("instance '7'"), Error);
    }
}

TEST_CASE("empty table expands to an empty document") {
    std::vector<Template> templates;
    templates.push_back(attribution());
    BindingsTable table;
    CHECK(expand_decision(templates, table).empty());
}

TEST_CASE("expansion distributes over disjoint instance groups") {
    std::vector<Template> templates;
    templates.push_back(attribution());
    const NamespaceTable& ns = templates.front().body.namespaces();

    std::string header = "template,instance,variable,value\n";
    std::string rows1 = "attribution,1,record,cs:records/960\n"
                        "attribution,1,provider,cs:agencies/cra1\n";
    std::string rows2 = "attribution,2,record,cs:records/956\n"
                        "attribution,2,provider,cs:agencies/cra2\n";

    ProvDocument combined = expand_decision(
        templates, parse_bindings_csv(header + rows1 + rows2, ns));
    ProvDocument merged =
        expand_decision(templates, parse_bindings_csv(header + rows1, ns));
    ProvDocument second =
        expand_decision(templates, parse_bindings_csv(header + rows2, ns));
    for (const Statement& statement : second.statements())
        merged.add_or_merge(statement);
    CHECK(merged == combined);
}

TEST_CASE("expansion is deterministic") {
    Template t = attribution();
    BindingSet bindings{{"record", cs("records/1")},
                        {"provider", cs("agencies/2")}};
    auto a = expand(t, bindings);
    auto b = expand(t, bindings);
    CHECK(a == b);
}
