#pragma once

// Seeded random inputs for the property tests: PROV documents and query
// texts. Deterministic given the engine state.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ea/prov.hpp"
#include "ea/query.hpp"

namespace testsupport {

inline int pick(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(std::mt19937& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline const std::string kExampleNs = "http://example.org/";

struct GeneratedDoc {
    ea::ProvDocument doc;
    std::vector<ea::QualifiedName> entities;
    std::vector<ea::QualifiedName> activities;
    std::vector<ea::QualifiedName> agents;
};

inline ea::Attributes random_attributes(std::mt19937& rng,
                                        const ea::NamespaceTable& ns) {
    ea::Attributes attrs;
    int types = pick(rng, 0, 2);
    for (int i = 0; i < types; ++i)
        attrs.emplace_back(
            ns.resolve("prov", "type"),
            ns.resolve("ex", "T" + std::to_string(pick(rng, 1, 3))));
    if (chance(rng, 0.3))
        attrs.emplace_back(ns.resolve("ex", "note"),
                           ea::StringLiteral{std::string("n") + std::to_string(
                                                 pick(rng, 1, 3))});
    if (chance(rng, 0.15))
        attrs.emplace_back(
            ns.resolve("ex", "when"),
            ea::TypedLiteral{"2021-04-0" + std::to_string(pick(rng, 1, 9)) +
                                 "T12:00:00",
                             ns.resolve("xsd", "dateTime")});
    return attrs;
}

inline GeneratedDoc random_document(std::mt19937& rng,
                                    int max_statements = 15) {
    GeneratedDoc out;
    out.doc.declare_prefix("ex", kExampleNs);
    const ea::NamespaceTable& ns = out.doc.namespaces();

    int element_count = pick(rng, 1, std::max(1, max_statements * 2 / 3));
    for (int i = 0; i < element_count; ++i) {
        ea::Element element;
        int kind = pick(rng, 0, 2);
        element.kind = static_cast<ea::ElementKind>(kind);
        const char* stem = kind == 0 ? "e" : kind == 1 ? "a" : "g";
        element.id = ns.resolve("ex", stem + std::to_string(i));
        element.attributes = random_attributes(rng, ns);
        if (element.kind == ea::ElementKind::Activity && chance(rng, 0.25))
            element.start_time = ea::Timestamp{"2021-01-01T00:00:00Z"};
        switch (element.kind) {
        case ea::ElementKind::Entity:
            out.entities.push_back(element.id);
            break;
        case ea::ElementKind::Activity:
            out.activities.push_back(element.id);
            break;
        case ea::ElementKind::Agent:
            out.agents.push_back(element.id);
            break;
        }
        out.doc.add(std::move(element));
    }

    auto pick_from = [&rng](const std::vector<ea::QualifiedName>& pool)
        -> const ea::QualifiedName* {
        if (pool.empty())
            return nullptr;
        return &pool[static_cast<std::size_t>(
            pick(rng, 0, static_cast<int>(pool.size()) - 1))];
    };

    int relation_count =
        pick(rng, 0, std::max(0, max_statements - element_count));
    int explicit_ids = 0;
    for (int i = 0; i < relation_count; ++i) {
        ea::Relation relation;
        relation.kind = static_cast<ea::RelationKind>(pick(rng, 0, 6));
        const ea::QualifiedName* first = nullptr;
        const ea::QualifiedName* second = nullptr;
        switch (relation.kind) {
        case ea::RelationKind::WasGeneratedBy:
            first = pick_from(out.entities);
            second = pick_from(out.activities);
            break;
        case ea::RelationKind::Used:
            first = pick_from(out.activities);
            second = pick_from(out.entities);
            break;
        case ea::RelationKind::WasAttributedTo:
            first = pick_from(out.entities);
            second = pick_from(out.agents);
            break;
        case ea::RelationKind::WasAssociatedWith:
            first = pick_from(out.activities);
            second = pick_from(out.agents);
            break;
        case ea::RelationKind::ActedOnBehalfOf:
            first = pick_from(out.agents);
            second = pick_from(out.agents);
            break;
        case ea::RelationKind::WasDerivedFrom:
            first = pick_from(out.entities);
            second = pick_from(out.entities);
            break;
        case ea::RelationKind::WasInformedBy:
            first = pick_from(out.activities);
            second = pick_from(out.activities);
            break;
        }
        if (!first || !second)
            continue;
        relation.first = *first;
        relation.second = *second;
        if (chance(rng, 0.2))
            relation.id = ns.resolve("ex", "r" + std::to_string(explicit_ids++));
        if (ea::relation_supports_time(relation.kind) && chance(rng, 0.25))
            relation.time = ea::Timestamp{"2021-02-02T10:30:00"};
        if (chance(rng, 0.2))
            relation.attributes = random_attributes(rng, ns);
        out.doc.add(std::move(relation));
    }
    return out;
}

/// Query text over the generated vocabulary: up to `max_from` clauses,
/// `max_joins` joins and `max_filters` filters, with an optional group-by.
inline std::string random_query_text(std::mt19937& rng, int max_from = 3,
                                     int max_joins = 2, int max_filters = 2) {
    static const struct {
        const char* type;
        const char* fields[3];
        int field_count;
    } kinds[] = {
        {"prov:Entity", {"id"}, 1},
        {"prov:Activity", {"id"}, 1},
        {"prov:Agent", {"id"}, 1},
        {"prov:WasGeneratedBy", {"id", "entity", "activity"}, 3},
        {"prov:Used", {"id", "activity", "entity"}, 3},
        {"prov:WasAttributedTo", {"id", "entity", "agent"}, 3},
        {"prov:WasDerivedFrom", {"id", "generatedEntity", "usedEntity"}, 3},
        {"provext:WasDerivedFromStar",
         {"id", "generatedEntity", "usedEntity"},
         3},
    };

    int from_count = pick(rng, 1, max_from);
    std::vector<int> clause_kinds;
    std::ostringstream out;
    out << "prefix ex <" << kExampleNs << ">\nselect *\n";
    int joins_left = max_joins;
    for (int i = 0; i < from_count; ++i) {
        int kind = pick(rng, 0, 7);
        clause_kinds.push_back(kind);
        out << "from v" << i << " a " << kinds[kind].type << "\n";
        if (i > 0) {
            int join_count = pick(rng, 0, std::min(joins_left, 2));
            // Joining the new variable against an earlier one keeps results
            // connected, mirroring how the queries are written by hand.
            for (int j = 0; j < join_count; ++j) {
                int other = pick(rng, 0, i - 1);
                const auto& left = kinds[clause_kinds[i]];
                const auto& right = kinds[clause_kinds[other]];
                out << "  join v" << i << "."
                    << left.fields[pick(rng, 0, left.field_count - 1)]
                    << " = v" << other << "."
                    << right.fields[pick(rng, 0, right.field_count - 1)]
                    << "\n";
                --joins_left;
            }
        }
    }

    int filter_count = pick(rng, 0, max_filters);
    for (int i = 0; i < filter_count; ++i) {
        out << (i == 0 ? "where " : "and ");
        int var = pick(rng, 0, from_count - 1);
        if (chance(rng, 0.7))
            out << "v" << var << "[prov:type] >= 'ex:T" << pick(rng, 1, 3)
                << "'\n";
        else
            out << "v" << var << "[ex:note] >= 'n" << pick(rng, 1, 3)
                << "'\n";
    }

    if (from_count >= 2 && chance(rng, 0.4)) {
        int group = pick(rng, 0, from_count - 1);
        int agg = (group + 1) % from_count;
        out << "group by v" << group << " aggregate v" << agg << " with Seq\n";
    }
    return out.str();
}

} // namespace testsupport
