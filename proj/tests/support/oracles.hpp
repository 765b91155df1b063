#pragma once

// Independent reference implementations the engines are checked against:
// an all-assignments query enumerator and a matrix-fixpoint derivation
// closure. They share nothing with the production evaluation path beyond the
// document types.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ea/prov.hpp"
#include "ea/query.hpp"

namespace testsupport {

/// Transitive closure of the WasDerivedFrom edges by repeated boolean matrix
/// "multiplication" until a fixpoint: pair (g, u) iff a path of length >= 1.
inline std::set<std::pair<std::string, std::string>>
closure_oracle(const ea::ProvDocument& doc) {
    std::vector<std::string> nodes;
    std::map<std::string, std::size_t> index;
    auto note = [&](const std::string& iri) {
        if (index.emplace(iri, nodes.size()).second)
            nodes.push_back(iri);
    };
    for (const ea::Statement& statement : doc.statements()) {
        const auto* relation = std::get_if<ea::Relation>(&statement);
        if (!relation || relation->kind != ea::RelationKind::WasDerivedFrom)
            continue;
        note(relation->first.iri);
        note(relation->second.iri);
    }

    std::size_t n = nodes.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const ea::Statement& statement : doc.statements()) {
        const auto* relation = std::get_if<ea::Relation>(&statement);
        if (!relation || relation->kind != ea::RelationKind::WasDerivedFrom)
            continue;
        reach[index[relation->first.iri]][index[relation->second.iri]] = true;
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (reach[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (reach[k][j] && !reach[i][j]) {
                            reach[i][j] = true;
                            changed = true;
                        }
    }

    std::set<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (reach[i][j])
                pairs.emplace(nodes[i], nodes[j]);
    return pairs;
}

/// A row canonicalized for order-insensitive comparison: variable -> sorted
/// record ids (singletons are one-element lists).
using CanonicalRow = std::vector<std::vector<std::string>>;

inline std::multiset<CanonicalRow>
canonicalize(const ea::query::ResultTable& table) {
    std::multiset<CanonicalRow> rows;
    for (const ea::query::ResultRow& row : table.rows) {
        CanonicalRow canonical;
        for (const ea::query::ResultCell& cell : row) {
            std::vector<std::string> ids;
            for (const ea::query::RecordRef& ref : cell.refs)
                ids.push_back(ref.id().iri);
            std::sort(ids.begin(), ids.end());
            canonical.push_back(std::move(ids));
        }
        rows.insert(std::move(canonical));
    }
    return rows;
}

/// Full cross-product enumeration: every assignment of candidates to
/// variables, then every join and filter checked on the complete assignment.
class BruteForce {
public:
    BruteForce(const ea::query::QueryAst& ast, const ea::ProvDocument& doc)
        : ast_(ast), doc_(doc) {
        star_ = std::make_shared<std::vector<ea::Relation>>(
            star_from_closure(doc));
    }

    /// Builds the star candidates from the matrix-fixpoint closure, not from
    /// derivation_star, so the two evaluation paths stay independent.
    static std::vector<ea::Relation>
    star_from_closure(const ea::ProvDocument& doc) {
        std::map<std::string, ea::QualifiedName> names;
        for (const ea::Statement& statement : doc.statements()) {
            const auto* relation = std::get_if<ea::Relation>(&statement);
            if (!relation ||
                relation->kind != ea::RelationKind::WasDerivedFrom)
                continue;
            names.emplace(relation->first.iri, relation->first);
            names.emplace(relation->second.iri, relation->second);
        }
        std::vector<ea::Relation> out;
        for (const auto& [g_iri, u_iri] : closure_oracle(doc)) {
            const ea::QualifiedName& g = names.at(g_iri);
            const ea::QualifiedName& u = names.at(u_iri);
            ea::Relation relation;
            relation.kind = ea::RelationKind::WasDerivedFrom;
            relation.id = ea::QualifiedName{"star",
                                            g.compact() + "->" + u.compact(),
                                            "star:" + g.iri + "->" + u.iri};
            relation.first = g;
            relation.second = u;
            out.push_back(std::move(relation));
        }
        return out;
    }

    ea::query::ResultTable run() {
        ea::query::ResultTable table;
        for (const auto& clause : ast_.from_clauses)
            table.columns.push_back(clause.var);
        for (const auto& clause : ast_.from_clauses)
            candidates_.push_back(candidates_for(clause));

        std::vector<ea::query::RecordRef> assignment;
        enumerate(0, assignment, table);
        if (ast_.group_by)
            group(table);
        table.star_storage = star_;
        return table;
    }

private:
    std::vector<ea::query::RecordRef>
    candidates_for(const ea::query::FromClause& clause) const {
        using ea::query::RecordKind;
        std::vector<ea::query::RecordRef> out;
        if (clause.kind == RecordKind::DerivedFromStar) {
            for (const ea::Relation& relation : *star_)
                out.emplace_back(&relation);
            return out;
        }
        for (const ea::Statement& statement : doc_.statements()) {
            if (const auto* element = std::get_if<ea::Element>(&statement)) {
                if ((clause.kind == RecordKind::Entity &&
                     element->kind == ea::ElementKind::Entity) ||
                    (clause.kind == RecordKind::Activity &&
                     element->kind == ea::ElementKind::Activity) ||
                    (clause.kind == RecordKind::Agent &&
                     element->kind == ea::ElementKind::Agent))
                    out.emplace_back(element);
            } else {
                const auto& relation = std::get<ea::Relation>(statement);
                bool match = false;
                switch (clause.kind) {
                case RecordKind::WasGeneratedBy:
                    match = relation.kind == ea::RelationKind::WasGeneratedBy;
                    break;
                case RecordKind::Used:
                    match = relation.kind == ea::RelationKind::Used;
                    break;
                case RecordKind::WasAttributedTo:
                    match = relation.kind == ea::RelationKind::WasAttributedTo;
                    break;
                case RecordKind::WasAssociatedWith:
                    match =
                        relation.kind == ea::RelationKind::WasAssociatedWith;
                    break;
                case RecordKind::ActedOnBehalfOf:
                    match = relation.kind == ea::RelationKind::ActedOnBehalfOf;
                    break;
                case RecordKind::WasDerivedFrom:
                    match = relation.kind == ea::RelationKind::WasDerivedFrom;
                    break;
                case RecordKind::WasInformedBy:
                    match = relation.kind == ea::RelationKind::WasInformedBy;
                    break;
                default:
                    break;
                }
                if (match)
                    out.emplace_back(&relation);
            }
        }
        return out;
    }

    void enumerate(std::size_t depth,
                   std::vector<ea::query::RecordRef>& assignment,
                   ea::query::ResultTable& table) {
        if (depth == ast_.from_clauses.size()) {
            if (satisfied(assignment)) {
                ea::query::ResultRow row;
                for (const ea::query::RecordRef& ref : assignment)
                    row.push_back(ea::query::ResultCell{false, {ref}});
                table.rows.push_back(std::move(row));
            }
            return;
        }
        for (const ea::query::RecordRef& candidate : candidates_[depth]) {
            assignment.push_back(candidate);
            enumerate(depth + 1, assignment, table);
            assignment.pop_back();
        }
    }

    bool satisfied(const std::vector<ea::query::RecordRef>& assignment) const {
        for (std::size_t i = 0; i < ast_.from_clauses.size(); ++i) {
            for (const auto& join : ast_.from_clauses[i].joins) {
                const ea::QualifiedName* left =
                    assignment[var_index(join.left_var)].field(
                        join.left_field);
                const ea::QualifiedName* right =
                    assignment[var_index(join.right_var)].field(
                        join.right_field);
                if (!left || !right || !(left->iri == right->iri))
                    return false;
            }
        }
        for (const auto& filter : ast_.filters) {
            const ea::query::RecordRef& ref = assignment[var_index(filter.var)];
            bool contained = false;
            for (const ea::AttributeValue* value :
                 ref.attribute(filter.attribute))
                if (*value == filter.literal)
                    contained = true;
            if (!contained)
                return false;
        }
        return true;
    }

    std::size_t var_index(const std::string& var) const {
        for (std::size_t i = 0; i < ast_.from_clauses.size(); ++i)
            if (ast_.from_clauses[i].var == var)
                return i;
        throw std::logic_error("unknown variable " + var);
    }

    void group(ea::query::ResultTable& table) const {
        std::size_t group_index = var_index(ast_.group_by->group_var);
        std::size_t agg_index = var_index(ast_.group_by->agg_var);
        std::vector<ea::query::ResultRow> grouped;
        std::map<std::string, std::size_t> seen;
        for (const ea::query::ResultRow& row : table.rows) {
            const std::string& key = row[group_index].single().id().iri;
            auto it = seen.find(key);
            if (it == seen.end()) {
                ea::query::ResultRow head = row;
                head[agg_index].is_seq = true;
                seen.emplace(key, grouped.size());
                grouped.push_back(std::move(head));
                continue;
            }
            auto& seq = grouped[it->second][agg_index];
            bool exists = false;
            for (const auto& ref : seq.refs)
                exists = exists ||
                         ref.id().iri == row[agg_index].single().id().iri;
            if (!exists)
                seq.refs.push_back(row[agg_index].single());
        }
        table.rows = std::move(grouped);
    }

    const ea::query::QueryAst& ast_;
    const ea::ProvDocument& doc_;
    std::shared_ptr<const std::vector<ea::Relation>> star_;
    std::vector<std::vector<ea::query::RecordRef>> candidates_;
};

inline ea::query::ResultTable brute_force(const ea::query::QueryAst& ast,
                                          const ea::ProvDocument& doc) {
    return BruteForce(ast, doc).run();
}

} // namespace testsupport
