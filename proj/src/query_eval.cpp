#include "ea/query.hpp"

#include <algorithm>
#include <deque>

namespace ea::query {

namespace {

std::optional<ElementKind> element_kind_of(RecordKind kind) {
    switch (kind) {
    case RecordKind::Entity:
        return ElementKind::Entity;
    case RecordKind::Activity:
        return ElementKind::Activity;
    case RecordKind::Agent:
        return ElementKind::Agent;
    default:
        return std::nullopt;
    }
}

std::optional<RelationKind> relation_kind_of(RecordKind kind) {
    switch (kind) {
    case RecordKind::WasGeneratedBy:
        return RelationKind::WasGeneratedBy;
    case RecordKind::Used:
        return RelationKind::Used;
    case RecordKind::WasAttributedTo:
        return RelationKind::WasAttributedTo;
    case RecordKind::WasAssociatedWith:
        return RelationKind::WasAssociatedWith;
    case RecordKind::ActedOnBehalfOf:
        return RelationKind::ActedOnBehalfOf;
    case RecordKind::WasDerivedFrom:
        return RelationKind::WasDerivedFrom;
    case RecordKind::WasInformedBy:
        return RelationKind::WasInformedBy;
    default:
        return std::nullopt;
    }
}

bool values_equal(const AttributeValue& a, const AttributeValue& b) {
    return a == b; // QualifiedName compares by expanded IRI
}

class Evaluator {
public:
    Evaluator(const QueryAst& ast, const ProvDocument& doc)
        : ast_(ast), doc_(doc) {}

    ResultTable run() {
        ResultTable table;
        for (const FromClause& clause : ast_.from_clauses)
            table.columns.push_back(clause.var);

        for (const FromClause& clause : ast_.from_clauses) {
            if (clause.kind == RecordKind::DerivedFromStar && !star_) {
                star_ = std::make_shared<std::vector<Relation>>(
                    derivation_star(doc_));
            }
            candidates_.push_back(collect_candidates(clause));
        }

        ResultRow row;
        descend(0, row, table);
        if (ast_.group_by)
            group(table);
        table.star_storage = star_;
        return table;
    }

private:
    std::vector<RecordRef> collect_candidates(const FromClause& clause) const {
        std::vector<RecordRef> out;
        if (clause.kind == RecordKind::DerivedFromStar) {
            for (const Relation& relation : *star_)
                out.emplace_back(&relation);
            return out;
        }
        if (auto element_kind = element_kind_of(clause.kind)) {
            for (const Statement& statement : doc_.statements())
                if (const auto* element = std::get_if<Element>(&statement))
                    if (element->kind == *element_kind)
                        out.emplace_back(element);
            return out;
        }
        RelationKind relation_kind = *relation_kind_of(clause.kind);
        for (const Statement& statement : doc_.statements())
            if (const auto* relation = std::get_if<Relation>(&statement))
                if (relation->kind == relation_kind)
                    out.emplace_back(relation);
        return out;
    }

    void descend(std::size_t depth, ResultRow& row, ResultTable& table) {
        if (depth == ast_.from_clauses.size()) {
            if (filters_hold(row))
                table.rows.push_back(row);
            return;
        }
        const FromClause& clause = ast_.from_clauses[depth];
        for (const RecordRef& candidate : candidates_[depth]) {
            row.push_back(ResultCell{false, {candidate}});
            if (joins_hold(clause, row))
                descend(depth + 1, row, table);
            row.pop_back();
        }
    }

    bool joins_hold(const FromClause& clause, const ResultRow& row) const {
        for (const JoinCondition& join : clause.joins) {
            const QualifiedName* left =
                field_value(join.left_var, join.left_field, row);
            const QualifiedName* right =
                field_value(join.right_var, join.right_field, row);
            if (!left || !right || !(*left == *right))
                return false;
        }
        return true;
    }

    const QualifiedName* field_value(const std::string& var,
                                     const std::string& field,
                                     const ResultRow& row) const {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (ast_.from_clauses[i].var != var)
                continue;
            const RecordRef& ref = row[i].single();
            const QualifiedName* value = ref.field(field);
            if (!value)
                throw_data("record type '" +
                           std::string(record_kind_name(
                               ast_.from_clauses[i].kind)) +
                           "' has no field '" + field + "'");
            return value;
        }
        return nullptr;
    }

    bool filters_hold(const ResultRow& row) const {
        for (const FilterCondition& filter : ast_.filters) {
            auto index = index_of(filter.var);
            const RecordRef& ref = row[index].single();
            bool contained = false;
            for (const AttributeValue* value : ref.attribute(filter.attribute))
                if (values_equal(*value, filter.literal)) {
                    contained = true;
                    break;
                }
            if (!contained)
                return false;
        }
        return true;
    }

    std::size_t index_of(const std::string& var) const {
        for (std::size_t i = 0; i < ast_.from_clauses.size(); ++i)
            if (ast_.from_clauses[i].var == var)
                return i;
        throw_data("undeclared variable '" + var + "'");
    }

    void group(ResultTable& table) {
        std::size_t group_index = index_of(ast_.group_by->group_var);
        std::size_t agg_index = index_of(ast_.group_by->agg_var);

        std::vector<ResultRow> grouped;
        std::map<std::string, std::size_t> by_group_id;
        for (const ResultRow& row : table.rows) {
            const std::string& key = row[group_index].single().id().iri;
            auto it = by_group_id.find(key);
            if (it == by_group_id.end()) {
                ResultRow head = row;
                head[agg_index].is_seq = true;
                by_group_id.emplace(key, grouped.size());
                grouped.push_back(std::move(head));
                continue;
            }
            ResultCell& seq = grouped[it->second][agg_index];
            const RecordRef& addition = row[agg_index].single();
            bool already = false;
            for (const RecordRef& existing : seq.refs)
                if (existing.id() == addition.id()) {
                    already = true;
                    break;
                }
            if (!already)
                seq.refs.push_back(addition);
        }
        table.rows = std::move(grouped);
    }

    const QueryAst& ast_;
    const ProvDocument& doc_;
    std::vector<std::vector<RecordRef>> candidates_;
    std::shared_ptr<std::vector<Relation>> star_;
};

} // namespace

const QualifiedName& RecordRef::id() const {
    return element_ ? element_->id : relation_->id;
}

const QualifiedName* RecordRef::field(std::string_view name) const {
    if (element_)
        return name == "id" ? &element_->id : nullptr;
    return relation_->field(name);
}

std::vector<const AttributeValue*>
RecordRef::attribute(const QualifiedName& name) const {
    if (element_)
        return attribute_values(element_->attributes, name);
    return attribute_values(relation_->attributes, name);
}

std::optional<std::size_t>
ResultTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    return std::nullopt;
}

const ResultCell* ResultTable::cell(const ResultRow& row,
                                    std::string_view name) const {
    auto index = column_index(name);
    if (!index || *index >= row.size())
        return nullptr;
    return &row[*index];
}

std::vector<Relation> derivation_star(const ProvDocument& doc) {
    // Direct edges generated -> used, in document order.
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::string> node_order;
    std::map<std::string, QualifiedName> names;
    std::map<std::string, std::vector<std::string>> successors;

    auto note_node = [&](const QualifiedName& q) {
        if (names.emplace(q.iri, q).second)
            node_order.push_back(q.iri);
    };

    for (const Statement& statement : doc.statements()) {
        const auto* relation = std::get_if<Relation>(&statement);
        if (!relation || relation->kind != RelationKind::WasDerivedFrom)
            continue;
        note_node(relation->first);
        note_node(relation->second);
        successors[relation->first.iri].push_back(relation->second.iri);
    }

    std::vector<Relation> out;
    for (const std::string& source : node_order) {
        // BFS over direct edges; each target reached by a path of length >= 1.
        std::set<std::string> seen;
        std::deque<std::string> frontier{source};
        while (!frontier.empty()) {
            std::string current = std::move(frontier.front());
            frontier.pop_front();
            auto it = successors.find(current);
            if (it == successors.end())
                continue;
            for (const std::string& next : it->second) {
                if (!seen.insert(next).second)
                    continue;
                frontier.push_back(next);
                const QualifiedName& g = names.at(source);
                const QualifiedName& u = names.at(next);
                Relation virtual_relation;
                virtual_relation.kind = RelationKind::WasDerivedFrom;
                std::string local = g.compact() + "->" + u.compact();
                virtual_relation.id = QualifiedName{
                    "star", local, "star:" + g.iri + "->" + u.iri};
                virtual_relation.first = g;
                virtual_relation.second = u;
                out.push_back(std::move(virtual_relation));
            }
        }
    }
    return out;
}

ResultTable evaluate(const QueryAst& ast, const ProvDocument& doc) {
    return Evaluator(ast, doc).run();
}

} // namespace ea::query
