#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ea/prov.hpp"

namespace ea::query {

/// What a query variable ranges over: one element kind, one relation kind,
/// or the virtual derivation closure.
enum class RecordKind {
    Entity,
    Activity,
    Agent,
    WasGeneratedBy,
    Used,
    WasAttributedTo,
    WasAssociatedWith,
    ActedOnBehalfOf,
    WasDerivedFrom,
    WasInformedBy,
    DerivedFromStar,
};

std::string_view record_kind_name(RecordKind kind);

/// Queryable fields of a record kind ("id" plus the relation's field catalog).
bool has_field(RecordKind kind, std::string_view field);

struct JoinCondition {
    std::string left_var;
    std::string left_field;
    std::string right_var;
    std::string right_field;
};

struct FromClause {
    std::string var;
    RecordKind kind;
    QualifiedName record_type;
    std::vector<JoinCondition> joins;
};

struct FilterCondition {
    std::string var;
    QualifiedName attribute;
    AttributeValue literal;
};

struct GroupClause {
    std::string group_var;
    std::string agg_var; // aggregated with Seq
};

struct QueryAst {
    NamespaceTable prefixes;
    std::vector<FromClause> from_clauses;
    std::vector<FilterCondition> filters;
    std::optional<GroupClause> group_by;

    bool declares_var(std::string_view name) const;
};

/// Parses the query language: `prefix NAME <IRI>`*, `select *`, one or more
/// `from VAR a QNAME` each with optional `join VAR.FIELD = VAR.FIELD`
/// clauses, an optional `where COND (and COND)*` with
/// COND := VAR[QNAME] >= 'value' (`=` is an alias), and an optional
/// `group by VAR aggregate VAR with Seq`. Keywords are case-insensitive and
/// `#` starts a comment.
QueryAst parse_query(std::string_view text);

/// A read-only handle onto an element or relation of a document (or a
/// virtual closure relation owned by a ResultTable).
class RecordRef {
public:
    RecordRef() = default;
    explicit RecordRef(const Element* element) : element_(element) {}
    explicit RecordRef(const Relation* relation) : relation_(relation) {}

    bool valid() const { return element_ || relation_; }
    bool is_element() const { return element_ != nullptr; }
    const Element* element() const { return element_; }
    const Relation* relation() const { return relation_; }

    const QualifiedName& id() const;

    /// Field value by name; elements expose only "id".
    const QualifiedName* field(std::string_view name) const;

    std::vector<const AttributeValue*>
    attribute(const QualifiedName& name) const;

    friend bool operator==(const RecordRef& a, const RecordRef& b) {
        return (!a.valid() && !b.valid()) ||
               (a.valid() && b.valid() && a.id() == b.id());
    }

private:
    const Element* element_ = nullptr;
    const Relation* relation_ = nullptr;
};

/// A row cell: a single record or a Seq aggregate.
struct ResultCell {
    bool is_seq = false;
    std::vector<RecordRef> refs; // exactly one unless is_seq

    const RecordRef& single() const { return refs.front(); }
};

using ResultRow = std::vector<ResultCell>; // aligned with ResultTable.columns

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<ResultRow> rows;
    /// Keeps the virtual closure relations referenced by rows alive.
    std::shared_ptr<const std::vector<Relation>> star_storage;

    std::optional<std::size_t> column_index(std::string_view name) const;
    const ResultCell* cell(const ResultRow& row, std::string_view name) const;
};

/// One virtual relation per ordered pair (g, u) linked by a WasDerivedFrom
/// path of length >= 1. Ids are `star:<g>-><u>`; fields are
/// generatedEntity/usedEntity. Terminates on cycles; no fabricated reflexive
/// pairs. Output order is deterministic: sources in first-mention order over
/// the document's derivation edges, targets in BFS encounter order.
std::vector<Relation> derivation_star(const ProvDocument& doc);

/// Nested-loop evaluation in document order with containment-semantics
/// filters and optional Seq aggregation. Rows borrow the document's
/// statements; the document must outlive the table.
ResultTable evaluate(const QueryAst& ast, const ProvDocument& doc);

struct QueryCost {
    int joins = 0;
    int filters = 0;
};

QueryCost query_cost(const QueryAst& ast);

} // namespace ea::query
