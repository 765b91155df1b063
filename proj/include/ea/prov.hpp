#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ea/error.hpp"
#include "ea/qualified_name.hpp"

namespace ea {

/// xsd:dateTime check: YYYY-MM-DDThh:mm:ss(.fff)?(Z|±hh:mm)? with calendar
/// ranges enforced.
bool is_valid_datetime(std::string_view lexical);

/// A validated xsd:dateTime lexical form. Values are compared textually;
/// no timezone normalization is performed.
struct Timestamp {
    std::string lexical;

    friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

struct StringLiteral {
    std::string value;

    friend bool operator==(const StringLiteral&, const StringLiteral&) =
        default;
};

struct TypedLiteral {
    std::string lexical;
    QualifiedName datatype;

    friend bool operator==(const TypedLiteral&, const TypedLiteral&) = default;
};

/// An attribute value: a qualified name, a plain string, or a typed literal.
using AttributeValue = std::variant<QualifiedName, StringLiteral, TypedLiteral>;

/// Ordered attribute multimap. `prov:type` (and any other name) may repeat.
using Attributes = std::vector<std::pair<QualifiedName, AttributeValue>>;

/// All values carried by `name`, in attribute order.
std::vector<const AttributeValue*> attribute_values(const Attributes& attrs,
                                                    const QualifiedName& name);

/// Rejects typed literals whose datatype is xsd:dateTime but whose lexical
/// form is not ISO-8601.
void check_attribute_value(const AttributeValue& value);

enum class ElementKind { Entity, Activity, Agent };

enum class RelationKind {
    WasGeneratedBy,
    Used,
    WasAttributedTo,
    WasAssociatedWith,
    ActedOnBehalfOf,
    WasDerivedFrom,
    WasInformedBy,
};

std::string_view provn_keyword(ElementKind kind);
std::string_view provn_keyword(RelationKind kind);

/// The two field names of a relation kind, in PROV-N argument order.
struct RelationFields {
    std::string_view first;
    std::string_view second;
};
RelationFields relation_fields(RelationKind kind);

/// Only generation and usage carry a time in this subset.
bool relation_supports_time(RelationKind kind);

struct Element {
    ElementKind kind;
    QualifiedName id;
    Attributes attributes;
    std::optional<Timestamp> start_time; // Activity only
    std::optional<Timestamp> end_time;   // Activity only

    friend bool operator==(const Element&, const Element&) = default;
};

struct Relation {
    RelationKind kind;
    QualifiedName id; // synthetic `_:rN` when absent in the source
    bool synthetic_id = false;
    QualifiedName first;  // field value, name per relation_fields(kind)
    QualifiedName second; // field value, name per relation_fields(kind)
    std::optional<Timestamp> time;
    Attributes attributes;

    /// Field by catalog name ("entity", "usedEntity", ...) or "id".
    const QualifiedName* field(std::string_view name) const;

    /// Synthetic ids are interchangeable; explicit ids must match.
    friend bool operator==(const Relation& a, const Relation& b) {
        if (a.kind != b.kind || a.synthetic_id != b.synthetic_id)
            return false;
        if (!a.synthetic_id && !(a.id == b.id))
            return false;
        return a.first == b.first && a.second == b.second &&
               a.time == b.time && a.attributes == b.attributes;
    }
};

using Statement = std::variant<Element, Relation>;

const QualifiedName& statement_id(const Statement& s);
const Attributes& statement_attributes(const Statement& s);

/// A PROV document: a namespace table plus an ordered list of statements.
/// Immutable once built; construction checks id uniqueness and that every
/// prefix in use is declared (or built in).
class ProvDocument {
public:
    const NamespaceTable& namespaces() const { return namespaces_; }
    const std::vector<Statement>& statements() const { return statements_; }

    void declare_prefix(const std::string& prefix, const std::string& iri) {
        namespaces_.declare(prefix, iri);
    }
    void merge_namespaces(const NamespaceTable& other) {
        namespaces_.merge(other);
    }

    /// Appends a statement. Duplicate ids and undeclared prefixes are Data
    /// errors. Relations with an empty id receive `_:rN`, numbered in
    /// document order.
    void add(Element element);
    void add(Relation relation);
    void add(Statement statement);

    /// Appends unless an identical statement is already present (relations
    /// with synthetic ids are matched by content). A statement that clashes
    /// with a different statement of the same id is a Data error.
    /// Returns true when the statement was newly added.
    bool add_or_merge(const Statement& statement);

    const Element* find_element(const std::string& iri) const;
    const Statement* find_statement(const std::string& iri) const;

    std::size_t size() const { return statements_.size(); }
    bool empty() const { return statements_.empty(); }

    /// Statement-for-statement equality; namespace tables are not compared.
    friend bool operator==(const ProvDocument& a, const ProvDocument& b) {
        return a.statements_ == b.statements_;
    }

private:
    void check_prefix(const QualifiedName& name) const;
    void check_statement(const Statement& statement) const;
    std::string content_key(const Relation& relation) const;

    NamespaceTable namespaces_;
    std::vector<Statement> statements_;
    std::map<std::string, std::size_t> by_id_;      // id iri -> index
    std::map<std::string, std::size_t> by_content_; // synthetic relations
    int synthetic_counter_ = 0;
};

/// Ids of all statements reachable from `start`, treating every relation as
/// an undirected hyperedge over its field values. The start element's own id
/// is included. Unknown start ids are a Data error.
std::set<std::string> undirected_reach(const ProvDocument& doc,
                                       const QualifiedName& start);

} // namespace ea
