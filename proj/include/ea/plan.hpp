#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ea/prov.hpp"
#include "ea/query.hpp"
#include "ea/text_format.hpp"

namespace ea::plan {

enum class NodeKind {
    Clause,
    NounPhrase,
    CoordinatedPhrase,
    AdjectivePhrase,
    Literal,
    IdLink, // resolved noun+localname output; rendered per output format
    Iterator,
    Funcall,
    DictRef,
    Features,
};

enum class Tense { Present, Past, Future };

std::string_view node_kind_name(NodeKind kind);

/// One node of an explanation-plan syntax tree. A tagged union kept flat:
/// only the members of the active kind are meaningful.
struct PlanNode {
    NodeKind kind = NodeKind::Literal;
    /// True for nodes promoted from bare strings (literal heads, sigil
    /// dictionary references). Promoted nodes do not count toward plan_size.
    bool promoted = false;

    // clause
    std::unique_ptr<PlanNode> subject;
    std::unique_ptr<PlanNode> object;
    std::unique_ptr<PlanNode> indirect_object;
    std::unique_ptr<PlanNode> features;
    std::string verb;
    std::string complementiser;

    // noun_phrase / adjective_phrase
    std::unique_ptr<PlanNode> head;
    std::unique_ptr<PlanNode> specifier;
    std::vector<PlanNode> pre_modifiers;
    std::vector<PlanNode> post_modifiers;
    bool plural = false;

    // coordinated_phrase
    std::string conjunction;
    std::vector<PlanNode> coordinates;

    // literal / IdLink
    std::string text; // IdLink: the local name
    std::string href; // IdLink: the expanded IRI

    // iterator (attached to its parent via the parent's `iterator` member)
    std::string variable;
    std::string target_slot;
    std::unique_ptr<PlanNode> element;
    std::unique_ptr<PlanNode> iterator;

    // funcall
    std::string function;
    std::string object_var;
    std::optional<QualifiedName> property;
    std::string field;
    std::string arg1;
    std::string arg2;

    // dict_ref
    std::string key;

    // features
    Tense tense = Tense::Present;
    bool passive = false;

    PlanNode() = default;
    PlanNode(PlanNode&&) = default;
    PlanNode& operator=(PlanNode&&) = default;
    PlanNode(const PlanNode&) = delete;
    PlanNode& operator=(const PlanNode&) = delete;

    PlanNode clone() const;

    static PlanNode literal(std::string text, bool promoted = false);
};

/// Parses a plan from its JSON form. Node kinds come from "type"; keys
/// starting with `@` carry iterator/funcall data. Strings in node positions
/// become literal nodes, or dictionary references when they start with `##`
/// (a single `#` is accepted and normalized). `complementiser` keys found on
/// non-clause nodes move to the nearest enclosing clause; `features` apply to
/// the sentence and move to the outermost clause.
PlanNode parse_plan(std::string_view json_text,
                    const NamespaceTable& namespaces = {});

/// Total number of explicitly written nodes, features included.
int plan_size(const PlanNode& plan);

/// A phrase specification: plain text or a sub-tree.
struct PhraseSpec {
    std::string text;
    std::shared_ptr<const PlanNode> node; // set when the spec is a tree
    bool is_node() const { return node != nullptr; }
};

/// Profile-keyed lexicon. Sections map provenance types to phrases;
/// profiles map `##` reference keys to audience-specific phrases.
struct Dictionary {
    std::map<std::string, std::map<QualifiedName, PhraseSpec>> sections;
    std::map<std::string, std::map<std::string, PhraseSpec>> profiles;

    bool has_profile(const std::string& name) const {
        return profiles.count(name) != 0;
    }
};

/// Parses dictionary JSON ({"sections": {...}, "profiles": {...}}). Section
/// keys resolve against `namespaces`.
Dictionary parse_dictionary(std::string_view json_text,
                            const NamespaceTable& namespaces);

/// (profile, key) pairs violating the rule that every profile defines the
/// same key set. Empty means the profiles are interchangeable.
std::vector<std::pair<std::string, std::string>>
profile_key_gaps(const Dictionary& dict);

/// Maximum dict_ref chaining depth before a cycle is assumed.
inline constexpr int kMaxDictDepth = 8;

/// Instantiates a plan against one query-result row: iterators expand over
/// Seq cells, function calls are applied, dictionary references resolve via
/// the selected profile. The result contains no iterator, funcall or
/// dict_ref nodes.
PlanNode instantiate(const PlanNode& plan, const query::ResultTable& table,
                     const query::ResultRow& row, const Dictionary& dict,
                     const std::string& profile);

/// Looks up the values of `property` on a record in a dictionary section and
/// returns the phrase of the lexicographically smallest matching key (by
/// expanded IRI), coerced to `category`. The phrase may still contain
/// dictionary references; instantiate() resolves them.
PlanNode fn_lookup_type(const query::RecordRef& record,
                        const QualifiedName& property,
                        const std::string& category,
                        const std::string& section, const Dictionary& dict);

/// Renders a record's identifier ("(records/960)", or a parenthesized
/// hyperlink in HTML). Only the "id" field is supported.
PlanNode fn_noun_localname(const query::RecordRef& record,
                           const std::string& field, Format format);

/// Names of query variables a plan refers to (`@variable` and `@object`).
std::vector<std::string> referenced_variables(const PlanNode& plan);

/// All `##` keys referenced by a plan.
std::vector<std::string> referenced_dict_keys(const PlanNode& plan);

/// All `##` keys referenced from within dictionary entries themselves.
std::vector<std::string> referenced_dict_keys(const Dictionary& dict);

} // namespace ea::plan
