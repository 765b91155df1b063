#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ea/prov.hpp"

namespace ea::tmpl {

/// A provenance pattern: a PROV document whose identifier and attribute-value
/// positions may hold names in the reserved `var:` namespace.
struct Template {
    std::string name;
    ProvDocument body;
    std::set<std::string> variables; // local names of the var: occurrences
};

/// Variable -> logged value for one template instantiation.
using BindingSet = std::map<std::string, AttributeValue>;

struct BindingRow {
    std::string template_name;
    std::string instance;
    std::string variable;
    AttributeValue value;
};

/// Parsed long-format bindings log (`template,instance,variable,value`).
struct BindingsTable {
    std::vector<BindingRow> rows;

    struct Group {
        std::string template_name;
        std::string instance;
        BindingSet bindings;
    };
    /// Groups in first-encounter order.
    std::vector<Group> groups;
};

/// Collects the template's variables from its id positions, relation field
/// positions and attribute-value positions. Requires the `var:` prefix, when
/// declared, to be bound to the reserved variable namespace. Variables in
/// attribute-name or datatype position are rejected.
Template load_template(ProvDocument doc, std::string name);

/// Parses a bindings CSV against the bundle's namespace table. Values that
/// look like prefix:local resolve as qualified names (unknown prefixes are an
/// error), double-quoted values are string literals, "lexical"^^prefix:dt is
/// a typed literal, and anything else is kept as a plain string.
BindingsTable parse_bindings_csv(std::string_view text,
                                 const NamespaceTable& namespaces);

/// Expands one template with one binding set. Every variable must be bound;
/// identifier positions require qualified-name values.
std::vector<Statement> expand(const Template& tmpl, const BindingSet& bindings);

/// Expands every (template, instance) group of the table and merges the
/// results into one document, deduplicating identical statements. The output
/// namespace table is the union of the template tables plus `extra`.
ProvDocument expand_decision(const std::vector<Template>& templates,
                             const BindingsTable& table,
                             const NamespaceTable& extra = {});

} // namespace ea::tmpl
