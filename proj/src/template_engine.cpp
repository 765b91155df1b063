#include "ea/template_engine.hpp"

#include <cctype>
#include <utility>

#include "ea/csv.hpp"

namespace ea::tmpl {

namespace {

bool is_variable(const QualifiedName& name) {
    return name.in_namespace(wellknown::kVar);
}

bool qname_shaped(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 ||
        colon + 1 == text.size())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(text[0])) && text[0] != '_')
        return false;
    for (char c : text.substr(0, colon))
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '-' && c != '.')
            return false;
    if (text.find(':', colon + 1) != std::string_view::npos)
        return false;
    for (char c : text)
        if (std::isspace(static_cast<unsigned char>(c)))
            return false;
    return true;
}

AttributeValue parse_cell(const std::string& cell,
                          const NamespaceTable& namespaces, int row_number) {
    // "lexical"^^prefix:dt
    if (cell.size() >= 2 && cell.front() == '"') {
        auto close = cell.find('"', 1);
        if (close == std::string::npos)
            throw_data("row " + std::to_string(row_number) +
                       ": unterminated quote in value");
        std::string lexical = cell.substr(1, close - 1);
        std::string rest = cell.substr(close + 1);
        if (rest.empty())
            return StringLiteral{std::move(lexical)};
        if (rest.rfind("^^", 0) == 0) {
            std::string dt = rest.substr(2);
            if (!qname_shaped(dt))
                throw_data("row " + std::to_string(row_number) +
                           ": malformed datatype '" + dt + "'");
            auto colon = dt.find(':');
            TypedLiteral literal{std::move(lexical),
                                 namespaces.resolve(dt.substr(0, colon),
                                                    dt.substr(colon + 1))};
            check_attribute_value(AttributeValue{literal});
            return literal;
        }
        throw_data("row " + std::to_string(row_number) +
                   ": unexpected text after closing quote in value");
    }
    if (qname_shaped(cell)) {
        auto colon = cell.find(':');
        std::string prefix = cell.substr(0, colon);
        if (!namespaces.find(prefix))
            throw_data("row " + std::to_string(row_number) +
                       ": unknown prefix '" + prefix + "' in value '" + cell +
                       "'");
        return namespaces.resolve(prefix, cell.substr(colon + 1));
    }
    return StringLiteral{cell};
}

class Substituter {
public:
    Substituter(const Template& tmpl, const BindingSet& bindings)
        : tmpl_(tmpl), bindings_(bindings) {}

    std::vector<Statement> run() const {
        std::vector<Statement> out;
        out.reserve(tmpl_.body.statements().size());
        for (const Statement& statement : tmpl_.body.statements()) {
            if (const auto* element = std::get_if<Element>(&statement)) {
                Element copy = *element;
                copy.id = substitute_id(copy.id);
                copy.attributes = substitute_attributes(copy.attributes);
                out.emplace_back(std::move(copy));
            } else {
                Relation copy = std::get<Relation>(statement);
                if (!copy.synthetic_id)
                    copy.id = substitute_id(copy.id);
                copy.first = substitute_id(copy.first);
                copy.second = substitute_id(copy.second);
                copy.attributes = substitute_attributes(copy.attributes);
                out.emplace_back(std::move(copy));
            }
        }
        return out;
    }

private:
    QualifiedName substitute_id(const QualifiedName& name) const {
        if (!is_variable(name))
            return name;
        const AttributeValue& value = lookup(name.local);
        if (const auto* q = std::get_if<QualifiedName>(&value))
            return *q;
        throw_data("variable '" + name.local +
                   "' is bound to a literal but used in an identifier "
                   "position in template '" +
                   tmpl_.name + "'");
    }

    Attributes substitute_attributes(const Attributes& attrs) const {
        Attributes out;
        out.reserve(attrs.size());
        for (const auto& [attr, value] : attrs) {
            const auto* q = std::get_if<QualifiedName>(&value);
            if (q && is_variable(*q))
                out.emplace_back(attr, lookup(q->local));
            else
                out.emplace_back(attr, value);
        }
        return out;
    }

    const AttributeValue& lookup(const std::string& variable) const {
        auto it = bindings_.find(variable);
        if (it == bindings_.end())
            throw_data("unbound variable '" + variable + "' in template '" +
                       tmpl_.name + "'");
        return it->second;
    }

    const Template& tmpl_;
    const BindingSet& bindings_;
};

} // namespace

Template load_template(ProvDocument doc, std::string name) {
    if (doc.namespaces().declares("var")) {
        const std::string* iri = doc.namespaces().find("var");
        if (*iri != wellknown::kVar)
            throw_data("template '" + name + "': prefix 'var' must be bound "
                       "to <" + std::string(wellknown::kVar) + ">");
    }

    Template tmpl;
    tmpl.name = std::move(name);

    auto collect = [&tmpl](const QualifiedName& q) {
        if (is_variable(q))
            tmpl.variables.insert(q.local);
    };
    auto reject = [&tmpl](const QualifiedName& q, const char* where) {
        if (is_variable(q))
            throw_data("template '" + tmpl.name + "': variable 'var:" +
                       q.local + "' is not allowed in " + where);
    };

    for (const Statement& statement : doc.statements()) {
        collect(statement_id(statement));
        if (const auto* relation = std::get_if<Relation>(&statement)) {
            collect(relation->first);
            collect(relation->second);
        }
        for (const auto& [attr, value] : statement_attributes(statement)) {
            reject(attr, "an attribute-name position");
            if (const auto* q = std::get_if<QualifiedName>(&value))
                collect(*q);
            else if (const auto* typed = std::get_if<TypedLiteral>(&value))
                reject(typed->datatype, "a datatype position");
        }
    }
    tmpl.body = std::move(doc);
    return tmpl;
}

BindingsTable parse_bindings_csv(std::string_view text,
                                 const NamespaceTable& namespaces) {
    auto records = csv::parse(text);
    if (records.empty() ||
        records.front() != std::vector<std::string>{"template", "instance",
                                                    "variable", "value"})
        throw_data("missing bindings header "
                   "'template,instance,variable,value'");

    BindingsTable table;
    std::map<std::pair<std::string, std::string>, std::size_t> group_index;
    std::set<std::string> seen;

    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& record = records[i];
        int row_number = static_cast<int>(i) + 1;
        if (record.size() != 4)
            throw_data("row " + std::to_string(row_number) + ": expected 4 "
                       "fields, got " + std::to_string(record.size()));
        BindingRow row{record[0], record[1], record[2],
                       parse_cell(record[3], namespaces, row_number)};
        if (row.template_name.empty() || row.variable.empty())
            throw_data("row " + std::to_string(row_number) +
                       ": empty template or variable name");

        std::string key =
            row.template_name + "\x1f" + row.instance + "\x1f" + row.variable;
        if (!seen.insert(key).second)
            throw_data("row " + std::to_string(row_number) +
                       ": duplicate binding for (" + row.template_name + ", " +
                       row.instance + ", " + row.variable + ")");

        auto group_key = std::make_pair(row.template_name, row.instance);
        auto it = group_index.find(group_key);
        if (it == group_index.end()) {
            it = group_index
                     .emplace(group_key, table.groups.size())
                     .first;
            table.groups.push_back(
                {row.template_name, row.instance, {}});
        }
        table.groups[it->second].bindings.emplace(row.variable, row.value);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<Statement> expand(const Template& tmpl,
                              const BindingSet& bindings) {
    for (const std::string& variable : tmpl.variables)
        if (!bindings.count(variable))
            throw_data("unbound variable '" + variable + "' in template '" +
                       tmpl.name + "'");
    return Substituter(tmpl, bindings).run();
}

ProvDocument expand_decision(const std::vector<Template>& templates,
                             const BindingsTable& table,
                             const NamespaceTable& extra) {
    ProvDocument doc;
    for (const Template& tmpl : templates)
        doc.merge_namespaces(tmpl.body.namespaces());
    doc.merge_namespaces(extra);

    for (const BindingsTable::Group& group : table.groups) {
        const Template* tmpl = nullptr;
        for (const Template& candidate : templates)
            if (candidate.name == group.template_name) {
                tmpl = &candidate;
                break;
            }
        if (!tmpl)
            throw_data("unknown template '" + group.template_name + "'");
        try {
            for (Statement& statement : expand(*tmpl, group.bindings))
                doc.add_or_merge(statement);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (template '" +
                                      group.template_name + "', instance '" +
                                      group.instance + "')");
        }
    }
    return doc;
}

} // namespace ea::tmpl
