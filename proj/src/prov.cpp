#include "ea/prov.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace ea {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s)
        v = v * 10 + (c - '0');
    return v;
}

int days_in_month(int year, int month) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30,
                                   31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return days[month - 1];
}

} // namespace

bool is_valid_datetime(std::string_view s) {
    // YYYY-MM-DDThh:mm:ss
    if (s.size() < 19)
        return false;
    if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
        s[16] != ':')
        return false;
    if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) ||
        !all_digits(s.substr(8, 2)) || !all_digits(s.substr(11, 2)) ||
        !all_digits(s.substr(14, 2)) || !all_digits(s.substr(17, 2)))
        return false;
    int year = to_int(s.substr(0, 4));
    int month = to_int(s.substr(5, 2));
    int day = to_int(s.substr(8, 2));
    int hour = to_int(s.substr(11, 2));
    int minute = to_int(s.substr(14, 2));
    int second = to_int(s.substr(17, 2));
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month))
        return false;
    if (hour > 23 || minute > 59 || second > 59)
        return false;

    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        std::size_t start = ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start)
            return false;
    }
    if (pos == s.size())
        return true;
    if (s[pos] == 'Z')
        return pos + 1 == s.size();
    if (s[pos] == '+' || s[pos] == '-') {
        if (s.size() != pos + 6 || s[pos + 3] != ':')
            return false;
        if (!all_digits(s.substr(pos + 1, 2)) ||
            !all_digits(s.substr(pos + 4, 2)))
            return false;
        int oh = to_int(s.substr(pos + 1, 2));
        int om = to_int(s.substr(pos + 4, 2));
        return oh <= 14 && om <= 59;
    }
    return false;
}

std::vector<const AttributeValue*> attribute_values(const Attributes& attrs,
                                                    const QualifiedName& name) {
    std::vector<const AttributeValue*> out;
    for (const auto& [attr, value] : attrs)
        if (attr == name)
            out.push_back(&value);
    return out;
}

void check_attribute_value(const AttributeValue& value) {
    if (const auto* typed = std::get_if<TypedLiteral>(&value)) {
        if (typed->datatype.in_namespace(wellknown::kXsd) &&
            typed->datatype.local == "dateTime" &&
            !is_valid_datetime(typed->lexical))
            throw_data("literal \"" + typed->lexical +
                       "\" is not a valid xsd:dateTime");
    }
}

std::string_view provn_keyword(ElementKind kind) {
    switch (kind) {
    case ElementKind::Entity:
        return "entity";
    case ElementKind::Activity:
        return "activity";
    case ElementKind::Agent:
        return "agent";
    }
    return "";
}

std::string_view provn_keyword(RelationKind kind) {
    switch (kind) {
    case RelationKind::WasGeneratedBy:
        return "wasGeneratedBy";
    case RelationKind::Used:
        return "used";
    case RelationKind::WasAttributedTo:
        return "wasAttributedTo";
    case RelationKind::WasAssociatedWith:
        return "wasAssociatedWith";
    case RelationKind::ActedOnBehalfOf:
        return "actedOnBehalfOf";
    case RelationKind::WasDerivedFrom:
        return "wasDerivedFrom";
    case RelationKind::WasInformedBy:
        return "wasInformedBy";
    }
    return "";
}

RelationFields relation_fields(RelationKind kind) {
    switch (kind) {
    case RelationKind::WasGeneratedBy:
        return {"entity", "activity"};
    case RelationKind::Used:
        return {"activity", "entity"};
    case RelationKind::WasAttributedTo:
        return {"entity", "agent"};
    case RelationKind::WasAssociatedWith:
        return {"activity", "agent"};
    case RelationKind::ActedOnBehalfOf:
        return {"delegate", "responsible"};
    case RelationKind::WasDerivedFrom:
        return {"generatedEntity", "usedEntity"};
    case RelationKind::WasInformedBy:
        return {"informed", "informant"};
    }
    return {"", ""};
}

bool relation_supports_time(RelationKind kind) {
    return kind == RelationKind::WasGeneratedBy || kind == RelationKind::Used;
}

const QualifiedName* Relation::field(std::string_view name) const {
    if (name == "id")
        return &id;
    RelationFields fields = relation_fields(kind);
    if (name == fields.first)
        return &first;
    if (name == fields.second)
        return &second;
    return nullptr;
}

const QualifiedName& statement_id(const Statement& s) {
    return std::visit([](const auto& v) -> const QualifiedName& { return v.id; },
                      s);
}

const Attributes& statement_attributes(const Statement& s) {
    return std::visit(
        [](const auto& v) -> const Attributes& { return v.attributes; }, s);
}

void ProvDocument::check_prefix(const QualifiedName& name) const {
    // Synthetic ids (`_`) never need a declaration.
    if (name.prefix == "_")
        return;
    if (!namespaces_.find(name.prefix))
        throw_data("undeclared prefix '" + name.prefix + "' in '" +
                   name.compact() + "'");
}

void ProvDocument::check_statement(const Statement& statement) const {
    if (const auto* element = std::get_if<Element>(&statement)) {
        check_prefix(element->id);
        if (element->kind != ElementKind::Activity &&
            (element->start_time || element->end_time))
            throw_data("only activities carry start/end times");
        if (element->start_time && !is_valid_datetime(element->start_time->lexical))
            throw_data("invalid start time '" + element->start_time->lexical + "'");
        if (element->end_time && !is_valid_datetime(element->end_time->lexical))
            throw_data("invalid end time '" + element->end_time->lexical + "'");
    } else {
        const auto& relation = std::get<Relation>(statement);
        if (!relation.id.empty())
            check_prefix(relation.id);
        check_prefix(relation.first);
        check_prefix(relation.second);
        if (relation.time && !relation_supports_time(relation.kind))
            throw_data(std::string(provn_keyword(relation.kind)) +
                       " does not carry a time");
        if (relation.time && !is_valid_datetime(relation.time->lexical))
            throw_data("invalid time '" + relation.time->lexical + "'");
    }
    for (const auto& [attr, value] : statement_attributes(statement)) {
        check_prefix(attr);
        if (const auto* q = std::get_if<QualifiedName>(&value))
            check_prefix(*q);
        if (const auto* typed = std::get_if<TypedLiteral>(&value))
            check_prefix(typed->datatype);
        check_attribute_value(value);
    }
}

std::string ProvDocument::content_key(const Relation& relation) const {
    std::ostringstream key;
    key << static_cast<int>(relation.kind) << '|' << relation.first.iri << '|'
        << relation.second.iri << '|'
        << (relation.time ? relation.time->lexical : "") << '|';
    for (const auto& [attr, value] : relation.attributes) {
        key << attr.iri << '=';
        if (const auto* q = std::get_if<QualifiedName>(&value))
            key << 'q' << q->iri;
        else if (const auto* s = std::get_if<StringLiteral>(&value))
            key << 's' << s->value;
        else if (const auto* t = std::get_if<TypedLiteral>(&value))
            key << 't' << t->lexical << '^' << t->datatype.iri;
        key << ';';
    }
    return key.str();
}

void ProvDocument::add(Element element) {
    check_statement(element);
    if (by_id_.count(element.id.iri))
        throw_data("duplicate id '" + element.id.compact() + "'");
    by_id_.emplace(element.id.iri, statements_.size());
    statements_.emplace_back(std::move(element));
}

void ProvDocument::add(Relation relation) {
    if (relation.id.empty()) {
        relation.id = make_synthetic_id(++synthetic_counter_);
        relation.synthetic_id = true;
    }
    check_statement(relation);
    if (by_id_.count(relation.id.iri))
        throw_data("duplicate id '" + relation.id.compact() + "'");
    if (relation.synthetic_id)
        by_content_.emplace(content_key(relation), statements_.size());
    by_id_.emplace(relation.id.iri, statements_.size());
    statements_.emplace_back(std::move(relation));
}

void ProvDocument::add(Statement statement) {
    if (auto* element = std::get_if<Element>(&statement))
        add(std::move(*element));
    else
        add(std::move(std::get<Relation>(statement)));
}

bool ProvDocument::add_or_merge(const Statement& statement) {
    if (const auto* relation = std::get_if<Relation>(&statement);
        relation && (relation->synthetic_id || relation->id.empty())) {
        Relation copy = *relation;
        copy.id = QualifiedName{};
        copy.synthetic_id = false;
        if (by_content_.count(content_key(copy)))
            return false;
        add(std::move(copy));
        return true;
    }
    const QualifiedName& id = statement_id(statement);
    auto it = by_id_.find(id.iri);
    if (it != by_id_.end()) {
        if (statements_[it->second] == statement)
            return false;
        throw_data("conflicting statements share the id '" + id.compact() +
                   "'");
    }
    add(statement);
    return true;
}

const Element* ProvDocument::find_element(const std::string& iri) const {
    auto it = by_id_.find(iri);
    if (it == by_id_.end())
        return nullptr;
    return std::get_if<Element>(&statements_[it->second]);
}

const Statement* ProvDocument::find_statement(const std::string& iri) const {
    auto it = by_id_.find(iri);
    if (it == by_id_.end())
        return nullptr;
    return &statements_[it->second];
}

std::set<std::string> undirected_reach(const ProvDocument& doc,
                                       const QualifiedName& start) {
    if (!doc.find_element(start.iri))
        throw_data("unknown start id '" + start.compact() + "'");

    // element id -> indices of relations touching it
    std::map<std::string, std::vector<std::size_t>> touching;
    const auto& statements = doc.statements();
    for (std::size_t i = 0; i < statements.size(); ++i) {
        if (const auto* relation = std::get_if<Relation>(&statements[i])) {
            touching[relation->first.iri].push_back(i);
            touching[relation->second.iri].push_back(i);
        }
    }

    std::set<std::string> seen{start.iri};
    std::deque<std::string> frontier{start.iri};
    while (!frontier.empty()) {
        std::string current = std::move(frontier.front());
        frontier.pop_front();
        auto it = touching.find(current);
        if (it == touching.end())
            continue;
        for (std::size_t index : it->second) {
            const auto& relation = std::get<Relation>(statements[index]);
            seen.insert(relation.id.iri);
            for (const QualifiedName* endpoint :
                 {&relation.first, &relation.second}) {
                // Dangling references are skipped here; the validator flags
                // them separately.
                if (doc.find_element(endpoint->iri) &&
                    seen.insert(endpoint->iri).second)
                    frontier.push_back(endpoint->iri);
            }
        }
    }
    return seen;
}

} // namespace ea
