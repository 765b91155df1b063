#include "ea/plan.hpp"

#include <algorithm>

namespace ea::plan {

namespace {

PlanNode spec_to_node(const PhraseSpec& spec) {
    if (spec.is_node())
        return spec.node->clone();
    if (!spec.text.empty() && spec.text.front() == '#') {
        PlanNode ref;
        ref.kind = NodeKind::DictRef;
        ref.promoted = true;
        ref.key = spec.text.substr(spec.text.rfind("##", 0) == 0 ? 2 : 1);
        return ref;
    }
    return PlanNode::literal(spec.text, /*promoted=*/true);
}

PlanNode coerce(PlanNode node, const std::string& category) {
    auto wrap_head = [](PlanNode head, NodeKind kind) {
        PlanNode out;
        out.kind = kind;
        out.head = std::make_unique<PlanNode>(std::move(head));
        return out;
    };
    if (category == "noun_phrase") {
        if (node.kind == NodeKind::NounPhrase)
            return node;
        if (node.kind == NodeKind::Literal || node.kind == NodeKind::DictRef)
            return wrap_head(std::move(node), NodeKind::NounPhrase);
    } else if (category == "adjective_phrase") {
        if (node.kind == NodeKind::AdjectivePhrase)
            return node;
        if (node.kind == NodeKind::Literal || node.kind == NodeKind::DictRef)
            return wrap_head(std::move(node), NodeKind::AdjectivePhrase);
    } else if (category == "literal") {
        if (node.kind == NodeKind::Literal || node.kind == NodeKind::DictRef)
            return node;
    } else {
        throw_config("unsupported phrase category '" + category + "'");
    }
    throw_config("cannot coerce a " + std::string(node_kind_name(node.kind)) +
                 " dictionary entry to " + category);
}

class Instantiator {
public:
    Instantiator(const query::ResultTable& table, const query::ResultRow& row,
                 const Dictionary& dict, const std::string& profile)
        : table_(table), row_(row), dict_(dict), profile_(profile) {}

    PlanNode resolve(const PlanNode& node, int depth) {
        switch (node.kind) {
        case NodeKind::Literal:
        case NodeKind::IdLink:
        case NodeKind::Features:
            return node.clone();
        case NodeKind::DictRef:
            return resolve_dict_ref(node, depth);
        case NodeKind::Funcall:
            return resolve_funcall(node, depth);
        case NodeKind::Iterator:
            throw_config("an @iterator may only appear attached to a node "
                         "with a list slot");
        default:
            break;
        }

        PlanNode out;
        out.kind = node.kind;
        out.promoted = node.promoted;
        out.verb = node.verb;
        out.complementiser = node.complementiser;
        out.plural = node.plural;
        out.conjunction = node.conjunction;
        out.text = node.text;
        auto convert = [&](const std::unique_ptr<PlanNode>& p) {
            return p ? std::make_unique<PlanNode>(resolve(*p, depth)) : nullptr;
        };
        out.subject = convert(node.subject);
        out.object = convert(node.object);
        out.indirect_object = convert(node.indirect_object);
        out.features = node.features
                           ? std::make_unique<PlanNode>(node.features->clone())
                           : nullptr;
        out.head = convert(node.head);
        out.specifier = convert(node.specifier);
        for (const PlanNode& child : node.pre_modifiers)
            out.pre_modifiers.push_back(resolve(child, depth));
        for (const PlanNode& child : node.post_modifiers)
            out.post_modifiers.push_back(resolve(child, depth));
        for (const PlanNode& child : node.coordinates)
            out.coordinates.push_back(resolve(child, depth));

        if (node.iterator)
            expand_iterator(*node.iterator, out, depth);
        return out;
    }

private:
    PlanNode resolve_dict_ref(const PlanNode& node, int depth) {
        if (depth >= kMaxDictDepth)
            throw_config("dictionary reference cycle at '##" + node.key +
                         "' (depth > " + std::to_string(kMaxDictDepth) + ")");
        auto profile_it = dict_.profiles.find(profile_);
        if (profile_it == dict_.profiles.end())
            throw_config("unknown profile '" + profile_ + "'");
        auto entry = profile_it->second.find(node.key);
        if (entry == profile_it->second.end())
            throw_config("dictionary reference '##" + node.key +
                         "' is not defined in profile '" + profile_ + "'");
        return resolve(spec_to_node(entry->second), depth + 1);
    }

    void expand_iterator(const PlanNode& iterator, PlanNode& parent,
                         int depth) {
        const query::ResultCell* cell =
            table_.cell(row_, iterator.variable);
        if (!cell)
            throw_config("iterator variable '" + iterator.variable +
                         "' is not provided by the query result");
        if (!cell->is_seq)
            throw_config("iterator variable '" + iterator.variable +
                         "' is bound to a single record, not a Seq "
                         "aggregate");
        if (cell->refs.empty())
            throw_config("empty aggregate for iterator variable '" +
                         iterator.variable + "'");

        std::vector<PlanNode>& slot = slot_of(parent, iterator.target_slot);
        for (const query::RecordRef& ref : cell->refs) {
            overrides_.emplace_back(iterator.variable, ref);
            slot.push_back(resolve(*iterator.element, depth));
            overrides_.pop_back();
        }
    }

    static std::vector<PlanNode>& slot_of(PlanNode& parent,
                                          const std::string& name) {
        if (name == "coordinates" &&
            parent.kind == NodeKind::CoordinatedPhrase)
            return parent.coordinates;
        if (name == "pre-modifiers" || name == "pre_modifiers")
            return parent.pre_modifiers;
        if (name == "post-modifiers" || name == "post_modifiers")
            return parent.post_modifiers;
        throw_config("iterator slot '" + name + "' is not available on a " +
                     std::string(node_kind_name(parent.kind)) + " node");
    }

    query::RecordRef record_of(const std::string& variable) const {
        for (auto it = overrides_.rbegin(); it != overrides_.rend(); ++it)
            if (it->first == variable)
                return it->second;
        const query::ResultCell* cell = table_.cell(row_, variable);
        if (!cell)
            throw_config("variable '" + variable +
                         "' is not provided by the query result");
        if (cell->is_seq)
            throw_config("variable '" + variable + "' is a Seq aggregate; "
                         "use an @iterator to access its records");
        return cell->single();
    }

    PlanNode resolve_funcall(const PlanNode& node, int depth) {
        query::RecordRef record = record_of(node.object_var);
        if (node.function == "lookup-type") {
            PlanNode result = fn_lookup_type(record, *node.property,
                                             node.arg1, node.arg2, dict_);
            if (!node.post_modifiers.empty()) {
                if (result.kind != NodeKind::NounPhrase)
                    throw_config("cannot attach post-modifiers to a " +
                                 std::string(node_kind_name(result.kind)) +
                                 " dictionary entry");
                for (const PlanNode& child : node.post_modifiers)
                    result.post_modifiers.push_back(child.clone());
            }
            return resolve(result, depth);
        }
        if (node.function == "noun+localname") {
            if (!node.post_modifiers.empty())
                throw_config("noun+localname does not take post-modifiers");
            // Format-independent here; the realizer renders it per format.
            PlanNode link;
            link.kind = NodeKind::IdLink;
            link.text = record.id().local;
            link.href = record.id().iri;
            return link;
        }
        throw_config("unknown function '" + node.function + "'");
    }

    const query::ResultTable& table_;
    const query::ResultRow& row_;
    const Dictionary& dict_;
    const std::string& profile_;
    std::vector<std::pair<std::string, query::RecordRef>> overrides_;
};

} // namespace

PlanNode instantiate(const PlanNode& plan, const query::ResultTable& table,
                     const query::ResultRow& row, const Dictionary& dict,
                     const std::string& profile) {
    if (!dict.has_profile(profile))
        throw_not_found("unknown profile '" + profile + "'");
    return Instantiator(table, row, dict, profile).resolve(plan, 0);
}

PlanNode fn_lookup_type(const query::RecordRef& record,
                        const QualifiedName& property,
                        const std::string& category,
                        const std::string& section, const Dictionary& dict) {
    auto section_it = dict.sections.find(section);
    if (section_it == dict.sections.end())
        throw_config("unknown dictionary section '" + section + "'");

    const QualifiedName* best = nullptr;
    std::string types;
    for (const AttributeValue* value : record.attribute(property)) {
        const auto* q = std::get_if<QualifiedName>(value);
        if (!q)
            continue;
        if (!types.empty())
            types += ", ";
        types += q->compact();
        auto entry = section_it->second.find(*q);
        if (entry != section_it->second.end() &&
            (!best || entry->first < *best))
            best = &entry->first;
    }
    if (!best)
        throw_config("record '" + record.id().compact() + "' has no value of "
                     "'" + property.compact() + "' known to dictionary "
                     "section '" + section + "' (values: " +
                     (types.empty() ? "none" : types) + ")");
    return coerce(spec_to_node(section_it->second.at(*best)), category);
}

PlanNode fn_noun_localname(const query::RecordRef& record,
                           const std::string& field, Format format) {
    if (field != "id")
        throw_config("unsupported field '" + field +
                     "' for noun+localname (only \"id\")");
    PlanNode node;
    node.kind = NodeKind::Literal;
    node.text = format_id_link(record.id().local, record.id().iri, format);
    node.href = format == Format::Html ? record.id().iri : "";
    return node;
}

namespace {

template <typename F> void walk(const PlanNode& node, F&& fn) {
    fn(node);
    for (const auto* p :
         {&node.subject, &node.object, &node.indirect_object, &node.features,
          &node.head, &node.specifier, &node.element, &node.iterator})
        if (*p)
            walk(**p, fn);
    for (const auto* list :
         {&node.pre_modifiers, &node.post_modifiers, &node.coordinates})
        for (const PlanNode& child : *list)
            walk(child, fn);
}

} // namespace

std::vector<std::string> referenced_variables(const PlanNode& plan) {
    std::vector<std::string> out;
    walk(plan, [&out](const PlanNode& node) {
        if (node.kind == NodeKind::Iterator)
            out.push_back(node.variable);
        else if (node.kind == NodeKind::Funcall)
            out.push_back(node.object_var);
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> referenced_dict_keys(const PlanNode& plan) {
    std::vector<std::string> out;
    walk(plan, [&out](const PlanNode& node) {
        if (node.kind == NodeKind::DictRef)
            out.push_back(node.key);
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> referenced_dict_keys(const Dictionary& dict) {
    std::vector<std::string> out;
    auto scan_spec = [&out](const PhraseSpec& spec) {
        if (spec.is_node()) {
            for (std::string& key : referenced_dict_keys(*spec.node))
                out.push_back(std::move(key));
        } else if (!spec.text.empty() && spec.text.front() == '#') {
            out.push_back(
                spec.text.substr(spec.text.rfind("##", 0) == 0 ? 2 : 1));
        }
    };
    for (const auto& [section, entries] : dict.sections)
        for (const auto& [key, spec] : entries)
            scan_spec(spec);
    for (const auto& [profile, entries] : dict.profiles)
        for (const auto& [key, spec] : entries)
            scan_spec(spec);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace ea::plan
