#include "ea/plan.hpp"

#include <algorithm>

#include <json.hpp>

namespace ea::plan {

namespace {

using nlohmann::json;

/// Strips the `##` (or tolerated single `#`) sigil.
std::string dict_key_of(std::string_view text) {
    std::size_t sigils = text.rfind("##", 0) == 0 ? 2 : 1;
    return std::string(text.substr(sigils));
}

PlanNode from_string(const std::string& text) {
    if (!text.empty() && text.front() == '#') {
        PlanNode node;
        node.kind = NodeKind::DictRef;
        node.promoted = true;
        node.key = dict_key_of(text);
        if (node.key.empty())
            throw_data("empty dictionary reference '" + text + "'");
        return node;
    }
    return PlanNode::literal(text, /*promoted=*/true);
}

class PlanParser {
public:
    explicit PlanParser(const NamespaceTable& namespaces)
        : namespaces_(namespaces) {}

    PlanNode parse(const json& value) {
        PlanNode root = parse_node(value);
        PlanNode* root_clause = outermost_clause(root);
        hoist(root, nullptr, root_clause);
        validate(root);
        return root;
    }

private:
    PlanNode parse_node(const json& value) {
        if (value.is_string())
            return from_string(value.get<std::string>());
        if (!value.is_object())
            throw_data("plan nodes must be JSON objects or strings, got " +
                       value.dump());
        auto type_it = value.find("type");
        if (type_it == value.end() || !type_it->is_string())
            throw_data("plan node is missing its \"type\": " + value.dump());
        const std::string type = type_it->get<std::string>();

        if (type == "clause")
            return parse_clause(value);
        if (type == "noun_phrase")
            return parse_noun_phrase(value);
        if (type == "coordinated_phrase")
            return parse_coordinated(value);
        if (type == "adjective_phrase")
            return parse_adjective(value);
        if (type == "literal")
            return parse_literal(value);
        if (type == "@iterator")
            return parse_iterator(value);
        if (type == "@funcall")
            return parse_funcall(value);
        if (type == "dict_ref")
            return parse_dict_ref(value);
        if (type == "features")
            return parse_features(value);
        throw_data("unknown plan node type '" + type + "'");
    }

    PlanNode parse_clause(const json& value) {
        PlanNode node;
        node.kind = NodeKind::Clause;
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "subject")
                node.subject = child(item);
            else if (key == "verb")
                node.verb = string_of(item, key);
            else if (key == "object")
                node.object = child(item);
            else if (key == "indirect_object")
                node.indirect_object = child(item);
            else if (key == "complementiser")
                node.complementiser = string_of(item, key);
            else if (key == "features")
                node.features = child_features(item);
            else
                reject(key, "clause");
        }
        return node;
    }

    PlanNode parse_noun_phrase(const json& value) {
        PlanNode node;
        node.kind = NodeKind::NounPhrase;
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "head")
                node.head = child(item);
            else if (key == "specifier")
                node.specifier = child(item);
            else if (key == "pre-modifiers" || key == "pre_modifiers")
                node.pre_modifiers = children(item, key);
            else if (key == "post-modifiers" || key == "post_modifiers")
                node.post_modifiers = children(item, key);
            else if (key == "plural")
                node.plural = bool_of(item, key);
            else if (key == "@iterator")
                node.iterator = child(item);
            else if (key == "complementiser")
                node.complementiser = string_of(item, key);
            else if (key == "features")
                node.features = child_features(item);
            else
                reject(key, "noun_phrase");
        }
        if (!node.head)
            throw_data("noun_phrase requires a head");
        return node;
    }

    PlanNode parse_coordinated(const json& value) {
        PlanNode node;
        node.kind = NodeKind::CoordinatedPhrase;
        node.conjunction = "and";
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "conjunction")
                node.conjunction = string_of(item, key);
            else if (key == "coordinates")
                node.coordinates = children(item, key);
            else if (key == "@iterator")
                node.iterator = child(item);
            else if (key == "complementiser")
                node.complementiser = string_of(item, key);
            else if (key == "features")
                node.features = child_features(item);
            else
                reject(key, "coordinated_phrase");
        }
        return node;
    }

    PlanNode parse_adjective(const json& value) {
        PlanNode node;
        node.kind = NodeKind::AdjectivePhrase;
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "head")
                node.head = child(item);
            else if (key == "complementiser")
                node.complementiser = string_of(item, key);
            else if (key == "features")
                node.features = child_features(item);
            else
                reject(key, "adjective_phrase");
        }
        if (!node.head)
            throw_data("adjective_phrase requires a head");
        return node;
    }

    PlanNode parse_literal(const json& value) {
        PlanNode node;
        node.kind = NodeKind::Literal;
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "text")
                node.text = string_of(item, key);
            else
                reject(key, "literal");
        }
        return node;
    }

    PlanNode parse_iterator(const json& value) {
        PlanNode node;
        node.kind = NodeKind::Iterator;
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "@variable")
                node.variable = string_of(item, key);
            else if (key == "@clause")
                node.target_slot = string_of(item, key);
            else if (key == "@element")
                node.element = child(item);
            else if (key == "complementiser")
                node.complementiser = string_of(item, key);
            else if (key == "features")
                node.features = child_features(item);
            else
                reject(key, "@iterator");
        }
        if (node.variable.empty())
            throw_data("@iterator requires \"@variable\"");
        if (!node.element)
            throw_data("@iterator requires \"@element\"");
        if (node.target_slot.empty())
            throw_data("@iterator requires \"@clause\" naming the parent "
                       "slot to fill");
        return node;
    }

    PlanNode parse_funcall(const json& value) {
        PlanNode node;
        node.kind = NodeKind::Funcall;
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "@function")
                node.function = string_of(item, key);
            else if (key == "@object")
                node.object_var = string_of(item, key);
            else if (key == "@property")
                node.property = resolve_attribute(string_of(item, key));
            else if (key == "@field")
                node.field = string_of(item, key);
            else if (key == "@arg1")
                node.arg1 = string_of(item, key);
            else if (key == "@arg2")
                node.arg2 = string_of(item, key);
            else if (key == "post-modifiers" || key == "post_modifiers")
                node.post_modifiers = children(item, key);
            else if (key == "complementiser")
                node.complementiser = string_of(item, key);
            else if (key == "features")
                node.features = child_features(item);
            else
                reject(key, "@funcall");
        }
        if (node.function != "lookup-type" && node.function != "noun+localname")
            throw_data("unknown function '" + node.function + "'");
        if (node.object_var.empty())
            throw_data("@funcall requires \"@object\"");
        if (node.function == "lookup-type") {
            if (!node.property)
                throw_data("lookup-type requires \"@property\"");
            if (node.arg1.empty() || node.arg2.empty())
                throw_data("lookup-type requires \"@arg1\" (phrase category) "
                           "and \"@arg2\" (dictionary section)");
        }
        if (node.function == "noun+localname" && node.field.empty())
            throw_data("noun+localname requires \"@field\"");
        return node;
    }

    PlanNode parse_dict_ref(const json& value) {
        PlanNode node;
        node.kind = NodeKind::DictRef;
        for (const auto& [key, item] : value.items()) {
            if (key == "type")
                continue;
            if (key == "key")
                node.key = dict_key_of(string_of(item, key));
            else
                reject(key, "dict_ref");
        }
        if (node.key.empty())
            throw_data("dict_ref requires a key");
        return node;
    }

    PlanNode parse_features(const json& value) {
        PlanNode node;
        node.kind = NodeKind::Features;
        for (const auto& [key, item] : value.items()) {
            if (key == "type") {
                if (string_of(item, key) != "features")
                    throw_data("features object has type '" +
                               string_of(item, key) + "'");
                continue;
            }
            if (key == "tense") {
                std::string tense = string_of(item, key);
                if (tense == "present")
                    node.tense = Tense::Present;
                else if (tense == "past")
                    node.tense = Tense::Past;
                else if (tense == "future")
                    node.tense = Tense::Future;
                else
                    throw_data("unknown tense '" + tense + "'");
            } else if (key == "passive") {
                node.passive = bool_of(item, key);
            } else {
                reject(key, "features");
            }
        }
        return node;
    }

    std::unique_ptr<PlanNode> child(const json& value) {
        return std::make_unique<PlanNode>(parse_node(value));
    }

    std::unique_ptr<PlanNode> child_features(const json& value) {
        if (!value.is_object())
            throw_data("\"features\" must be an object");
        return std::make_unique<PlanNode>(parse_features(value));
    }

    std::vector<PlanNode> children(const json& value, const std::string& key) {
        if (!value.is_array())
            throw_data("\"" + key + "\" must be an array");
        std::vector<PlanNode> out;
        out.reserve(value.size());
        for (const auto& item : value)
            out.push_back(parse_node(item));
        return out;
    }

    std::string string_of(const json& value, const std::string& key) {
        if (!value.is_string())
            throw_data("\"" + key + "\" must be a string");
        return value.get<std::string>();
    }

    // Listing-style plans write booleans as strings ("passive": "true").
    bool bool_of(const json& value, const std::string& key) {
        if (value.is_boolean())
            return value.get<bool>();
        if (value.is_string()) {
            std::string s = value.get<std::string>();
            if (s == "true")
                return true;
            if (s == "false")
                return false;
        }
        throw_data("\"" + key + "\" must be a boolean");
    }

    QualifiedName resolve_attribute(const std::string& text) {
        auto colon = text.find(':');
        if (colon == std::string::npos || colon == 0 ||
            colon + 1 == text.size())
            throw_data("'" + text + "' is not a qualified attribute name");
        return namespaces_.resolve(text.substr(0, colon),
                                   text.substr(colon + 1));
    }

    [[noreturn]] void reject(const std::string& key, const char* type) {
        throw_data("unknown key \"" + key + "\" on a " + std::string(type) +
                   " node");
    }

    PlanNode* outermost_clause(PlanNode& root) {
        if (root.kind == NodeKind::Clause)
            return &root;
        PlanNode* found = nullptr;
        for_each_child(root, [&](PlanNode& child) {
            if (!found)
                found = outermost_clause(child);
        });
        return found;
    }

    /// Moves complementisers written on non-clause nodes to the nearest
    /// enclosing clause, and features (sentence-level) to the outermost
    /// clause.
    void hoist(PlanNode& node, PlanNode* nearest_clause,
               PlanNode* root_clause) {
        if (node.kind != NodeKind::Clause) {
            if (!node.complementiser.empty()) {
                if (!nearest_clause)
                    throw_data("complementiser '" + node.complementiser +
                               "' has no enclosing clause");
                if (!nearest_clause->complementiser.empty())
                    throw_data("clause already has a complementiser; cannot "
                               "hoist '" + node.complementiser + "'");
                nearest_clause->complementiser =
                    std::move(node.complementiser);
                node.complementiser.clear();
            }
            if (node.features) {
                if (!root_clause)
                    throw_data("features given but the plan has no clause");
                if (root_clause->features)
                    throw_data("multiple features objects for one sentence");
                root_clause->features = std::move(node.features);
            }
        }
        PlanNode* enclosing =
            node.kind == NodeKind::Clause ? &node : nearest_clause;
        for_each_child(node, [&](PlanNode& child) {
            hoist(child, enclosing, root_clause);
        });
    }

    void validate(PlanNode& node) {
        if (node.iterator) {
            bool ok = false;
            const std::string& slot = node.iterator->target_slot;
            if (node.kind == NodeKind::CoordinatedPhrase)
                ok = slot == "coordinates";
            else if (node.kind == NodeKind::NounPhrase)
                ok = slot == "pre-modifiers" || slot == "pre_modifiers" ||
                     slot == "post-modifiers" || slot == "post_modifiers";
            if (!ok)
                throw_data("iterator slot '" + slot + "' is not a list slot "
                           "of a " + std::string(node_kind_name(node.kind)) +
                           " node");
        }
        for_each_child(node, [&](PlanNode& child) { validate(child); });
    }

    template <typename F> static void for_each_child(PlanNode& node, F&& fn) {
        for (auto* p : {&node.subject, &node.object, &node.indirect_object,
                        &node.head, &node.specifier, &node.element,
                        &node.iterator})
            if (*p)
                fn(**p);
        for (auto* list :
             {&node.pre_modifiers, &node.post_modifiers, &node.coordinates})
            for (PlanNode& child : *list)
                fn(child);
        // features are terminal; nothing to hoist out of them
    }

    const NamespaceTable& namespaces_;
};

} // namespace

std::string_view node_kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::Clause:
        return "clause";
    case NodeKind::NounPhrase:
        return "noun_phrase";
    case NodeKind::CoordinatedPhrase:
        return "coordinated_phrase";
    case NodeKind::AdjectivePhrase:
        return "adjective_phrase";
    case NodeKind::Literal:
        return "literal";
    case NodeKind::IdLink:
        return "id_link";
    case NodeKind::Iterator:
        return "@iterator";
    case NodeKind::Funcall:
        return "@funcall";
    case NodeKind::DictRef:
        return "dict_ref";
    case NodeKind::Features:
        return "features";
    }
    return "";
}

PlanNode PlanNode::literal(std::string text, bool promoted) {
    PlanNode node;
    node.kind = NodeKind::Literal;
    node.promoted = promoted;
    node.text = std::move(text);
    return node;
}

PlanNode PlanNode::clone() const {
    PlanNode out;
    out.kind = kind;
    out.promoted = promoted;
    auto copy = [](const std::unique_ptr<PlanNode>& p) {
        return p ? std::make_unique<PlanNode>(p->clone()) : nullptr;
    };
    out.subject = copy(subject);
    out.object = copy(object);
    out.indirect_object = copy(indirect_object);
    out.features = copy(features);
    out.verb = verb;
    out.complementiser = complementiser;
    out.head = copy(head);
    out.specifier = copy(specifier);
    for (const PlanNode& n : pre_modifiers)
        out.pre_modifiers.push_back(n.clone());
    for (const PlanNode& n : post_modifiers)
        out.post_modifiers.push_back(n.clone());
    out.plural = plural;
    out.conjunction = conjunction;
    for (const PlanNode& n : coordinates)
        out.coordinates.push_back(n.clone());
    out.text = text;
    out.href = href;
    out.variable = variable;
    out.target_slot = target_slot;
    out.element = copy(element);
    out.iterator = copy(iterator);
    out.function = function;
    out.object_var = object_var;
    out.property = property;
    out.field = field;
    out.arg1 = arg1;
    out.arg2 = arg2;
    out.key = key;
    out.tense = tense;
    out.passive = passive;
    return out;
}

PlanNode parse_plan(std::string_view json_text,
                    const NamespaceTable& namespaces) {
    json value;
    try {
        value = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw_data(std::string("malformed JSON: ") + e.what());
    }
    return PlanParser(namespaces).parse(value);
}

int plan_size(const PlanNode& plan) {
    int count = plan.promoted ? 0 : 1;
    for (const auto* p :
         {&plan.subject, &plan.object, &plan.indirect_object, &plan.features,
          &plan.head, &plan.specifier, &plan.element, &plan.iterator})
        if (*p)
            count += plan_size(**p);
    for (const auto* list :
         {&plan.pre_modifiers, &plan.post_modifiers, &plan.coordinates})
        for (const PlanNode& child : *list)
            count += plan_size(child);
    return count;
}

Dictionary parse_dictionary(std::string_view json_text,
                            const NamespaceTable& namespaces) {
    json value;
    try {
        value = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw_data(std::string("malformed JSON: ") + e.what());
    }
    if (!value.is_object())
        throw_data("dictionary must be a JSON object");

    auto parse_spec = [&namespaces](const json& item) -> PhraseSpec {
        PhraseSpec spec;
        if (item.is_string()) {
            spec.text = item.get<std::string>();
            return spec;
        }
        spec.node = std::make_shared<PlanNode>(
            parse_plan(item.dump(), namespaces));
        return spec;
    };

    Dictionary dict;
    for (const auto& [key, item] : value.items()) {
        if (key == "sections") {
            for (const auto& [section, entries] : item.items()) {
                if (!entries.is_object())
                    throw_data("section '" + section + "' must be an object");
                auto& map = dict.sections[section];
                for (const auto& [term, spec] : entries.items()) {
                    auto colon = term.find(':');
                    if (colon == std::string::npos || colon == 0)
                        throw_data("section key '" + term +
                                   "' is not a qualified name");
                    map.emplace(namespaces.resolve(term.substr(0, colon),
                                                   term.substr(colon + 1)),
                                parse_spec(spec));
                }
            }
        } else if (key == "profiles") {
            for (const auto& [profile, entries] : item.items()) {
                if (!entries.is_object())
                    throw_data("profile '" + profile + "' must be an object");
                auto& map = dict.profiles[profile];
                for (const auto& [term, spec] : entries.items())
                    map.emplace(term, parse_spec(spec));
            }
        } else {
            throw_data("unknown dictionary key \"" + key + "\"");
        }
    }

    return dict;
}

std::vector<std::pair<std::string, std::string>>
profile_key_gaps(const Dictionary& dict) {
    // Profiles must be interchangeable: every key must exist in every
    // profile, or switching profiles would dangle references.
    std::set<std::string> all_keys;
    for (const auto& [profile, entries] : dict.profiles)
        for (const auto& [key, spec] : entries)
            all_keys.insert(key);
    std::vector<std::pair<std::string, std::string>> gaps;
    for (const auto& [profile, entries] : dict.profiles)
        for (const std::string& key : all_keys)
            if (!entries.count(key))
                gaps.emplace_back(profile, key);
    return gaps;
}

} // namespace ea::plan
