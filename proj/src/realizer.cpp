#include "ea/realizer.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

namespace ea {

std::string escape_html(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string format_id_link(std::string_view local, std::string_view iri,
                           Format format) {
    if (format == Format::Text)
        return "(" + std::string(local) + ")";
    std::string href;
    for (char c : iri) {
        if (c == '"')
            href += "%22";
        else if (c == '&')
            href += "&amp;";
        else
            href += c;
    }
    return "(<a href=\"" + href + "\">" + escape_html(local) + "</a>)";
}

} // namespace ea

namespace ea::nlg {

namespace {

bool is_vowel(char c) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string sibilant_plural(const std::string& word) {
    if (ends_with(word, "s") || ends_with(word, "x") || ends_with(word, "z") ||
        ends_with(word, "ch") || ends_with(word, "sh"))
        return word + "es";
    if (word.size() >= 2 && word.back() == 'y' &&
        !is_vowel(word[word.size() - 2]))
        return word.substr(0, word.size() - 1) + "ies";
    return word + "s";
}

/// A token plus spacing/escaping hints.
struct Token {
    std::string text;
    bool raw = false;       // pre-built markup, exempt from HTML escaping
    bool glue_left = false; // no space before (punctuation)
};

class Realizer {
public:
    Realizer(Format format, const Lexicon& lexicon)
        : format_(format), lexicon_(lexicon) {}

    std::vector<Token> realize_node(const plan::PlanNode& node) {
        switch (node.kind) {
        case plan::NodeKind::Clause:
            return realize_clause(node);
        case plan::NodeKind::NounPhrase:
            return realize_noun_phrase(node);
        case plan::NodeKind::CoordinatedPhrase:
            return realize_coordinated(node);
        case plan::NodeKind::AdjectivePhrase:
            return node.head ? realize_node(*node.head)
                             : std::vector<Token>{};
        case plan::NodeKind::Literal:
            return {Token{node.text, false, false}};
        case plan::NodeKind::IdLink:
            return {Token{format_id_link(node.text, node.href, format_),
                          /*raw=*/format_ == Format::Html, false}};
        default:
            throw_config("cannot realize a " +
                         std::string(plan::node_kind_name(node.kind)) +
                         " node; the tree is not fully instantiated");
        }
    }

    Number number_of(const plan::PlanNode& node) const {
        switch (node.kind) {
        case plan::NodeKind::NounPhrase:
            return node.plural ? Number::Plural : Number::Singular;
        case plan::NodeKind::CoordinatedPhrase:
            if (node.coordinates.size() >= 2)
                return Number::Plural;
            if (node.coordinates.size() == 1)
                return number_of(node.coordinates.front());
            return Number::Singular;
        case plan::NodeKind::Literal: {
            // Pronoun subjects that do not take third-person-singular verbs.
            std::string word = node.text;
            std::transform(word.begin(), word.end(), word.begin(),
                           [](unsigned char c) {
                               return static_cast<char>(std::tolower(c));
                           });
            if (word == "we" || word == "they" || word == "you" ||
                word == "i")
                return Number::Plural;
            return Number::Singular;
        }
        default:
            return Number::Singular;
        }
    }

private:
    std::vector<Token> realize_clause(const plan::PlanNode& clause) {
        plan::Tense tense = plan::Tense::Present;
        bool passive = false;
        if (clause.features) {
            tense = clause.features->tense;
            passive = clause.features->passive;
        }

        std::vector<Token> out;
        if (!clause.complementiser.empty())
            out.push_back({clause.complementiser, false, false});

        if (clause.verb.empty()) {
            // Verbless fragment: constituents in order.
            append(out, clause.subject.get());
            append(out, clause.object.get());
            append(out, clause.indirect_object.get());
            return out;
        }

        if (passive) {
            if (!clause.object)
                throw_config("a passive clause requires an object");
            append(out, clause.object.get());
            for (const std::string& word :
                 split_words(be_form(tense, number_of(*clause.object))))
                out.push_back({word, false, false});
            out.push_back({past_participle(clause.verb, lexicon_), false,
                           false});
            if (clause.subject) {
                out.push_back({"by", false, false});
                append(out, clause.subject.get());
            }
            append(out, clause.indirect_object.get());
            return out;
        }

        Number number = clause.subject ? number_of(*clause.subject)
                                       : Number::Singular;
        append(out, clause.subject.get());
        switch (tense) {
        case plan::Tense::Past:
            out.push_back({past_tense(clause.verb, lexicon_), false, false});
            break;
        case plan::Tense::Future:
            out.push_back({"will", false, false});
            out.push_back({clause.verb, false, false});
            break;
        case plan::Tense::Present:
            out.push_back({number == Number::Singular
                               ? present_3sg(clause.verb, lexicon_)
                               : clause.verb,
                           false, false});
            break;
        }
        append(out, clause.object.get());
        append(out, clause.indirect_object.get());
        return out;
    }

    std::vector<Token> realize_noun_phrase(const plan::PlanNode& np) {
        std::vector<Token> out;
        append(out, np.specifier.get());
        for (const plan::PlanNode& mod : np.pre_modifiers)
            append(out, &mod);
        if (np.head) {
            if (np.head->kind == plan::NodeKind::Literal) {
                std::string head = np.head->text;
                std::replace(head.begin(), head.end(), '_', ' ');
                if (np.plural)
                    head = pluralize_head(head);
                out.push_back({std::move(head), false, false});
            } else {
                append(out, np.head.get());
            }
        }
        for (const plan::PlanNode& mod : np.post_modifiers)
            append(out, &mod);
        return out;
    }

    std::string pluralize_head(const std::string& head) const {
        auto space = head.rfind(' ');
        if (space == std::string::npos)
            return pluralize(head, lexicon_);
        return head.substr(0, space + 1) +
               pluralize(head.substr(space + 1), lexicon_);
    }

    std::vector<Token> realize_coordinated(const plan::PlanNode& node) {
        if (node.coordinates.empty())
            throw_config("coordinated_phrase has no coordinates");
        std::vector<Token> out = realize_node(node.coordinates.front());
        for (std::size_t i = 1; i < node.coordinates.size(); ++i) {
            // Commas between items, the bare conjunction before the last.
            if (i + 1 == node.coordinates.size())
                out.push_back({node.conjunction, false, false});
            else
                out.push_back({",", false, true});
            std::vector<Token> item = realize_node(node.coordinates[i]);
            out.insert(out.end(), std::make_move_iterator(item.begin()),
                       std::make_move_iterator(item.end()));
        }
        return out;
    }

    void append(std::vector<Token>& out, const plan::PlanNode* node) {
        if (!node)
            return;
        std::vector<Token> tokens = realize_node(*node);
        out.insert(out.end(), std::make_move_iterator(tokens.begin()),
                   std::make_move_iterator(tokens.end()));
    }

    static std::vector<std::string> split_words(const std::string& text) {
        std::vector<std::string> out;
        std::string word;
        for (char c : text) {
            if (c == ' ') {
                if (!word.empty())
                    out.push_back(std::move(word));
                word.clear();
            } else {
                word += c;
            }
        }
        if (!word.empty())
            out.push_back(std::move(word));
        return out;
    }

    Format format_;
    const Lexicon& lexicon_;
};

/// Joins tokens, escaping plain text in HTML mode, then applies sentence
/// orthography (capital, single spaces, one terminal period) outside of any
/// markup.
std::string finalize(const std::vector<Token>& tokens, Format format) {
    std::string text;
    for (const Token& token : tokens) {
        if (token.text.empty())
            continue;
        if (!text.empty() && !token.glue_left)
            text += ' ';
        if (format == Format::Html && !token.raw)
            text += escape_html(token.text);
        else
            text += token.text;
    }

    // Collapse runs of spaces (never inside tags; IRIs carry no spaces).
    std::string collapsed;
    collapsed.reserve(text.size());
    for (char c : text)
        if (c != ' ' || collapsed.empty() || collapsed.back() != ' ')
            collapsed += c;
    while (!collapsed.empty() && collapsed.back() == ' ')
        collapsed.pop_back();

    // Capitalize the first alphabetic character outside markup.
    bool in_tag = false;
    for (char& c : collapsed) {
        if (format == Format::Html) {
            if (c == '<') {
                in_tag = true;
                continue;
            }
            if (c == '>') {
                in_tag = false;
                continue;
            }
            if (in_tag)
                continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            break;
        }
    }

    while (!collapsed.empty() && collapsed.back() == '.')
        collapsed.pop_back();
    collapsed += '.';
    return collapsed;
}

} // namespace

const Lexicon& Lexicon::builtin() {
    static const Lexicon lexicon = [] {
        Lexicon l;
        l.irregular_verbs = {
            {"be", {"was", "been", "is"}},
            {"have", {"had", "had", "has"}},
            {"do", {"did", "done", "does"}},
            {"make", {"made", "made", "makes"}},
            {"take", {"took", "taken", "takes"}},
            {"give", {"gave", "given", "gives"}},
            {"get", {"got", "got", "gets"}},
            {"send", {"sent", "sent", "sends"}},
            {"find", {"found", "found", "finds"}},
            {"hold", {"held", "held", "holds"}},
            {"keep", {"kept", "kept", "keeps"}},
            {"lead", {"led", "led", "leads"}},
            {"leave", {"left", "left", "leaves"}},
            {"meet", {"met", "met", "meets"}},
            {"pay", {"paid", "paid", "pays"}},
            {"say", {"said", "said", "says"}},
            {"see", {"saw", "seen", "sees"}},
            {"tell", {"told", "told", "tells"}},
            {"think", {"thought", "thought", "thinks"}},
            {"write", {"wrote", "written", "writes"}},
        };
        l.irregular_plurals = {
            {"child", "children"},   {"person", "people"},
            {"man", "men"},          {"woman", "women"},
            {"foot", "feet"},        {"tooth", "teeth"},
            {"criterion", "criteria"}, {"datum", "data"},
        };
        return l;
    }();
    return lexicon;
}

Lexicon Lexicon::from_json(std::string_view json_text) {
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw_data(std::string("malformed lexicon JSON: ") + e.what());
    }
    Lexicon lexicon;
    for (const auto& [verb, forms] : value.at("irregular_verbs").items())
        lexicon.irregular_verbs[verb] = {
            forms.at("past").get<std::string>(),
            forms.at("past_participle").get<std::string>(),
            forms.at("present_3sg").get<std::string>()};
    for (const auto& [noun, plural] : value.at("irregular_plurals").items())
        lexicon.irregular_plurals[noun] = plural.get<std::string>();
    return lexicon;
}

std::string past_participle(const std::string& verb, const Lexicon& lexicon) {
    auto it = lexicon.irregular_verbs.find(verb);
    if (it != lexicon.irregular_verbs.end())
        return it->second.past_participle;
    if (ends_with(verb, "e"))
        return verb + "d";
    if (verb.size() >= 2 && verb.back() == 'y' &&
        !is_vowel(verb[verb.size() - 2]))
        return verb.substr(0, verb.size() - 1) + "ied";
    return verb + "ed";
}

std::string past_tense(const std::string& verb, const Lexicon& lexicon) {
    auto it = lexicon.irregular_verbs.find(verb);
    if (it != lexicon.irregular_verbs.end())
        return it->second.past;
    if (ends_with(verb, "e"))
        return verb + "d";
    if (verb.size() >= 2 && verb.back() == 'y' &&
        !is_vowel(verb[verb.size() - 2]))
        return verb.substr(0, verb.size() - 1) + "ied";
    return verb + "ed";
}

std::string present_3sg(const std::string& verb, const Lexicon& lexicon) {
    auto it = lexicon.irregular_verbs.find(verb);
    if (it != lexicon.irregular_verbs.end())
        return it->second.present_3sg;
    if (ends_with(verb, "o"))
        return verb + "es";
    return sibilant_plural(verb);
}

std::string be_form(plan::Tense tense, Number number) {
    switch (tense) {
    case plan::Tense::Past:
        return number == Number::Singular ? "was" : "were";
    case plan::Tense::Present:
        return number == Number::Singular ? "is" : "are";
    case plan::Tense::Future:
        return "will be";
    }
    return "";
}

std::string pluralize(const std::string& noun, const Lexicon& lexicon) {
    auto it = lexicon.irregular_plurals.find(noun);
    if (it != lexicon.irregular_plurals.end())
        return it->second;
    return sibilant_plural(noun);
}

Sentence realize(const plan::PlanNode& tree, Format format,
                 const Lexicon& lexicon) {
    Realizer realizer(format, lexicon);
    return Sentence{finalize(realizer.realize_node(tree), format), format};
}

} // namespace ea::nlg
