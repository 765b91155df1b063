#pragma once

#include <map>
#include <string>
#include <string_view>

#include "ea/plan.hpp"
#include "ea/text_format.hpp"

namespace ea::nlg {

enum class Number { Singular, Plural };

/// Irregular morphology tables. The canonical copy ships as
/// data/lexicon.json; builtin() is the compiled-in equivalent.
struct Lexicon {
    struct VerbForms {
        std::string past;
        std::string past_participle;
        std::string present_3sg;
    };
    std::map<std::string, VerbForms> irregular_verbs;
    std::map<std::string, std::string> irregular_plurals;

    static const Lexicon& builtin();
    static Lexicon from_json(std::string_view json_text);
};

/// Irregular table first, then: final e -> +d, consonant+y -> -ied,
/// otherwise +ed.
std::string past_participle(const std::string& verb, const Lexicon& lexicon);

/// Same rules as the participle for regular verbs.
std::string past_tense(const std::string& verb, const Lexicon& lexicon);

/// s/x/z/ch/sh/o -> +es, consonant+y -> -ies, otherwise +s.
std::string present_3sg(const std::string& verb, const Lexicon& lexicon);

/// Passive auxiliary: was/were, is/are, or "will be".
std::string be_form(plan::Tense tense, Number number);

std::string pluralize(const std::string& noun, const Lexicon& lexicon);

struct Sentence {
    std::string text;
    Format format = Format::Text;
};

/// Turns a resolved syntax tree into one sentence: first alphabetic
/// character capitalized, single spaces, exactly one terminal period. HTML
/// output escapes <, > and & outside the anchors generated for record
/// identifiers.
Sentence realize(const plan::PlanNode& tree, Format format,
                 const Lexicon& lexicon = Lexicon::builtin());

} // namespace ea::nlg
