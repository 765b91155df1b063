#include "ea/query.hpp"

#include <algorithm>
#include <cctype>

namespace ea::query {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-';
}

bool is_local_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.' || c == '/';
}

class Lexer {
public:
    enum class Kind {
        End,
        Word,   // identifier or keyword
        QName,  // prefix:local
        Iri,    // <...>
        Quoted, // '...'
        Star,   // *
        Dot,
        Equals,
        GreaterEquals,
        LBracket,
        RBracket,
    };

    struct Token {
        Kind kind = Kind::End;
        std::string text;
        std::string prefix;
        std::string local;
        int line = 1;
        int column = 1;

        bool is_keyword(std::string_view keyword) const {
            return kind == Kind::Word && lower(text) == keyword;
        }
    };

    explicit Lexer(std::string_view input) : input_(input) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = std::move(current_);
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, current_.line, current_.column);
    }

private:
    void advance() {
        skip_ws_and_comments();
        current_ = Token{};
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= input_.size()) {
            current_.kind = Kind::End;
            return;
        }
        char c = input_[pos_];
        switch (c) {
        case '*':
            current_.kind = Kind::Star;
            consume();
            return;
        case '.':
            current_.kind = Kind::Dot;
            consume();
            return;
        case '[':
            current_.kind = Kind::LBracket;
            consume();
            return;
        case ']':
            current_.kind = Kind::RBracket;
            consume();
            return;
        case '=':
            current_.kind = Kind::Equals;
            consume();
            return;
        case '>':
            consume();
            if (pos_ >= input_.size() || input_[pos_] != '=')
                throw ParseError("expected '>='", current_.line,
                                 current_.column);
            consume();
            current_.kind = Kind::GreaterEquals;
            return;
        case '<':
            lex_iri();
            return;
        case '\'':
            lex_quoted();
            return;
        default:
            break;
        }
        if (is_name_start(c)) {
            lex_name();
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'",
                         line_, column_);
    }

    void lex_iri() {
        consume(); // <
        std::string body;
        while (pos_ < input_.size() && input_[pos_] != '>') {
            if (input_[pos_] == '\n')
                throw ParseError("unterminated IRI", current_.line,
                                 current_.column);
            body += input_[pos_];
            consume();
        }
        if (pos_ >= input_.size())
            throw ParseError("unterminated IRI", current_.line,
                             current_.column);
        consume();
        current_.kind = Kind::Iri;
        current_.text = std::move(body);
    }

    void lex_quoted() {
        consume(); // '
        std::string body;
        while (pos_ < input_.size() && input_[pos_] != '\'') {
            if (input_[pos_] == '\n')
                throw ParseError("unterminated quoted value", current_.line,
                                 current_.column);
            body += input_[pos_];
            consume();
        }
        if (pos_ >= input_.size())
            throw ParseError("unterminated quoted value", current_.line,
                             current_.column);
        consume();
        current_.kind = Kind::Quoted;
        current_.text = std::move(body);
    }

    void lex_name() {
        std::string head;
        while (pos_ < input_.size() && is_name_char(input_[pos_])) {
            head += input_[pos_];
            consume();
        }
        if (pos_ < input_.size() && input_[pos_] == ':') {
            consume();
            std::string local;
            while (pos_ < input_.size() && is_local_char(input_[pos_])) {
                local += input_[pos_];
                consume();
            }
            if (local.empty())
                throw ParseError("empty local name after '" + head + ":'",
                                 line_, column_);
            current_.kind = Kind::QName;
            current_.prefix = std::move(head);
            current_.local = std::move(local);
            return;
        }
        current_.kind = Kind::Word;
        current_.text = std::move(head);
    }

    void skip_ws_and_comments() {
        while (pos_ < input_.size()) {
            char c = input_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                consume();
            } else if (c == '#') {
                while (pos_ < input_.size() && input_[pos_] != '\n')
                    consume();
            } else {
                break;
            }
        }
    }

    void consume() {
        if (input_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view input_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token current_;
};

/// Record-type IRIs recognized in `from VAR a TYPE`.
std::optional<RecordKind> record_kind_for(const QualifiedName& type) {
    static const std::pair<std::string_view, RecordKind> prov_kinds[] = {
        {"Entity", RecordKind::Entity},
        {"Activity", RecordKind::Activity},
        {"Agent", RecordKind::Agent},
        {"WasGeneratedBy", RecordKind::WasGeneratedBy},
        {"Used", RecordKind::Used},
        {"WasAttributedTo", RecordKind::WasAttributedTo},
        {"WasAssociatedWith", RecordKind::WasAssociatedWith},
        {"ActedOnBehalfOf", RecordKind::ActedOnBehalfOf},
        {"WasDerivedFrom", RecordKind::WasDerivedFrom},
        {"WasInformedBy", RecordKind::WasInformedBy},
    };
    for (const auto& [local, kind] : prov_kinds)
        if (type.in_namespace(wellknown::kProv) && type.local == local)
            return kind;
    if (type.in_namespace(wellknown::kProvExt) &&
        type.local == "WasDerivedFromStar")
        return RecordKind::DerivedFromStar;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) {
        ast_.prefixes.declare("provext", std::string(wellknown::kProvExt));
    }

    QueryAst parse() {
        while (lexer_.peek().is_keyword("prefix"))
            parse_prefix();
        expect_keyword("select");
        expect(Lexer::Kind::Star, "expected '*'");
        if (!lexer_.peek().is_keyword("from"))
            lexer_.fail("expected 'from'");
        while (lexer_.peek().is_keyword("from"))
            parse_from();
        if (lexer_.peek().is_keyword("where"))
            parse_where();
        if (lexer_.peek().is_keyword("group"))
            parse_group_by();
        if (lexer_.peek().kind != Lexer::Kind::End)
            lexer_.fail("unexpected trailing input");
        return std::move(ast_);
    }

private:
    void parse_prefix() {
        lexer_.take();
        auto name = lexer_.take();
        if (name.kind != Lexer::Kind::Word)
            throw ParseError("expected prefix name", name.line, name.column);
        auto iri = lexer_.take();
        if (iri.kind != Lexer::Kind::Iri)
            throw ParseError("expected <IRI>", iri.line, iri.column);
        try {
            ast_.prefixes.declare(name.text, iri.text);
        } catch (const Error& e) {
            throw ParseError(e.what(), name.line, name.column);
        }
    }

    void parse_from() {
        lexer_.take(); // from
        auto var = take_word("expected a variable name");
        expect_keyword("a");
        auto type_token = lexer_.take();
        if (type_token.kind != Lexer::Kind::QName)
            throw ParseError("expected a record type (e.g. prov:Entity)",
                             type_token.line, type_token.column);
        QualifiedName type = resolve(type_token);
        auto kind = record_kind_for(type);
        if (!kind)
            throw ParseError("unknown record type '" + type.compact() + "'",
                             type_token.line, type_token.column);
        if (ast_.declares_var(var.text))
            throw ParseError("variable '" + var.text + "' is already declared",
                             var.line, var.column);

        FromClause clause;
        clause.var = var.text;
        clause.kind = *kind;
        clause.record_type = std::move(type);
        ast_.from_clauses.push_back(std::move(clause));

        while (lexer_.peek().is_keyword("join"))
            parse_join();
    }

    void parse_join() {
        lexer_.take(); // join
        JoinCondition join;
        std::tie(join.left_var, join.left_field) = parse_field_ref();
        expect(Lexer::Kind::Equals, "expected '='");
        std::tie(join.right_var, join.right_field) = parse_field_ref();
        ast_.from_clauses.back().joins.push_back(std::move(join));
    }

    std::pair<std::string, std::string> parse_field_ref() {
        auto var = take_word("expected a variable name");
        RecordKind kind = kind_of(var);
        expect(Lexer::Kind::Dot, "expected '.'");
        auto field = take_word("expected a field name");
        if (!has_field(kind, field.text))
            throw ParseError("record type '" +
                                 std::string(record_kind_name(kind)) +
                                 "' has no field '" + field.text + "'",
                             field.line, field.column);
        return {var.text, field.text};
    }

    void parse_where() {
        lexer_.take(); // where
        parse_condition();
        while (lexer_.peek().is_keyword("and")) {
            lexer_.take();
            parse_condition();
        }
    }

    void parse_condition() {
        auto var = take_word("expected a variable name");
        kind_of(var); // declared check
        expect(Lexer::Kind::LBracket, "expected '['");
        auto attr_token = lexer_.take();
        if (attr_token.kind != Lexer::Kind::QName)
            throw ParseError("expected an attribute name (e.g. prov:type)",
                             attr_token.line, attr_token.column);
        QualifiedName attribute = resolve(attr_token);
        expect(Lexer::Kind::RBracket, "expected ']'");
        auto op = lexer_.take();
        if (op.kind != Lexer::Kind::GreaterEquals &&
            op.kind != Lexer::Kind::Equals)
            throw ParseError("expected '>=' (or its alias '=')", op.line,
                             op.column);
        auto value = lexer_.take();
        if (value.kind != Lexer::Kind::Quoted)
            throw ParseError("expected a quoted value", value.line,
                             value.column);
        ast_.filters.push_back(
            {var.text, std::move(attribute), parse_literal(value)});
    }

    AttributeValue parse_literal(const Lexer::Token& token) {
        const std::string& text = token.text;
        auto colon = text.find(':');
        if (colon != std::string::npos && colon > 0 &&
            colon + 1 < text.size() && is_name_start(text[0]) &&
            text.find(' ') == std::string::npos &&
            text.find(':', colon + 1) == std::string::npos) {
            std::string prefix = text.substr(0, colon);
            if (!ast_.prefixes.find(prefix))
                throw ParseError("undeclared prefix '" + prefix + "' in '" +
                                     text + "'",
                                 token.line, token.column);
            return ast_.prefixes.resolve(prefix, text.substr(colon + 1));
        }
        return StringLiteral{text};
    }

    void parse_group_by() {
        lexer_.take(); // group
        expect_keyword("by");
        auto group_var = take_word("expected a variable name");
        kind_of(group_var);
        expect_keyword("aggregate");
        auto agg_var = take_word("expected a variable name");
        kind_of(agg_var);
        expect_keyword("with");
        auto agg = take_word("expected an aggregate name");
        if (lower(agg.text) != "seq")
            throw ParseError("unsupported aggregate '" + agg.text + "'",
                             agg.line, agg.column);
        ast_.group_by = GroupClause{group_var.text, agg_var.text};
    }

    RecordKind kind_of(const Lexer::Token& var) {
        for (const FromClause& clause : ast_.from_clauses)
            if (clause.var == var.text)
                return clause.kind;
        throw ParseError("undeclared variable '" + var.text + "'", var.line,
                         var.column);
    }

    QualifiedName resolve(const Lexer::Token& token) {
        try {
            return ast_.prefixes.resolve(token.prefix, token.local);
        } catch (const Error& e) {
            throw ParseError(e.what(), token.line, token.column);
        }
    }

    Lexer::Token take_word(const std::string& message) {
        auto token = lexer_.take();
        if (token.kind != Lexer::Kind::Word)
            throw ParseError(message, token.line, token.column);
        return token;
    }

    void expect(Lexer::Kind kind, const std::string& message) {
        if (lexer_.peek().kind != kind)
            lexer_.fail(message);
        lexer_.take();
    }

    void expect_keyword(std::string_view keyword) {
        auto token = lexer_.take();
        if (!token.is_keyword(keyword))
            throw ParseError("expected '" + std::string(keyword) + "'",
                             token.line, token.column);
    }

    Lexer lexer_;
    QueryAst ast_;
};

} // namespace

std::string_view record_kind_name(RecordKind kind) {
    switch (kind) {
    case RecordKind::Entity:
        return "prov:Entity";
    case RecordKind::Activity:
        return "prov:Activity";
    case RecordKind::Agent:
        return "prov:Agent";
    case RecordKind::WasGeneratedBy:
        return "prov:WasGeneratedBy";
    case RecordKind::Used:
        return "prov:Used";
    case RecordKind::WasAttributedTo:
        return "prov:WasAttributedTo";
    case RecordKind::WasAssociatedWith:
        return "prov:WasAssociatedWith";
    case RecordKind::ActedOnBehalfOf:
        return "prov:ActedOnBehalfOf";
    case RecordKind::WasDerivedFrom:
        return "prov:WasDerivedFrom";
    case RecordKind::WasInformedBy:
        return "prov:WasInformedBy";
    case RecordKind::DerivedFromStar:
        return "provext:WasDerivedFromStar";
    }
    return "";
}

bool has_field(RecordKind kind, std::string_view field) {
    if (field == "id")
        return true;
    RelationKind relation_kind = RelationKind::WasDerivedFrom;
    switch (kind) {
    case RecordKind::Entity:
    case RecordKind::Activity:
    case RecordKind::Agent:
        return false;
    case RecordKind::WasGeneratedBy:
        relation_kind = RelationKind::WasGeneratedBy;
        break;
    case RecordKind::Used:
        relation_kind = RelationKind::Used;
        break;
    case RecordKind::WasAttributedTo:
        relation_kind = RelationKind::WasAttributedTo;
        break;
    case RecordKind::WasAssociatedWith:
        relation_kind = RelationKind::WasAssociatedWith;
        break;
    case RecordKind::ActedOnBehalfOf:
        relation_kind = RelationKind::ActedOnBehalfOf;
        break;
    case RecordKind::WasInformedBy:
        relation_kind = RelationKind::WasInformedBy;
        break;
    case RecordKind::WasDerivedFrom:
    case RecordKind::DerivedFromStar:
        relation_kind = RelationKind::WasDerivedFrom;
        break;
    }
    RelationFields fields = relation_fields(relation_kind);
    return field == fields.first || field == fields.second;
}

bool QueryAst::declares_var(std::string_view name) const {
    for (const FromClause& clause : from_clauses)
        if (clause.var == name)
            return true;
    return false;
}

QueryAst parse_query(std::string_view text) {
    return Parser(text).parse();
}

QueryCost query_cost(const QueryAst& ast) {
    QueryCost cost;
    for (const FromClause& clause : ast.from_clauses)
        cost.joins += static_cast<int>(clause.joins.size());
    cost.filters = static_cast<int>(ast.filters.size());
    return cost;
}

} // namespace ea::query
