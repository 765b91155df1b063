#include "ea/provn.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace ea {

namespace {

bool is_prefix_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_prefix_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.';
}

// Local parts admit path-style names such as records/956.
bool is_local_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.' || c == '/';
}

bool is_time_char(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
           c == ':' || c == '+' || c == '.' || c == 'T' || c == 'Z';
}

class Lexer {
public:
    enum class Kind {
        End,
        Word,     // bare identifier: document, entity, ...
        QName,    // prefix:local
        Iri,      // <...>
        String,   // "..."
        SQuoted,  // '...' (a qualified name literal)
        Time,     // unquoted xsd:dateTime token
        LParen,
        RParen,
        LBracket,
        RBracket,
        Comma,
        Semicolon,
        Equals,
        Percent2, // %%
        Dash,     // omission marker
    };

    struct Token {
        Kind kind = Kind::End;
        std::string text;   // word / string body / iri body / time
        std::string prefix; // QName only
        std::string local;  // QName only
        int line = 1;
        int column = 1;
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
        skip_ws();
        current_ = Token{};
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= input_.size()) {
            current_.kind = Kind::End;
            return;
        }
        char c = input_[pos_];
        switch (c) {
        case '(':
            current_.kind = Kind::LParen;
            consume();
            return;
        case ')':
            current_.kind = Kind::RParen;
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
        case ',':
            current_.kind = Kind::Comma;
            consume();
            return;
        case ';':
            current_.kind = Kind::Semicolon;
            consume();
            return;
        case '=':
            current_.kind = Kind::Equals;
            consume();
            return;
        case '%':
            consume();
            if (pos_ >= input_.size() || input_[pos_] != '%')
                throw ParseError("stray '%'", current_.line, current_.column);
            consume();
            current_.kind = Kind::Percent2;
            return;
        case '<':
            lex_iri();
            return;
        case '"':
            lex_string();
            return;
        case '\'':
            lex_squoted();
            return;
        default:
            break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_time();
            return;
        }
        if (c == '-') {
            current_.kind = Kind::Dash;
            consume();
            return;
        }
        if (is_prefix_start(c)) {
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
        consume(); // >
        current_.kind = Kind::Iri;
        current_.text = std::move(body);
    }

    void lex_string() {
        consume(); // "
        std::string body;
        while (pos_ < input_.size() && input_[pos_] != '"') {
            char c = input_[pos_];
            if (c == '\\') {
                consume();
                if (pos_ >= input_.size())
                    break;
                char esc = input_[pos_];
                switch (esc) {
                case '"':
                    body += '"';
                    break;
                case '\\':
                    body += '\\';
                    break;
                case 'n':
                    body += '\n';
                    break;
                case 't':
                    body += '\t';
                    break;
                default:
                    throw ParseError(std::string("unknown escape '\\") + esc +
                                         "'",
                                     line_, column_);
                }
                consume();
                continue;
            }
            body += c;
            consume();
        }
        if (pos_ >= input_.size())
            throw ParseError("unterminated string", current_.line,
                             current_.column);
        consume(); // "
        current_.kind = Kind::String;
        current_.text = std::move(body);
    }

    void lex_squoted() {
        consume(); // '
        std::string body;
        while (pos_ < input_.size() && input_[pos_] != '\'') {
            if (input_[pos_] == '\n')
                throw ParseError("unterminated quoted name", current_.line,
                                 current_.column);
            body += input_[pos_];
            consume();
        }
        if (pos_ >= input_.size())
            throw ParseError("unterminated quoted name", current_.line,
                             current_.column);
        consume(); // '
        current_.kind = Kind::SQuoted;
        current_.text = std::move(body);
    }

    void lex_time() {
        std::string body;
        while (pos_ < input_.size() && is_time_char(input_[pos_])) {
            body += input_[pos_];
            consume();
        }
        current_.kind = Kind::Time;
        current_.text = std::move(body);
    }

    void lex_name() {
        std::string head;
        while (pos_ < input_.size() && is_prefix_char(input_[pos_])) {
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

    void skip_ws() {
        while (pos_ < input_.size()) {
            char c = input_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
                consume();
            else
                break;
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

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) {}

    ProvDocument parse() {
        expect_word("document");
        while (lexer_.peek().kind == Lexer::Kind::Word &&
               lexer_.peek().text == "prefix")
            parse_prefix();
        while (!(lexer_.peek().kind == Lexer::Kind::Word &&
                 lexer_.peek().text == "endDocument"))
            parse_statement();
        lexer_.take(); // endDocument
        if (lexer_.peek().kind != Lexer::Kind::End)
            lexer_.fail("content after endDocument");
        return std::move(doc_);
    }

private:
    void parse_prefix() {
        lexer_.take(); // prefix
        auto name = lexer_.take();
        if (name.kind != Lexer::Kind::Word)
            throw ParseError("expected prefix name", name.line, name.column);
        auto iri = lexer_.take();
        if (iri.kind != Lexer::Kind::Iri)
            throw ParseError("expected <IRI>", iri.line, iri.column);
        if (name.text == "_")
            throw ParseError("the '_' prefix is reserved", name.line,
                             name.column);
        try {
            doc_.declare_prefix(name.text, iri.text);
        } catch (const Error& e) {
            throw ParseError(e.what(), name.line, name.column);
        }
    }

    void parse_statement() {
        auto keyword = lexer_.take();
        if (keyword.kind != Lexer::Kind::Word)
            throw ParseError("expected a statement keyword", keyword.line,
                             keyword.column);
        if (keyword.text == "prefix")
            throw ParseError("prefix declarations must precede statements",
                             keyword.line, keyword.column);
        if (keyword.text == "entity")
            return parse_element(ElementKind::Entity, keyword);
        if (keyword.text == "activity")
            return parse_element(ElementKind::Activity, keyword);
        if (keyword.text == "agent")
            return parse_element(ElementKind::Agent, keyword);
        static const std::pair<const char*, RelationKind> relations[] = {
            {"wasGeneratedBy", RelationKind::WasGeneratedBy},
            {"used", RelationKind::Used},
            {"wasAttributedTo", RelationKind::WasAttributedTo},
            {"wasAssociatedWith", RelationKind::WasAssociatedWith},
            {"actedOnBehalfOf", RelationKind::ActedOnBehalfOf},
            {"wasDerivedFrom", RelationKind::WasDerivedFrom},
            {"wasInformedBy", RelationKind::WasInformedBy},
        };
        for (const auto& [name, kind] : relations)
            if (keyword.text == name)
                return parse_relation(kind, keyword);
        throw ParseError("unsupported statement '" + keyword.text + "'",
                         keyword.line, keyword.column);
    }

    void parse_element(ElementKind kind, const Lexer::Token& keyword) {
        expect(Lexer::Kind::LParen, "expected '('");
        Element element;
        element.kind = kind;
        element.id = parse_qname();

        if (accept(Lexer::Kind::Comma)) {
            // activity(id, start, end [, attrs]) | element(id, [attrs])
            if (kind == ElementKind::Activity &&
                lexer_.peek().kind != Lexer::Kind::LBracket) {
                element.start_time = parse_time_or_dash();
                expect(Lexer::Kind::Comma, "expected ','");
                element.end_time = parse_time_or_dash();
                if (accept(Lexer::Kind::Comma))
                    element.attributes = parse_attributes();
            } else {
                element.attributes = parse_attributes();
            }
        }
        expect(Lexer::Kind::RParen, "expected ')'");
        add(std::move(element), keyword);
    }

    void parse_relation(RelationKind kind, const Lexer::Token& keyword) {
        expect(Lexer::Kind::LParen, "expected '('");
        Relation relation;
        relation.kind = kind;

        QualifiedName first = parse_qname();
        if (accept(Lexer::Kind::Semicolon)) {
            relation.id = std::move(first);
            relation.first = parse_qname();
        } else {
            relation.first = std::move(first);
        }
        expect(Lexer::Kind::Comma, "expected ','");
        relation.second = parse_qname();

        if (accept(Lexer::Kind::Comma)) {
            if (lexer_.peek().kind == Lexer::Kind::LBracket) {
                relation.attributes = parse_attributes();
            } else {
                if (!relation_supports_time(kind))
                    lexer_.fail(std::string(provn_keyword(kind)) +
                                " does not take a time argument");
                relation.time = parse_time_or_dash();
                if (accept(Lexer::Kind::Comma))
                    relation.attributes = parse_attributes();
            }
        }
        expect(Lexer::Kind::RParen, "expected ')'");
        add(std::move(relation), keyword);
    }

    Attributes parse_attributes() {
        Attributes attrs;
        expect(Lexer::Kind::LBracket, "expected '['");
        if (accept(Lexer::Kind::RBracket))
            return attrs;
        while (true) {
            QualifiedName name = parse_qname();
            expect(Lexer::Kind::Equals, "expected '='");
            attrs.emplace_back(std::move(name), parse_value());
            if (!accept(Lexer::Kind::Comma))
                break;
        }
        expect(Lexer::Kind::RBracket, "expected ']'");
        return attrs;
    }

    AttributeValue parse_value() {
        auto token = lexer_.take();
        if (token.kind == Lexer::Kind::SQuoted)
            return resolve_compact(token.text, token);
        if (token.kind == Lexer::Kind::String) {
            if (lexer_.peek().kind == Lexer::Kind::Percent2) {
                lexer_.take();
                QualifiedName datatype = parse_qname();
                TypedLiteral literal{token.text, std::move(datatype)};
                try {
                    check_attribute_value(AttributeValue{literal});
                } catch (const Error& e) {
                    throw ParseError(e.what(), token.line, token.column);
                }
                return literal;
            }
            return StringLiteral{token.text};
        }
        throw ParseError("expected a value ('qualified:name', \"string\" or "
                         "\"lexical\" %% datatype)",
                         token.line, token.column);
    }

    QualifiedName resolve_compact(const std::string& text,
                                  const Lexer::Token& at) {
        auto colon = text.find(':');
        if (colon == std::string::npos || colon == 0 ||
            colon + 1 == text.size())
            throw ParseError("'" + text + "' is not a qualified name",
                             at.line, at.column);
        return resolve(text.substr(0, colon), text.substr(colon + 1), at);
    }

    QualifiedName parse_qname() {
        auto token = lexer_.take();
        if (token.kind != Lexer::Kind::QName)
            throw ParseError("expected a qualified name", token.line,
                             token.column);
        return resolve(token.prefix, token.local, token);
    }

    QualifiedName resolve(const std::string& prefix, const std::string& local,
                          const Lexer::Token& at) {
        try {
            return doc_.namespaces().resolve(prefix, local);
        } catch (const Error& e) {
            throw ParseError(e.what(), at.line, at.column);
        }
    }

    std::optional<Timestamp> parse_time_or_dash() {
        auto token = lexer_.take();
        if (token.kind == Lexer::Kind::Dash)
            return std::nullopt;
        if (token.kind != Lexer::Kind::Time ||
            !is_valid_datetime(token.text))
            throw ParseError("expected an xsd:dateTime or '-'", token.line,
                             token.column);
        return Timestamp{token.text};
    }

    template <typename S> void add(S statement, const Lexer::Token& at) {
        try {
            doc_.add(std::move(statement));
        } catch (const Error& e) {
            throw ParseError(e.what(), at.line, at.column);
        }
    }

    bool accept(Lexer::Kind kind) {
        if (lexer_.peek().kind != kind)
            return false;
        lexer_.take();
        return true;
    }

    void expect(Lexer::Kind kind, const std::string& message) {
        if (lexer_.peek().kind != kind)
            lexer_.fail(message);
        lexer_.take();
    }

    void expect_word(const std::string& word) {
        auto token = lexer_.take();
        if (token.kind != Lexer::Kind::Word || token.text != word)
            throw ParseError("expected '" + word + "'", token.line,
                             token.column);
    }

    Lexer lexer_;
    ProvDocument doc_;
};

void write_escaped(std::ostream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        switch (c) {
        case '"':
            out << "\\\"";
            break;
        case '\\':
            out << "\\\\";
            break;
        case '\n':
            out << "\\n";
            break;
        case '\t':
            out << "\\t";
            break;
        default:
            out << c;
        }
    }
    out << '"';
}

void write_value(std::ostream& out, const AttributeValue& value) {
    if (const auto* q = std::get_if<QualifiedName>(&value)) {
        out << '\'' << q->compact() << '\'';
    } else if (const auto* s = std::get_if<StringLiteral>(&value)) {
        write_escaped(out, s->value);
    } else {
        const auto& typed = std::get<TypedLiteral>(value);
        write_escaped(out, typed.lexical);
        out << " %% " << typed.datatype.compact();
    }
}

void write_attributes(std::ostream& out, const Attributes& attrs) {
    out << '[';
    bool first = true;
    for (const auto& [name, value] : attrs) {
        if (!first)
            out << ", ";
        first = false;
        out << name.compact() << " = ";
        write_value(out, value);
    }
    out << ']';
}

} // namespace

ProvDocument parse_provn(std::string_view text) {
    return Parser(text).parse();
}

std::string write_provn(const ProvDocument& doc) {
    std::ostringstream out;
    out << "document\n";
    for (const auto& [prefix, iri] : doc.namespaces().declarations())
        out << "  prefix " << prefix << " <" << iri << ">\n";
    for (const Statement& statement : doc.statements()) {
        out << "  ";
        if (const auto* element = std::get_if<Element>(&statement)) {
            out << provn_keyword(element->kind) << '(' << element->id.compact();
            if (element->start_time || element->end_time) {
                out << ", "
                    << (element->start_time ? element->start_time->lexical
                                            : "-")
                    << ", "
                    << (element->end_time ? element->end_time->lexical : "-");
            }
            if (!element->attributes.empty()) {
                out << ", ";
                write_attributes(out, element->attributes);
            }
            out << ")\n";
        } else {
            const auto& relation = std::get<Relation>(statement);
            out << provn_keyword(relation.kind) << '(';
            if (!relation.synthetic_id)
                out << relation.id.compact() << "; ";
            out << relation.first.compact() << ", "
                << relation.second.compact();
            if (relation.time)
                out << ", " << relation.time->lexical;
            if (!relation.attributes.empty()) {
                out << ", ";
                write_attributes(out, relation.attributes);
            }
            out << ")\n";
        }
    }
    out << "endDocument\n";
    return out.str();
}

} // namespace ea
