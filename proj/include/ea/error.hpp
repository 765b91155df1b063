#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ea {

/// Fault categories. They decide CLI exit codes and HTTP statuses:
/// Data -> exit 1 / 400, Config -> exit 2 / 500, Usage -> exit 64 / 400,
/// NotFound and Unavailable -> exit 1 / 404.
enum class ErrorKind {
    Data,        // malformed or inconsistent caller-supplied data
    Config,      // invalid bundle artifacts or cross-references
    NotFound,    // unknown app, decision, explanation or profile
    Unavailable, // the explanation's query matched nothing for this decision
    Usage,       // bad command-line or request arguments
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure with a source position, formatted into the message as
/// "line L, column C: ...".
class ParseError : public Error {
public:
    ParseError(std::string message, int line, int column,
               ErrorKind kind = ErrorKind::Data)
        : Error(kind, "line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + std::move(message)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

[[noreturn]] inline void throw_data(std::string message) {
    throw Error(ErrorKind::Data, std::move(message));
}

[[noreturn]] inline void throw_config(std::string message) {
    throw Error(ErrorKind::Config, std::move(message));
}

[[noreturn]] inline void throw_not_found(std::string message) {
    throw Error(ErrorKind::NotFound, std::move(message));
}

[[noreturn]] inline void throw_usage(std::string message) {
    throw Error(ErrorKind::Usage, std::move(message));
}

} // namespace ea
