#pragma once

#include <string>
#include <string_view>

#include "ea/prov.hpp"

namespace ea {

/// Parses the PROV-N subset: `document`/`endDocument`, `prefix` declarations
/// (before any statement), the three element kinds and the seven relation
/// kinds. Anything else is rejected with an "unsupported statement" error.
/// Throws ParseError with line/column on syntax errors, undeclared prefixes
/// and duplicate ids.
ProvDocument parse_provn(std::string_view text);

/// Serializes a document so that parse_provn(write_provn(d)) reproduces d
/// statement for statement. Synthetic relation ids are not emitted.
std::string write_provn(const ProvDocument& doc);

} // namespace ea
