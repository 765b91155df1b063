#pragma once

#include <string>
#include <string_view>

namespace ea {

enum class Format { Text, Html };

/// Escapes <, > and & for HTML output.
std::string escape_html(std::string_view text);

/// Renders a record identifier as "(local)" or, in HTML, as a parenthesized
/// hyperlink targeting the expanded IRI.
std::string format_id_link(std::string_view local, std::string_view iri,
                           Format format);

} // namespace ea
