#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ea::csv {

/// RFC-4180 reader: comma-separated, optional CRLF line endings, double-quote
/// quoting with "" escapes. Errors carry 1-based row numbers.
std::vector<std::vector<std::string>> parse(std::string_view text);

} // namespace ea::csv
