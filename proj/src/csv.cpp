#include "ea/csv.hpp"

#include "ea/error.hpp"

namespace ea::csv {

std::vector<std::vector<std::string>> parse(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    int line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                // Only a separator or end of record may follow.
                if (i < text.size() && text[i] != ',' && text[i] != '\r' &&
                    text[i] != '\n')
                    throw_data("row " + std::to_string(line) +
                               ": unexpected character after closing quote");
                continue;
            }
            if (c == '\n')
                ++line;
            field += c;
            ++i;
            continue;
        }
        switch (c) {
        case '"':
            if (field_started || !field.empty())
                throw_data("row " + std::to_string(line) +
                           ": quote inside unquoted field");
            quoted = true;
            field_started = true;
            ++i;
            break;
        case ',':
            end_field();
            ++i;
            break;
        case '\r':
            ++i;
            break;
        case '\n':
            end_row();
            ++line;
            ++i;
            break;
        default:
            field += c;
            field_started = true;
            ++i;
            break;
        }
    }
    if (quoted)
        throw_data("row " + std::to_string(line) +
                   ": unterminated quoted field");
    if (field_started || !field.empty() || !row.empty())
        end_row();
    return rows;
}

} // namespace ea::csv
