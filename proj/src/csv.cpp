#include "condorcet/csv.hpp"

#include "condorcet/core.hpp"

namespace condorcet {

std::optional<std::vector<std::string>> CsvReader::next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;
    record_line_ = line_;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i == line.size()) {
            if (quoted) {
                std::string more;
                if (!std::getline(in_, more))
                    throw DomainError("line " + std::to_string(record_line_) + ": unterminated quoted field");
                ++line_;
                field += '\n';
                line = std::move(more);
                i = 0;
                continue;
            }
            break;
        }
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\r' && i + 1 == line.size()) {
            // CRLF line ending
        } else {
            field += c;
        }
        ++i;
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_field(fields[i]);
    }
    out << '\n';
}

}  // namespace condorcet
