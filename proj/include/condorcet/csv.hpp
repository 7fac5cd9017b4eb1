#pragma once
// Minimal RFC 4180 reader/writer: comma separated, double-quote escaping,
// quoted fields may span lines.

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace condorcet {

class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Throws DomainError on an
    /// unterminated quote.
    std::optional<std::vector<std::string>> next();

    /// 1-based line on which the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

std::string csv_field(std::string_view value);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace condorcet
