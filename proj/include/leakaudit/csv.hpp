#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace leakaudit {

// Streaming CSV reader: header row, RFC-style quoting (quoted fields may
// contain commas, newlines and doubled quotes). Rows are exposed by column
// name; extra columns are ignored.
class CsvReader {
public:
    explicit CsvReader(const std::string& path);

    // Advances to the next record. Returns false at end of file.
    bool next();

    // Field by header name for the current record. nullopt when the record
    // is shorter than the header or the column does not exist.
    std::optional<std::string_view> field(const std::string& name) const;

    const std::vector<std::string>& header() const { return header_; }
    bool has_column(const std::string& name) const {
        return columns_.count(name) > 0;
    }
    // 1-based line number where the current record started (for messages).
    std::size_t record_line() const { return record_line_; }

private:
    bool read_record(std::vector<std::string>& out);

    std::ifstream in_;
    std::string path_;
    std::vector<std::string> header_;
    std::unordered_map<std::string, std::size_t> columns_;
    std::vector<std::string> fields_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

// Quotes a field only when it contains a comma, quote or newline.
std::string csv_quote(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace leakaudit
