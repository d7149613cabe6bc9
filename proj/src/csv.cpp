#include "leakaudit/csv.hpp"

#include "leakaudit/errors.hpp"

#include <ostream>

namespace leakaudit {

CsvReader::CsvReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open " + path);
    if (!read_record(header_)) throw FormatError(path + ": missing header row");
    for (std::size_t i = 0; i < header_.size(); ++i) {
        columns_.emplace(header_[i], i);
    }
}

bool CsvReader::next() {
    record_line_ = line_;
    return read_record(fields_);
}

std::optional<std::string_view> CsvReader::field(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end() || it->second >= fields_.size()) return std::nullopt;
    return std::string_view(fields_[it->second]);
}

// One record, honoring quotes. A quoted field may span lines; a doubled
// quote inside a quoted field is a literal quote. CRLF is accepted.
bool CsvReader::read_record(std::vector<std::string>& out) {
    out.clear();
    int c = in_.get();
    if (c == EOF) return false;

    std::string field;
    bool in_quotes = false;
    bool any = false;
    while (true) {
        if (c == EOF) {
            out.push_back(std::move(field));
            return true;
        }
        any = true;
        if (in_quotes) {
            if (c == '"') {
                int peek = in_.get();
                if (peek == '"') {
                    field.push_back('"');
                } else {
                    in_quotes = false;
                    in_.unget();
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            int peek = in_.get();
            if (peek != '\n' && peek != EOF) in_.unget();
            ++line_;
            out.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            ++line_;
            out.push_back(std::move(field));
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
        c = in_.get();
    }
    (void)any;
}

std::string csv_quote(std::string_view field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_quote(fields[i]);
    }
    out.put('\n');
}

}  // namespace leakaudit
