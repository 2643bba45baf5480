#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mistrust/common.hpp"

namespace mistrust {

// Minimal RFC-4180 reader: quoted fields, "" escapes, embedded newlines.
// Accepts LF and CRLF record terminators. Blank lines are skipped.
class CsvReader {
public:
    explicit CsvReader(std::istream& in, std::string file_name = "")
        : in_(in), file_(std::move(file_name)) {}

    // Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields) {
        while (read_record(fields)) {
            const bool blank = fields.size() == 1 && fields[0].empty();
            if (!blank) return true;
        }
        return false;
    }

    // Physical 1-based line on which the last returned record started.
    int record_line() const { return record_line_; }
    const std::string& file_name() const { return file_; }

private:
    bool read_record(std::vector<std::string>& fields) {
        fields.clear();
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) return false;
        record_line_ = line_;
        std::string field;
        bool quoted = false;
        while (true) {
            if (c == std::char_traits<char>::eof()) {
                if (quoted)
                    throw SchemaError(file_ + ": unterminated quoted field starting near line " +
                                      std::to_string(record_line_));
                fields.push_back(std::move(field));
                return true;
            }
            char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    int peek = in_.peek();
                    if (peek == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
            } else if (ch == '"' && field.empty()) {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\n') {
                ++line_;
                fields.push_back(std::move(field));
                return true;
            } else if (ch == '\r') {
                if (in_.peek() == '\n') {
                    in_.get();
                    ++line_;
                    fields.push_back(std::move(field));
                    return true;
                }
                field.push_back(ch);
            } else {
                field.push_back(ch);
            }
            c = in_.get();
        }
    }

    std::istream& in_;
    std::string file_;
    int line_ = 1;
    int record_line_ = 1;
};

inline std::string csv_escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
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

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

// Resolves named columns in a header row; header names are matched after
// trimming and lowercasing.
class HeaderIndex {
public:
    HeaderIndex(const std::vector<std::string>& header, std::string file_name)
        : file_(std::move(file_name)) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            columns_.emplace(to_lower(std::string(trim(header[i]))), i);
        }
    }

    std::size_t require(std::string_view name) const {
        auto it = columns_.find(std::string(name));
        if (it == columns_.end())
            throw SchemaError(file_ + ": missing required column '" + std::string(name) + "'");
        return it->second;
    }

private:
    std::string file_;
    std::map<std::string, std::size_t> columns_;
};

}  // namespace mistrust
