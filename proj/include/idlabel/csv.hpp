#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace idlabel::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

// Splits one line on commas. Double-quoted fields may contain commas; a
// doubled quote inside a quoted field is a literal quote. Unquoted fields
// are trimmed of surrounding whitespace.
std::vector<std::string> split_line(std::string_view line);

// Reads every non-blank, non-comment ('#') line. The first such line is the
// header and must match `expected_header` field for field (case-insensitive).
// Every data row must have exactly header-width fields.
std::vector<Row> read(std::istream& in, const std::vector<std::string>& expected_header,
                      const std::string& source_name);
std::vector<Row> read_file(const std::filesystem::path& path,
                           const std::vector<std::string>& expected_header);

// Parses a finite double or throws InputError mentioning `where`.
double parse_real(const std::string& text, const std::string& where);
long parse_integer(const std::string& text, const std::string& where);

// Quotes a field if it contains a comma, quote, or leading/trailing space.
std::string escape(std::string_view field);

std::string trim(std::string_view s);

}  // namespace idlabel::csv
