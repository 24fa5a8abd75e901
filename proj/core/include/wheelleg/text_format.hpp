#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wheelleg::text {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

double parse_double(std::string_view token, std::string_view key = {}, int line = 0);
int parse_int(std::string_view token, std::string_view key = {}, int line = 0);
bool parse_bool(std::string_view token, std::string_view key = {}, int line = 0);

/// Comma or whitespace separated list of doubles.
std::vector<double> parse_double_list(std::string_view token, std::string_view key = {},
                                      int line = 0);

std::string_view trim(std::string_view s);

/// One `key = value` line with its 1-based line number. Sections
/// (`[name]`) are reported with an empty value and `is_section` set.
struct KeyValueLine {
  std::string key;
  std::string value;
  int line = 0;
  bool is_section = false;
};

/// Splits text into key/value and section lines. Blank lines and `#`
/// comments are skipped; anything else throws ParseError.
std::vector<KeyValueLine> split_key_values(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace wheelleg::text
