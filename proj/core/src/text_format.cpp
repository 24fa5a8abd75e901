#include "wheelleg/text_format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wheelleg/errors.hpp"

namespace wheelleg::text {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw IoError("format_double: conversion failed");
  return std::string(buf, end);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::string_view key, int line) {
  token = trim(token);
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (token.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError("expected a finite number, got '" + std::string(token) + "'",
                     std::string(key), line);
  }
  return value;
}

int parse_int(std::string_view token, std::string_view key, int line) {
  token = trim(token);
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("expected an integer, got '" + std::string(token) + "'", std::string(key),
                     line);
  }
  return value;
}

bool parse_bool(std::string_view token, std::string_view key, int line) {
  token = trim(token);
  if (token == "true" || token == "1" || token == "yes" || token == "on") return true;
  if (token == "false" || token == "0" || token == "no" || token == "off") return false;
  throw ParseError("expected a boolean, got '" + std::string(token) + "'", std::string(key), line);
}

std::vector<double> parse_double_list(std::string_view token, std::string_view key, int line) {
  std::vector<double> out;
  std::string current;
  auto flush = [&] {
    if (!trim(current).empty()) out.push_back(parse_double(current, key, line));
    current.clear();
  };
  for (char c : token) {
    if (c == ',' || c == ' ' || c == '\t') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  if (out.empty()) throw ParseError("expected a list of numbers", std::string(key), line);
  return out;
}

std::vector<KeyValueLine> split_key_values(std::string_view text) {
  std::vector<KeyValueLine> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto content = trim(raw);
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']' || content.size() < 3) {
        throw ParseError("malformed section header '" + std::string(content) + "'", {}, line_no);
      }
      out.push_back({std::string(trim(content.substr(1, content.size() - 2))), {}, line_no, true});
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value', got '" + std::string(content) + "'", {}, line_no);
    }
    const auto key = trim(content.substr(0, eq));
    const auto value = trim(content.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", {}, line_no);
    out.push_back({std::string(key), std::string(value), line_no, false});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace wheelleg::text
