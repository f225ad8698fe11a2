#include "stabfin/text.hpp"

#include <cctype>

#include "stabfin/error.hpp"

namespace stabfin {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '}' || c == '>') --depth;
    if (depth < 0) fail(ErrorCode::ParseError, "unbalanced brackets in '" + std::string(s) + "'");
    if (c == sep && depth == 0) {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) fail(ErrorCode::ParseError, "unbalanced brackets in '" + std::string(s) + "'");
  out.emplace_back(trim(cur));
  return out;
}

std::string_view strip_brackets(std::string_view s, char open, char close) {
  s = trim(s);
  if (s.size() < 2 || s.front() != open || s.back() != close) return s;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == open) ++depth;
    if (s[i] == close) --depth;
    if (depth == 0 && i + 1 < s.size()) return s;
  }
  return trim(s.substr(1, s.size() - 2));
}

}  // namespace stabfin
