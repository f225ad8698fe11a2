#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "stabfin/error.hpp"
#include "stabfin/groups.hpp"
#include "stabfin/text.hpp"

namespace stabfin {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::int64_t to_int(std::string_view s) {
  if (!all_digits(s)) fail(ErrorCode::ParseError, "expected a number in '" + std::string(s) + "'");
  return std::stoll(std::string(s));
}

// Cycles "(1 2)(3 4)" with 1-based points into 0-based one-line images.
std::vector<int> cycles_to_images(std::string_view text, int degree) {
  std::vector<int> perm(static_cast<std::size_t>(degree));
  std::iota(perm.begin(), perm.end(), 0);
  text = trim(text);
  if (text == "()" || text == "e" || text.empty()) return perm;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    if (text[pos] != '(') fail(ErrorCode::ParseError, "expected '(' in cycle notation");
    std::size_t close = text.find(')', pos);
    if (close == std::string_view::npos) fail(ErrorCode::ParseError, "unterminated cycle");
    std::string inner(text.substr(pos + 1, close - pos - 1));
    std::replace(inner.begin(), inner.end(), ',', ' ');
    std::istringstream in(inner);
    std::vector<int> cycle;
    int v;
    while (in >> v) cycle.push_back(v - 1);
    std::vector<int> c(static_cast<std::size_t>(degree));
    std::iota(c.begin(), c.end(), 0);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      c[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
    }
    std::vector<int> composed(static_cast<std::size_t>(degree));
    for (std::size_t i = 0; i < composed.size(); ++i) composed[i] = perm[static_cast<std::size_t>(c[i])];
    perm = composed;
    pos = close + 1;
  }
  return perm;
}

int max_point(std::string_view text) {
  int best = 0;
  int cur = 0;
  bool in_num = false;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      cur = cur * 10 + (c - '0');
      in_num = true;
    } else {
      if (in_num) best = std::max(best, cur);
      cur = 0;
      in_num = false;
    }
  }
  if (in_num) best = std::max(best, cur);
  return best;
}

GroupSpec parse_atom(std::string_view s) {
  s = trim(s);
  if (s.empty()) fail(ErrorCode::ParseError, "empty group spec");
  if (s.front() == '(' && strip_brackets(s, '(', ')') != s) return parse_group_spec(strip_brackets(s, '(', ')'));
  if (s == "1") return GroupSpec::trivial();
  if (s == "Z") return GroupSpec::integers();
  if (s.rfind("Z^", 0) == 0) return GroupSpec::free_abelian(to_int(s.substr(2)));
  if (s.size() > 1 && s[0] == 'C' && all_digits(s.substr(1))) return GroupSpec::cyclic(to_int(s.substr(1)));
  if (s.size() > 1 && s[0] == 'S' && all_digits(s.substr(1))) {
    return GroupSpec::symmetric(static_cast<int>(to_int(s.substr(1))));
  }
  if (s.size() > 1 && s[0] == 'D' && all_digits(s.substr(1))) {
    return GroupSpec::dihedral(static_cast<int>(to_int(s.substr(1))));
  }
  if (s.rfind("perm", 0) == 0) {
    std::size_t colon = s.find(':');
    if (colon == std::string_view::npos) fail(ErrorCode::ParseError, "perm spec needs ':'");
    std::string_view body = trim(s.substr(colon + 1));
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      fail(ErrorCode::ParseError, "perm generators must be bracketed");
    }
    body = body.substr(1, body.size() - 2);
    std::string_view deg_text = trim(s.substr(4, colon - 4));
    int degree = deg_text.empty() ? std::max(1, max_point(body)) : static_cast<int>(to_int(deg_text));
    std::vector<std::vector<int>> gens;
    for (const auto& g : split_top_level(body, ',')) {
      if (g.empty()) continue;
      if (max_point(g) > degree) fail(ErrorCode::ParseError, "cycle point exceeds degree");
      gens.push_back(cycles_to_images(g, degree));
    }
    return GroupSpec::permutation(degree, gens);
  }
  if (s.rfind("table:", 0) == 0) {
    std::string_view body = trim(s.substr(6));
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      fail(ErrorCode::ParseError, "table must be bracketed");
    }
    std::vector<std::vector<int>> table;
    for (const auto& row : split_top_level(body.substr(1, body.size() - 2), ';')) {
      std::istringstream in(row);
      std::vector<int> r;
      int v;
      while (in >> v) r.push_back(v);
      table.push_back(r);
    }
    return GroupSpec::from_table(table);
  }
  if (s.rfind("quot(", 0) == 0 && s.back() == ')') {
    auto args = split_top_level(s.substr(5, s.size() - 6), ',');
    if (args.size() < 2) fail(ErrorCode::ParseError, "quot needs a group and an element");
    GroupSpec parent = parse_group_spec(args[0]);
    std::string elem = args[1];
    for (std::size_t i = 2; i < args.size(); ++i) elem += "," + args[i];
    Group g = make_group(parent);
    GroupElement z = g.parse_element(elem);
    return GroupSpec::central_quotient(parent, z.payload());
  }
  fail(ErrorCode::ParseError, "unknown group spec '" + std::string(s) + "'");
}

}  // namespace

GroupSpec parse_group_spec(std::string_view text) {
  auto parts = split_top_level(text, 'x');
  if (parts.size() == 1) return parse_atom(parts[0]);
  std::vector<GroupSpec> factors;
  for (const auto& p : parts) factors.push_back(parse_atom(p));
  return GroupSpec::product(factors);
}

Group parse_group(std::string_view text) { return make_group(parse_group_spec(text)); }

}  // namespace stabfin
