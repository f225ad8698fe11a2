#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stabfin {

std::string_view trim(std::string_view s);

// Splits on `sep` at bracket depth zero; (), [], {} and <> all nest.
std::vector<std::string> split_top_level(std::string_view s, char sep);

// Strips one pair of enclosing brackets `open`/`close` if present around the whole string.
std::string_view strip_brackets(std::string_view s, char open, char close);

}  // namespace stabfin
