#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

namespace stabfin {

using Integer = boost::multiprecision::cpp_int;

// Representative of a mod m in [0, m).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

bool is_prime(std::int64_t n);

std::int64_t ipow(std::int64_t base, unsigned exponent);

// Inverse of a modulo m, or 0 when gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace stabfin
