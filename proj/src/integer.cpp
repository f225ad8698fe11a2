#include "stabfin/integer.hpp"

#include "stabfin/error.hpp"

namespace stabfin {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::int64_t ipow(std::int64_t base, unsigned exponent) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) fail(ErrorCode::Overflow, "integer power overflows int64");
  }
  return r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, y = 1, r = mod_floor(a, m);
  // Extended Euclid on (m, r), tracking the coefficient of r.
  while (r != 0) {
    std::int64_t q = g / r;
    std::int64_t t = g - q * r;
    g = r;
    r = t;
    t = x - q * y;
    x = y;
    y = t;
  }
  if (g != 1) return 0;
  return mod_floor(x, m);
}

}  // namespace stabfin
