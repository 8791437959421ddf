#pragma once

#include <cstdint>
#include <numeric>

#include "lemfact/error.hpp"

namespace lemfact {

using i64 = std::int64_t;

namespace checked {

inline i64 mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("integer overflow in multiplication");
  return r;
}

inline i64 add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("integer overflow in addition");
  return r;
}

inline i64 pow(i64 base, i64 exp) {
  i64 r = 1;
  for (i64 i = 0; i < exp; ++i) r = mul(r, base);
  return r;
}

inline i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return mul(a / std::gcd(a, b), b);
}

}  // namespace checked

/// Non-negative remainder.
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

inline i64 powmod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i64 result = 1;
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

struct ExtGcd {
  i64 g, x, y;  // g = a*x + b*y, g >= 0
};

inline ExtGcd ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Inverse of a modulo m; a must be a unit.
inline i64 invmod(i64 a, i64 m) {
  auto e = ext_gcd(mod(a, m), m);
  if (e.g != 1) throw InvalidInput("invmod: not a unit");
  return mod(e.x, m);
}

}  // namespace lemfact
