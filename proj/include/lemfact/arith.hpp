#pragma once

// Elementary number theory on 64-bit integers: factorization, fundamental
// discriminants, Kronecker symbols, primitive roots, discrete logarithms and
// power-residue characters.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "lemfact/checked.hpp"
#include "lemfact/error.hpp"

namespace lemfact {

inline constexpr i64 kMaxI64 = std::numeric_limits<i64>::max();

struct PrimePower {
  i64 q = 0;
  i64 e = 0;

  i64 value() const { return checked::pow(q, e); }
  bool operator==(const PrimePower&) const = default;
};

/// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Trial division, primes ascending. n must be positive and at most `bound`.
inline std::vector<PrimePower> factorize(i64 n, i64 bound = kMaxI64) {
  if (n < 1) throw InvalidInput("factorize: n must be positive");
  if (n > bound) throw BoundExceeded("factorize: " + std::to_string(n) + " exceeds bound");
  std::vector<PrimePower> out;
  auto take = [&](i64 p) {
    if (n % p != 0) return;
    PrimePower pp{p, 0};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
    }
    out.push_back(pp);
  };
  take(2);
  take(3);
  for (i64 p = 5; p <= n / p; p += 6) {
    take(p);
    take(p + 2);
    if (n > 1 && p > 1000 && is_prime(n)) break;
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline int omega(i64 n) { return static_cast<int>(factorize(std::llabs(n)).size()); }

inline bool is_squarefree(i64 n) {
  for (const auto& pp : factorize(std::llabs(n)))
    if (pp.e > 1) return false;
  return true;
}

inline bool is_fundamental_discriminant(i64 d) {
  if (d == 0) return false;
  if (d == 1) return true;
  const i64 r = mod(d, 4);
  if (r == 1) return is_squarefree(d);
  if (r != 0) return false;
  const i64 m = d / 4;
  const i64 mr = mod(m, 4);
  return (mr == 2 || mr == 3) && is_squarefree(m);
}

/// (-1)^((p-1)/2) * p for an odd prime p.
inline i64 prime_star(i64 p) {
  if (p == 2) throw InvalidInput("prime_star: p = 2 is unsupported in the general engine");
  if (p < 3 || !is_prime(p)) throw InvalidInput("prime_star: " + std::to_string(p) + " is not an odd prime");
  return mod(p, 4) == 1 ? p : -p;
}

/// Kronecker symbol (a/n).
inline int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a & 1) == 0 && (n & 1) == 0) return 0;
  int k = 1;
  auto tab2 = [](i64 x) {  // (2/x) for odd x
    const i64 r = mod(x, 8);
    return (r == 1 || r == 7) ? 1 : -1;
  };
  int v = 0;
  while ((n & 1) == 0) {
    n /= 2;
    ++v;
  }
  if (v & 1) k = tab2(a);
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  // now n odd positive; Jacobi (a/n)
  a = mod(a, n);
  while (a != 0) {
    int w = 0;
    while ((a & 1) == 0) {
      a /= 2;
      ++w;
    }
    if (w & 1) k *= tab2(n);
    if ((a & n & 2) != 0) k = -k;  // both ≡ 3 mod 4
    const i64 r = n % a;
    n = a;
    a = r;
  }
  return n == 1 ? k : 0;
}

/// Multiplicative order of g modulo m, given phi(m) and its prime factors.
inline i64 unit_order(i64 g, i64 m, i64 phi, const std::vector<PrimePower>& phi_fact) {
  i64 ord = phi;
  for (const auto& pp : phi_fact) {
    for (i64 i = 0; i < pp.e; ++i) {
      if (powmod(g, ord / pp.q, m) == 1)
        ord /= pp.q;
      else
        break;
    }
  }
  return ord;
}

/// Smallest positive integer generating (Z/q^2)^x, hence (Z/q^e)^x for all
/// e >= 1. The same convention fixes the inertia generator at q everywhere in
/// the library.
inline i64 primitive_root(i64 q, i64 e = 1) {
  if (q == 2 || q % 2 == 0) throw InvalidInput("primitive_root: q must be odd");
  if (!is_prime(q)) throw InvalidInput("primitive_root: " + std::to_string(q) + " is not prime");
  if (e < 1) throw InvalidInput("primitive_root: exponent must be >= 1");
  const auto f = factorize(q - 1);
  for (i64 g = 2;; ++g) {
    bool gen = true;
    for (const auto& pp : f)
      if (powmod(g, (q - 1) / pp.q, q) == 1) {
        gen = false;
        break;
      }
    if (!gen) continue;
    // g^(q-1) != 1 mod q^2, in 128-bit since q^2 may not fit
    __int128 qq = static_cast<__int128>(q) * q;
    __int128 r = 1, b = g % qq;
    i64 ex = q - 1;
    while (ex > 0) {
      if (ex & 1) r = (r * b) % qq;
      b = (b * b) % qq;
      ex >>= 1;
    }
    if (r != 1) return g;
  }
}

inline i64 euler_phi(const PrimePower& m) { return checked::mul(checked::pow(m.q, m.e - 1), m.q - 1); }

/// Least k >= 0 with g^k ≡ x (mod q^e), by baby-step giant-step over the
/// order of g.
inline i64 discrete_log(i64 g, i64 x, const PrimePower& modulus) {
  const i64 m = modulus.value();
  x = mod(x, m);
  if (std::gcd(x, m) != 1) throw InvalidInput("discrete_log: argument is not a unit");
  const i64 phi = euler_phi(modulus);
  const i64 ord = unit_order(mod(g, m), m, phi, factorize(phi));
  const i64 step = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(ord))));
  std::unordered_map<i64, i64> baby;
  baby.reserve(static_cast<std::size_t>(step) * 2);
  i64 cur = 1;
  for (i64 j = 0; j < step; ++j) {
    baby.emplace(cur, j);
    cur = mulmod(cur, g, m);
  }
  const i64 giant = invmod(powmod(g, step, m), m);
  i64 y = x;
  for (i64 i = 0; i <= ord / step + 1; ++i) {
    auto it = baby.find(y);
    if (it != baby.end()) {
      const i64 k = i * step + it->second;
      if (k < ord) return k;
    }
    y = mulmod(y, giant, m);
  }
  throw InvalidInput("discrete_log: x is not in the subgroup generated by g");
}

/// Image of p under (Z/q^e)^x -> (Z/q^e)^x / (.)^d  ↪  Z/n, d = gcd(n, phi(q^e)),
/// where the quotient is identified with Z/d through the primitive root and
/// embedded in Z/n by multiplication by n/d.
///
/// Only the residue of the discrete logarithm modulo d is needed, so the
/// computation projects onto the order-d subgroup first.
inline i64 power_residue_char(i64 p, const PrimePower& qp, i64 n) {
  if (n < 1) throw InvalidInput("power_residue_char: n must be >= 1");
  if (qp.q % 2 == 0) throw InvalidInput("power_residue_char: q must be odd");
  if (qp.e < 1) throw InvalidInput("power_residue_char: exponent must be >= 1");
  if (p % qp.q == 0) throw InvalidInput("ramified argument: q divides p");
  // With q prime to n the character factors through (Z/q)^x, and the
  // primitive root mod q^e reduces to one mod q.
  const PrimePower eff = std::gcd(n, qp.q) == 1 ? PrimePower{qp.q, 1} : qp;
  const i64 m = eff.value();
  const i64 phi = euler_phi(eff);
  const i64 d = std::gcd(n, phi);
  if (d == 1) return 0;
  const i64 g = primitive_root(eff.q, eff.e);
  const i64 h = powmod(g, phi / d, m);  // generator of the order-d subgroup
  const i64 t = powmod(mod(p, m), phi / d, m);
  i64 cur = 1;
  for (i64 k = 0; k < d; ++k) {
    if (cur == t) return mod((n / d) * k, n);
    cur = mulmod(cur, h, m);
  }
  throw Error("power_residue_char: projection left the cyclic subgroup");
}

/// Sum over q^e || a of power_residue_char(p, q^e, n). Sign of a ignored.
inline i64 char_composite(i64 p, i64 a, i64 n) {
  if (a == 0) throw InvalidInput("char_composite: a must be nonzero");
  const i64 abs_a = std::llabs(a);
  if (abs_a % 2 == 0) throw InvalidInput("char_composite: a must be odd");
  if (std::gcd(std::llabs(p), abs_a) != 1) throw InvalidInput("char_composite: p and a not coprime");
  i64 s = 0;
  for (const auto& pp : factorize(abs_a)) s = mod(s + power_residue_char(p, pp, n), n);
  return s;
}

/// Decomposition of a fundamental discriminant into prime discriminants:
/// odd p -> p*, and the 2-part as one of -4, 8, -8. Ordered by prime.
struct PrimeDisc {
  i64 prime;  // underlying prime (2 for the even part)
  i64 disc;   // p*, or -4 / 8 / -8
};

inline std::vector<PrimeDisc> prime_discriminants(i64 d) {
  if (!is_fundamental_discriminant(d) || d == 1)
    throw InvalidInput(std::to_string(d) + " is not a fundamental discriminant != 1");
  std::vector<PrimeDisc> out;
  i64 odd_product = 1;
  for (const auto& pp : factorize(std::llabs(d))) {
    if (pp.q == 2) continue;
    const i64 s = prime_star(pp.q);
    out.push_back({pp.q, s});
    odd_product *= s;
  }
  if (d % 2 == 0) out.insert(out.begin(), PrimeDisc{2, d / odd_product});
  return out;
}

}  // namespace lemfact
