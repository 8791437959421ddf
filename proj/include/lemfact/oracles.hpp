#pragma once

// Brute-force reference computations used only for verification (the self
// test and the test suite). They share no algorithmic path with the
// functions they check.

#include <cmath>
#include <cstdlib>
#include <map>
#include <vector>

#include "lemfact/abelian.hpp"
#include "lemfact/cocycle.hpp"
#include "lemfact/embedding.hpp"

namespace lemfact::oracle {

/// Tries every normalized 1-cochain phi: Gab -> A.
inline bool brute_is_coboundary(const AbGroup& gab, const AbGroup& a, const std::vector<AbElem>& table) {
  const auto n = static_cast<std::size_t>(gab.order());
  const auto an = static_cast<std::size_t>(a.order());
  std::size_t total = 1;
  for (std::size_t i = 1; i < n; ++i) {
    total *= an;
    if (total > (std::size_t{1} << 24)) throw BoundExceeded("brute_is_coboundary: too many cochains");
  }
  std::vector<std::size_t> sum(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sum[i * n + j] = gab.index(gab.add(gab.element(i), gab.element(j)));
  const auto aels = a.elements();
  // A arithmetic on element indices
  std::vector<std::size_t> add(an * an), neg(an), want(n * n);
  for (std::size_t u = 0; u < an; ++u) {
    neg[u] = a.index(a.neg(aels[u]));
    for (std::size_t v = 0; v < an; ++v) add[u * an + v] = a.index(a.add(aels[u], aels[v]));
  }
  for (std::size_t k = 0; k < n * n; ++k) want[k] = a.index(a.reduce(table[k].coords));
  std::vector<std::size_t> phi(n, 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t x = c;
    for (std::size_t i = 1; i < n; ++i) {
      phi[i] = x % an;
      x /= an;
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        ok = add[add[phi[i] * an + phi[j]] * an + neg[phi[sum[i * n + j]]]] == want[i * n + j];
    if (ok) return true;
  }
  return false;
}

/// Least k with x ≡ g^k (mod q), g the smallest integer generating
/// (Z/q^2)^x, both found by plain iteration.
inline i64 naive_dlog_mod_q(i64 x, i64 q) {
  i64 g = 2;
  for (;; ++g) {
    i64 cur = g % q, ord = 1;
    while (cur != 1) {
      cur = cur * g % q;
      ++ord;
    }
    if (ord != q - 1) continue;
    // g^(q-1) mod q^2 by repeated multiplication in 128 bits
    const __int128 qq = static_cast<__int128>(q) * q;
    __int128 p = 1;
    for (i64 i = 0; i < q - 1; ++i) p = p * g % qq;
    if (p != 1) break;
  }
  x = ((x % q) + q) % q;
  i64 cur = 1;
  for (i64 k = 0; k < q - 1; ++k) {
    if (cur == x) return k;
    cur = cur * g % q;
  }
  throw Error("naive_dlog_mod_q: not a unit");
}

/// Commutator x y x^-1 y^-1 in the materialized middle group.
inline AbElem group_commutator(const CentralExtension& e, const ExtElem& x, const ExtElem& y) {
  auto inv = [&](const ExtElem& z) { return ext_pow(e, z, ext_order(e, z) - 1); };
  const ExtElem c = ext_mul(e, ext_mul(e, ext_mul(e, x, y), inv(x)), inv(y));
  if (!e.gab().is_zero(c.g)) throw Error("group_commutator: commutator left the kernel");
  return c.a;
}

/// [g(Frob_p), y_p] with g(Frob_p) = sum_{q != p} (dlog_q(p) mod |y_q|) y_q
/// assembled first, then commutated in E.
inline AbElem direct_frobenius(const CentralExtension& e, const RamAssignment& asg, i64 p) {
  const auto& g = e.gab();
  AbElem frob = g.zero();
  for (const auto& [q, yq] : asg.entries()) {
    if (q == p) continue;
    const i64 k = naive_dlog_mod_q(p, q) % elem_order(g, yq);
    frob = g.add(frob, g.scale(k, yq));
  }
  return group_commutator(e, {e.kernel().zero(), frob}, {e.kernel().zero(), asg.at(p)});
}

/// Counts (a, b, c) with b^2 - 4ac = d, |b| <= a <= c, b >= 0 when |b| = a or
/// a = c, by scanning (a, c) and testing b^2 = d + 4ac.
inline i64 naive_class_number(i64 d) {
  i64 h = 0;
  const i64 n = -d;
  for (i64 a = 1; a * a <= n; ++a)
    for (i64 c = a; 4 * a * c - n <= a * a; ++c) {
      const i64 b2 = d + 4 * a * c;
      if (b2 < 0) continue;
      const auto b = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(b2))));
      i64 root = -1;
      for (i64 r = std::max<i64>(0, b - 2); r <= b + 2; ++r)
        if (r * r == b2) root = r;
      if (root < 0 || root > a) continue;
      if (std::gcd(std::gcd(a, root), c) != 1) continue;
      // b = +root always qualifies; b = -root only when strictly inside
      ++h;
      if (root != 0 && root != a && a != c) ++h;
    }
  return h;
}

}  // namespace lemfact::oracle
