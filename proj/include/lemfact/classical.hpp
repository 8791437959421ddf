#pragma once

// Closed-form criteria for unramified C4 and H8 extensions of quadratic
// fields, and for Heisenberg extensions of cyclic degree-l fields.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>
#include <vector>

#include "lemfact/arith.hpp"
#include "lemfact/error.hpp"

namespace lemfact {

struct SymbolCheck {
  i64 top;    // numerator of the Kronecker symbol
  i64 prime;  // the prime below
  int value;
};

struct FactorizationWitness {
  std::vector<i64> parts;
  std::vector<SymbolCheck> symbol_checks;
};

struct CriterionReport {
  i64 d = 0;
  bool exists = false;
  std::vector<FactorizationWitness> witnesses;
  i64 count_per_witness = 0;  // 2^(omega-2) for C4, 2^(omega-3) for H8; 0 when omega is too small
};

namespace detail {

inline void require_fundamental(i64 d) {
  if (d == 1 || !is_fundamental_discriminant(d))
    throw InvalidInput(std::to_string(d) + " is not a fundamental discriminant != 1");
}

/// Checks kronecker(top, p) = 1 for all p in `below`, recording evidence.
inline bool symbols_ok(i64 top, const std::vector<i64>& below, std::vector<SymbolCheck>& log) {
  bool ok = true;
  for (i64 p : below) {
    const int v = kronecker(top, p);
    log.push_back({top, p, v});
    if (v != 1) ok = false;
  }
  return ok;
}

}  // namespace detail

/// Unordered splittings d = d1 d2 into coprime discriminants != 1 with
/// (d1/p) = 1 for p | d2 and (d2/p) = 1 for p | d1. d1 holds the smallest
/// prime of d.
inline CriterionReport c4_criterion(i64 d) {
  detail::require_fundamental(d);
  const auto pd = prime_discriminants(d);
  const std::size_t t = pd.size();
  CriterionReport rep;
  rep.d = d;
  rep.count_per_witness = t >= 2 ? i64{1} << (t - 2) : 0;
  if (t < 2) return rep;
  const std::size_t full = (std::size_t{1} << t) - 1;
  for (std::size_t mask = 1; mask < full; mask += 2) {
    i64 d1 = 1, d2 = 1;
    std::vector<i64> p1, p2;
    for (std::size_t i = 0; i < t; ++i) {
      if (mask >> i & 1) {
        d1 *= pd[i].disc;
        p1.push_back(pd[i].prime);
      } else {
        d2 *= pd[i].disc;
        p2.push_back(pd[i].prime);
      }
    }
    FactorizationWitness w{{d1, d2}, {}};
    const bool a = detail::symbols_ok(d1, p2, w.symbol_checks);
    const bool b = detail::symbols_ok(d2, p1, w.symbol_checks);
    if (a && b) rep.witnesses.push_back(std::move(w));
  }
  rep.exists = !rep.witnesses.empty();
  return rep;
}

/// Unordered coprime d = d1 d2 d3, all != 1, at most one negative, with
/// (d_i d_j / p) = 1 for every p | d_k.
inline CriterionReport h8_criterion(i64 d) {
  detail::require_fundamental(d);
  const auto pd = prime_discriminants(d);
  const std::size_t t = pd.size();
  CriterionReport rep;
  rep.d = d;
  rep.count_per_witness = t >= 3 ? i64{1} << (t - 3) : 0;
  if (t < 3) return rep;
  // restricted growth strings: labels[0] = 0, each new label is max + 1
  std::vector<int> label(t, 0);
  for (;;) {
    int mx = 0;
    for (std::size_t i = 0; i < t; ++i) mx = std::max(mx, label[i]);
    if (mx == 2) {
      std::array<i64, 3> part{1, 1, 1};
      std::array<std::vector<i64>, 3> primes;
      for (std::size_t i = 0; i < t; ++i) {
        part[static_cast<std::size_t>(label[i])] *= pd[i].disc;
        primes[static_cast<std::size_t>(label[i])].push_back(pd[i].prime);
      }
      const int negatives = (part[0] < 0) + (part[1] < 0) + (part[2] < 0);
      if (negatives <= 1) {
        FactorizationWitness w{{part[0], part[1], part[2]}, {}};
        bool ok = true;
        for (std::size_t k = 0; k < 3; ++k) {
          const std::size_t i = (k + 1) % 3, j = (k + 2) % 3;
          ok = detail::symbols_ok(part[i] * part[j], primes[k], w.symbol_checks) && ok;
        }
        if (ok) rep.witnesses.push_back(std::move(w));
      }
    }
    // next restricted growth string with labels < 3
    std::size_t i = t;
    while (i-- > 1) {
      int prefix_max = 0;
      for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, label[j]);
      if (label[i] < 2 && label[i] <= prefix_max) {
        ++label[i];
        for (std::size_t j = i + 1; j < t; ++j) label[j] = 0;
        break;
      }
    }
    if (i == 0) break;
  }
  rep.exists = !rep.witnesses.empty();
  return rep;
}

struct HeisenbergReport {
  i64 l = 0;
  std::array<i64, 3> primes{};
  bool exists = false;
  std::vector<std::array<i64, 3>> solutions;  // (A, B, C)
  /// chi(p, q^(l-1)), chi(p, r^(l-1)), chi(q, p^(l-1)), chi(q, r^(l-1)),
  /// chi(r, p^(l-1)), chi(r, q^(l-1)), each in Z/l
  std::array<i64, 6> chars{};
  i64 count = 0;  // l - 1 extensions when exists
};

inline const std::array<const char*, 6>& heisenberg_char_names() {
  static const std::array<const char*, 6> names{"p|q", "p|r", "q|p", "q|r", "r|p", "r|q"};
  return names;
}

/// Existence of A, B, C in Z/l with A + B + C != 0 and
///   -chi(p,q) A + chi(p,r) B = 0
///    chi(q,p) A - chi(q,r) C = 0
///   -chi(r,p) B + chi(r,q) C = 0.
inline HeisenbergReport heisenberg_criterion(i64 l, i64 p, i64 q, i64 r) {
  if (l < 3 || !is_prime(l)) throw InvalidInput("l = " + std::to_string(l) + " is not an odd prime");
  const std::array<i64, 3> ps{p, q, r};
  const char* names[] = {"p", "q", "r"};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string n = std::string(names[i]) + " = " + std::to_string(ps[i]);
    if (!is_prime(ps[i])) throw InvalidInput(n + " is not prime");
    if (ps[i] == l) throw InvalidInput(n + " is not coprime to l");
    if (mod(ps[i], l) != 1) throw InvalidInput(n + " is not 1 mod l");
  }
  if (p == q || q == r || p == r) throw InvalidInput("p, q, r must be distinct");

  HeisenbergReport rep;
  rep.l = l;
  rep.primes = ps;
  auto chi = [l](i64 a, i64 b) { return power_residue_char(a, PrimePower{b, l - 1}, l); };
  rep.chars = {chi(p, q), chi(p, r), chi(q, p), chi(q, r), chi(r, p), chi(r, q)};
  const auto& c = rep.chars;
  for (i64 a = 0; a < l; ++a)
    for (i64 b = 0; b < l; ++b)
      for (i64 cc = 0; cc < l; ++cc) {
        if (mod(a + b + cc, l) == 0) continue;
        if (mod(-c[0] * a + c[1] * b, l) != 0) continue;
        if (mod(c[2] * a - c[3] * cc, l) != 0) continue;
        if (mod(-c[4] * b + c[5] * cc, l) != 0) continue;
        rep.solutions.push_back({a, b, cc});
      }
  rep.exists = !rep.solutions.empty();
  rep.count = rep.exists ? l - 1 : 0;
  return rep;
}

}  // namespace lemfact
