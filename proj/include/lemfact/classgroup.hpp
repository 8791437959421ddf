#pragma once

// Form class groups of imaginary quadratic discriminants and the Rédei
// matrix: ground truth for 2- and 4-ranks.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "lemfact/abelian.hpp"
#include "lemfact/arith.hpp"
#include "lemfact/error.hpp"

namespace lemfact {

inline constexpr i64 kClassGroupBound = 1'000'000;

struct QuadForm {
  i64 a = 1, b = 0, c = 1;

  i64 disc() const { return checked::add(checked::mul(b, b), -checked::mul(checked::mul(4, a), c)); }
  auto operator<=>(const QuadForm&) const = default;
};

inline std::string to_string(const QuadForm& f) {
  return "(" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) + ")";
}

inline bool is_reduced(const QuadForm& f) {
  const i64 ab = std::llabs(f.b);
  if (!(ab <= f.a && f.a <= f.c)) return false;
  if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

inline QuadForm reduce_form(QuadForm f) {
  const i64 d = f.disc();
  if (d >= 0) throw InvalidInput("reduce_form: discriminant must be negative");
  if (f.a <= 0) throw InvalidInput("reduce_form: form is not positive definite");
  auto normalize = [d](QuadForm& g) {
    // b into (-a, a]
    const i64 two_a = 2 * g.a;
    i64 b = mod(g.b, two_a);
    if (b > g.a) b -= two_a;
    g.b = b;
    g.c = (b * b - d) / (4 * g.a);
  };
  normalize(f);
  while (f.a > f.c) {
    f = {f.c, -f.b, f.a};
    normalize(f);
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

inline QuadForm principal_form(i64 d) {
  if (d >= 0 || (mod(d, 4) != 0 && mod(d, 4) != 1)) throw InvalidInput("principal_form: bad discriminant");
  const i64 b = mod(d, 2);
  return {1, b, (b - d) / 4};
}

inline QuadForm opposite(const QuadForm& f) { return reduce_form({f.a, -f.b, f.c}); }

/// Dirichlet composition followed by reduction. With e = gcd(a1, a2, s),
/// s = (b1 + b2)/2, and u a1 + v a2 + w s = e, the composite is
/// (a1 a2 / e^2, B, *) where B = (u a1 b2 + v a2 b1 + w (b1 b2 + D)/2) / e.
inline QuadForm compose(const QuadForm& f, const QuadForm& g) {
  const i64 d = f.disc();
  if (g.disc() != d) throw InvalidInput("compose: discriminant mismatch");
  const i64 s = (f.b + g.b) / 2;
  const auto e1 = ext_gcd(f.a, g.a);
  const auto e2 = ext_gcd(e1.g, s);
  const i64 e = e2.g;
  const __int128 u = static_cast<__int128>(e2.x) * e1.x;
  const __int128 v = static_cast<__int128>(e2.x) * e1.y;
  const __int128 w = e2.y;
  const i64 a3 = (f.a / e) * (g.a / e);
  const __int128 num = u * f.a * g.b + v * g.a * f.b + w * ((static_cast<__int128>(f.b) * g.b + d) / 2);
  if (num % e != 0) throw Error("compose: non-integral middle coefficient");
  __int128 b3 = (num / e) % (2 * static_cast<__int128>(a3));
  if (b3 < 0) b3 += 2 * static_cast<__int128>(a3);
  const __int128 cnum = b3 * b3 - d;
  if (cnum % (4 * static_cast<__int128>(a3)) != 0) throw Error("compose: non-integral last coefficient");
  return reduce_form({a3, static_cast<i64>(b3), static_cast<i64>(cnum / (4 * static_cast<__int128>(a3)))});
}

inline QuadForm form_pow(const QuadForm& f, i64 n) {
  QuadForm r = principal_form(f.disc());
  QuadForm base = f;
  while (n > 0) {
    if (n & 1) r = compose(r, base);
    base = compose(base, base);
    n >>= 1;
  }
  return r;
}

namespace detail {

inline void require_imaginary_fundamental(i64 d, i64 bound) {
  if (d >= 0) throw InvalidInput("class group oracle needs d < 0");
  if (!is_fundamental_discriminant(d)) throw InvalidInput(std::to_string(d) + " is not fundamental");
  if (-d > bound) throw BoundExceeded("|d| exceeds the class group bound " + std::to_string(bound));
}

}  // namespace detail

/// Primitive reduced forms of discriminant d < 0.
inline std::vector<QuadForm> reduced_forms(i64 d) {
  std::vector<QuadForm> out;
  const i64 n = -d;
  for (i64 a = 1; 3 * a * a <= n; ++a)
    for (i64 b = -a + 1; b <= a; ++b) {
      if (mod(b - d, 2) != 0) continue;
      const i64 num = b * b - d;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  return out;
}

struct ClassGroup {
  i64 d = 0;
  std::vector<QuadForm> forms;  // reduced, sorted
  AbGroup structure;            // invariant factors d1 | d2 | ...
  i64 h() const { return static_cast<i64>(forms.size()); }
};

/// Invariant factors from #G[p^k] for every p | h.
inline ClassGroup class_group_structure(i64 d, i64 bound = kClassGroupBound) {
  detail::require_imaginary_fundamental(d, bound);
  ClassGroup cg;
  cg.d = d;
  cg.forms = reduced_forms(d);
  std::sort(cg.forms.begin(), cg.forms.end());
  const i64 h = cg.h();
  const QuadForm one = principal_form(d);
  // lam[p] = exponents of the p-primary cyclic factors, descending
  std::map<i64, std::vector<i64>> lam;
  for (const auto& pp : factorize(h)) {
    std::vector<QuadForm> cur = cg.forms;
    std::vector<i64> log_counts{0};  // log_p #G[p^k]
    for (i64 k = 1; k <= pp.e; ++k) {
      for (auto& f : cur) f = form_pow(f, pp.q);
      i64 cnt = static_cast<i64>(std::count(cur.begin(), cur.end(), one));
      i64 lg = 0;
      while (cnt > 1) {
        cnt /= pp.q;
        ++lg;
      }
      log_counts.push_back(lg);
      if (lg == pp.e) break;
    }
    // #{i : lambda_i >= k} = N_k - N_{k-1}
    std::vector<i64> parts;
    for (std::size_t k = 1; k < log_counts.size(); ++k) {
      const i64 ge = log_counts[k] - log_counts[k - 1];
      for (i64 i = 0; i < ge; ++i) {
        if (static_cast<std::size_t>(i) < parts.size())
          ++parts[static_cast<std::size_t>(i)];
        else
          parts.push_back(1);
      }
    }
    lam[pp.q] = parts;  // descending
  }
  std::size_t width = 0;
  for (const auto& [p, parts] : lam) width = std::max(width, parts.size());
  std::vector<i64> factors(width, 1);
  for (const auto& [p, parts] : lam)
    for (std::size_t i = 0; i < parts.size(); ++i) factors[i] *= checked::pow(p, parts[i]);
  std::reverse(factors.begin(), factors.end());
  cg.structure = AbGroup(factors);
  return cg;
}

/// dim_F2 of the 2-torsion.
inline int two_rank(i64 d, i64 bound = kClassGroupBound) {
  detail::require_imaginary_fundamental(d, bound);
  const auto forms = reduced_forms(d);
  const QuadForm one = principal_form(d);
  std::size_t n = 0;
  for (const auto& f : forms)
    if (compose(f, f) == one) ++n;
  int r = 0;
  while (n > 1) {
    n /= 2;
    ++r;
  }
  return r;
}

/// dim_F2 of (2-torsion ∩ squares).
inline int four_rank(i64 d, i64 bound = kClassGroupBound) {
  detail::require_imaginary_fundamental(d, bound);
  const auto forms = reduced_forms(d);
  const QuadForm one = principal_form(d);
  std::vector<QuadForm> squares;
  for (const auto& f : forms) squares.push_back(compose(f, f));
  std::sort(squares.begin(), squares.end());
  squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
  std::size_t n = 0;
  for (const auto& s : squares)
    if (compose(s, s) == one) ++n;
  int r = 0;
  while (n > 1) {
    n /= 2;
    ++r;
  }
  return r;
}

/// R[i][j] = 1 iff (d_j / p_i) = -1 for i != j; the diagonal makes each row
/// sum to zero.
inline std::vector<std::vector<int>> redei_matrix(i64 d) {
  const auto pd = prime_discriminants(d);
  const std::size_t t = pd.size();
  std::vector<std::vector<int>> r(t, std::vector<int>(t, 0));
  for (std::size_t i = 0; i < t; ++i) {
    int sum = 0;
    for (std::size_t j = 0; j < t; ++j) {
      if (i == j) continue;
      r[i][j] = kronecker(pd[j].disc, pd[i].prime) == -1 ? 1 : 0;
      sum ^= r[i][j];
    }
    r[i][i] = sum;
  }
  return r;
}

inline int rank_f2(std::vector<std::vector<int>> m) {
  int rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    for (std::size_t i = 0; i < rows; ++i)
      if (i != static_cast<std::size_t>(rank) && m[i][c])
        for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[static_cast<std::size_t>(rank)][j];
    ++rank;
  }
  return rank;
}

/// 4-rank of the narrow class group: t - 1 - rank R.
inline int redei_rank(i64 d) {
  if (d == 1 || !is_fundamental_discriminant(d)) throw InvalidInput(std::to_string(d) + " is not fundamental");
  const auto r = redei_matrix(d);
  return static_cast<int>(r.size()) - 1 - rank_f2(r);
}

}  // namespace lemfact
