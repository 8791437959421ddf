#pragma once

// Finite abelian groups given as direct products of cyclic groups, their
// elements, subgroups, and homomorphisms.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lemfact/checked.hpp"
#include "lemfact/error.hpp"

namespace lemfact {

inline constexpr std::size_t kDeskGroupBound = std::size_t{1} << 16;
inline constexpr std::size_t kAutGroupBound = 256;
/// Upper bound on the number of candidate matrices scanned when listing
/// automorphisms.
inline constexpr std::size_t kAutCandidateBound = std::size_t{1} << 22;

struct AbElem {
  std::vector<i64> coords;

  AbElem() = default;
  explicit AbElem(std::vector<i64> c) : coords(std::move(c)) {}
  AbElem(std::initializer_list<i64> c) : coords(c) {}

  std::size_t size() const { return coords.size(); }
  i64 operator[](std::size_t i) const { return coords[i]; }

  auto operator<=>(const AbElem&) const = default;
  bool operator==(const AbElem&) const = default;
};

inline std::string to_string(const AbElem& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

/// Direct product of cyclic groups C_{m_1} x ... x C_{m_k}. The factor list
/// is kept as given; equality is structural on the list.
class AbGroup {
 public:
  AbGroup() = default;
  explicit AbGroup(std::vector<i64> moduli) : moduli_(std::move(moduli)) {
    order_ = 1;
    for (i64 m : moduli_) {
      if (m < 1) throw InvalidInput("cyclic modulus must be >= 1");
      order_ = checked::mul(order_, m);
    }
  }
  AbGroup(std::initializer_list<i64> moduli) : AbGroup(std::vector<i64>(moduli)) {}

  const std::vector<i64>& moduli() const { return moduli_; }
  std::size_t rank() const { return moduli_.size(); }
  i64 order() const { return order_; }

  AbElem zero() const { return AbElem(std::vector<i64>(rank(), 0)); }

  void check(const AbElem& x) const {
    if (x.size() != rank())
      throw InvalidInput("element " + to_string(x) + " has wrong dimension for group of rank " +
                         std::to_string(rank()));
  }
  bool is_reduced(const AbElem& x) const {
    if (x.size() != rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i)
      if (x[i] < 0 || x[i] >= moduli_[i]) return false;
    return true;
  }

  AbElem reduce(std::vector<i64> c) const {
    if (c.size() != rank()) throw InvalidInput("coordinate list has wrong dimension");
    for (std::size_t i = 0; i < rank(); ++i) c[i] = mod(c[i], moduli_[i]);
    return AbElem(std::move(c));
  }

  AbElem add(const AbElem& x, const AbElem& y) const {
    check(x);
    check(y);
    AbElem r = x;
    for (std::size_t i = 0; i < rank(); ++i) r.coords[i] = mod(x[i] + y[i], moduli_[i]);
    return r;
  }
  AbElem neg(const AbElem& x) const {
    check(x);
    AbElem r = x;
    for (std::size_t i = 0; i < rank(); ++i) r.coords[i] = mod(-x[i], moduli_[i]);
    return r;
  }
  AbElem sub(const AbElem& x, const AbElem& y) const { return add(x, neg(y)); }
  AbElem scale(i64 k, const AbElem& x) const {
    check(x);
    AbElem r = x;
    for (std::size_t i = 0; i < rank(); ++i) r.coords[i] = mulmod(k, x[i], moduli_[i]);
    return r;
  }
  bool is_zero(const AbElem& x) const {
    check(x);
    for (std::size_t i = 0; i < rank(); ++i)
      if (mod(x[i], moduli_[i]) != 0) return false;
    return true;
  }

  /// Row-major lexicographic position of x (first coordinate most significant).
  std::size_t index(const AbElem& x) const {
    check(x);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i)
      idx = idx * static_cast<std::size_t>(moduli_[i]) + static_cast<std::size_t>(mod(x[i], moduli_[i]));
    return idx;
  }
  AbElem element(std::size_t idx) const {
    std::vector<i64> c(rank());
    for (std::size_t i = rank(); i-- > 0;) {
      auto m = static_cast<std::size_t>(moduli_[i]);
      c[i] = static_cast<i64>(idx % m);
      idx /= m;
    }
    return AbElem(std::move(c));
  }
  std::vector<AbElem> elements(std::size_t bound = kDeskGroupBound) const {
    require_small(bound);
    std::vector<AbElem> out;
    out.reserve(static_cast<std::size_t>(order_));
    for (std::size_t i = 0; i < static_cast<std::size_t>(order_); ++i) out.push_back(element(i));
    return out;
  }

  void require_small(std::size_t bound) const {
    if (static_cast<std::size_t>(order_) > bound)
      throw BoundExceeded("group of order " + std::to_string(order_) + " exceeds bound " +
                          std::to_string(bound));
  }

  bool operator==(const AbGroup& o) const { return moduli_ == o.moduli_; }

 private:
  std::vector<i64> moduli_;
  i64 order_ = 1;
};

inline std::string to_string(const AbGroup& g) {
  if (g.rank() == 0) return "1";
  std::string s;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    if (i) s += " x ";
    s += "C" + std::to_string(g.moduli()[i]);
  }
  return s;
}

/// A subgroup materialized as a membership table over the parent's elements.
class Subgroup {
 public:
  Subgroup(AbGroup parent, std::vector<std::uint8_t> member)
      : parent_(std::move(parent)), member_(std::move(member)) {
    size_ = static_cast<std::size_t>(std::count(member_.begin(), member_.end(), 1));
  }

  const AbGroup& parent() const { return parent_; }
  std::size_t size() const { return size_; }
  bool contains(const AbElem& x) const { return member_[parent_.index(x)] != 0; }
  bool contains_index(std::size_t i) const { return member_[i] != 0; }
  bool is_whole() const { return size_ == static_cast<std::size_t>(parent_.order()); }

  std::vector<AbElem> elements() const {
    std::vector<AbElem> out;
    for (std::size_t i = 0; i < member_.size(); ++i)
      if (member_[i]) out.push_back(parent_.element(i));
    return out;
  }

  /// True iff the stored set is closed under addition and contains zero.
  bool is_closed() const {
    if (size_ == 0 || !member_[0]) return false;
    auto els = elements();
    for (const auto& x : els)
      for (const auto& y : els)
        if (!contains(parent_.add(x, y))) return false;
    return true;
  }

  bool operator==(const Subgroup& o) const { return parent_ == o.parent_ && member_ == o.member_; }

 private:
  AbGroup parent_;
  std::vector<std::uint8_t> member_;
  std::size_t size_ = 0;
};

/// Homomorphism between finite abelian groups; column j of the matrix is the
/// image of the j-th standard generator of the domain.
struct AbHom {
  AbGroup domain;
  AbGroup codomain;
  std::vector<std::vector<i64>> columns;

  AbHom(AbGroup dom, AbGroup cod, std::vector<std::vector<i64>> cols)
      : domain(std::move(dom)), codomain(std::move(cod)), columns(std::move(cols)) {
    if (columns.size() != domain.rank()) throw InvalidInput("hom: column count != domain rank");
    for (std::size_t j = 0; j < columns.size(); ++j) {
      AbElem col = codomain.reduce(columns[j]);
      columns[j] = col.coords;
      if (!codomain.is_zero(codomain.scale(domain.moduli()[j], col)))
        throw InvalidInput("hom: generator image not killed by generator order");
    }
  }

  AbElem apply(const AbElem& x) const {
    domain.check(x);
    std::vector<i64> out(codomain.rank(), 0);
    for (std::size_t j = 0; j < domain.rank(); ++j)
      for (std::size_t i = 0; i < codomain.rank(); ++i)
        out[i] = mod(out[i] + mulmod(x[j], columns[j][i], codomain.moduli()[i]), codomain.moduli()[i]);
    return AbElem(std::move(out));
  }

  /// this ∘ other
  AbHom compose(const AbHom& other) const {
    if (!(other.codomain == domain)) throw InvalidInput("hom compose: mismatched groups");
    std::vector<std::vector<i64>> cols;
    for (const auto& c : other.columns) cols.push_back(apply(AbElem(c)).coords);
    return AbHom(other.domain, codomain, std::move(cols));
  }

  bool operator==(const AbHom& o) const = default;
};

inline AbHom identity_hom(const AbGroup& g) {
  std::vector<std::vector<i64>> cols(g.rank(), std::vector<i64>(g.rank(), 0));
  for (std::size_t i = 0; i < g.rank(); ++i) cols[i][i] = mod(1, g.moduli()[i]);
  return AbHom(g, g, std::move(cols));
}

inline i64 elem_order(const AbGroup& g, const AbElem& x) {
  g.check(x);
  i64 n = 1;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    i64 m = g.moduli()[i];
    i64 c = mod(x[i], m);
    n = checked::lcm(n, m / std::gcd(c, m));
  }
  return n;
}

inline i64 group_exponent(const AbGroup& g) {
  i64 e = 1;
  for (i64 m : g.moduli()) e = checked::lcm(e, m);
  return e;
}

namespace detail {

/// Closure of a generating set, returned as a membership table. Works on
/// element indices.
inline std::vector<std::uint8_t> closure(const AbGroup& g, std::span<const AbElem> gens) {
  const auto n = static_cast<std::size_t>(g.order());
  std::vector<std::uint8_t> member(n, 0);
  std::vector<std::size_t> queue{0};
  member[0] = 1;
  std::vector<AbElem> reduced;
  for (const auto& x : gens) reduced.push_back(g.reduce(x.coords));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    AbElem cur = g.element(queue[head]);
    for (const auto& y : reduced) {
      std::size_t idx = g.index(g.add(cur, y));
      if (!member[idx]) {
        member[idx] = 1;
        queue.push_back(idx);
      }
    }
  }
  return member;
}

}  // namespace detail

inline Subgroup subgroup_generated(const AbGroup& g, std::span<const AbElem> gens,
                                   std::size_t bound = kDeskGroupBound) {
  g.require_small(bound);
  for (const auto& x : gens) g.check(x);
  return Subgroup(g, detail::closure(g, gens));
}

inline Subgroup subgroup_generated(const AbGroup& g, const std::vector<AbElem>& gens,
                                   std::size_t bound = kDeskGroupBound) {
  return subgroup_generated(g, std::span<const AbElem>(gens), bound);
}

inline i64 subgroup_index(const AbGroup& g, const Subgroup& h) {
  if (!(h.parent() == g)) throw InvalidInput("subgroup belongs to a different group");
  if (!h.is_closed()) throw InvalidInput("not a subgroup");
  const i64 n = g.order();
  const auto s = static_cast<i64>(h.size());
  if (n % s != 0) throw InvalidInput("not a subgroup");
  return n / s;
}

/// #Hom(G, A) = prod gcd(m_i, n_j).
inline i64 hom_count(const AbGroup& g, const AbGroup& a) {
  i64 r = 1;
  for (i64 m : g.moduli())
    for (i64 n : a.moduli()) r = checked::mul(r, std::gcd(m, n));
  return r;
}

/// #A[n] = prod gcd(m_i, n).
inline i64 torsion_count(const AbGroup& a, i64 n) {
  if (n < 1) throw InvalidInput("torsion_count: n must be >= 1");
  i64 r = 1;
  for (i64 m : a.moduli()) r = checked::mul(r, std::gcd(m, n));
  return r;
}

using IntMatrix = std::vector<std::vector<i64>>;

/// Finds x in Z^cols with M x ≡ target, row i taken modulo moduli[i].
///
/// Every row congruence is lifted to the common modulus L = lcm of the row
/// moduli, then the system is diagonalized over Z/L by unimodular row and
/// column operations (extended-gcd 2x2 steps, i.e. Smith reduction without
/// the divisibility normalization). Returns nullopt iff no solution exists.
inline std::optional<std::vector<i64>> solve_modular_linear(const IntMatrix& m, const std::vector<i64>& moduli,
                                                            const std::vector<i64>& target) {
  const std::size_t r = moduli.size();
  if (m.size() != r) throw InvalidInput("solve_modular_linear: row count mismatch");
  if (target.size() != r) throw InvalidInput("solve_modular_linear: target dimension mismatch");
  const std::size_t c = r ? m[0].size() : 0;
  for (const auto& row : m)
    if (row.size() != c) throw InvalidInput("solve_modular_linear: ragged matrix");

  i64 big = 1;
  for (i64 q : moduli) {
    if (q < 1) throw InvalidInput("solve_modular_linear: modulus must be >= 1");
    big = checked::lcm(big, q);
  }
  if (c == 0 || big == 1) {
    for (std::size_t i = 0; i < r; ++i)
      if (mod(target[i], moduli[i]) != 0) return std::nullopt;
    return std::vector<i64>(c, 0);
  }

  IntMatrix a(r, std::vector<i64>(c));
  std::vector<i64> t(r);
  for (std::size_t i = 0; i < r; ++i) {
    const i64 lift = big / moduli[i];
    for (std::size_t j = 0; j < c; ++j) a[i][j] = mulmod(lift, m[i][j], big);
    t[i] = mulmod(lift, mod(target[i], moduli[i]), big);
  }
  IntMatrix v(c, std::vector<i64>(c, 0));
  for (std::size_t j = 0; j < c; ++j) v[j][j] = 1;

  auto lin = [big](i64 s, i64 x, i64 u, i64 y) {
    return mod(mulmod(s, x, big) + mulmod(u, y, big), big);
  };
  // rows (k, i) <- [[s, u], [-b/g, a/g]] applied
  auto row_step = [&](std::size_t k, std::size_t i, i64 s, i64 u, i64 p, i64 q) {
    for (std::size_t j = 0; j < c; ++j) {
      i64 x = a[k][j], y = a[i][j];
      a[k][j] = lin(s, x, u, y);
      a[i][j] = lin(p, x, q, y);
    }
    i64 x = t[k], y = t[i];
    t[k] = lin(s, x, u, y);
    t[i] = lin(p, x, q, y);
  };
  auto col_step = [&](std::size_t k, std::size_t j, i64 s, i64 u, i64 p, i64 q) {
    for (std::size_t i = 0; i < r; ++i) {
      i64 x = a[i][k], y = a[i][j];
      a[i][k] = lin(s, x, u, y);
      a[i][j] = lin(p, x, q, y);
    }
    for (std::size_t i = 0; i < c; ++i) {
      i64 x = v[i][k], y = v[i][j];
      v[i][k] = lin(s, x, u, y);
      v[i][j] = lin(p, x, q, y);
    }
  };

  // x with p*x ≡ b (mod big), given gcd(p, big) | b
  auto quotient = [big](i64 p, i64 b) {
    const i64 g = std::gcd(p, big);
    const i64 sub = big / g;
    return sub == 1 ? i64{0} : mulmod(b / g, invmod((p / g) % sub, sub), sub);
  };
  auto weight = [big](i64 v) { return v == 0 ? big : std::gcd(v, big); };

  const std::size_t diag = std::min(r, c);
  std::size_t k = 0;
  for (; k < diag; ++k) {
    for (;;) {
      // pivot: entry whose gcd with big is smallest
      std::size_t pi = r, pj = c;
      i64 best = big;
      for (std::size_t i = k; i < r; ++i)
        for (std::size_t j = k; j < c; ++j)
          if (a[i][j] != 0 && weight(a[i][j]) < best) {
            best = weight(a[i][j]);
            pi = i;
            pj = j;
          }
      if (pi == r) break;
      std::swap(a[k], a[pi]);
      std::swap(t[k], t[pi]);
      if (pj != k) {
        for (auto& row : a) std::swap(row[k], row[pj]);
        for (auto& row : v) std::swap(row[k], row[pj]);
      }
      // an entry in the pivot row/column not divisible by gcd(pivot, big)
      // gets combined with the pivot, which strictly lowers that gcd
      bool combined = false;
      for (std::size_t i = k + 1; i < r && !combined; ++i)
        if (a[i][k] % best != 0) {
          auto e = ext_gcd(a[k][k], a[i][k]);
          row_step(k, i, e.x, e.y, mod(-(a[i][k] / e.g), big), a[k][k] / e.g);
          combined = true;
        }
      for (std::size_t j = k + 1; j < c && !combined; ++j)
        if (a[k][j] % best != 0) {
          auto e = ext_gcd(a[k][k], a[k][j]);
          col_step(k, j, e.x, e.y, mod(-(a[k][j] / e.g), big), a[k][k] / e.g);
          combined = true;
        }
      if (combined) continue;
      for (std::size_t i = k + 1; i < r; ++i) {
        if (a[i][k] == 0) continue;
        const i64 f = quotient(a[k][k], a[i][k]);
        row_step(k, i, 1, 0, mod(-f, big), 1);
      }
      for (std::size_t j = k + 1; j < c; ++j) {
        if (a[k][j] == 0) continue;
        const i64 f = quotient(a[k][k], a[k][j]);
        col_step(k, j, 1, 0, mod(-f, big), 1);
      }
      break;
    }
  }

  std::vector<i64> w(c, 0);
  for (std::size_t i = 0; i < r; ++i) {
    const i64 d = i < diag ? a[i][i] : 0;
    if (d == 0) {
      if (t[i] != 0) return std::nullopt;
      continue;
    }
    if (t[i] % std::gcd(d, big) != 0) return std::nullopt;
    w[i] = quotient(d, t[i]);
  }
  std::vector<i64> x(c, 0);
  for (std::size_t i = 0; i < c; ++i) {
    i64 acc = 0;
    for (std::size_t j = 0; j < c; ++j) acc = mod(acc + mulmod(v[i][j], w[j], big), big);
    x[i] = acc;
  }
  return x;
}

inline std::optional<std::vector<i64>> solve_modular_linear(const IntMatrix& m, const AbGroup& rows,
                                                            const AbElem& target) {
  if (target.size() != rows.rank()) throw InvalidInput("solve_modular_linear: target dimension mismatch");
  return solve_modular_linear(m, rows.moduli(), target.coords);
}

/// All automorphisms of A as matrices over its own cyclic factors.
inline std::vector<AbHom> enumerate_automorphisms(const AbGroup& a, std::size_t bound = kAutGroupBound) {
  a.require_small(bound);
  const auto all = a.elements(bound);
  // candidate images for generator j: elements killed by m_j
  std::vector<std::vector<AbElem>> cand(a.rank());
  std::size_t total = 1;
  for (std::size_t j = 0; j < a.rank(); ++j) {
    for (const auto& x : all)
      if (a.is_zero(a.scale(a.moduli()[j], x))) cand[j].push_back(x);
    total *= cand[j].size();
    if (total > kAutCandidateBound) throw BoundExceeded("automorphism search space too large");
  }
  std::vector<AbHom> out;
  std::vector<std::size_t> pick(a.rank(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<AbElem> imgs;
    std::vector<std::vector<i64>> cols;
    for (std::size_t j = 0; j < a.rank(); ++j) {
      imgs.push_back(cand[j][pick[j]]);
      cols.push_back(cand[j][pick[j]].coords);
    }
    if (detail::closure(a, imgs) == std::vector<std::uint8_t>(all.size(), 1))
      out.emplace_back(a, a, std::move(cols));
    for (std::size_t j = a.rank(); j-- > 0;) {
      if (++pick[j] < cand[j].size()) break;
      pick[j] = 0;
    }
  }
  return out;
}

}  // namespace lemfact
