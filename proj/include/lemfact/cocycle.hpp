#pragma once

// Central extensions 1 -> A -> E -> Gab -> 1 stored as normalized 2-cocycle
// tables. The middle group is the set A x Gab with
//   (a1, g1)(a2, g2) = (a1 + a2 + c(g1, g2), g1 + g2).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lemfact/abelian.hpp"
#include "lemfact/error.hpp"

namespace lemfact {

inline constexpr std::size_t kExtensionSearchBound = std::size_t{1} << 20;
/// Candidate tables examined by enumerate_central_extensions.
inline constexpr std::size_t kExtensionCandidateBound = std::size_t{1} << 12;
/// Table cells (candidates times |Gab|^2) materialized by enumerate_central_extensions.
inline constexpr std::size_t kExtensionCellBound = std::size_t{1} << 24;

class CentralExtension {
 public:
  /// Table is indexed [index(g) * |Gab| + index(h)]. Validates normalization
  /// and the cocycle identity.
  CentralExtension(AbGroup gab, AbGroup a, std::vector<AbElem> table)
      : CentralExtension(std::move(gab), std::move(a), std::move(table), Unchecked{}) {
    if (auto v = violation()) throw InvalidInput(*v);
  }

  /// Builds without checking the cocycle conditions; violation() reports them.
  static CentralExtension unchecked(AbGroup gab, AbGroup a, std::vector<AbElem> table) {
    return CentralExtension(std::move(gab), std::move(a), std::move(table), Unchecked{});
  }

  static CentralExtension split(AbGroup gab, AbGroup a) {
    const auto n = static_cast<std::size_t>(gab.order());
    std::vector<AbElem> t(n * n, a.zero());
    return CentralExtension(std::move(gab), std::move(a), std::move(t), Unchecked{});
  }

  const AbGroup& gab() const { return gab_; }
  const AbGroup& kernel() const { return a_; }
  const std::vector<AbElem>& table() const { return table_; }
  std::size_t gab_size() const { return n_; }

  const AbElem& at(std::size_t gi, std::size_t hi) const { return table_[gi * n_ + hi]; }
  const AbElem& operator()(const AbElem& g, const AbElem& h) const { return at(gab_.index(g), gab_.index(h)); }

  /// First failure of normalization or the cocycle identity, if any.
  std::optional<std::string> violation() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!a_.is_zero(at(0, i)) || !a_.is_zero(at(i, 0)))
        return "cocycle not normalized at " + to_string(gab_.element(i));
    }
    std::vector<std::size_t> sum(n_ * n_);
    const auto els = gab_.elements();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) sum[i * n_ + j] = gab_.index(gab_.add(els[i], els[j]));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t gh = sum[i * n_ + j];
        for (std::size_t k = 0; k < n_; ++k) {
          const std::size_t hk = sum[j * n_ + k];
          if (a_.add(at(i, j), at(gh, k)) != a_.add(at(j, k), at(i, hk)))
            return "cocycle identity violated at g=" + to_string(els[i]) + " h=" + to_string(els[j]) +
                   " k=" + to_string(els[k]);
        }
      }
    return std::nullopt;
  }

  bool operator==(const CentralExtension& o) const {
    return gab_ == o.gab_ && a_ == o.a_ && table_ == o.table_;
  }

 private:
  struct Unchecked {};
  CentralExtension(AbGroup gab, AbGroup a, std::vector<AbElem> table, Unchecked)
      : gab_(std::move(gab)), a_(std::move(a)), table_(std::move(table)) {
    gab_.require_small(kDeskGroupBound);
    n_ = static_cast<std::size_t>(gab_.order());
    if (table_.size() != n_ * n_) throw InvalidInput("cocycle table has wrong size");
    for (auto& x : table_) {
      if (x.size() != a_.rank()) throw InvalidInput("cocycle entry has wrong dimension");
      x = a_.reduce(x.coords);
    }
  }

  AbGroup gab_;
  AbGroup a_;
  std::vector<AbElem> table_;
  std::size_t n_ = 1;
};

/// Element of the middle group: (a, g) with a in A, g in Gab.
struct ExtElem {
  AbElem a;
  AbElem g;
  bool operator==(const ExtElem&) const = default;
};

inline ExtElem ext_identity(const CentralExtension& e) { return {e.kernel().zero(), e.gab().zero()}; }

inline ExtElem ext_mul(const CentralExtension& e, const ExtElem& x, const ExtElem& y) {
  const auto& a = e.kernel();
  return {a.add(a.add(x.a, y.a), e(x.g, y.g)), e.gab().add(x.g, y.g)};
}

inline ExtElem ext_pow(const CentralExtension& e, const ExtElem& x, i64 n) {
  ExtElem r = ext_identity(e);
  for (i64 i = 0; i < n; ++i) r = ext_mul(e, r, x);
  return r;
}

inline i64 ext_order(const CentralExtension& e, const ExtElem& x) {
  const ExtElem one = ext_identity(e);
  ExtElem cur = x;
  i64 n = 1;
  while (!(cur == one)) {
    cur = ext_mul(e, cur, x);
    ++n;
  }
  return n;
}

/// c(x,y) - c(y,x): the commutator of any lifts of x and y.
inline AbElem pairing(const CentralExtension& e, const AbElem& x, const AbElem& y) {
  return e.kernel().sub(e(x, y), e(y, x));
}

inline AbElem pairing_index(const CentralExtension& e, std::size_t xi, std::size_t yi) {
  return e.kernel().sub(e.at(xi, yi), e.at(yi, xi));
}

/// A-part of (0,y)^|y|, i.e. sum_{i=1}^{|y|-1} c(i*y, y).
inline AbElem power_class(const CentralExtension& e, const AbElem& y) {
  const auto& g = e.gab();
  const auto& a = e.kernel();
  const i64 n = elem_order(g, y);
  AbElem acc = a.zero();
  AbElem iy = y;
  for (i64 i = 1; i < n; ++i) {
    acc = a.add(acc, e(iy, y));
    iy = g.add(iy, y);
  }
  return acc;
}

/// Is x in n*A?
inline bool in_multiple(const AbGroup& a, const AbElem& x, i64 n) {
  // n*A = prod gcd(n, m_i) Z / m_i Z coordinatewise
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (mod(x[i], std::gcd(n, a.moduli()[i])) != 0) return false;
  return true;
}

/// Restriction of [E] to <y> vanishes.
inline bool in_YE(const CentralExtension& e, const AbElem& y) {
  return in_multiple(e.kernel(), power_class(e, y), elem_order(e.gab(), y));
}

/// All y in Gab over which the extension restricts to a split one, in
/// element-index order.
inline std::vector<AbElem> compute_YE(const CentralExtension& e) {
  std::vector<AbElem> out;
  for (std::size_t i = 0; i < e.gab_size(); ++i) {
    AbElem y = e.gab().element(i);
    if (in_YE(e, y)) out.push_back(std::move(y));
  }
  return out;
}

/// Subgroup of A generated by all pairing values, which is [E,E].
inline Subgroup commutator_subgroup(const CentralExtension& e) {
  std::vector<AbElem> vals;
  for (std::size_t i = 0; i < e.gab_size(); ++i)
    for (std::size_t j = i + 1; j < e.gab_size(); ++j) {
      AbElem v = pairing_index(e, i, j);
      if (!e.kernel().is_zero(v)) vals.push_back(std::move(v));
    }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return subgroup_generated(e.kernel(), vals);
}

inline bool is_central_pair(const CentralExtension& e) { return commutator_subgroup(e).is_whole(); }

struct Admissibility {
  bool admissible = false;
  std::string diagnostic;
};

namespace detail {

/// Middle group materialized by index: idx = index(a) * |Gab| + index(g).
class TotalGroup {
 public:
  explicit TotalGroup(const CentralExtension& e) : e_(e) {
    n_ = e.gab_size();
    size_ = static_cast<std::size_t>(e.kernel().order()) * n_;
    if (size_ > kExtensionSearchBound) throw BoundExceeded("middle group too large to materialize");
  }
  std::size_t size() const { return size_; }
  ExtElem element(std::size_t i) const {
    return {e_.kernel().element(i / n_), e_.gab().element(i % n_)};
  }
  std::size_t index(const ExtElem& x) const { return e_.kernel().index(x.a) * n_ + e_.gab().index(x.g); }
  std::size_t mul(std::size_t i, std::size_t j) const { return index(ext_mul(e_, element(i), element(j))); }

  std::size_t generated_order(const std::vector<std::size_t>& gens) const {
    std::vector<std::uint8_t> seen(size_, 0);
    std::vector<std::size_t> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (std::size_t g : gens) {
        std::size_t k = mul(queue[head], g);
        if (!seen[k]) {
          seen[k] = 1;
          queue.push_back(k);
        }
      }
    return queue.size();
  }

 private:
  const CentralExtension& e_;
  std::size_t n_ = 1;
  std::size_t size_ = 1;
};

inline void check_subgroup_of_gab(const CentralExtension& e, const Subgroup& h) {
  if (!(h.parent() == e.gab())) throw InvalidInput("subgroup is not a subgroup of Gab");
  if (!h.is_closed()) throw InvalidInput("designated subset of Gab is not a subgroup");
}

}  // namespace detail

/// The pair (pi^-1(H), E) is admissible iff E is generated by the elements
/// x outside pi^-1(H) with <x> ∩ pi^-1(H) = 1 (lifts that map isomorphically
/// onto their image in Gab/H, i.e. candidate inertia generators over K).
///
/// pi^-1(H) always contains A ⊇ [E,E], so it is normal with abelian quotient.
inline Admissibility is_admissible_pair(const CentralExtension& e, const Subgroup& h) {
  detail::check_subgroup_of_gab(e, h);
  const detail::TotalGroup tg(e);
  std::vector<std::size_t> gens;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const ExtElem x = tg.element(i);
    if (h.contains(x.g)) continue;
    bool meets = false;
    const ExtElem one = ext_identity(e);
    ExtElem p = x;
    while (!(p == one)) {
      if (h.contains(p.g)) {
        meets = true;
        break;
      }
      p = ext_mul(e, p, x);
    }
    if (!meets) gens.push_back(i);
  }
  if (gens.empty()) return {false, "no element outside G meets G trivially (G' - G contributes no generators)"};
  const std::size_t got = tg.generated_order(gens);
  if (got != tg.size())
    return {false, "candidate inertia lifts generate a subgroup of order " + std::to_string(got) + " < " +
                       std::to_string(tg.size())};
  return {true, "generated by " + std::to_string(gens.size()) + " candidate inertia lifts"};
}

struct CoboundaryResult {
  bool coboundary = false;
  std::vector<AbElem> witness;  // phi(g) indexed like Gab elements, when coboundary
};

/// Decides whether c(g,h) = phi(g) + phi(h) - phi(g+h) for some phi with
/// phi(0) = 0. Each coordinate of A is an independent linear system over its
/// cyclic modulus.
namespace detail {

/// is_coboundary without validating the cocycle conditions.
inline CoboundaryResult coboundary_of_cocycle(const CentralExtension& cand) {
  const AbGroup& gab = cand.gab();
  const AbGroup& a = cand.kernel();
  const std::size_t n = cand.gab_size();
  // Coboundaries are symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cand.at(i, j) != cand.at(j, i)) return {false, {}};

  std::vector<std::vector<i64>> phi(n, std::vector<i64>(a.rank(), 0));
  std::vector<std::size_t> sum_idx(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sum_idx[i * n + j] = gab.index(gab.add(gab.element(i), gab.element(j)));

  const std::size_t unknowns = n - 1;  // phi(g), g != 0
  for (std::size_t coord = 0; coord < a.rank(); ++coord) {
    const i64 m = a.moduli()[coord];
    if (m == 1) continue;
    IntMatrix mat;
    std::vector<i64> rhs;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        std::vector<i64> row(unknowns, 0);
        row[i - 1] += 1;
        row[j - 1] += 1;
        if (const std::size_t s = sum_idx[i * n + j]; s != 0) row[s - 1] -= 1;
        mat.push_back(std::move(row));
        rhs.push_back(cand.at(i, j)[coord]);
      }
    auto sol = solve_modular_linear(mat, std::vector<i64>(mat.size(), m), rhs);
    if (!sol) return {false, {}};
    for (std::size_t i = 1; i < n; ++i) phi[i][coord] = mod((*sol)[i - 1], m);
  }
  CoboundaryResult out{true, {}};
  for (auto& p : phi) out.witness.emplace_back(std::move(p));
  return out;
}

}  // namespace detail

/// Decides whether c(g,h) = phi(g) + phi(h) - phi(g+h) for some phi with
/// phi(0) = 0. Each coordinate of A is an independent linear system over its
/// cyclic modulus.
inline CoboundaryResult is_coboundary(const AbGroup& gab, const AbGroup& a, const std::vector<AbElem>& table) {
  const auto cand = CentralExtension::unchecked(gab, a, table);
  if (auto v = cand.violation()) throw InvalidInput("is_coboundary: malformed cocycle: " + *v);
  return detail::coboundary_of_cocycle(cand);
}

inline std::vector<AbElem> table_difference(const CentralExtension& x, const CentralExtension& y) {
  if (!(x.gab() == y.gab()) || !(x.kernel() == y.kernel())) throw InvalidInput("extensions over different groups");
  std::vector<AbElem> d;
  d.reserve(x.table().size());
  for (std::size_t i = 0; i < x.table().size(); ++i) d.push_back(x.kernel().sub(x.table()[i], y.table()[i]));
  return d;
}

namespace detail {

/// Coboundary test for a cocycle without a witness. A symmetric cocycle is
/// an abelian extension, split iff it splits over every cyclic factor e_i,
/// i.e. iff sum_{k=1}^{m_i-1} c(k e_i, e_i) lies in m_i A.
inline bool is_coboundary_class(const CentralExtension& c) {
  const std::size_t n = c.gab_size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (c.at(i, j) != c.at(j, i)) return false;
  const AbGroup& g = c.gab();
  const AbGroup& a = c.kernel();
  for (std::size_t f = 0; f < g.rank(); ++f) {
    const i64 m = g.moduli()[f];
    if (m == 1) continue;
    std::vector<i64> unit(g.rank(), 0);
    unit[f] = 1;
    const AbElem e = g.reduce(unit);
    AbElem s = a.zero();
    AbElem k = e;
    for (i64 step = 1; step < m; ++step, k = g.add(k, e)) s = a.add(s, c(k, e));
    if (!in_multiple(a, s, m)) return false;
  }
  return true;
}

}  // namespace detail

/// x and y must both satisfy the cocycle identity.
inline bool cohomologous(const CentralExtension& x, const CentralExtension& y) {
  if (x == y) return true;
  return detail::is_coboundary_class(CentralExtension::unchecked(x.gab(), x.kernel(), table_difference(x, y)));
}

/// alpha ∘ c for alpha in Aut(A).
inline CentralExtension push_forward(const CentralExtension& e, const AbHom& alpha) {
  std::vector<AbElem> t;
  t.reserve(e.table().size());
  for (const auto& x : e.table()) t.push_back(alpha.apply(x));
  return CentralExtension::unchecked(e.gab(), alpha.codomain, std::move(t));
}

/// c(beta(g), beta(h)) for beta in Aut(Gab).
inline CentralExtension pull_back(const CentralExtension& e, const AbHom& beta) {
  const std::size_t n = e.gab_size();
  std::vector<std::size_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = e.gab().index(beta.apply(e.gab().element(i)));
  std::vector<AbElem> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i * n + j] = e.at(img[i], img[j]);
  return CentralExtension::unchecked(e.gab(), e.kernel(), std::move(t));
}

inline i64 aut_stabilizer_order(const CentralExtension& e) {
  i64 count = 0;
  for (const auto& alpha : enumerate_automorphisms(e.kernel()))
    if (cohomologous(push_forward(e, alpha), e)) ++count;
  return count;
}

inline i64 class_orbit_size(const CentralExtension& e) {
  const auto auts = static_cast<i64>(enumerate_automorphisms(e.kernel()).size());
  return auts / aut_stabilizer_order(e);
}

/// One normalized cocycle per class in H^2(Gab, A) (trivial action).
///
/// The searched set is spanned by the standard generators of H^2 for a
/// product of cyclic groups: a carry cocycle per factor (value a when the
/// i-th coordinates overflow m_i) and a bilinear cocycle g_i h_j b per pair
/// i < j with b in A[gcd(m_i, m_j)]. Candidates are then partitioned into
/// classes with is_coboundary, and each class is represented by its
/// lexicographically smallest table; classes are returned in that order.
inline std::vector<CentralExtension> enumerate_central_extensions(const AbGroup& gab, const AbGroup& a,
                                                                  std::size_t bound = kExtensionSearchBound) {
  const i64 work = checked::mul(checked::mul(gab.order(), gab.order()), a.order());
  if (static_cast<std::size_t>(work) > bound) throw BoundExceeded("enumerate_central_extensions: |Gab|^2 |A| exceeds bound");
  const std::size_t n = static_cast<std::size_t>(gab.order());
  const std::size_t r = gab.rank();

  struct Param {
    std::size_t i, j;  // i == j: carry, else bilinear
    std::vector<AbElem> values;
  };
  std::vector<Param> params;
  const auto a_elems = a.elements();
  for (std::size_t i = 0; i < r; ++i) params.push_back({i, i, a_elems});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      const i64 g = std::gcd(gab.moduli()[i], gab.moduli()[j]);
      std::vector<AbElem> tors;
      for (const auto& x : a_elems)
        if (a.is_zero(a.scale(g, x))) tors.push_back(x);
      params.push_back({i, j, tors});
    }
  std::size_t total = 1;
  for (const auto& p : params) {
    total *= p.values.size();
    if (total > kExtensionCandidateBound) throw BoundExceeded("enumerate_central_extensions: too many candidates");
  }
  if (total * n * n > kExtensionCellBound)
    throw BoundExceeded("enumerate_central_extensions: candidate tables exceed the cell bound");

  const auto g_elems = gab.elements();
  std::vector<std::vector<AbElem>> candidates;
  std::vector<std::size_t> pick(params.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<AbElem> t(n * n, a.zero());
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const auto& gx = g_elems[x];
        const auto& gy = g_elems[y];
        AbElem v = a.zero();
        for (std::size_t k = 0; k < params.size(); ++k) {
          const auto& p = params[k];
          const AbElem& val = p.values[pick[k]];
          if (p.i == p.j) {
            if (gx[p.i] + gy[p.i] >= gab.moduli()[p.i]) v = a.add(v, val);
          } else {
            v = a.add(v, a.scale(gx[p.i] * gy[p.j], val));
          }
        }
        t[x * n + y] = std::move(v);
      }
    candidates.push_back(std::move(t));
    for (std::size_t k = params.size(); k-- > 0;) {
      if (++pick[k] < params[k].values.size()) break;
      pick[k] = 0;
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Sorted order means the first member met of each class is its minimum.
  std::vector<CentralExtension> reps;
  for (auto& t : candidates) {
    auto cand = CentralExtension::unchecked(gab, a, std::move(t));
    bool fresh = true;
    for (const auto& rep : reps)
      if (cohomologous(cand, rep)) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(std::move(cand));
  }
  return reps;
}

/// |H^2(Gab, A)| for trivial action: prod |A / m_i A| * prod_{i<j} |A[gcd(m_i, m_j)]|.
inline i64 h2_order(const AbGroup& gab, const AbGroup& a) {
  i64 r = 1;
  const auto& m = gab.moduli();
  for (std::size_t i = 0; i < m.size(); ++i) {
    r = checked::mul(r, torsion_count(a, m[i]));  // |A/mA| = |A[m]|
    for (std::size_t j = i + 1; j < m.size(); ++j) r = checked::mul(r, torsion_count(a, std::gcd(m[i], m[j])));
  }
  return r;
}

}  // namespace lemfact
