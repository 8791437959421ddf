#pragma once

// Unramified central embedding problems over an abelian base field K.
//
// A ramification assignment sends each (odd, tame) ramified prime q to the
// inertia image y_q in Y_E. It determines the discriminant factorization
// d_y = prod_{y_q = y} (q*)^(|y|-1), and it lifts to an unramified solution iff
// for every ramified p
//   S_p = sum_{q != p} chi_q(p) [y_q, y_p]_E = 0,
// chi_q(p) being the image of p under (Z/q^(|y_q|-1))^x -> Z/|y_q|.

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lemfact/abelian.hpp"
#include "lemfact/arith.hpp"
#include "lemfact/cocycle.hpp"
#include "lemfact/error.hpp"
#include "lemfact/parallel.hpp"
#include "lemfact/presets.hpp"

namespace lemfact {

inline constexpr std::size_t kAssignmentBound = std::size_t{1} << 20;
/// At most this many scaling findings are kept verbatim in a report.
inline constexpr std::size_t kFindingsKept = 16;

/// sign * prod q^e, kept factored: discriminants such as (pqr)^18 overflow.
struct FactoredInt {
  int sign = 1;
  std::map<i64, i64> exps;

  bool fits() const {
    try {
      (void)value();
      return true;
    } catch (const Overflow&) {
      return false;
    }
  }
  i64 value() const {
    i64 v = sign;
    for (const auto& [q, e] : exps) v = checked::mul(v, checked::pow(q, e));
    return v;
  }
  bool is_one() const { return sign == 1 && exps.empty(); }

  static FactoredInt of(i64 n) {
    if (n == 0) throw InvalidInput("FactoredInt: zero");
    FactoredInt f;
    f.sign = n < 0 ? -1 : 1;
    if (n == std::numeric_limits<i64>::min()) throw Overflow("FactoredInt: magnitude too large");
    for (const auto& pp : factorize(std::llabs(n))) f.exps[pp.q] = pp.e;
    return f;
  }

  bool operator==(const FactoredInt&) const = default;
};

inline std::string to_string(const FactoredInt& f) {
  if (f.fits()) return std::to_string(f.value());
  std::string s = f.sign < 0 ? "-" : "";
  bool first = true;
  for (const auto& [q, e] : f.exps) {
    if (!first) s += "*";
    first = false;
    s += std::to_string(q);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

class RamAssignment {
 public:
  /// Validates: nonempty; q odd prime prime to |Gab||A|; y_q nonzero, in Y_E,
  /// with |y_q| dividing q - 1.
  RamAssignment(const CentralExtension& e, std::map<i64, AbElem> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidInput("assignment has no ramified primes");
    for (auto& [q, y] : entries_) {
      check_prime(e, q);
      e.gab().check(y);
      y = e.gab().reduce(y.coords);
      if (e.gab().is_zero(y)) throw InvalidInput("inertia image at " + std::to_string(q) + " is trivial");
      if (!in_YE(e, y)) throw InvalidInput("inertia image " + to_string(y) + " at " + std::to_string(q) + " is not in Y_E");
      const i64 n = elem_order(e.gab(), y);
      if ((q - 1) % n != 0)
        throw InvalidInput("prime " + std::to_string(q) + " incompatible with order " + std::to_string(n) +
                           " (tame inertia needs |y| | q-1)");
    }
    set_image(e);
  }

  const std::map<i64, AbElem>& entries() const { return entries_; }
  const AbElem& at(i64 q) const {
    auto it = entries_.find(q);
    if (it == entries_.end()) throw InvalidInput(std::to_string(q) + " is not ramified in the assignment");
    return it->second;
  }
  /// |<y_q : q>|
  i64 image_order() const { return image_order_; }

  bool operator==(const RamAssignment& o) const { return entries_ == o.entries_; }
  bool operator<(const RamAssignment& o) const { return entries_ < o.entries_; }

  static void check_prime(const CentralExtension& e, i64 q) {
    if (q < 3 || !is_prime(q)) throw InvalidInput(std::to_string(q) + " is not an odd prime");
    if (e.gab().order() % q == 0 || e.kernel().order() % q == 0)
      throw InvalidInput("prime " + std::to_string(q) + " divides |Gab||A| (wild ramification unsupported)");
  }

  /// Skips validation; for entries already drawn from checked candidates.
  static RamAssignment trusted(const CentralExtension& e, std::map<i64, AbElem> entries) {
    return RamAssignment(e, std::move(entries), Trusted{});
  }

 private:
  struct Trusted {};
  RamAssignment(const CentralExtension& e, std::map<i64, AbElem> entries, Trusted) : entries_(std::move(entries)) {
    set_image(e);
  }
  void set_image(const CentralExtension& e) {
    std::vector<AbElem> ys;
    for (const auto& [q, y] : entries_) ys.push_back(y);
    image_order_ = static_cast<i64>(subgroup_generated(e.gab(), ys).size());
  }

  std::map<i64, AbElem> entries_;
  i64 image_order_ = 1;
};

struct DiscFactorization {
  std::map<AbElem, FactoredInt> factors;  // only d_y != 1
  FactoredInt disc;                       // disc(f) = prod |d_y|^[Im : <y>]

  const FactoredInt& get(const AbElem& y) const {
    static const FactoredInt one{};
    auto it = factors.find(y);
    return it == factors.end() ? one : it->second;
  }
  bool operator==(const DiscFactorization&) const = default;
};

inline DiscFactorization factorization_of(const CentralExtension& e, const RamAssignment& asg) {
  DiscFactorization f;
  for (const auto& [q, y] : asg.entries()) {
    const i64 n = elem_order(e.gab(), y);
    auto& d = f.factors[y];
    if (prime_star(q) < 0 && (n - 1) % 2 == 1) d.sign = -d.sign;
    d.exps[q] = n - 1;
    f.disc.exps[q] = checked::mul(n - 1, asg.image_order() / n);
  }
  return f;
}

/// Inverse of factorization_of. Every prime of d_y must appear to the power
/// |y| - 1 and the sign must be that of prod (q*)^(|y|-1).
inline RamAssignment assignment_from_factorization(const CentralExtension& e,
                                                   const std::map<AbElem, FactoredInt>& fact) {
  std::map<i64, AbElem> entries;
  for (const auto& [y0, d] : fact) {
    if (d.is_one()) continue;
    const AbElem y = e.gab().reduce(y0.coords);
    if (!in_YE(e, y)) throw InvalidInput("factor indexed by " + to_string(y) + " which is not in Y_E");
    const i64 n = elem_order(e.gab(), y);
    int sign = 1;
    for (const auto& [q, ex] : d.exps) {
      if (q == 2) throw InvalidInput("even discriminant factor: unsupported in the general engine");
      if (!is_prime(q)) throw InvalidInput(std::to_string(q) + " is not prime");
      if (n == 1 || (q - 1) % n != 0)
        throw InvalidInput("prime " + std::to_string(q) + " incompatible with order " + std::to_string(n));
      if (ex != n - 1)
        throw InvalidInput("exponent of " + std::to_string(q) + " in d_" + to_string(y) + " must be " +
                           std::to_string(n - 1));
      if (prime_star(q) < 0 && (n - 1) % 2 == 1) sign = -sign;
      if (!entries.emplace(q, y).second) throw InvalidInput("factors not coprime: " + std::to_string(q) + " repeats");
    }
    if (sign != d.sign) throw InvalidInput("sign of d_" + to_string(y) + " is not that of its prime discriminants");
  }
  return RamAssignment(e, std::move(entries));
}

inline RamAssignment assignment_from_factorization(const CentralExtension& e, const std::map<AbElem, i64>& fact) {
  std::map<AbElem, FactoredInt> f;
  for (const auto& [y, d] : fact) f.emplace(y, FactoredInt::of(d));
  return assignment_from_factorization(e, f);
}

inline RamAssignment assignment_from_factorization(const CentralExtension& e, const DiscFactorization& fact) {
  return assignment_from_factorization(e, fact.factors);
}

/// sum_{d_y < 0} (|y|/2) y lies in Y_E.
inline bool infinite_place_ok(const CentralExtension& e, const DiscFactorization& fact) {
  AbElem s = e.gab().zero();
  for (const auto& [y, d] : fact.factors) {
    if (d.sign > 0) continue;
    const i64 n = elem_order(e.gab(), y);
    if (n % 2 != 0) throw InvalidInput("negative factor d_" + to_string(y) + " indexed by an element of odd order");
    s = e.gab().add(s, e.gab().scale(n / 2, y));
  }
  return in_YE(e, s);
}

enum class CharScaling {
  Intrinsic,  // chi_q valued in Z/|y_q|
  Literal,    // chi_q valued in Z/exp(A) through the (n/d) embedding
};

/// Cache of power-residue characters keyed by (p, q, n).
class CharTable {
 public:
  i64 get(i64 p, i64 q, i64 e, i64 n) const {
    const auto key = std::make_tuple(p, q, e, n);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    const i64 v = power_residue_char(p, PrimePower{q, e}, n);
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(key, v);
    return v;
  }

 private:
  mutable std::mutex mu_;
  mutable std::map<std::tuple<i64, i64, i64, i64>, i64> memo_;
};

inline AbElem frobenius_pairing_sum(const CentralExtension& e, const RamAssignment& asg, i64 p,
                                    CharScaling scaling = CharScaling::Intrinsic, const CharTable* table = nullptr) {
  const AbElem& yp = asg.at(p);
  const i64 expa = group_exponent(e.kernel());
  AbElem s = e.kernel().zero();
  for (const auto& [q, yq] : asg.entries()) {
    if (q == p) continue;
    const AbElem pr = pairing(e, yq, yp);
    if (e.kernel().is_zero(pr)) continue;
    const i64 order = elem_order(e.gab(), yq);
    const i64 n = scaling == CharScaling::Intrinsic ? order : expa;
    const i64 chi = table ? table->get(p, q, order - 1, n) : power_residue_char(p, PrimePower{q, order - 1}, n);
    s = e.kernel().add(s, e.kernel().scale(chi, pr));
  }
  return s;
}

struct LiftCheck {
  bool ok = false;
  std::vector<i64> failing_primes;
  bool infinity_ok = true;
};

inline LiftCheck has_unramified_lift(const CentralExtension& e, const RamAssignment& asg, bool check_infinity,
                                     CharScaling scaling = CharScaling::Intrinsic,
                                     const CharTable* table = nullptr) {
  LiftCheck r;
  for (const auto& [p, yp] : asg.entries())
    if (!e.kernel().is_zero(frobenius_pairing_sum(e, asg, p, scaling, table))) r.failing_primes.push_back(p);
  if (check_infinity) r.infinity_ok = infinite_place_ok(e, factorization_of(e, asg));
  r.ok = r.failing_primes.empty() && r.infinity_ok;
  return r;
}

/// The base field K: ramified primes with their inertia images in Gab/H,
/// each image given by a representative in Gab.
struct BaseFieldData {
  struct Prime {
    i64 q;
    AbElem image;
  };
  Subgroup h;
  std::vector<Prime> primes;
};

inline void validate_base_field(const CentralExtension& e, const BaseFieldData& k) {
  const auto& g = e.gab();
  if (!(k.h.parent() == g)) throw InvalidInput("base field subgroup H is not a subgroup of Gab");
  if (!k.h.is_closed()) throw InvalidInput("base field H is not closed under addition");
  if (k.primes.empty()) throw InvalidInput("base field has no ramified primes");
  std::vector<AbElem> gens = k.h.elements();
  std::set<i64> seen;
  for (const auto& [q, img] : k.primes) {
    RamAssignment::check_prime(e, q);
    if (!seen.insert(q).second) throw InvalidInput("prime " + std::to_string(q) + " listed twice");
    g.check(img);
    if (k.h.contains(g.reduce(img.coords)))
      throw InvalidInput("inertia image at " + std::to_string(q) + " is trivial in Gab/H");
    i64 ord = 1;
    for (AbElem x = g.reduce(img.coords); !k.h.contains(x); x = g.add(x, img)) ++ord;
    if ((q - 1) % ord != 0)
      throw InvalidInput("inertia order " + std::to_string(ord) + " at " + std::to_string(q) + " does not divide q-1");
    gens.push_back(img);
  }
  if (!subgroup_generated(g, gens).is_whole()) throw InvalidInput("inertia images do not generate Gab/H");
}

namespace detail {

/// Gab with a precomputed addition table, for fast generation checks.
class IndexGroup {
 public:
  explicit IndexGroup(const AbGroup& g) : n_(static_cast<std::size_t>(g.order())) {
    add_.resize(n_ * n_);
    const auto els = g.elements();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) add_[i * n_ + j] = g.index(g.add(els[i], els[j]));
  }
  bool generates(const std::vector<std::size_t>& gens) const {
    std::vector<std::uint8_t> seen(n_, 0);
    std::vector<std::size_t> queue{0};
    queue.reserve(n_);
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (std::size_t g : gens) {
        const std::size_t k = add_[queue[head] * n_ + g];
        if (!seen[k]) {
          seen[k] = 1;
          queue.push_back(k);
        }
      }
    return queue.size() == n_;
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> add_;
};

}  // namespace detail

/// Assignments with y_q in Y_E, y_q ≡ image_q mod H (so y_q ∉ H), tame, and
/// jointly generating Gab. Ordered lexicographically by (y_q) over ascending q.
inline std::vector<RamAssignment> enumerate_assignments(const CentralExtension& e, const Subgroup& h,
                                                        const BaseFieldData& k,
                                                        std::size_t bound = kAssignmentBound) {
  if (!(h == k.h)) throw InvalidInput("base field data and designated subgroup disagree");
  validate_base_field(e, k);
  const auto& g = e.gab();
  auto primes = k.primes;
  std::sort(primes.begin(), primes.end(), [](const auto& a, const auto& b) { return a.q < b.q; });

  std::vector<std::vector<std::size_t>> cand(primes.size());
  std::size_t total = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t yi = 0; yi < e.gab_size(); ++yi) {
      const AbElem y = g.element(yi);
      if (h.contains(y) || !h.contains(g.sub(y, g.reduce(primes[i].image.coords)))) continue;
      if (!in_YE(e, y)) continue;
      if ((primes[i].q - 1) % elem_order(g, y) != 0) continue;
      cand[i].push_back(yi);
    }
    total *= std::max<std::size_t>(cand[i].size(), 1);
    if (cand[i].empty()) return {};
    if (total > bound) throw BoundExceeded("enumerate_assignments: candidate space exceeds bound");
  }

  const detail::IndexGroup ig(g);
  std::vector<RamAssignment> out;
  std::vector<std::size_t> pick(primes.size(), 0);
  std::vector<std::size_t> chosen(primes.size());
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t i = 0; i < primes.size(); ++i) chosen[i] = cand[i][pick[i]];
    if (ig.generates(chosen)) {
      std::map<i64, AbElem> entries;
      for (std::size_t i = 0; i < primes.size(); ++i) entries.emplace(primes[i].q, g.element(chosen[i]));
      out.push_back(RamAssignment::trusted(e, std::move(entries)));
    }
    for (std::size_t i = primes.size(); i-- > 0;) {
      if (++pick[i] < cand[i].size()) break;
      pick[i] = 0;
    }
  }
  return out;
}

namespace detail {

inline i64 count_with_stabilizer(const CentralExtension& e, const RamAssignment& asg, i64 stab) {
  if (!is_central_pair(e)) throw CountingInconsistency("counting formula needs [E,E] = A (not a central pair)");
  i64 num = 1;
  for (const auto& [q, y] : asg.entries()) num = checked::mul(num, torsion_count(e.kernel(), elem_order(e.gab(), y)));
  const i64 den = checked::mul(stab, hom_count(e.gab(), e.kernel()));
  if (num % den != 0)
    throw CountingInconsistency("counting formula inconsistency: " + std::to_string(num) + "/" + std::to_string(den) +
                                " is not an integer");
  return num / den;
}

}  // namespace detail

/// prod_q #A[|y_q|] / (#Stab_Aut(A)[E] * #Hom(Gab, A)): unramified
/// extensions per class in the Aut(A)-orbit of [E] for this assignment.
inline i64 count_extensions(const CentralExtension& e, const Subgroup& h, const RamAssignment& asg) {
  detail::check_subgroup_of_gab(e, h);
  if (!has_unramified_lift(e, asg, false).ok) throw InvalidInput("count_extensions: assignment has no unramified lift");
  return detail::count_with_stabilizer(e, asg, aut_stabilizer_order(e));
}

struct Witness {
  RamAssignment assignment;
  DiscFactorization factorization;
  std::optional<i64> count_per_class;
  i64 classes = 1;
  std::string count_error;
};

struct ClassifyReport {
  bool exists = false;
  std::vector<Witness> witnesses;
  std::size_t assignments_examined = 0;
  bool admissible = false;
  std::string admissibility;
  std::vector<std::string> findings;  // intrinsic vs literal character scaling
  std::size_t finding_count = 0;
};

inline std::string to_string(const RamAssignment& a) {
  std::string s = "{";
  bool first = true;
  for (const auto& [q, y] : a.entries()) {
    if (!first) s += ", ";
    first = false;
    s += std::to_string(q) + "->" + to_string(y);
  }
  return s + "}";
}

inline ClassifyReport classify(const CentralExtension& e, const Subgroup& h, const BaseFieldData& k,
                               bool check_infinity, unsigned jobs = 1) {
  ClassifyReport rep;
  const auto adm = is_admissible_pair(e, h);
  rep.admissible = adm.admissible;
  rep.admissibility = adm.diagnostic;
  const auto asgs = enumerate_assignments(e, h, k);
  rep.assignments_examined = asgs.size();

  CharTable table;
  std::vector<std::uint8_t> pass(asgs.size(), 0), differ(asgs.size(), 0);
  parallel_for(asgs.size(), jobs, [&](std::size_t i) {
    const bool a = has_unramified_lift(e, asgs[i], check_infinity, CharScaling::Intrinsic, &table).ok;
    pass[i] = a;
    for (const auto& [p, yp] : asgs[i].entries())
      if (frobenius_pairing_sum(e, asgs[i], p, CharScaling::Intrinsic, &table) !=
          frobenius_pairing_sum(e, asgs[i], p, CharScaling::Literal, &table)) {
        differ[i] = 1;
        break;
      }
  });

  std::optional<i64> stab;
  std::string stab_error;
  try {
    stab = aut_stabilizer_order(e);
  } catch (const Error& ex) {
    stab_error = ex.what();
  }
  const i64 classes = stab ? static_cast<i64>(enumerate_automorphisms(e.kernel()).size()) / *stab : 1;

  for (std::size_t i = 0; i < asgs.size(); ++i) {
    if (differ[i]) {
      ++rep.finding_count;
      if (rep.findings.size() < kFindingsKept)
        rep.findings.push_back("character scaling matters for assignment " + to_string(asgs[i]) +
                               ": Z/|y_q| and Z/exp(A) sums differ");
    }
    if (!pass[i]) continue;
    Witness w{asgs[i], factorization_of(e, asgs[i]), std::nullopt, classes, {}};
    if (stab) {
      try {
        w.count_per_class = detail::count_with_stabilizer(e, asgs[i], *stab);
      } catch (const CountingInconsistency& ex) {
        w.count_error = ex.what();
      }
    } else {
      w.count_error = stab_error;
    }
    rep.witnesses.push_back(std::move(w));
  }
  rep.exists = !rep.witnesses.empty();
  return rep;
}

/// Every q gets the first element of Gab outside H (in index order) as its
/// inertia image: a generator of Gab/H when that quotient is cyclic of prime
/// order.
inline BaseFieldData uniform_base_field(const Preset& p, const std::vector<i64>& primes) {
  const auto& g = p.ext.gab();
  std::optional<AbElem> img;
  for (std::size_t i = 0; i < p.ext.gab_size() && !img; ++i)
    if (!p.h.contains_index(i)) img = g.element(i);
  if (!img) throw InvalidInput("preset has H = Gab; no inertia image available");
  BaseFieldData k{p.h, {}};
  for (i64 q : primes) k.primes.push_back({q, *img});
  return k;
}

/// K = Q(sqrt d) for an odd fundamental d, over a preset whose Gab/H has
/// order 2: every q | d gets the nontrivial coset.
inline BaseFieldData quadratic_base_field(const Preset& p, i64 d) {
  if (!is_fundamental_discriminant(d) || d == 1) throw InvalidInput(std::to_string(d) + " is not a fundamental discriminant");
  if (d % 2 == 0) throw InvalidInput("even discriminant: unsupported in the general engine");
  if (subgroup_index(p.ext.gab(), p.h) != 2) throw InvalidInput("preset quotient Gab/H is not of order 2");
  return uniform_base_field(p, [&] {
    std::vector<i64> qs;
    for (const auto& pp : factorize(std::llabs(d))) qs.push_back(pp.q);
    return qs;
  }());
}

}  // namespace lemfact
