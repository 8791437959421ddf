#pragma once

// Named extensions with a designated subgroup H of Gab (so G = pi^-1(H)).

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lemfact/abelian.hpp"
#include "lemfact/arith.hpp"
#include "lemfact/cocycle.hpp"
#include "lemfact/error.hpp"

namespace lemfact {

struct Preset {
  std::string name;
  CentralExtension ext;
  Subgroup h;
};

/// D4 over C2 x C2 = <r>, <s> images, kernel <r^2> = C2, section r^a s^b.
/// H = <rbar>, so G = <r> = C4.
inline Preset preset_c4_d4() {
  const AbGroup gab{2, 2};
  const AbGroup a{2};
  std::vector<AbElem> t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const AbElem g = gab.element(i), h = gab.element(j);
      // r^a1 s^b1 r^a2 s^b2 = r^(a1 + (-1)^b1 a2) s^(b1 + b2)
      const i64 n = g[0] + (g[1] ? -h[0] : h[0]);
      const i64 red = (g[0] + h[0]) % 2;
      t.push_back(AbElem{mod((n - red) / 2, 2)});
    }
  CentralExtension e(gab, a, std::move(t));
  const std::vector<AbElem> gens{AbElem{1, 0}};
  return {"C4_D4", e, subgroup_generated(gab, gens)};
}

/// c(g, h) = sum_{i<j} g_i h_j over C_l^3 with basis (xbar, ybar, sigmabar):
/// every basis commutator is z. H = <xbar, ybar>.
inline Preset preset_heisenberg(i64 l) {
  if (l < 3 || !is_prime(l)) throw InvalidInput("Heisenberg preset needs an odd prime, got " + std::to_string(l));
  const AbGroup gab{l, l, l};
  const AbGroup a{l};
  const auto els = gab.elements();
  std::vector<AbElem> t;
  t.reserve(els.size() * els.size());
  for (const auto& g : els)
    for (const auto& h : els) t.push_back(AbElem{mod(g[0] * h[1] + g[0] * h[2] + g[1] * h[2], l)});
  CentralExtension e(gab, a, std::move(t));
  const std::vector<AbElem> gens{AbElem{1, 0, 0}, AbElem{0, 1, 0}};
  return {"heisenberg:" + std::to_string(l), e, subgroup_generated(gab, gens)};
}

/// Split extension; H is trivial.
inline Preset preset_split(const AbGroup& gab, const AbGroup& a) {
  auto e = CentralExtension::split(gab, a);
  return {"split", e, subgroup_generated(gab, std::vector<AbElem>{})};
}

/// Is pi^-1(H) the quaternion group? Order 8, nonabelian, one involution.
inline bool preimage_is_quaternion(const CentralExtension& e, const Subgroup& h) {
  if (static_cast<i64>(h.size()) * e.kernel().order() != 8) return false;
  std::vector<ExtElem> els;
  for (const auto& a : e.kernel().elements())
    for (const auto& g : h.elements()) els.push_back({a, g});
  int involutions = 0;
  bool abelian = true;
  for (const auto& x : els) {
    if (ext_order(e, x) == 2) ++involutions;
    for (const auto& y : els)
      if (!(ext_mul(e, x, y) == ext_mul(e, y, x))) abelian = false;
  }
  return involutions == 1 && !abelian;
}

/// All subgroups of g of a given order, ordered by membership table.
inline std::vector<Subgroup> subgroups_of_order(const AbGroup& g, std::size_t order) {
  const auto els = g.elements();
  std::vector<Subgroup> out;
  std::vector<std::vector<std::uint8_t>> seen;
  // Every subgroup in scope is generated by at most two elements.
  for (std::size_t i = 0; i < els.size(); ++i)
    for (std::size_t j = i; j < els.size(); ++j) {
      auto s = subgroup_generated(g, std::vector<AbElem>{els[i], els[j]});
      if (s.size() != order) continue;
      std::vector<std::uint8_t> key;
      for (std::size_t k = 0; k < els.size(); ++k) key.push_back(s.contains_index(k));
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      out.push_back(std::move(s));
    }
  return out;
}

struct ClassPair {
  std::size_t cls;  // index into enumerate_central_extensions output
  Subgroup h;
};

/// Pairs (class, H) over (C2^3, C2) with pi^-1(H) = H8 of index 2 and the
/// pair admissible.
inline std::vector<ClassPair> h8_admissible_pairs(const std::vector<CentralExtension>& classes) {
  std::vector<ClassPair> out;
  if (classes.empty()) return out;
  const auto hs = subgroups_of_order(classes.front().gab(), 4);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (const auto& h : hs)
      if (preimage_is_quaternion(classes[c], h) && is_admissible_pair(classes[c], h).admissible)
        out.push_back({c, h});
  return out;
}

/// Index of the class of e in `classes`.
inline std::size_t class_index(const std::vector<CentralExtension>& classes, const CentralExtension& e) {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (cohomologous(classes[i], e)) return i;
  throw Error("class_index: class missing from enumeration");
}

/// Orbits of the pairs under Aut(Gab) x Aut(A), acting by
/// (c, H) -> (alpha ∘ c ∘ (beta x beta), beta^-1(H)).
inline std::vector<std::vector<std::size_t>> pair_orbits(const std::vector<CentralExtension>& classes,
                                                         const std::vector<ClassPair>& pairs) {
  std::vector<std::size_t> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  if (pairs.empty()) return {};
  const AbGroup& gab = classes.front().gab();
  const auto betas = enumerate_automorphisms(gab);
  const auto alphas = enumerate_automorphisms(classes.front().kernel());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (const auto& beta : betas) {
      std::vector<std::uint8_t> pre(static_cast<std::size_t>(gab.order()));
      for (std::size_t i = 0; i < pre.size(); ++i) pre[i] = pairs[p].h.contains(beta.apply(gab.element(i)));
      const Subgroup h2(gab, pre);
      const auto pulled = pull_back(classes[pairs[p].cls], beta);
      for (const auto& alpha : alphas) {
        const std::size_t c2 = class_index(classes, push_forward(pulled, alpha));
        for (std::size_t q = 0; q < pairs.size(); ++q)
          if (pairs[q].cls == c2 && pairs[q].h == h2) parent[find(p)] = find(q);
      }
    }
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::size_t> root_of;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::size_t r = find(p);
    auto it = std::find(root_of.begin(), root_of.end(), r);
    if (it == root_of.end()) {
      root_of.push_back(r);
      orbits.push_back({p});
    } else {
      orbits[static_cast<std::size_t>(it - root_of.begin())].push_back(p);
    }
  }
  return orbits;
}

/// The admissible H8 pair with H = <e1, e2>, the smallest such class table.
inline Preset preset_h8_pair() {
  const AbGroup gab{2, 2, 2};
  const AbGroup a{2};
  const auto classes = enumerate_central_extensions(gab, a);
  const auto h = subgroup_generated(gab, std::vector<AbElem>{AbElem{1, 0, 0}, AbElem{0, 1, 0}});
  for (const auto& e : classes)
    if (preimage_is_quaternion(e, h) && is_admissible_pair(e, h).admissible) return {"H8_pair", e, h};
  throw Error("H8_pair: no admissible quaternion pair over C2^3");
}

namespace detail {

inline std::vector<i64> parse_moduli(const std::string& s) {
  std::vector<i64> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    const std::string tok = s.substr(pos, end - pos);
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      throw InvalidInput("bad cyclic modulus '" + tok + "'");
    out.push_back(std::stoll(tok));
    pos = end + 1;
  }
  return out;
}

inline std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace detail

/// Resolves `name` or `name:param`: C4_D4, H8_pair, heisenberg:<l>,
/// split:<Gab moduli>/<A moduli> (comma separated, e.g. split:2,2/2).
inline Preset preset(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = detail::lower(spec.substr(0, colon));
  const std::string param = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "c4_d4" || name == "d4") {
    if (!param.empty()) throw InvalidInput("C4_D4 takes no parameter");
    return preset_c4_d4();
  }
  if (name == "h8_pair" || name == "h8") {
    if (!param.empty()) throw InvalidInput("H8_pair takes no parameter");
    return preset_h8_pair();
  }
  if (name == "heisenberg") {
    if (param.empty()) throw InvalidInput("heisenberg preset needs a prime: heisenberg:<l>");
    const auto l = detail::parse_moduli(param);
    if (l.size() != 1) throw InvalidInput("heisenberg preset takes one prime");
    return preset_heisenberg(l[0]);
  }
  if (name == "split") {
    const auto slash = param.find('/');
    if (slash == std::string::npos) throw InvalidInput("split preset: expected split:<Gab>/<A>");
    auto p = preset_split(AbGroup(detail::parse_moduli(param.substr(0, slash))),
                          AbGroup(detail::parse_moduli(param.substr(slash + 1))));
    p.name = "split:" + param;
    return p;
  }
  throw InvalidInput("unknown preset '" + spec + "'");
}

}  // namespace lemfact
