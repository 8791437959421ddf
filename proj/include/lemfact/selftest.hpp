#pragma once

// Reduced-scale run of the library's invariants, for `lemfact selftest`.

#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lemfact/abelian.hpp"
#include "lemfact/arith.hpp"
#include "lemfact/classgroup.hpp"
#include "lemfact/classical.hpp"
#include "lemfact/cocycle.hpp"
#include "lemfact/embedding.hpp"
#include "lemfact/io.hpp"
#include "lemfact/oracles.hpp"
#include "lemfact/presets.hpp"

namespace lemfact {

struct SelfCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

namespace selftest_detail {

using Body = std::function<std::string()>;  // empty string = pass

inline SelfCheck run(const std::string& name, const Body& body) {
  try {
    std::string why = body();
    return {name, why.empty(), why};
  } catch (const std::exception& ex) {
    return {name, false, std::string("exception: ") + ex.what()};
  }
}

inline std::string presets_valid() {
  for (const auto& p : {preset_c4_d4(), preset_heisenberg(3), preset_h8_pair()})
    if (auto v = p.ext.violation()) return p.name + ": " + *v;
  return {};
}

inline std::string pairing_bilinear() {
  for (const auto& p : {preset_c4_d4(), preset_heisenberg(3), preset_h8_pair()}) {
    const auto& e = p.ext;
    const auto& g = e.gab();
    const auto& a = e.kernel();
    const auto els = g.elements();
    for (const auto& x : els)
      for (const auto& y : els) {
        if (pairing(e, x, y) != a.neg(pairing(e, y, x))) return p.name + ": antisymmetry at " + to_string(x);
        for (const auto& z : els)
          if (pairing(e, g.add(x, z), y) != a.add(pairing(e, x, y), pairing(e, z, y)))
            return p.name + ": bilinearity at " + to_string(x) + "," + to_string(y) + "," + to_string(z);
      }
  }
  return {};
}

inline std::string coboundary_vs_brute() {
  std::mt19937_64 rng(7);
  const std::vector<std::pair<AbGroup, AbGroup>> shapes{{{2, 2}, {2}}, {{4}, {2}}, {{2}, {4}}, {{3}, {3}}, {{2, 2}, {2, 2}}};
  for (int round = 0; round < 60; ++round) {
    const auto& [g, a] = shapes[static_cast<std::size_t>(round) % shapes.size()];
    const auto classes = enumerate_central_extensions(g, a);
    const auto& base = classes[rng() % classes.size()];
    // cohomologous perturbation by a random coboundary
    const auto n = base.gab_size();
    std::vector<AbElem> phi(n, a.zero());
    for (std::size_t i = 1; i < n; ++i) phi[i] = a.element(rng() % static_cast<std::size_t>(a.order()));
    std::vector<AbElem> t(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t s = g.index(g.add(g.element(i), g.element(j)));
        t[i * n + j] = a.add(base.at(i, j), a.sub(a.add(phi[i], phi[j]), phi[s]));
      }
    const bool fast = is_coboundary(g, a, t).coboundary;
    if (fast != oracle::brute_is_coboundary(g, a, t)) return "disagreement over " + to_string(g) + " by " + to_string(a);
  }
  return {};
}

inline std::string h2_counts() {
  if (enumerate_central_extensions(AbGroup{2}, AbGroup{2}).size() != 2) return "H^2(C2, C2) != 2 classes";
  if (enumerate_central_extensions(AbGroup{2, 2}, AbGroup{2}).size() != 8) return "H^2(C2^2, C2) != 8 classes";
  return {};
}

inline std::string unique_h8_pair() {
  const auto classes = enumerate_central_extensions(AbGroup{2, 2, 2}, AbGroup{2});
  const auto orbits = pair_orbits(classes, h8_admissible_pairs(classes));
  if (orbits.size() != 1) return std::to_string(orbits.size()) + " orbits of admissible H8 pairs";
  return {};
}

inline std::string characters() {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    i64 q;
    do q = 3 + static_cast<i64>(rng() % 500); while (!is_prime(q));
    const i64 n = 2 + static_cast<i64>(rng() % 6);
    const i64 x = 1 + static_cast<i64>(rng() % static_cast<std::uint64_t>(q - 1));
    const i64 y = 1 + static_cast<i64>(rng() % static_cast<std::uint64_t>(q - 1));
    const PrimePower qp{q, 1};
    if (power_residue_char(x * y, qp, n) != mod(power_residue_char(x, qp, n) + power_residue_char(y, qp, n), n))
      return "character not multiplicative at q=" + std::to_string(q);
    const int leg = kronecker(x, q);
    if ((power_residue_char(x, qp, 2) == 0) != (leg == 1)) return "n=2 character disagrees with Legendre";
    if ((leg == 1) != (powmod(x, (q - 1) / 2, q) == 1)) return "kronecker disagrees with Euler";
  }
  return {};
}

inline std::string dual_frobenius() {
  std::mt19937_64 rng(13);
  const auto p = preset_heisenberg(3);
  std::vector<i64> primes;
  for (i64 q = 7; primes.size() < 12; q += 6)
    if (is_prime(q)) primes.push_back(q);
  for (int round = 0; round < 40; ++round) {
    std::vector<i64> trio;
    while (trio.size() < 3) {
      const i64 q = primes[rng() % primes.size()];
      if (std::find(trio.begin(), trio.end(), q) == trio.end()) trio.push_back(q);
    }
    std::map<i64, AbElem> m;
    for (i64 q : trio) m[q] = p.ext.gab().element(1 + rng() % 26);
    const RamAssignment asg(p.ext, m);
    for (i64 q : trio)
      if (frobenius_pairing_sum(p.ext, asg, q) != oracle::direct_frobenius(p.ext, asg, q))
        return "frobenius sum differs at " + to_string(asg);
  }
  return {};
}

inline std::string c4_vs_classify() {
  const auto p = preset_c4_d4();
  for (i64 d = -499; d < 500; ++d) {
    if (d % 2 == 0 || d == 1 || !is_fundamental_discriminant(d)) continue;
    const auto c4 = c4_criterion(d);
    const auto rep = classify(p.ext, p.h, quadratic_base_field(p, d), false);
    if (c4.exists != rep.exists || 2 * c4.witnesses.size() != rep.witnesses.size())
      return "d=" + std::to_string(d);
  }
  return {};
}

inline std::string oracle_sweep() {
  for (i64 d = -1000; d < -3; ++d) {
    if (!is_fundamental_discriminant(d)) continue;
    const int t = static_cast<int>(prime_discriminants(d).size());
    const int r2 = two_rank(d), r4 = four_rank(d);
    if (r2 != t - 1) return "genus theory fails at d=" + std::to_string(d);
    if (r4 != redei_rank(d)) return "4-rank vs Redei at d=" + std::to_string(d);
    if (c4_criterion(d).exists != (r4 >= 1)) return "C4 criterion vs 4-rank at d=" + std::to_string(d);
    if (oracle::naive_class_number(d) != class_group_structure(d).h()) return "class number at d=" + std::to_string(d);
  }
  if (!(class_group_structure(-23).structure == AbGroup{3})) return "Cl(-23) != C3";
  return {};
}

inline std::string fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) return "cannot read " + path;
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& ex) {
    return path + ": " + ex.what();
  }
  const auto loaded = extension_from_json(j, false);
  if (auto v = loaded.ext.violation()) return path + ": " + *v;
  return {};
}

}  // namespace selftest_detail

/// All checks in order; `fixtures` are extension JSON files that must hold
/// valid cocycles.
inline std::vector<SelfCheck> run_selftest(const std::vector<std::string>& fixtures = {}) {
  using namespace selftest_detail;
  std::vector<SelfCheck> out;
  out.push_back(run("presets satisfy the cocycle identity", presets_valid));
  out.push_back(run("pairing is bilinear and alternating", pairing_bilinear));
  out.push_back(run("is_coboundary matches brute force", coboundary_vs_brute));
  out.push_back(run("H^2 class counts", h2_counts));
  out.push_back(run("unique admissible H8 pair", unique_h8_pair));
  out.push_back(run("power residue characters", characters));
  out.push_back(run("dual Frobenius evaluation", dual_frobenius));
  out.push_back(run("C4 criterion matches the D4 engine", c4_vs_classify));
  out.push_back(run("class group oracle sweep -1000..-3", oracle_sweep));
  for (const auto& f : fixtures) out.push_back(run("fixture " + f, [&] { return fixture(f); }));
  return out;
}

}  // namespace lemfact
