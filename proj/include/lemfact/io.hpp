#pragma once

// JSON encodings of extensions, base field data and reports. Objects use
// nlohmann::json's default ordered-by-key maps, so dumps are canonical.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "lemfact/abelian.hpp"
#include "lemfact/classgroup.hpp"
#include "lemfact/classical.hpp"
#include "lemfact/cocycle.hpp"
#include "lemfact/embedding.hpp"
#include "lemfact/error.hpp"

namespace lemfact {

using nlohmann::json;

namespace detail {

inline std::vector<i64> int_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array of integers");
  std::vector<i64> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw InvalidInput(where + "[" + std::to_string(i) + "]: expected an integer");
    out.push_back(j[i].get<i64>());
  }
  return out;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(where + ": missing \"" + key + "\"");
  return *it;
}

inline AbElem elem_in(const AbGroup& g, const json& j, const std::string& where) {
  auto c = int_list(j, where);
  if (c.size() != g.rank())
    throw InvalidInput(where + ": expected " + std::to_string(g.rank()) + " coordinates, got " + std::to_string(c.size()));
  return g.reduce(std::move(c));
}

inline std::string key_of(const AbElem& y) {
  std::string s = "[";
  for (std::size_t i = 0; i < y.size(); ++i) s += (i ? "," : "") + std::to_string(y[i]);
  return s + "]";
}

inline json factored_json(const FactoredInt& f) {
  if (f.fits()) return f.value();
  return to_string(f);
}

}  // namespace detail

inline json to_json(const AbElem& x) { return x.coords; }
inline json to_json(const AbGroup& g) { return g.moduli(); }

/// Greedy generating set, in element-index order.
inline json subgroup_json(const Subgroup& h) {
  std::vector<AbElem> gens;
  Subgroup span = subgroup_generated(h.parent(), gens);
  for (const auto& x : h.elements()) {
    if (span.contains(x)) continue;
    gens.push_back(x);
    span = subgroup_generated(h.parent(), gens);
  }
  json out = json::array();
  for (const auto& g : gens) out.push_back(to_json(g));
  return out;
}

inline Subgroup subgroup_from_json(const AbGroup& g, const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array of generators");
  std::vector<AbElem> gens;
  for (std::size_t i = 0; i < j.size(); ++i) gens.push_back(detail::elem_in(g, j[i], where + "[" + std::to_string(i) + "]"));
  return subgroup_generated(g, gens);
}

inline json extension_to_json(const CentralExtension& e, const std::optional<Subgroup>& h = std::nullopt) {
  json rows = json::array();
  for (std::size_t i = 0; i < e.gab_size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < e.gab_size(); ++k) row.push_back(to_json(e.at(i, k)));
    rows.push_back(std::move(row));
  }
  json out{{"Gab", to_json(e.gab())}, {"A", to_json(e.kernel())}, {"cocycle", std::move(rows)}};
  if (h) out["H"] = subgroup_json(*h);
  return out;
}

struct LoadedExtension {
  CentralExtension ext;
  std::optional<Subgroup> h;
};

/// With validate = false the cocycle conditions are left to the caller
/// (see CentralExtension::violation).
inline LoadedExtension extension_from_json(const json& j, bool validate = true) {
  const AbGroup gab(detail::int_list(detail::field(j, "Gab", "extension"), "Gab"));
  const AbGroup a(detail::int_list(detail::field(j, "A", "extension"), "A"));
  gab.require_small(kDeskGroupBound);
  const auto& rows = detail::field(j, "cocycle", "extension");
  const auto n = static_cast<std::size_t>(gab.order());
  if (!rows.is_array() || rows.size() != n)
    throw InvalidInput("cocycle: expected " + std::to_string(n) + " rows");
  std::vector<AbElem> t;
  t.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string wi = "cocycle[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != n) throw InvalidInput(wi + ": expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) t.push_back(detail::elem_in(a, rows[i][k], wi + "[" + std::to_string(k) + "]"));
  }
  auto ext = validate ? CentralExtension(gab, a, std::move(t)) : CentralExtension::unchecked(gab, a, std::move(t));
  std::optional<Subgroup> h;
  if (j.contains("H")) h = subgroup_from_json(gab, j["H"], "H");
  return {std::move(ext), std::move(h)};
}

namespace detail {

/// Axes i where H is exactly the i-th factor, when H is the product of
/// whole coordinate factors; nullopt otherwise.
inline std::optional<std::vector<std::size_t>> axis_support(const Subgroup& h) {
  const auto& g = h.parent();
  std::vector<std::size_t> axes;
  std::vector<AbElem> gens;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    AbElem e = g.zero();
    e.coords[i] = 1 % g.moduli()[i];
    if (g.moduli()[i] > 1 && h.contains(e)) {
      axes.push_back(i);
      gens.push_back(e);
    }
  }
  if (!(subgroup_generated(g, gens) == h)) return std::nullopt;
  return axes;
}

}  // namespace detail

/// Images are Gab representatives (rank(Gab) coordinates), or, when H is a
/// product of coordinate factors, coordinates on the remaining factors.
inline BaseFieldData base_field_from_json(const CentralExtension& e, const json& j,
                                          const std::optional<Subgroup>& default_h = std::nullopt) {
  const auto& g = e.gab();
  std::optional<Subgroup> h;
  if (j.is_object() && j.contains("H"))
    h = subgroup_from_json(g, j["H"], "kdata.H");
  else
    h = default_h;
  if (!h) throw InvalidInput("kdata: missing \"H\" and the extension designates none");
  const auto& primes = detail::field(j, "primes", "kdata");
  if (!primes.is_array()) throw InvalidInput("kdata.primes: expected an array");
  BaseFieldData k{*h, {}};
  const auto axes = detail::axis_support(*h);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::string w = "kdata.primes[" + std::to_string(i) + "]";
    const auto& qj = detail::field(primes[i], "q", w);
    if (!qj.is_number_integer()) throw InvalidInput(w + ".q: expected an integer");
    auto img = detail::int_list(detail::field(primes[i], "image", w), w + ".image");
    if (img.size() != g.rank()) {
      if (!axes || img.size() != g.rank() - axes->size())
        throw InvalidInput(w + ".image: expected " + std::to_string(g.rank()) + " coordinates" +
                           (axes ? " or " + std::to_string(g.rank() - axes->size()) + " quotient coordinates" : ""));
      std::vector<i64> full(g.rank(), 0);
      std::size_t next = 0;
      for (std::size_t a = 0; a < g.rank(); ++a)
        if (std::find(axes->begin(), axes->end(), a) == axes->end()) full[a] = img[next++];
      img = std::move(full);
    }
    k.primes.push_back({qj.get<i64>(), g.reduce(std::move(img))});
  }
  validate_base_field(e, k);
  return k;
}

inline json base_field_to_json(const BaseFieldData& k) {
  json ps = json::array();
  for (const auto& p : k.primes) ps.push_back({{"q", p.q}, {"image", to_json(p.image)}});
  return {{"H", subgroup_json(k.h)}, {"primes", std::move(ps)}};
}

inline json assignment_json(const RamAssignment& a) {
  json out = json::object();
  for (const auto& [q, y] : a.entries()) out[std::to_string(q)] = to_json(y);
  return out;
}

inline json factorization_json(const DiscFactorization& f) {
  json out = json::object();
  for (const auto& [y, d] : f.factors) out[detail::key_of(y)] = detail::factored_json(d);
  return out;
}

inline json classify_json(const ClassifyReport& r) {
  json ws = json::array();
  for (const auto& w : r.witnesses) {
    json o{{"assignment", assignment_json(w.assignment)},
           {"factorization", factorization_json(w.factorization)},
           {"disc", detail::factored_json(w.factorization.disc)},
           {"classes", w.classes}};
    o["count_per_class"] = w.count_per_class ? json(*w.count_per_class) : json(nullptr);
    if (!w.count_error.empty()) o["count_error"] = w.count_error;
    ws.push_back(std::move(o));
  }
  return {{"exists", r.exists},
          {"witnesses", std::move(ws)},
          {"assignments_examined", r.assignments_examined},
          {"admissible", r.admissible},
          {"admissibility", r.admissibility},
          {"findings", r.findings},
          {"finding_count", r.finding_count}};
}

inline json criterion_json(const CriterionReport& r) {
  json ws = json::array();
  for (const auto& w : r.witnesses) {
    json checks = json::array();
    for (const auto& c : w.symbol_checks)
      checks.push_back({{"symbol", "(" + std::to_string(c.top) + "/" + std::to_string(c.prime) + ")"}, {"value", c.value}});
    ws.push_back({{"parts", w.parts}, {"symbol_checks", std::move(checks)}});
  }
  return {{"d", r.d},
          {"omega", omega(r.d)},
          {"exists", r.exists},
          {"witnesses", std::move(ws)},
          {"count_per_witness", r.count_per_witness}};
}

inline json heisenberg_json(const HeisenbergReport& r) {
  json chars = json::object();
  for (std::size_t i = 0; i < 6; ++i) chars[heisenberg_char_names()[i]] = r.chars[i];
  json sols = json::array();
  for (const auto& s : r.solutions) sols.push_back(s);
  return {{"l", r.l},     {"primes", r.primes}, {"exists", r.exists},
          {"chars", chars}, {"solutions", sols}, {"count", r.count}};
}

inline json class_group_json(const ClassGroup& cg) {
  json forms = json::array();
  for (const auto& f : cg.forms) forms.push_back({f.a, f.b, f.c});
  return {{"d", cg.d}, {"h", cg.h()}, {"structure", to_json(cg.structure)}, {"forms", forms}};
}

/// Canonical serialization: sorted keys, two-space indent.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace lemfact
