#pragma once

// Sweeps of the C4 / H8 criteria over ranges of fundamental discriminants.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lemfact/arith.hpp"
#include "lemfact/classgroup.hpp"
#include "lemfact/classical.hpp"
#include "lemfact/error.hpp"
#include "lemfact/io.hpp"
#include "lemfact/parallel.hpp"

namespace lemfact {

enum class Criterion { C4, H8 };

struct SurveyRow {
  i64 d = 0;
  int omega = 0;
  int t_prime_discs = 0;
  bool exists = false;
  std::size_t n_witnesses = 0;
  i64 count_per_witness = 0;
  std::optional<int> oracle_two_rank, oracle_four_rank, redei_rank;
};

inline const char* kSurveyColumns =
    "d,omega,t_prime_discs,exists,n_witnesses,count_per_witness,oracle_two_rank,oracle_four_rank,redei_rank";

inline SurveyRow survey_row(i64 d, Criterion c, bool with_oracle) {
  const auto rep = c == Criterion::C4 ? c4_criterion(d) : h8_criterion(d);
  SurveyRow r;
  r.d = d;
  r.omega = omega(d);
  r.t_prime_discs = static_cast<int>(prime_discriminants(d).size());
  r.exists = rep.exists;
  r.n_witnesses = rep.witnesses.size();
  r.count_per_witness = rep.count_per_witness;
  if (with_oracle) {
    if (d < 0) {
      r.oracle_two_rank = two_rank(d);
      r.oracle_four_rank = four_rank(d);
    }
    r.redei_rank = redei_rank(d);
  }
  return r;
}

/// Rows for every fundamental d != 1 in [lo, hi], ascending; none when lo > hi.
inline std::vector<SurveyRow> run_survey(i64 lo, i64 hi, Criterion c, bool with_oracle, unsigned jobs = 1,
                                         i64 max_disc = kMaxI64) {
  if (lo > hi) return {};
  if (std::max(std::llabs(lo), std::llabs(hi)) > max_disc)
    throw BoundExceeded("survey: range exceeds discriminant bound " + std::to_string(max_disc));
  std::vector<i64> ds;
  for (i64 d = lo; d <= hi; ++d)
    if (d != 0 && d != 1 && is_fundamental_discriminant(d)) ds.push_back(d);
  std::vector<SurveyRow> rows(ds.size());
  parallel_for(ds.size(), jobs, [&](std::size_t i) { rows[i] = survey_row(ds[i], c, with_oracle); });
  return rows;
}

inline std::string survey_csv(const std::vector<SurveyRow>& rows) {
  std::ostringstream out;
  out << kSurveyColumns << "\n";
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : rows)
    out << r.d << "," << r.omega << "," << r.t_prime_discs << "," << (r.exists ? "true" : "false") << ","
        << r.n_witnesses << "," << r.count_per_witness << "," << opt(r.oracle_two_rank) << ","
        << opt(r.oracle_four_rank) << "," << opt(r.redei_rank) << "\n";
  return out.str();
}

inline json survey_json(const std::vector<SurveyRow>& rows) {
  json out = json::array();
  auto opt = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  for (const auto& r : rows)
    out.push_back({{"d", r.d},
                   {"omega", r.omega},
                   {"t_prime_discs", r.t_prime_discs},
                   {"exists", r.exists},
                   {"n_witnesses", r.n_witnesses},
                   {"count_per_witness", r.count_per_witness},
                   {"oracle_two_rank", opt(r.oracle_two_rank)},
                   {"oracle_four_rank", opt(r.oracle_four_rank)},
                   {"redei_rank", opt(r.redei_rank)}});
  return out;
}

/// "a..b" with optional signs.
inline std::pair<i64, i64> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw InvalidInput("range must look like a..b, got '" + s + "'");
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    i64 v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad range endpoint '" + t + "'");
    }
    if (used != t.size()) throw InvalidInput("bad range endpoint '" + t + "'");
    return v;
  };
  return {num(s.substr(0, dots)), num(s.substr(dots + 2))};
}

}  // namespace lemfact
