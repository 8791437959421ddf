// lemfact: command-line front end.
//
// Exit codes: 0 ran, 1 selftest failure, 2 input error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lemfact/lemfact.hpp"
#include "lemfact/selftest.hpp"

using namespace lemfact;

namespace {

struct Globals {
  std::string format = "json";
  unsigned jobs = 1;
  std::optional<i64> max_disc;
};

i64 disc_bound(const Globals& g) {
  if (g.max_disc) return *g.max_disc;
  if (const char* env = std::getenv("LEMFACT_MAX_DISC")) {
    try {
      std::size_t used = 0;
      const i64 v = std::stoll(env, &used);
      if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw InvalidInput(std::string("LEMFACT_MAX_DISC is not a positive integer: ") + env);
  }
  return kMaxI64;
}

void check_disc(i64 d, const Globals& g) {
  const i64 b = disc_bound(g);
  if (d == std::numeric_limits<i64>::min() || std::llabs(d) > b)
    throw BoundExceeded("|d| = " + std::to_string(d) + " exceeds the discriminant bound " + std::to_string(b));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    throw InvalidInput(path + ": " + ex.what());
  }
}

/// Preset name or path to an extension JSON file.
Preset load_extension(const std::string& spec) {
  std::ifstream probe(spec);
  if (!probe) return preset(spec);
  auto loaded = extension_from_json(read_json_file(spec));
  Subgroup h = loaded.h ? *loaded.h : subgroup_generated(loaded.ext.gab(), std::vector<AbElem>{});
  return {spec, loaded.ext, h};
}

void print_criterion(const CriterionReport& r, const std::string& kind, const Globals& g) {
  if (g.format == "json") {
    std::cout << dump(criterion_json(r));
  } else if (g.format == "csv") {
    std::cout << survey_csv({survey_row(r.d, kind == "c4" ? Criterion::C4 : Criterion::H8, false)});
  } else {
    std::cout << kind << " d=" << r.d << " omega=" << omega(r.d) << "\nexists: " << (r.exists ? "true" : "false")
              << "\n";
    for (const auto& w : r.witnesses) {
      std::cout << "witness";
      for (i64 p : w.parts) std::cout << " " << p;
      std::cout << ":";
      for (const auto& c : w.symbol_checks) std::cout << " (" << c.top << "/" << c.prime << ")=" << c.value;
      std::cout << "\n";
    }
    std::cout << "count per witness: " << r.count_per_witness << "\n";
  }
}

void require_not_csv(const Globals& g) {
  if (g.format == "csv") throw InvalidInput("--format csv is only available for c4, h8 and survey");
}

int run_selftest_cmd(const std::vector<std::string>& fixtures) {
  const auto checks = run_selftest(fixtures);
  const SelfCheck* first_fail = nullptr;
  for (const auto& c : checks) {
    std::cout << (c.ok ? "ok   " : "FAIL ") << c.name;
    if (!c.ok) std::cout << ": " << c.detail;
    std::cout << "\n";
    if (!c.ok && !first_fail) first_fail = &c;
  }
  if (first_fail) {
    std::cerr << "selftest failed: " << first_fail->name << ": " << first_fail->detail << "\n";
    return 1;
  }
  std::cout << "selftest passed (" << checks.size() << " checks)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unramified central embedding problems over abelian number fields"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-disc", g.max_disc, "Discriminant magnitude bound (overrides LEMFACT_MAX_DISC)")
      ->check(CLI::PositiveNumber);

  i64 d = 0;
  auto* c4 = app.add_subcommand("c4", "Unramified C4 extensions of Q(sqrt d)");
  c4->add_option("d", d, "Fundamental discriminant")->required();
  auto* h8 = app.add_subcommand("h8", "Unramified H8 extensions of Q(sqrt d)");
  h8->add_option("d", d, "Fundamental discriminant")->required();

  i64 hl = 0, hp = 0, hq = 0, hr = 0;
  auto* heis = app.add_subcommand("heisenberg", "Heisenberg extensions of a cyclic degree-l field");
  heis->add_option("l", hl)->required();
  heis->add_option("p", hp)->required();
  heis->add_option("q", hq)->required();
  heis->add_option("r", hr)->required();

  std::string ext_spec, kdata_path;
  bool check_infinity = false;
  auto* cls = app.add_subcommand("classify", "Decide and count unramified (G, G')-extensions");
  cls->add_option("--ext", ext_spec, "Preset (C4_D4, H8_pair, heisenberg:<l>, split:<Gab>/<A>) or JSON file")
      ->required();
  cls->add_option("--kdata", kdata_path, "Base field JSON file")->required();
  cls->add_flag("--check-infinity", check_infinity, "Also require the sign condition at infinity");

  std::string range, criterion = "c4", out_path;
  bool with_oracle = false;
  auto* survey = app.add_subcommand("survey", "Sweep a criterion over fundamental discriminants");
  survey->add_option("--range", range, "a..b (inclusive)")->required();
  survey->add_option("--criterion", criterion)->check(CLI::IsMember({"c4", "h8"}));
  survey->add_flag("--oracle", with_oracle, "Add class group and Redei ranks");
  survey->add_option("--out", out_path, "Output file (stdout when omitted)");

  std::string oracle_kind;
  auto* orc = app.add_subcommand("oracle", "Class group oracle");
  orc->add_option("kind", oracle_kind)->required()->check(CLI::IsMember({"classgroup", "fourrank", "tworank", "redei"}));
  orc->add_option("d", d)->required();

  std::vector<std::string> fixtures;
  auto* self = app.add_subcommand("selftest", "Run the invariant suite at reduced scale");
  self->add_option("--fixture", fixtures, "Extension JSON that must be a valid cocycle");

  auto* exp = app.add_subcommand("export", "Print a preset or extension file as canonical extension JSON");
  exp->add_option("--ext", ext_spec)->required();

  std::vector<i64> kprimes;
  std::optional<i64> kdisc;
  auto* kd = app.add_subcommand("kdata", "Base field JSON for a preset: every prime gets the same inertia coset");
  kd->add_option("--ext", ext_spec)->required();
  kd->add_option("--disc", kdisc, "Odd fundamental discriminant (quadratic K)");
  kd->add_option("--primes", kprimes, "Ramified primes")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c4 || *h8) {
      check_disc(d, g);
      print_criterion(*c4 ? c4_criterion(d) : h8_criterion(d), *c4 ? "c4" : "h8", g);
    } else if (*heis) {
      require_not_csv(g);
      const auto r = heisenberg_criterion(hl, hp, hq, hr);
      if (g.format == "json") {
        std::cout << dump(heisenberg_json(r));
      } else {
        std::cout << "heisenberg l=" << r.l << " p,q,r=" << hp << "," << hq << "," << hr
                  << "\nexists: " << (r.exists ? "true" : "false") << "\n";
        for (std::size_t i = 0; i < 6; ++i) std::cout << "chi(" << heisenberg_char_names()[i] << ")=" << r.chars[i] << "\n";
        for (const auto& s : r.solutions) std::cout << "(A,B,C)=(" << s[0] << "," << s[1] << "," << s[2] << ")\n";
        std::cout << "count: " << r.count << "\n";
      }
    } else if (*cls) {
      require_not_csv(g);
      const auto p = load_extension(ext_spec);
      const auto k = base_field_from_json(p.ext, read_json_file(kdata_path), p.h);
      i64 prod = 1;
      for (const auto& bp : k.primes) prod = checked::mul(prod, bp.q);
      check_disc(prod, g);
      const auto rep = classify(p.ext, k.h, k, check_infinity, g.jobs);
      if (g.format == "json") {
        std::cout << dump(classify_json(rep));
      } else {
        std::cout << "exists: " << (rep.exists ? "true" : "false") << "\nadmissible: " << (rep.admissible ? "true" : "false")
                  << " (" << rep.admissibility << ")\nassignments examined: " << rep.assignments_examined << "\n";
        for (const auto& w : rep.witnesses) {
          std::cout << "witness " << to_string(w.assignment) << " disc=" << to_string(w.factorization.disc);
          if (w.count_per_class)
            std::cout << " count_per_class=" << *w.count_per_class << " classes=" << w.classes;
          else
            std::cout << " count unavailable: " << w.count_error;
          std::cout << "\n";
        }
        for (const auto& f : rep.findings) std::cout << "finding: " << f << "\n";
      }
    } else if (*survey) {
      const auto [lo, hi] = parse_range(range);
      const auto rows = run_survey(lo, hi, criterion == "c4" ? Criterion::C4 : Criterion::H8, with_oracle, g.jobs,
                                   disc_bound(g));
      const std::string text = g.format == "json" ? dump(survey_json(rows)) : survey_csv(rows);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        if (!out) throw InvalidInput("cannot write " + out_path);
        out << text;
      }
    } else if (*orc) {
      require_not_csv(g);
      check_disc(d, g);
      json out;
      if (oracle_kind == "classgroup") {
        const auto cg = class_group_structure(d);
        if (g.format == "text") {
          std::cout << "d=" << d << " h=" << cg.h() << " Cl=" << to_string(cg.structure) << "\n";
          return 0;
        }
        out = class_group_json(cg);
      } else if (oracle_kind == "fourrank") {
        out = {{"d", d}, {"four_rank", four_rank(d)}};
      } else if (oracle_kind == "tworank") {
        out = {{"d", d}, {"two_rank", two_rank(d)}};
      } else {
        out = {{"d", d}, {"redei_rank", redei_rank(d)}};
      }
      if (g.format == "text") {
        for (const auto& [key, v] : out.items()) std::cout << key << "=" << v.dump() << "\n";
      } else {
        std::cout << dump(out);
      }
    } else if (*self) {
      return run_selftest_cmd(fixtures);
    } else if (*exp) {
      const auto p = load_extension(ext_spec);
      std::cout << dump(extension_to_json(p.ext, p.h));
    } else if (*kd) {
      const auto p = load_extension(ext_spec);
      if (kdisc && !kprimes.empty()) throw InvalidInput("give either --disc or --primes");
      if (kdisc) check_disc(*kdisc, g);
      const auto k = kdisc ? quadratic_base_field(p, *kdisc) : uniform_base_field(p, kprimes);
      validate_base_field(p.ext, k);
      std::cout << dump(base_field_to_json(k));
    }
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const json::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
