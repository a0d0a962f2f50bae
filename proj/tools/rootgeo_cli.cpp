// rootgeo: config-driven harness for building finite models of spherical
// buildings, computing displacement spectra and root-point position
// profiles of their automorphisms, and running the batch verifications.
//
// Subcommands: spectrum, theorem-a, zoo, classify-22p, diagram, oracle-check.
// Exit status: 0 all checks pass, 1 verification failure, 2 usage/budget error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>

#include "rootgeo/config.hpp"
#include "rootgeo/report.hpp"
#include "rootgeo/spectra.hpp"

using namespace rootgeo;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string mode = "exhaustive";
  uint64_t samples = 20000;
  uint64_t seed = 1;
  std::string json_path;
  uint64_t cap_chambers = DEFAULT_CHAMBER_CAP;
  uint64_t cap_group = DEFAULT_AUTO_CAP;
  std::string kind, auto_kind;
  int n = -1, q = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "key = value run configuration file");
  cmd->add_option("--mode", o.mode, "exhaustive|sample")->check(CLI::IsMember({"exhaustive", "sample"}));
  cmd->add_option("--samples", o.samples, "sample count for sampled spectra");
  cmd->add_option("--seed", o.seed, "PRNG seed");
  cmd->add_option("--json", o.json_path, "write the machine-readable report here");
  cmd->add_option("--cap-chambers", o.cap_chambers, "chamber enumeration budget");
  cmd->add_option("--cap-group", o.cap_group, "automorphism enumeration budget");
  cmd->add_option("--kind", o.kind, "geometry kind (overrides config)");
  cmd->add_option("--n", o.n, "geometry parameter n (overrides config)");
  cmd->add_option("--q", o.q, "field order (overrides config)");
  cmd->add_option("--auto", o.auto_kind, "automorphism constructor (overrides config)");
}

RunConfig effective_config(const CommonOpts& o) {
  RunConfig c;
  if (!o.config_path.empty()) c = RunConfig::from_file(o.config_path);
  if (!o.kind.empty()) c.kv["kind"] = o.kind;
  if (o.n >= 0) c.kv["n"] = std::to_string(o.n);
  if (o.q >= 0) c.kv["q"] = std::to_string(o.q);
  if (!o.auto_kind.empty()) c.kv["auto.kind"] = o.auto_kind;
  if (!c.kv.count("auto.seed")) c.kv["auto.seed"] = std::to_string(o.seed);
  return c;
}

SpectrumMode mode_of(const CommonOpts& o, const SpectraEngine& eng) {
  SpectrumMode m;
  m.exhaustive = (o.mode == "exhaustive") && eng.chambers_enumerated();
  m.samples = o.samples;
  m.seed = o.seed;
  return m;
}

void write_json(const std::string& path, const ordered_json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

int cmd_spectrum(const CommonOpts& o) {
  RunConfig c = effective_config(o);
  auto g = geometry_from_config(c);
  SpectraEngine eng(g, o.cap_chambers);
  Automorphism th = automorphism_from_config(c, g);
  SpectrumMode mode = mode_of(o, eng);
  if (o.mode == "exhaustive" && !eng.chambers_enumerated()) {
    std::cerr << "spectrum: chamber budget exceeded (" << g->chamber_count_formula() << " > "
              << o.cap_chambers << "); rerun with --mode sample or a larger --cap-chambers\n";
    return 2;
  }
  DisplacementReport r =
      displacement_report(eng, th, mode, true, c.get("auto.kind", "identity"));
  std::cout << report_text(eng, r);
  ordered_json j = report_json(eng, r);
  if (c.has("checks")) {
    std::string checks = c.get("checks");
    if (checks.find("int-k") != std::string::npos && g->kind != GeomKind::Projective) {
      auto k = check_int_k(eng, th);
      j["int_k"] = k ? json(*k) : json(nullptr);
      std::cout << "int_k: " << (k ? std::to_string(*k) : "none") << "\n";
    }
    if (checks.find("classify-22p") != std::string::npos) {
      Classify22 cls = classify_22prime(eng, th);
      j["classify_22p"] = {{"kangaroo22", cls.kangaroo22},
                           {"verdict", cls.verdict},
                           {"sides_agree", cls.sides_agree}};
      std::cout << "classify_22p: " << cls.verdict << (cls.sides_agree ? "" : " (DISAGREE)")
                << "\n";
    }
  }
  write_json(o.json_path, j);
  return 0;
}

int cmd_diagram(const CommonOpts& o) {
  RunConfig c = effective_config(o);
  auto g = geometry_from_config(c);
  SpectraEngine eng(g, o.cap_chambers);
  Automorphism th = automorphism_from_config(c, g);
  DiagramSymbol fix = compute_diagram(eng, th, DiagramMode::Fix);
  DiagramSymbol opp = compute_diagram(eng, th, DiagramMode::Opposition);
  std::cout << "fix_diagram: " << fix.render() << (fix.partial() ? " (partial)" : "") << "\n";
  std::cout << "opposition_diagram: " << opp.render() << (opp.partial() ? " (partial)" : "")
            << "\n";
  ordered_json j;
  j["fix_diagram"] = fix.render();
  j["opposition_diagram"] = opp.render();
  j["table2_pair_ok"] = table2_pair_ok(fix, opp);
  write_json(o.json_path, j);
  return 0;
}

int cmd_zoo(const CommonOpts& o, const std::string& expected_path, bool quick,
            const std::string& regen_path) {
  json expected = json::object({{"rows", json::array()}});
  if (!expected_path.empty()) {
    std::ifstream in(expected_path);
    if (!in) {
      std::cerr << "zoo: cannot open expected table " << expected_path << "\n";
      return 2;
    }
    in >> expected;
  }
  std::vector<std::string> mismatches;
  auto rows = run_zoo(expected, quick, &mismatches);
  for (const auto& r : rows) {
    std::cout << (r.ok ? "OK   " : "FAIL ") << r.constructor_name << " @ " << r.geometry
              << " | positions {" << r.positions << "} | uniclass "
              << (r.uniclass ? "true" : "false") << (r.exhaustive ? "" : " (provisional)")
              << " | fix " << r.fix << " | opp " << r.opp << " | " << r.substructure << "\n";
    if (!r.note.empty()) std::cout << "     " << r.note << "\n";
  }
  if (!regen_path.empty()) {
    ordered_json out;
    out["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json e;
      e["constructor"] = r.constructor_name;
      e["geometry"] = r.geometry;
      e["positions"] = r.positions;
      e["uniclass"] = r.uniclass;
      e["fix"] = r.fix;
      e["opp"] = r.opp;
      e["substructure"] = r.substructure;
      out["rows"].push_back(e);
    }
    write_json(regen_path, out);
  }
  write_json(o.json_path, zoo_rows_json(rows));
  if (!mismatches.empty()) {
    std::cerr << mismatches.size() << " zoo mismatches\n";
    return 1;
  }
  return 0;
}

int cmd_theorem_a(const CommonOpts& o, const std::vector<std::string>& geoms) {
  int status = 0;
  ordered_json out = ordered_json::array();
  for (const std::string& spec : geoms) {
    TheoremASummary sum;
    if (spec == "pg22" || spec == "pg32") {
      auto g = build_projective(spec == "pg22" ? 2 : 3, 2);
      SpectraEngine eng(g, o.cap_chambers);
      sum = theorem_a_full_sweep(eng, true, o.cap_group);
    } else if (spec == "d4q2") {
      auto g = build_hyperbolic_quadric(4, 2);
      SpectraEngine eng(g, o.cap_chambers);
      sum = theorem_a_sampled_sweep(eng, o.samples, o.seed);
    } else if (spec == "b3q2" || spec == "b3q3") {
      auto g = build_parabolic_quadric(3, spec == "b3q2" ? 2 : 3);
      SpectraEngine eng(g, o.cap_chambers);
      sum = counterexample_run(eng);
    } else {
      std::cerr << "theorem-a: unknown geometry tag " << spec
                << " (use pg22, pg32, d4q2, b3q2, b3q3)\n";
      return 2;
    }
    bool ok = sum.passed();
    std::cout << sum.geometry << ": tested " << sum.tested << ", uniclass " << sum.uniclass_count
              << ", {1,2'}-kangaroo " << sum.kangaroo_count << ", violations " << sum.violations
              << (sum.expect_violation ? " (expected on this non-simply-laced model)" : "")
              << " -> "
              << (sum.expect_violation ? (ok ? "VIOLATION (expected)" : "MISSING VIOLATION")
                                       : (ok ? "BICONDITIONAL_OK" : "VIOLATION"))
              << "\n";
    if (sum.table2_checked)
      std::cout << "  diagram pairs checked " << sum.table2_checked << ", mismatches "
                << sum.table2_mismatches << "\n";
    for (const auto& row : sum.violating)
      std::cout << "  violating: " << row.label << " uniclass=" << row.uniclass
                << " kangaroo12=" << row.kangaroo12 << "\n";
    ordered_json j;
    j["geometry"] = sum.geometry;
    j["tested"] = sum.tested;
    j["uniclass"] = sum.uniclass_count;
    j["kangaroo12"] = sum.kangaroo_count;
    j["violations"] = sum.violations;
    j["expected_violation"] = sum.expect_violation;
    j["passed"] = ok;
    out.push_back(j);
    if (!ok) status = 1;
  }
  write_json(o.json_path, out);
  return status;
}

int cmd_classify(const CommonOpts& o, bool sweep) {
  RunConfig c = effective_config(o);
  auto g = geometry_from_config(c);
  SpectraEngine eng(g, o.cap_chambers);
  if (!sweep) {
    Automorphism th = automorphism_from_config(c, g);
    Classify22 cls = classify_22prime(eng, th);
    std::cout << "kangaroo22: " << (cls.kangaroo22 ? "true" : "false") << "\n";
    std::cout << "verdict: " << cls.verdict << "\n";
    std::cout << "sides_agree: " << (cls.sides_agree ? "true" : "false") << "\n";
    ordered_json j;
    j["kangaroo22"] = cls.kangaroo22;
    j["verdict"] = cls.verdict;
    j["sides_agree"] = cls.sides_agree;
    write_json(o.json_path, j);
    return cls.sides_agree ? 0 : 1;
  }
  if (g->kind != GeomKind::Projective) {
    std::cerr << "classify-22p --sweep: projective geometries only\n";
    return 2;
  }
  uint64_t coll = 0, coll_kang = 0, coll_central = 0, coll_baer = 0, coll_trivial = 0;
  uint64_t dual = 0, dual_kang = 0, dual_aniso = 0;
  uint64_t disagreements = 0;
  enumerate_automorphism_group(
      g,
      [&](const Automorphism& th) {
        Classify22 cls = classify_22prime(eng, th);
        if (!cls.sides_agree) ++disagreements;
        if (!th.duality) {
          ++coll;
          if (cls.kangaroo22) {
            ++coll_kang;
            if (cls.verdict == "Central") ++coll_central;
            if (cls.verdict == "Baer") ++coll_baer;
            if (cls.verdict == "Trivial") ++coll_trivial;
          }
        } else {
          ++dual;
          if (cls.kangaroo22) {
            ++dual_kang;
            if (cls.verdict == "Anisotropic") ++dual_aniso;
          }
        }
      },
      o.cap_group);
  std::cout << "collineations " << coll << ": {2,2'}-kangaroos " << coll_kang << " (central "
            << coll_central << ", baer " << coll_baer << ", trivial " << coll_trivial << ")\n";
  std::cout << "dualities " << dual << ": {2,2'}-kangaroos " << dual_kang << " (anisotropic "
            << dual_aniso << ")\n";
  std::cout << "disagreements " << disagreements << "\n";
  ordered_json j;
  j["collineations"] = coll;
  j["kangaroo22_collineations"] = coll_kang;
  j["central"] = coll_central;
  j["baer"] = coll_baer;
  j["trivial"] = coll_trivial;
  j["dualities"] = dual;
  j["kangaroo22_dualities"] = dual_kang;
  j["anisotropic_dualities"] = dual_aniso;
  j["disagreements"] = disagreements;
  write_json(o.json_path, j);
  return disagreements == 0 ? 0 : 1;
}

int cmd_oracle_check(const CommonOpts& o, uint64_t pairs) {
  RunConfig c = effective_config(o);
  auto g = geometry_from_config(c);
  SpectraEngine eng(g, o.cap_chambers);
  if (!eng.chambers_enumerated()) {
    std::cerr << "oracle-check: needs enumerated chambers (budget "
              << g->chamber_count_formula() << " > " << o.cap_chambers << ")\n";
    return 2;
  }
  const auto& ch = g->chambers;
  uint64_t checked = 0, mismatched = 0;
  if (ch.size() <= 400) {
    for (uint32_t i = 0; i < ch.size(); ++i) {
      auto delta = eng.bfs_delta_from(i);
      for (uint32_t j = 0; j < ch.size(); ++j) {
        ++checked;
        if (eng.rel_pos_id(ch[i], ch[j]) != delta[j]) ++mismatched;
      }
    }
  } else {
    std::mt19937_64 rng(o.seed);
    uint64_t sources = std::max<uint64_t>(1, pairs / 100);
    uint64_t per_source = (pairs + sources - 1) / sources;
    for (uint64_t s = 0; s < sources && checked < pairs; ++s) {
      uint32_t i = (uint32_t)(rng() % ch.size());
      auto delta = eng.bfs_delta_from(i);
      for (uint64_t t = 0; t < per_source && checked < pairs; ++t) {
        uint32_t j = (uint32_t)(rng() % ch.size());
        ++checked;
        if (eng.rel_pos_id(ch[i], ch[j]) != delta[j]) ++mismatched;
      }
    }
  }
  std::cout << "pairs checked: " << checked << ", mismatches: " << mismatched << "\n";
  ordered_json j;
  j["pairs"] = checked;
  j["mismatches"] = mismatched;
  write_json(o.json_path, j);
  return mismatched == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite building models, displacement spectra, verification sweeps"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string expected_path = "data/zoo_expected.json";
  std::string regen_path;
  bool quick = false, sweep = false;
  std::vector<std::string> geoms = {"pg22", "pg32", "d4q2", "b3q2", "b3q3"};
  uint64_t pairs = 10000;

  auto* spectrum = app.add_subcommand("spectrum", "displacement report for one automorphism");
  add_common(spectrum, o);
  auto* theorem = app.add_subcommand("theorem-a", "uniclass <=> {1,2'}-kangaroo sweeps");
  add_common(theorem, o);
  theorem->add_option("--geometry", geoms, "pg22 pg32 d4q2 b3q2 b3q3");
  auto* zoo = app.add_subcommand("zoo", "run every constructor against its expected row");
  add_common(zoo, o);
  zoo->add_option("--expected", expected_path, "expected-row table (json)");
  zoo->add_flag("--quick", quick, "skip the heavy geometries");
  zoo->add_option("--regen", regen_path, "write the computed rows as a fresh table");
  auto* classify = app.add_subcommand("classify-22p", "{2,2'}-kangaroo classification");
  add_common(classify, o);
  classify->add_flag("--sweep", sweep, "classify the full automorphism group");
  auto* diagram = app.add_subcommand("diagram", "fix and opposition diagrams");
  add_common(diagram, o);
  auto* oracle = app.add_subcommand("oracle-check", "dimension-table vs BFS relative position");
  add_common(oracle, o);
  oracle->add_option("--pairs", pairs, "pair count for large chamber systems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return cmd_spectrum(o);
    if (theorem->parsed()) return cmd_theorem_a(o, geoms);
    if (zoo->parsed()) return cmd_zoo(o, expected_path, quick, regen_path);
    if (classify->parsed()) return cmd_classify(o, sweep);
    if (diagram->parsed()) return cmd_diagram(o);
    if (oracle->parsed()) return cmd_oracle_check(o, pairs);
  } catch (const std::length_error& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
