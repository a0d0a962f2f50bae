#pragma once
// Report rendering (text and JSON), the constructor-zoo conformance table,
// and the batch verification sweeps.

#include <nlohmann/json_fwd.hpp>

#include "rootgeo/spectra.hpp"

namespace rootgeo {

std::string report_text(const SpectraEngine& eng, const DisplacementReport& r);
nlohmann::ordered_json report_json(const SpectraEngine& eng, const DisplacementReport& r);

std::string positions_attained(const PositionHistogram& h);  // e.g. "0 2"

// ---- zoo ---------------------------------------------------------------------
struct ZooRow {
  std::string constructor_name;
  std::string geometry;
  std::string positions;  // attained positions
  bool uniclass = false;
  bool exhaustive = true;
  std::string fix, opp;
  std::string substructure;
  bool ok = true;
  std::string note;
};

// builds every constructor on its default geometry and checks the produced
// row against the expected table (loaded from a data file)
std::vector<ZooRow> run_zoo(const nlohmann::json& expected, bool quick,
                            std::vector<std::string>* mismatches);
nlohmann::ordered_json zoo_rows_json(const std::vector<ZooRow>& rows);

// ---- theorem A sweeps -----------------------------------------------------------
struct TheoremARow {
  std::string label;
  bool uniclass = false;
  bool provisional = false;  // sampled spectrum
  bool kangaroo12 = false;
  bool ok = false;  // biconditional holds
};

struct TheoremASummary {
  std::string geometry;
  uint64_t tested = 0;
  uint64_t uniclass_count = 0;
  uint64_t kangaroo_count = 0;
  uint64_t violations = 0;
  bool expect_violation = false;  // the non-simply-laced counterexample runs
  std::vector<TheoremARow> violating;
  uint64_t table2_checked = 0;
  uint64_t table2_mismatches = 0;
  bool passed() const {
    return expect_violation ? violations > 0 : (violations == 0 && table2_mismatches == 0);
  }
};

// exhaustive sweep over the full automorphism group (projective kinds);
// with_table2 also computes fix/opposition diagrams of every uniclass
// automorphism and checks the duality pairing
TheoremASummary theorem_a_full_sweep(const SpectraEngine& eng, bool with_table2,
                                     uint64_t group_cap = DEFAULT_AUTO_CAP,
                                     bool full_spectra = false);

// zoo constructors + N pseudorandom automorphisms (quadric kinds)
TheoremASummary theorem_a_sampled_sweep(const SpectraEngine& eng, uint64_t samples, uint64_t seed);

// the two displayed counterexample automorphisms on the parabolic quadric:
// a {1,2',3}-kangaroo whose spectrum still meets >= 2 classes
TheoremASummary counterexample_run(const SpectraEngine& eng);

}  // namespace rootgeo
