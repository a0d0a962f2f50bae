#pragma once
// Weyl distance of chambers, displacement spectra, uniclass / kangaroo /
// domestic / anisotropic verdicts, fix and opposition diagrams, fixed
// Weyl-substructure detection, and the related classifiers.
//
// The primary relative-position algorithm reads the (signed) permutation
// off the intersection-dimension tables of the two flags (with perps for
// the quadric kinds, oriflamme conversion for type D); the chamber-graph
// BFS is the independent oracle it is validated against.
//
// The engine keeps lazy per-chamber caches, so one engine is not safe for
// concurrent calls; spectrum sweeps parallelize over automorphisms with
// an engine per worker (the geometry itself can be shared).

#include <memory>
#include <optional>
#include <set>
#include <unordered_map>

#include "rootgeo/autos.hpp"
#include "rootgeo/coxeter.hpp"
#include "rootgeo/geometry.hpp"
#include "rootgeo/rootgeom.hpp"

namespace rootgeo {

// derived full flag of a chamber as a chain: prefix spans of r[0..j-1] are
// the flag members (type A carries one extra vector spanning the whole space)
struct ChainFlag {
  int m = 0;
  std::array<Vec, MAT_MAX_C> r{};
};

struct SpectrumMode {
  bool exhaustive = true;
  uint64_t samples = 20000;
  uint64_t seed = 1;
  std::string str() const {
    return exhaustive ? "exhaustive"
                      : "sampled(" + std::to_string(samples) + "," + std::to_string(seed) + ")";
  }
};

class SpectraEngine {
 public:
  explicit SpectraEngine(std::shared_ptr<const Geometry> g,
                         uint64_t chamber_cap = DEFAULT_CHAMBER_CAP);

  const Geometry& geom() const { return *g_; }
  std::shared_ptr<const Geometry> geom_ptr() const { return g_; }
  const WeylTable& wtable() const { return *wt_; }
  std::shared_ptr<const WeylTable> wtable_ptr() const { return wt_; }
  bool chambers_enumerated() const { return chambers_ok_; }

  uint32_t id_e() const { return wt_->id_e; }
  uint32_t id_w0() const { return wt_->id_w0; }

  // ---- relative position (dimension-table method) -------------------------
  ChainFlag chain_of_chamber(const Chamber& c) const;
  ChainFlag image_chain(const Chamber& c, const Automorphism& th, bool class_swap) const;
  uint32_t rel_pos_id(const Chamber& C, const Chamber& D) const;
  uint32_t rel_pos_id(const Chamber& C, const ChainFlag& D) const;
  WeylElement relative_position(const Chamber& C, const Chamber& D) const;

  // ---- BFS oracle ----------------------------------------------------------
  // Weyl ids of delta(src, .) for every chamber, computed purely from panel
  // adjacency and the abstract group multiplication table.
  std::vector<uint32_t> bfs_delta_from(uint32_t src_chamber) const;

  // ---- spectra ---------------------------------------------------------------
  // early_stop_classes > 0: stop as soon as the spectrum has met that many
  // sigma-classes (the verdict "not uniclass" is exact at 2)
  std::set<uint32_t> displacement_spectrum(const Automorphism& th, const SpectrumMode& mode,
                                           const DiagramAutomorphism& sigma,
                                           int early_stop_classes = 0) const;

  const SigmaPartition& sigma_partition(const DiagramAutomorphism& sigma) const;

  // ---- opposition ------------------------------------------------------------
  bool vertex_opposite(ObjId u, ObjId v) const;  // complementarity / perp predicate
  bool vertex_opposite_chamber_search(ObjId u, ObjId v) const;  // reference definition
  std::vector<uint32_t> chambers_through(ObjId v) const;

 private:
  std::shared_ptr<const Geometry> g_;
  std::shared_ptr<const WeylTable> wt_;
  bool chambers_ok_ = false;

  // root coordinate dictionary: e-coordinates of roots -> alpha-coordinates
  std::unordered_map<uint64_t, std::array<int8_t, COX_MAX_RANK>> root_by_ecoord_;
  mutable std::unordered_map<uint64_t, uint32_t> letters_to_id_;
  // per chamber: cached chain and perp insertion rows
  mutable std::vector<ChainFlag> chain_cache_;
  mutable std::vector<std::vector<Vec>> perp_rows_cache_;
  mutable std::vector<std::vector<uint32_t>> through_cache_;
  mutable std::vector<std::vector<std::pair<uint32_t, uint8_t>>> adj_;
  mutable std::unordered_map<std::string, SigmaPartition> sigma_cache_;

  uint64_t letters_of(const ChainFlag& base, const std::vector<Vec>& base_perp_rows,
                      const ChainFlag& other) const;
  std::vector<Vec> perp_rows_of_chamber(const Chamber& c) const;
  uint32_t letters_to_weyl(uint64_t packed) const;
  void ensure_adjacency() const;
};

// ---- diagrams ----------------------------------------------------------------
struct DiagramSymbol {
  std::string cox_label;
  DiagramAutomorphism phi;
  std::vector<std::vector<int>> circled;  // phi-orbits, 1-based sorted nodes
  std::vector<std::vector<int>> unknown;  // orbits skipped by the budget
  bool partial() const { return !unknown.empty(); }
  std::string render() const;  // Table-style symbol when one applies
  bool operator==(const DiagramSymbol& o) const;
};

enum class DiagramMode { Fix, Opposition };

DiagramSymbol compute_diagram(const SpectraEngine& eng, const Automorphism& th, DiagramMode mode,
                              uint64_t flag_cap = 2000000);

// Diagram duality for uniclass automorphisms: (fix, opposition) must form
// one of the published involutive pairs (the trivial identity/anisotropic
// pairs included).
bool table2_pair_ok(const DiagramSymbol& fix, const DiagramSymbol& opp);

// ---- reports -----------------------------------------------------------------
struct DisplacementReport {
  std::string geometry_label;
  std::string auto_label;
  DiagramAutomorphism sigma;
  SpectrumMode mode;
  std::vector<uint32_t> spectrum;  // sorted element ids
  std::vector<std::vector<uint32_t>> class_partition;
  size_t classes_met = 0;
  PositionHistogram histogram;
  bool uniclass = false;
  bool domestic = false;
  bool anisotropic = false;
  std::string substructure = "None";
  std::optional<DiagramSymbol> fix_diagram, opp_diagram;
};

bool is_uniclass(const DisplacementReport& r);
bool is_D_kangaroo(const DisplacementReport& r, const std::vector<MutualPosition>& D);

DisplacementReport displacement_report(const SpectraEngine& eng, const Automorphism& th,
                                       const SpectrumMode& mode, bool with_diagrams,
                                       const std::string& auto_label);

// ---- fixed structure detection ------------------------------------------------
// Reading used for ideal subspaces: "submaximal" is measured inside the
// fixed subspace; its upper residue is taken in the ambient polar space.
std::string detect_weyl_substructure(const SpectraEngine& eng, const Automorphism& th);
bool fixed_points_form_ideal_subspace(const Geometry& g, const std::vector<size_t>& fixed_pts);

std::optional<int> check_int_k(const SpectraEngine& eng, const Automorphism& th);

// ---- {2,2'} classification -----------------------------------------------------
struct Classify22 {
  bool kangaroo22 = false;  // projective: root points; polar: linewise
  std::string verdict;      // Trivial / Central / Baer / Anisotropic / OnlyLinesOpposite / None
  bool sides_agree = true;  // the two independently computed sides of the claim
};

Classify22 classify_22prime(const SpectraEngine& eng, const Automorphism& th);

}  // namespace rootgeo
