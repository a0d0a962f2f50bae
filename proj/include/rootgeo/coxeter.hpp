#pragma once
// Finite Coxeter systems of types A, B, D, E6, E7 (E8 behind an opt-in
// flag), with Bourbaki node labelling.  Group elements are stored as
// integer matrices of the reflection representation in the simple-root
// basis: this representation is faithful, so the matrix is a canonical
// form and equality is a byte compare.  Lengths are inversion counts
// over the positive roots; reduced words are recovered greedily
// (least left descent first, which yields the lex-minimal word).

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace rootgeo {

constexpr int COX_MAX_RANK = 8;

enum class CoxFamily : uint8_t { A, B, D, E };

using NodePerm = std::array<uint8_t, COX_MAX_RANK>;  // 0-based

struct DiagramAutomorphism {
  NodePerm perm{};
  int rank = 0;
  bool is_identity() const {
    for (int i = 0; i < rank; ++i)
      if (perm[i] != i) return false;
    return true;
  }
  bool operator==(const DiagramAutomorphism& o) const {
    if (rank != o.rank) return false;
    for (int i = 0; i < rank; ++i)
      if (perm[i] != o.perm[i]) return false;
    return true;
  }
  DiagramAutomorphism compose(const DiagramAutomorphism& o) const;  // this after o
  std::string str() const;  // cycle-ish listing, 1-based
};

struct WMat {
  std::array<int8_t, COX_MAX_RANK * COX_MAX_RANK> v{};
  bool operator==(const WMat& o) const { return v == o.v; }
  int8_t& at(int i, int j) { return v[i * COX_MAX_RANK + j]; }
  int8_t at(int i, int j) const { return v[i * COX_MAX_RANK + j]; }
};

struct WMatHash {
  size_t operator()(const WMat& m) const {
    uint64_t h = 1469598103934665603ull;
    for (int8_t x : m.v) {
      h ^= (uint8_t)x;
      h *= 1099511628211ull;
    }
    return (size_t)h;
  }
};

struct CoxeterSystem;

struct WeylElement {
  WMat mat;
  const CoxeterSystem* sys = nullptr;

  bool operator==(const WeylElement& o) const { return mat == o.mat; }
  bool operator<(const WeylElement& o) const { return mat.v < o.mat.v; }
};

struct CoxeterSystem {
  CoxFamily family = CoxFamily::A;
  int rank = 1;
  std::string label;                                                   // "A3", "E6", ...
  std::array<std::array<uint8_t, COX_MAX_RANK>, COX_MAX_RANK> cox{};   // m_ij
  std::array<std::array<int8_t, COX_MAX_RANK>, COX_MAX_RANK> cartan{};
  std::vector<WMat> gens;
  std::vector<std::array<int8_t, COX_MAX_RANK>> pos_roots;
  std::vector<DiagramAutomorphism> diagram_autos;  // closed under composition, id first
  uint64_t order = 0;                              // |W|

  WeylElement identity() const;
  WeylElement gen(int i) const;  // 0-based
};

// type_label: "A1".."A7", "B2".."B6", "D4".."D6", "E6", "E7", "E8" (E8 needs allow_e8)
std::shared_ptr<const CoxeterSystem> build_coxeter(const std::string& type_label,
                                                   bool allow_e8 = false);

WeylElement multiply(const WeylElement& w, const WeylElement& v);
WeylElement inverse(const WeylElement& w);
int length(const WeylElement& w);
bool is_identity(const WeylElement& w);

WeylElement longest_element(const CoxeterSystem& sys);
DiagramAutomorphism opposition_involution(const CoxeterSystem& sys);

// w^sigma: apply the diagram automorphism letterwise (conjugation by the
// permutation of simple roots in the reflection representation).
WeylElement apply_diagram(const WeylElement& w, const DiagramAutomorphism& sigma);

std::vector<int> reduced_word(const WeylElement& w);            // 0-based letters
std::string word_str(const WeylElement& w);                     // "s1 s3 s2", "" for e
WeylElement parse_word(const CoxeterSystem& sys, const std::string& s);

// Full enumeration of W with multiplication tables; cheap for the Weyl
// groups of the desk-scale geometries (|W| <= a few thousand) and still
// feasible through E7 under the default cap.
struct WeylTable {
  std::shared_ptr<const CoxeterSystem> sys;
  std::vector<WMat> elems;
  std::unordered_map<WMat, uint32_t, WMatHash> index;
  std::vector<uint8_t> len;
  uint32_t id_e = 0, id_w0 = 0;
  // rmul[id][s] = id of w*s ; lmul[id][s] = id of s*w
  std::vector<std::array<uint32_t, COX_MAX_RANK>> rmul, lmul;

  uint32_t id_of(const WMat& m) const { return index.at(m); }
  WeylElement element(uint32_t id) const { return WeylElement{elems[id], sys.get()}; }
  size_t size() const { return elems.size(); }
};

constexpr uint64_t DEFAULT_GROUP_CAP = 3'000'000;  // covers W(E7), excludes W(E8)

uint64_t coxeter_order(const std::string& type_label);
std::shared_ptr<const WeylTable> enumerate_weyl(std::shared_ptr<const CoxeterSystem> sys,
                                                uint64_t cap = DEFAULT_GROUP_CAP);

// Partition of W into orbits of w -> g^{-1} w g^sigma (convention pinned:
// the twist acts on the right factor).
struct SigmaPartition {
  std::shared_ptr<const WeylTable> table;
  DiagramAutomorphism sigma;
  std::vector<uint32_t> class_of;            // element id -> class id
  std::vector<std::vector<uint32_t>> classes;  // class id -> element ids
};

SigmaPartition sigma_conjugacy_classes(std::shared_ptr<const WeylTable> table,
                                       const DiagramAutomorphism& sigma);
SigmaPartition sigma_conjugacy_classes(std::shared_ptr<const CoxeterSystem> sys,
                                       const DiagramAutomorphism& sigma,
                                       uint64_t cap = DEFAULT_GROUP_CAP);

bool same_class(const WeylElement& w, const WeylElement& v,
                const DiagramAutomorphism& sigma, const SigmaPartition& part);

}  // namespace rootgeo
