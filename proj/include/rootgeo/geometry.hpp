#pragma once
// Finite models of the buildings: PG(n,q), hyperbolic quadrics (type D_n)
// and parabolic quadrics (type B_n), with exhaustive enumeration of the
// (singular) subspaces, containment incidence, and chambers (maximal
// flags; oriflamme convention for the hyperbolic kind).
//
// A geometry is immutable once built and safe to share between threads,
// with one caveat: the chamber list is enumerated lazily, so call
// enumerate_chambers_capped() once before any concurrent use.
//
// Coordinates follow the fixed bases
//   hyperbolic:  [x_{-n} .. x_{-1} x_1 .. x_n],        Q = sum x_{-i} x_i
//   parabolic:   [x_{-n} .. x_{-1} x_0 x_1 .. x_n],    Q = sum x_{-i} x_i - x_0^2
// Subspaces are kept as reduced row echelon bases; object ids are dense,
// assigned per dimension in row-echelon-lexicographic order.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "rootgeo/coxeter.hpp"
#include "rootgeo/gf.hpp"
#include "rootgeo/mat.hpp"

namespace rootgeo {

enum class GeomKind : uint8_t { Projective, HyperbolicQuadric, ParabolicQuadric };

std::string kind_name(GeomKind k);

struct FieldSpec {
  int p = 2, k = 1, q = 2;
};

struct BitVec {
  std::vector<uint64_t> w;
  explicit BitVec(size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(size_t i) { w[i >> 6] |= 1ull << (i & 63); }
  bool test(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  size_t count() const;
  bool subset_of(const BitVec& o) const;
};

using ObjId = uint32_t;
constexpr ObjId NO_OBJ = UINT32_MAX;

// a chamber is one object id per diagram node (slot); for the hyperbolic
// kind slots 0..n-3 are the dims 1..n-2 and the last two slots hold one
// maximal of each class
struct Chamber {
  std::array<ObjId, 6> slot{NO_OBJ, NO_OBJ, NO_OBJ, NO_OBJ, NO_OBJ, NO_OBJ};
  bool operator==(const Chamber& o) const { return slot == o.slot; }
};

struct ChamberHash {
  size_t operator()(const Chamber& c) const {
    uint64_t h = 1469598103934665603ull;
    for (ObjId x : c.slot) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return (size_t)h;
  }
};

constexpr uint64_t DEFAULT_CHAMBER_CAP = 100000;
constexpr int DEFAULT_Q_CAP = 5;

struct Geometry {
  GeomKind kind;
  int n = 0;  // projective dimension (Projective) or polar rank (quadrics)
  FieldSpec field;
  const GF* F = nullptr;
  int vdim = 0;
  Mat qform;  // upper-triangular coefficients of Q (quadric kinds)
  Mat gram;   // associated bilinear form
  std::shared_ptr<const CoxeterSystem> cox;

  int max_obj_dim = 0;  // vector dimension of the largest stored subspaces
  std::vector<Mat> objs;
  std::vector<uint8_t> obj_dim;
  std::vector<ObjId> dim_begin;  // size max_obj_dim+2
  std::unordered_map<SubKey, ObjId, SubKeyHash> obj_index;
  std::vector<Mat> perp_of;                  // quadric kinds: U^perp (RREF)
  std::vector<BitVec> pts_in;                // per object: contained point ids
  std::vector<std::vector<ObjId>> children;  // per object: dim+1 objects through it
  std::vector<std::vector<ObjId>> faces;     // per object: dim-1 objects inside it
  std::vector<int8_t> max_class;             // hyperbolic maximals: 0/1, else -1

  int num_slots = 0;
  mutable std::vector<Chamber> chambers;  // filled by enumerate_chambers
  mutable std::unordered_map<Chamber, uint32_t, ChamberHash> chamber_index;

  // --- object access -----------------------------------------------------
  size_t num_objs() const { return objs.size(); }
  int dim_of(ObjId id) const { return obj_dim[id]; }
  const Mat& basis(ObjId id) const { return objs[id]; }
  ObjId first_of_dim(int d) const { return dim_begin[d]; }
  size_t count_of_dim(int d) const { return dim_begin[d + 1] - dim_begin[d]; }
  size_t num_points() const { return count_of_dim(1); }
  // point index <-> object id
  ObjId point_obj(size_t pid) const { return dim_begin[1] + (ObjId)pid; }
  size_t point_id(ObjId id) const { return id - dim_begin[1]; }
  ObjId lookup(const Mat& rref_basis) const;  // NO_OBJ if absent
  ObjId id_of(const Mat& basis) const;        // canonicalizes, throws if absent

  bool is_singular(const Mat& basis) const;  // totally singular (quadrics) / always (proj)
  uint8_t quad_value(const Vec& v) const;
  uint8_t bil(const Vec& a, const Vec& b) const;

  // --- named operations ---------------------------------------------------
  bool collinear(ObjId p1, ObjId p2) const;  // by convention true when equal
  Mat span(ObjId a, ObjId b) const;
  Mat meet_objs(ObjId a, ObjId b) const;
  Mat perp(ObjId a) const;

  // chamber slots: vector dims per slot (quadric maximals both live at dim n)
  int slot_dim(int s) const;
  const std::vector<Chamber>& enumerate_chambers_capped(uint64_t cap = DEFAULT_CHAMBER_CAP) const;
  uint64_t chamber_count_formula() const;  // Poincare polynomial at q
  Chamber random_chamber(std::mt19937_64& rng) const;
  uint32_t chamber_id(const Chamber& c) const;
  std::string chamber_str(const Chamber& c) const;

  std::string dump() const;  // canonical textual dump of all objects
};

std::shared_ptr<const Geometry> build_projective(int n, int q, int q_cap = DEFAULT_Q_CAP);
std::shared_ptr<const Geometry> build_hyperbolic_quadric(int n, int q, int q_cap = DEFAULT_Q_CAP);
std::shared_ptr<const Geometry> build_parabolic_quadric(int n, int q, int q_cap = DEFAULT_Q_CAP);
std::shared_ptr<const Geometry> build_geometry(GeomKind kind, int n, int q,
                                               int q_cap = DEFAULT_Q_CAP);

uint64_t gaussian_binomial(int n, int k, int q);

}  // namespace rootgeo
