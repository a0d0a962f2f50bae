#pragma once
// Dense matrices over GF(q) for ambient dimensions <= 8 (rows up to 16 so
// two bases can be stacked for rank computations).  Subspaces are row
// spaces; the reduced row echelon basis is the canonical representative,
// which makes subspace equality a byte compare.

#include <array>
#include <cstdint>
#include <string>

#include "rootgeo/gf.hpp"

namespace rootgeo {

constexpr int MAT_MAX_C = 10;
constexpr int MAT_MAX_R = 20;

struct Mat {
  uint8_t r = 0, c = 0;
  std::array<uint8_t, MAT_MAX_R * MAT_MAX_C> a{};

  uint8_t& at(int i, int j) { return a[i * MAT_MAX_C + j]; }
  uint8_t at(int i, int j) const { return a[i * MAT_MAX_C + j]; }
  const uint8_t* row(int i) const { return &a[i * MAT_MAX_C]; }
  uint8_t* row(int i) { return &a[i * MAT_MAX_C]; }

  bool operator==(const Mat& o) const;
  bool operator<(const Mat& o) const;

  static Mat zero(int r, int c);
  static Mat identity(int n);

  std::string key() const;  // canonical bytes for hashing
  std::string str() const;  // "r x c: rows"
};

// allocation-free canonical key for small bases (entries < 8, r <= 6)
struct SubKey {
  std::array<uint64_t, 3> v{};
  bool operator==(const SubKey& o) const { return v == o.v; }
};

struct SubKeyHash {
  size_t operator()(const SubKey& k) const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t x : k.v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return (size_t)h;
  }
};

SubKey sub_key(const Mat& m);

using Vec = std::array<uint8_t, MAT_MAX_C>;

Mat mat_mul(const GF& F, const Mat& A, const Mat& B);
Vec vec_mul(const GF& F, const Vec& v, int n, const Mat& B);
Mat transpose(const Mat& A);
Mat frob_entrywise(const GF& F, const Mat& A, int e);

// In-place reduction to reduced row echelon form; returns rank.
// Zero rows are dropped (r becomes the rank).
int rref(const GF& F, Mat& A);
int rank_of(const GF& F, Mat A);

Mat stack(const Mat& A, const Mat& B);
Mat inverse(const GF& F, const Mat& A);  // throws if singular
Mat kernel(const GF& F, const Mat& A);   // basis (RREF) of {x : x A = 0}, x row vector

bool is_invertible(const GF& F, const Mat& A);

// row space membership / containment (A, B in RREF or not)
bool in_rowspace(const GF& F, const Mat& A, const Vec& v, int c);
// as above but trusts that A is already in reduced row echelon form
bool in_rowspace_rref(const GF& F, const Mat& A, const Vec& v, int c);
// v reduced against the RREF rows of A (zero iff v in the row space)
Vec rref_reduce(const GF& F, const Mat& A, Vec v, int c);
// RREF of (rowspace A + <x>) where A is RREF and x is already reduced
// against A and nonzero
Mat rref_extend(const GF& F, const Mat& A, Vec x, int c);
bool contains(const GF& F, const Mat& big, const Mat& small);

// dim(rowspace A  ∩  rowspace B)
int meet_dim(const GF& F, const Mat& A, const Mat& B);
Mat meet(const GF& F, const Mat& A, const Mat& B);
Mat span_of(const GF& F, const Mat& A, const Mat& B);  // RREF of stacked

}  // namespace rootgeo
