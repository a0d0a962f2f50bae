#include "rootgeo/mat.hpp"

#include <cstring>
#include <stdexcept>

namespace rootgeo {

bool Mat::operator==(const Mat& o) const {
  if (r != o.r || c != o.c) return false;
  for (int i = 0; i < r; ++i)
    if (std::memcmp(row(i), o.row(i), c) != 0) return false;
  return true;
}

bool Mat::operator<(const Mat& o) const {
  if (r != o.r) return r < o.r;
  if (c != o.c) return c < o.c;
  for (int i = 0; i < r; ++i) {
    int d = std::memcmp(row(i), o.row(i), c);
    if (d != 0) return d < 0;
  }
  return false;
}

Mat Mat::zero(int r, int c) {
  Mat m;
  m.r = (uint8_t)r;
  m.c = (uint8_t)c;
  return m;
}

Mat Mat::identity(int n) {
  Mat m = zero(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::string Mat::key() const {
  std::string s;
  s.reserve(2 + r * c);
  s.push_back((char)r);
  s.push_back((char)c);
  for (int i = 0; i < r; ++i) s.append((const char*)row(i), c);
  return s;
}

SubKey sub_key(const Mat& m) {
  if (m.r > 6) throw std::length_error("sub_key: too many rows");
  SubKey k;
  k.v[0] = (uint64_t)m.r | ((uint64_t)m.c << 5);
  int bit = 10;
  int word = 0;
  for (int i = 0; i < m.r; ++i)
    for (int j = 0; j < m.c; ++j) {
      uint8_t e = m.at(i, j);
      if (bit > 61) {
        ++word;
        bit = 0;
      }
      k.v[word] |= (uint64_t)e << bit;
      bit += 3;
    }
  return k;
}

std::string Mat::str() const {
  std::string s = std::to_string(r) + "x" + std::to_string(c) + ":";
  for (int i = 0; i < r; ++i) {
    s += " [";
    for (int j = 0; j < c; ++j) s += std::to_string((int)at(i, j)) + (j + 1 < c ? " " : "");
    s += "]";
  }
  return s;
}

Mat mat_mul(const GF& F, const Mat& A, const Mat& B) {
  if (A.c != B.r) throw std::invalid_argument("mat_mul: shape mismatch");
  Mat C = Mat::zero(A.r, B.c);
  for (int i = 0; i < A.r; ++i)
    for (int k = 0; k < A.c; ++k) {
      uint8_t aik = A.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < B.c; ++j)
        C.at(i, j) = F.add(C.at(i, j), F.mul(aik, B.at(k, j)));
    }
  return C;
}

Vec vec_mul(const GF& F, const Vec& v, int n, const Mat& B) {
  Vec w{};
  for (int k = 0; k < n; ++k) {
    if (!v[k]) continue;
    for (int j = 0; j < B.c; ++j) w[j] = F.add(w[j], F.mul(v[k], B.at(k, j)));
  }
  return w;
}

Mat transpose(const Mat& A) {
  Mat T = Mat::zero(A.c, A.r);
  for (int i = 0; i < A.r; ++i)
    for (int j = 0; j < A.c; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

Mat frob_entrywise(const GF& F, const Mat& A, int e) {
  Mat B = A;
  for (int i = 0; i < A.r; ++i)
    for (int j = 0; j < A.c; ++j) B.at(i, j) = F.frob(A.at(i, j), e);
  return B;
}

int rref(const GF& F, Mat& A) {
  int rank = 0;
  for (int col = 0; col < A.c && rank < A.r; ++col) {
    int piv = -1;
    for (int i = rank; i < A.r; ++i)
      if (A.at(i, col)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < A.c; ++j) std::swap(A.at(piv, j), A.at(rank, j));
    uint8_t iv = F.inv(A.at(rank, col));
    for (int j = 0; j < A.c; ++j) A.at(rank, j) = F.mul(A.at(rank, j), iv);
    for (int i = 0; i < A.r; ++i) {
      if (i == rank) continue;
      uint8_t f = A.at(i, col);
      if (!f) continue;
      for (int j = 0; j < A.c; ++j)
        A.at(i, j) = F.sub(A.at(i, j), F.mul(f, A.at(rank, j)));
    }
    ++rank;
  }
  for (int i = rank; i < A.r; ++i) std::memset(A.row(i), 0, A.c);
  A.r = (uint8_t)rank;
  return rank;
}

int rank_of(const GF& F, Mat A) { return rref(F, A); }

Mat stack(const Mat& A, const Mat& B) {
  if (A.c != B.c) throw std::invalid_argument("stack: width mismatch");
  if (A.r + B.r > MAT_MAX_R) throw std::length_error("stack: too many rows");
  Mat C = Mat::zero(A.r + B.r, A.c);
  for (int i = 0; i < A.r; ++i) std::memcpy(C.row(i), A.row(i), A.c);
  for (int i = 0; i < B.r; ++i) std::memcpy(C.row(A.r + i), B.row(i), A.c);
  return C;
}

Mat inverse(const GF& F, const Mat& A) {
  if (A.r != A.c) throw std::invalid_argument("inverse: not square");
  int n = A.r;
  // Gauss-Jordan on the augmented system [A | I]
  std::array<std::array<uint8_t, 2 * MAT_MAX_C>, MAT_MAX_R> M{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M[i][j] = A.at(i, j);
    M[i][n + i] = 1;
  }
  int rank = 0;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = rank; i < n; ++i)
      if (M[i][col]) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::domain_error("inverse: singular matrix");
    std::swap(M[piv], M[rank]);
    uint8_t iv = F.inv(M[rank][col]);
    for (int j = 0; j < 2 * n; ++j) M[rank][j] = F.mul(M[rank][j], iv);
    for (int i = 0; i < n; ++i) {
      if (i == rank) continue;
      uint8_t f = M[i][col];
      if (!f) continue;
      for (int j = 0; j < 2 * n; ++j) M[i][j] = F.sub(M[i][j], F.mul(f, M[rank][j]));
    }
    ++rank;
  }
  Mat R = Mat::zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R.at(i, j) = M[i][n + j];
  return R;
}

bool is_invertible(const GF& F, const Mat& A) {
  return A.r == A.c && rank_of(F, A) == A.r;
}

Mat kernel(const GF& F, const Mat& A) {
  // {x row : x A = 0} = null space of A^T acting on the left; solve via
  // RREF of A^T? Simpler: kernel of x -> xA equals kernel of A^T x^T.
  Mat T = transpose(A);  // (c x r): solve T y = 0 columnwise <=> y A = 0
  int rows = T.r, cols = T.c;
  Mat R = T;
  // Gaussian elimination tracking pivot columns of R (R: rows x cols)
  std::array<int, MAT_MAX_C> pivcol{};
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (R.at(i, col)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < cols; ++j) std::swap(R.at(piv, j), R.at(rank, j));
    uint8_t iv = F.inv(R.at(rank, col));
    for (int j = 0; j < cols; ++j) R.at(rank, j) = F.mul(R.at(rank, j), iv);
    for (int i = 0; i < rows; ++i) {
      if (i == rank) continue;
      uint8_t f = R.at(i, col);
      if (!f) continue;
      for (int j = 0; j < cols; ++j) R.at(i, j) = F.sub(R.at(i, j), F.mul(f, R.at(rank, j)));
    }
    pivcol[rank] = col;
    ++rank;
  }
  // free columns give kernel basis
  Mat K = Mat::zero(0, cols);
  for (int col = 0; col < cols; ++col) {
    bool is_piv = false;
    for (int i = 0; i < rank; ++i)
      if (pivcol[i] == col) is_piv = true;
    if (is_piv) continue;
    Vec v{};
    v[col] = 1;
    for (int i = 0; i < rank; ++i) v[pivcol[i]] = F.neg(R.at(i, col));
    K.r += 1;
    for (int j = 0; j < cols; ++j) K.at(K.r - 1, j) = v[j];
  }
  rref(F, K);
  return K;
}

Vec rref_reduce(const GF& F, const Mat& W, Vec x, int c) {
  for (int i = 0; i < W.r; ++i) {
    int p = -1;
    for (int j = 0; j < c; ++j)
      if (W.at(i, j)) {
        p = j;
        break;
      }
    if (p < 0) continue;
    uint8_t f = x[p];
    if (!f) continue;
    for (int j = 0; j < c; ++j) x[j] = F.sub(x[j], F.mul(f, W.at(i, j)));
  }
  return x;
}

bool in_rowspace_rref(const GF& F, const Mat& W, const Vec& v, int c) {
  Vec x = rref_reduce(F, W, v, c);
  for (int j = 0; j < c; ++j)
    if (x[j]) return false;
  return true;
}

Mat rref_extend(const GF& F, const Mat& A, Vec x, int c) {
  int px = -1;
  for (int j = 0; j < c; ++j)
    if (x[j]) {
      px = j;
      break;
    }
  if (px < 0) throw std::invalid_argument("rref_extend: zero extension row");
  uint8_t iv = F.inv(x[px]);
  for (int j = 0; j < c; ++j) x[j] = F.mul(iv, x[j]);
  Mat S = Mat::zero(A.r + 1, c);
  int out = 0;
  bool placed = false;
  for (int i = 0; i < A.r; ++i) {
    int p = -1;
    for (int j = 0; j < c; ++j)
      if (A.at(i, j)) {
        p = j;
        break;
      }
    if (!placed && px < p) {
      std::memcpy(S.row(out++), x.data(), c);
      placed = true;
    }
    uint8_t f = A.at(i, px);
    if (f) {
      for (int j = 0; j < c; ++j) S.at(out, j) = F.sub(A.at(i, j), F.mul(f, x[j]));
      ++out;
    } else {
      std::memcpy(S.row(out++), A.row(i), c);
    }
  }
  if (!placed) std::memcpy(S.row(out++), x.data(), c);
  return S;
}

bool in_rowspace(const GF& F, const Mat& A, const Vec& v, int c) {
  Mat W = A;
  rref(F, W);
  return in_rowspace_rref(F, W, v, c);
}

bool contains(const GF& F, const Mat& big, const Mat& small) {
  for (int i = 0; i < small.r; ++i) {
    Vec v{};
    std::memcpy(v.data(), small.row(i), small.c);
    if (!in_rowspace(F, big, v, small.c)) return false;
  }
  return true;
}

int meet_dim(const GF& F, const Mat& A, const Mat& B) {
  return A.r + B.r - rank_of(F, stack(A, B));
}

Mat span_of(const GF& F, const Mat& A, const Mat& B) {
  Mat S = stack(A, B);
  rref(F, S);
  return S;
}

Mat meet(const GF& F, const Mat& A, const Mat& B) {
  // rows x with x in A and in B: solve in terms of coefficient space.
  // Write candidate as u*A = v*B; kernel of [A; -B] stacked over coeffs.
  Mat S = Mat::zero(A.r + B.r, A.c);
  for (int i = 0; i < A.r; ++i) std::memcpy(S.row(i), A.row(i), A.c);
  for (int i = 0; i < B.r; ++i)
    for (int j = 0; j < B.c; ++j) S.at(A.r + i, j) = F.neg(B.at(i, j));
  Mat K = kernel(F, S);  // coefficients (u|v) with uA = vB
  Mat R = Mat::zero(K.r, A.c);
  for (int i = 0; i < K.r; ++i) {
    Vec u{};
    for (int t = 0; t < A.r; ++t) u[t] = K.at(i, t);
    Vec x = vec_mul(F, u, A.r, A);
    std::memcpy(R.row(i), x.data(), A.c);
  }
  rref(F, R);
  return R;
}

}  // namespace rootgeo
