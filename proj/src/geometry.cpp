#include "rootgeo/geometry.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rootgeo {

std::string kind_name(GeomKind k) {
  switch (k) {
    case GeomKind::Projective: return "projective";
    case GeomKind::HyperbolicQuadric: return "hyperbolic";
    case GeomKind::ParabolicQuadric: return "parabolic";
  }
  return "?";
}

size_t BitVec::count() const {
  size_t c = 0;
  for (uint64_t x : w) c += (size_t)__builtin_popcountll(x);
  return c;
}

bool BitVec::subset_of(const BitVec& o) const {
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] & ~o.w[i]) return false;
  return true;
}

uint64_t gaussian_binomial(int n, int k, int q) {
  // [n choose k]_q
  if (k < 0 || k > n) return 0;
  __int128 num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    __int128 qn = 1, qk = 1;
    for (int t = 0; t < n - i; ++t) qn *= q;
    for (int t = 0; t < k - i; ++t) qk *= q;
    num *= (qn - 1);
    den *= (qk - 1);
  }
  return (uint64_t)(num / den);
}

namespace {

// canonical point representative: first nonzero coordinate scaled to 1
bool canonical_point(const GF& F, Vec& v, int n) {
  int lead = -1;
  for (int i = 0; i < n; ++i)
    if (v[i]) {
      lead = i;
      break;
    }
  if (lead < 0) return false;
  uint8_t iv = F.inv(v[lead]);
  for (int i = 0; i < n; ++i) v[i] = F.mul(iv, v[i]);
  return true;
}

}  // namespace

uint8_t Geometry::quad_value(const Vec& v) const {
  uint8_t acc = 0;
  for (int i = 0; i < vdim; ++i) {
    if (!v[i]) continue;
    for (int j = i; j < vdim; ++j) {
      uint8_t c = qform.at(i, j);
      if (c) acc = F->add(acc, F->mul(c, F->mul(v[i], v[j])));
    }
  }
  return acc;
}

uint8_t Geometry::bil(const Vec& a, const Vec& b) const {
  uint8_t acc = 0;
  for (int i = 0; i < vdim; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < vdim; ++j) {
      uint8_t c = gram.at(i, j);
      if (c && b[j]) acc = F->add(acc, F->mul(a[i], F->mul(c, b[j])));
    }
  }
  return acc;
}

bool Geometry::is_singular(const Mat& b) const {
  if (kind == GeomKind::Projective) return true;
  for (int i = 0; i < b.r; ++i) {
    Vec vi{};
    std::memcpy(vi.data(), b.row(i), vdim);
    if (quad_value(vi)) return false;
    for (int j = i + 1; j < b.r; ++j) {
      Vec vj{};
      std::memcpy(vj.data(), b.row(j), vdim);
      if (bil(vi, vj)) return false;
    }
  }
  return true;
}

ObjId Geometry::lookup(const Mat& rb) const {
  auto it = obj_index.find(sub_key(rb));
  return it == obj_index.end() ? NO_OBJ : it->second;
}

ObjId Geometry::id_of(const Mat& b) const {
  Mat r = b;
  rref(*F, r);
  ObjId id = lookup(r);
  if (id == NO_OBJ) throw std::invalid_argument("geometry: subspace is not an object here");
  return id;
}

bool Geometry::collinear(ObjId p1, ObjId p2) const {
  if (dim_of(p1) != 1 || dim_of(p2) != 1)
    throw std::invalid_argument("geometry: collinear expects points");
  if (p1 == p2) return true;  // equal points count as collinear by convention
  if (kind == GeomKind::Projective) return true;
  Vec a{}, b{};
  std::memcpy(a.data(), basis(p1).row(0), vdim);
  std::memcpy(b.data(), basis(p2).row(0), vdim);
  return bil(a, b) == 0;
}

Mat Geometry::span(ObjId a, ObjId b) const { return span_of(*F, basis(a), basis(b)); }

Mat Geometry::meet_objs(ObjId a, ObjId b) const { return meet(*F, basis(a), basis(b)); }

Mat Geometry::perp(ObjId a) const {
  if (kind != GeomKind::Projective) return perp_of[a];
  return kernel(*F, transpose(basis(a)));
}

int Geometry::slot_dim(int s) const {
  if (kind == GeomKind::HyperbolicQuadric && s >= n - 2) return n;
  return s + 1;
}

uint64_t Geometry::chamber_count_formula() const {
  std::vector<int> degrees;
  if (kind == GeomKind::Projective)
    for (int d = 2; d <= n + 1; ++d) degrees.push_back(d);
  else if (kind == GeomKind::ParabolicQuadric)
    for (int d = 1; d <= n; ++d) degrees.push_back(2 * d);
  else {
    for (int d = 1; d < n; ++d) degrees.push_back(2 * d);
    degrees.push_back(n);
  }
  uint64_t c = 1;
  int q = field.q;
  for (int d : degrees) {
    uint64_t t = 0, pw = 1;
    for (int i = 0; i < d; ++i) {
      t += pw;
      pw *= q;
    }
    c *= t;  // (q^d - 1)/(q - 1)
  }
  return c;
}

const std::vector<Chamber>& Geometry::enumerate_chambers_capped(uint64_t cap) const {
  if (!chambers.empty()) return chambers;
  uint64_t expect = chamber_count_formula();
  if (expect > cap)
    throw std::length_error("geometry: chamber count " + std::to_string(expect) +
                            " exceeds budget " + std::to_string(cap));
  int flag_top = (kind == GeomKind::HyperbolicQuadric) ? n - 2 : n;
  std::vector<ObjId> partial(flag_top);
  std::vector<Chamber> out;

  // depth-first over the containment lists, in id order
  struct Frame {
    int level;
    ObjId id;
  };
  std::vector<Frame> stack;
  for (ObjId p = dim_begin[1]; p < dim_begin[2]; ++p) stack.push_back({0, p});
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty()) {
    auto [level, id] = stack.back();
    stack.pop_back();
    partial[level] = id;
    if (level + 1 < flag_top) {
      const auto& ch = children[id];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({level + 1, *it});
      continue;
    }
    if (kind != GeomKind::HyperbolicQuadric) {
      Chamber c;
      for (int s = 0; s < flag_top; ++s) c.slot[s] = partial[s];
      out.push_back(c);
    } else {
      // oriflamme: each submaximal through V_{n-2} determines one chamber
      for (ObjId sm : children[id]) {
        const auto& tops = children[sm];
        if (tops.size() != 2) throw std::logic_error("geometry: submaximal not in 2 maximals");
        Chamber c;
        for (int s = 0; s < flag_top; ++s) c.slot[s] = partial[s];
        ObjId a = tops[0], b = tops[1];
        if (max_class[a - dim_begin[n]] == max_class[b - dim_begin[n]])
          throw std::logic_error("geometry: submaximal with same-class maximals");
        if (max_class[a - dim_begin[n]] != 0) std::swap(a, b);
        c.slot[n - 2] = a;  // class 0
        c.slot[n - 1] = b;  // class 1
        out.push_back(c);
      }
    }
  }
  if ((uint64_t)out.size() != expect)
    throw std::logic_error("geometry: chamber enumeration disagrees with Poincare count (" +
                           std::to_string(out.size()) + " vs " + std::to_string(expect) + ")");
  chambers = std::move(out);
  chamber_index.reserve(chambers.size() * 2);
  for (uint32_t i = 0; i < chambers.size(); ++i) chamber_index.emplace(chambers[i], i);
  return chambers;
}

Chamber Geometry::random_chamber(std::mt19937_64& rng) const {
  // uniform: completion counts are constant at every level in these
  // flag-transitive geometries
  int flag_top = (kind == GeomKind::HyperbolicQuadric) ? n - 2 : n;
  Chamber c;
  ObjId cur = dim_begin[1] + (ObjId)(rng() % num_points());
  c.slot[0] = cur;
  for (int level = 1; level < flag_top; ++level) {
    const auto& ch = children[cur];
    cur = ch[rng() % ch.size()];
    c.slot[level] = cur;
  }
  if (kind == GeomKind::HyperbolicQuadric) {
    const auto& subs = children[cur];
    ObjId sm = subs[rng() % subs.size()];
    ObjId a = children[sm][0], b = children[sm][1];
    if (max_class[a - dim_begin[n]] != 0) std::swap(a, b);
    c.slot[n - 2] = a;
    c.slot[n - 1] = b;
  }
  return c;
}

uint32_t Geometry::chamber_id(const Chamber& c) const {
  auto it = chamber_index.find(c);
  if (it == chamber_index.end()) throw std::invalid_argument("geometry: unknown chamber");
  return it->second;
}

std::string Geometry::chamber_str(const Chamber& c) const {
  std::string s = "(";
  for (int i = 0; i < num_slots; ++i) s += (i ? " " : "") + std::to_string(c.slot[i]);
  return s + ")";
}

std::string Geometry::dump() const {
  std::ostringstream os;
  os << kind_name(kind) << " n=" << n << " q=" << field.q << "\n";
  for (int d = 1; d <= max_obj_dim; ++d) {
    os << "dim " << d << " count " << count_of_dim(d) << "\n";
    for (ObjId id = dim_begin[d]; id < dim_begin[d + 1]; ++id) os << "  " << basis(id).str() << "\n";
  }
  return os.str();
}

namespace {

std::shared_ptr<Geometry> build_core(GeomKind kind, int n, int q, int q_cap) {
  if (q > q_cap) throw std::invalid_argument("geometry: q exceeds cap " + std::to_string(q_cap));
  auto g = std::make_shared<Geometry>();
  g->kind = kind;
  g->n = n;
  g->F = &gf(q);
  g->field = {g->F->p, g->F->k, q};

  switch (kind) {
    case GeomKind::Projective:
      if (n < 2 || n > 5) throw std::invalid_argument("geometry: projective needs 2 <= n <= 5");
      g->vdim = n + 1;
      g->max_obj_dim = n;
      g->cox = build_coxeter("A" + std::to_string(n));
      break;
    case GeomKind::HyperbolicQuadric:
      if (n < 4 || n > 5) throw std::invalid_argument("geometry: hyperbolic needs 4 <= n <= 5");
      g->vdim = 2 * n;
      g->max_obj_dim = n;
      g->cox = build_coxeter("D" + std::to_string(n));
      break;
    case GeomKind::ParabolicQuadric:
      if (n != 3) throw std::invalid_argument("geometry: parabolic supports n = 3 only");
      if (q > 3) throw std::invalid_argument("geometry: parabolic supports q in {2,3}");
      g->vdim = 2 * n + 1;
      g->max_obj_dim = n;
      g->cox = build_coxeter("B" + std::to_string(n));
      break;
  }
  g->num_slots = g->n;
  if (g->vdim < 3 || g->vdim > MAT_MAX_C)
    throw std::length_error("geometry: ambient dimension out of range");

  const GF& F = *g->F;
  g->qform = Mat::zero(g->vdim, g->vdim);
  if (kind == GeomKind::HyperbolicQuadric) {
    // x_{-i} at n-i, x_i at n-1+i
    for (int i = 1; i <= n; ++i) g->qform.at(n - i, n - 1 + i) = 1;
  } else if (kind == GeomKind::ParabolicQuadric) {
    // x_{-i} at n-i, x_0 at n, x_i at n+i
    for (int i = 1; i <= n; ++i) g->qform.at(n - i, n + i) = 1;
    g->qform.at(n, n) = F.neg(1);
  }
  g->gram = Mat::zero(g->vdim, g->vdim);
  for (int i = 0; i < g->vdim; ++i)
    for (int j = 0; j < g->vdim; ++j)
      g->gram.at(i, j) = F.add(g->qform.at(i, j), g->qform.at(j, i));

  // ---- points -------------------------------------------------------------
  std::vector<Mat> pts;
  {
    Vec v{};
    // iterate all vectors lexicographically, keep canonical representatives
    uint64_t total = 1;
    for (int i = 0; i < g->vdim; ++i) total *= q;
    for (uint64_t code = 1; code < total; ++code) {
      uint64_t c = code;
      for (int i = g->vdim - 1; i >= 0; --i) {
        v[i] = (uint8_t)(c % q);
        c /= q;
      }
      int lead = 0;
      while (lead < g->vdim && !v[lead]) ++lead;
      if (v[lead] != 1) continue;  // not the canonical scaling
      if (kind != GeomKind::Projective && g->quad_value(v) != 0) continue;
      Mat m = Mat::zero(1, g->vdim);
      std::memcpy(m.row(0), v.data(), g->vdim);
      pts.push_back(m);
    }
  }

  // ---- higher dimensional (singular) subspaces ----------------------------
  // gram * p per candidate point, so the perp test is a short dot product
  std::vector<Vec> gram_p(pts.size());
  for (size_t pi = 0; pi < pts.size(); ++pi) {
    Vec pv{};
    std::memcpy(pv.data(), pts[pi].row(0), g->vdim);
    for (int i = 0; i < g->vdim; ++i) {
      uint8_t acc = 0;
      for (int j = 0; j < g->vdim; ++j)
        if (g->gram.at(i, j) && pv[j]) acc = F.add(acc, F.mul(g->gram.at(i, j), pv[j]));
      gram_p[pi][i] = acc;
    }
  }
  // GF(2) masks make the perp filter a parity test
  std::vector<uint16_t> gp_mask;
  if (q == 2) {
    gp_mask.resize(pts.size());
    for (size_t pi = 0; pi < pts.size(); ++pi) {
      uint16_t m = 0;
      for (int j = 0; j < g->vdim; ++j)
        if (gram_p[pi][j]) m |= (uint16_t)(1u << j);
      gp_mask[pi] = m;
    }
  }
  auto row_mask = [&](const uint8_t* row) {
    uint16_t m = 0;
    for (int j = 0; j < g->vdim; ++j)
      if (row[j]) m |= (uint16_t)(1u << j);
    return m;
  };
  std::vector<std::vector<Mat>> by_dim(g->max_obj_dim + 1);
  by_dim[1] = pts;
  for (int d = 1; d < g->max_obj_dim; ++d) {
    std::unordered_map<SubKey, Mat, SubKeyHash> next;
    std::array<uint16_t, MAT_MAX_C> umask{};
    for (const auto& U : by_dim[d]) {
      if (q == 2) {
        for (int i = 0; i < U.r; ++i) umask[i] = row_mask(U.row(i));
      }
      for (size_t pi = 0; pi < pts.size(); ++pi) {
        if (kind != GeomKind::Projective) {
          bool ok = true;
          if (q == 2) {
            for (int i = 0; i < U.r; ++i)
              if (__builtin_parity((unsigned)(umask[i] & gp_mask[pi]))) {
                ok = false;
                break;
              }
          } else {
            for (int i = 0; i < U.r && ok; ++i) {
              uint8_t acc = 0;
              const uint8_t* ui = U.row(i);
              for (int j = 0; j < g->vdim; ++j)
                if (ui[j] && gram_p[pi][j]) acc = F.add(acc, F.mul(ui[j], gram_p[pi][j]));
              if (acc) ok = false;
            }
          }
          if (!ok) continue;
        }
        Vec pv{};
        std::memcpy(pv.data(), pts[pi].row(0), g->vdim);
        Vec red = rref_reduce(F, U, pv, g->vdim);
        bool inside = true;
        for (int j = 0; j < g->vdim; ++j)
          if (red[j]) inside = false;
        if (inside) continue;
        Mat S = rref_extend(F, U, red, g->vdim);
        next.emplace(sub_key(S), S);
      }
    }
    by_dim[d + 1].reserve(next.size());
    for (auto& [k, m] : next) by_dim[d + 1].push_back(m);
  }

  // ids in row-echelon-lexicographic order per dimension
  g->dim_begin.assign(g->max_obj_dim + 2, 0);
  for (int d = 1; d <= g->max_obj_dim; ++d) {
    std::sort(by_dim[d].begin(), by_dim[d].end());
    g->dim_begin[d + 1] = g->dim_begin[d] + (ObjId)by_dim[d].size();
    for (auto& m : by_dim[d]) {
      g->objs.push_back(m);
      g->obj_dim.push_back((uint8_t)d);
    }
  }
  g->obj_index.reserve(g->objs.size() * 2);
  for (ObjId id = 0; id < g->objs.size(); ++id) g->obj_index.emplace(sub_key(g->objs[id]), id);

  // ---- per-object caches ---------------------------------------------------
  size_t npts = g->num_points();
  g->pts_in.assign(g->objs.size(), BitVec(npts));
  for (ObjId id = 0; id < g->objs.size(); ++id) {
    int d = g->dim_of(id);
    const Mat& B = g->basis(id);
    // enumerate the points of the row space
    uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    for (uint64_t code = 1; code < total; ++code) {
      uint64_t c = code;
      Vec coeff{};
      for (int i = d - 1; i >= 0; --i) {
        coeff[i] = (uint8_t)(c % q);
        c /= q;
      }
      Vec v = vec_mul(F, coeff, d, B);
      if (!canonical_point(F, v, g->vdim)) continue;
      Mat pm = Mat::zero(1, g->vdim);
      std::memcpy(pm.row(0), v.data(), g->vdim);
      auto it = g->obj_index.find(sub_key(pm));
      if (it == g->obj_index.end()) throw std::logic_error("geometry: point of object missing");
      g->pts_in[id].set(g->point_id(it->second));
    }
    if (g->pts_in[id].count() * (uint64_t)(q - 1) + 1 != total)
      throw std::logic_error("geometry: point count of object mismatch");
  }

  if (kind != GeomKind::Projective) {
    g->perp_of.resize(g->objs.size());
    for (ObjId id = 0; id < g->objs.size(); ++id)
      g->perp_of[id] = kernel(F, mat_mul(F, g->gram, transpose(g->basis(id))));
  }

  // containment lists (dim d -> dim d+1) via the codim-1 subspaces of each object
  g->children.assign(g->objs.size(), {});
  g->faces.assign(g->objs.size(), {});
  for (int d = 2; d <= g->max_obj_dim; ++d) {
    // kernels of the coefficient-space functionals depend only on d
    std::vector<Mat> hyper_coeffs;
    {
      uint64_t total = 1;
      for (int i = 0; i < d; ++i) total *= q;
      for (uint64_t code = 1; code < total; ++code) {
        uint64_t cc = code;
        Vec cvec{};
        for (int i = d - 1; i >= 0; --i) {
          cvec[i] = (uint8_t)(cc % q);
          cc /= q;
        }
        int lead = 0;
        while (lead < d && !cvec[lead]) ++lead;
        if (cvec[lead] != 1) continue;
        Mat C = Mat::zero(d, 1);
        for (int i = 0; i < d; ++i) C.at(i, 0) = cvec[i];
        hyper_coeffs.push_back(kernel(F, C));  // coefficients u with u . c = 0
      }
    }
    for (ObjId id = g->dim_begin[d]; id < g->dim_begin[d + 1]; ++id) {
      const Mat& W = g->basis(id);
      for (const Mat& K : hyper_coeffs) {
        Mat H = mat_mul(F, K, W);  // the hyperplane of W
        rref(F, H);
        auto it = g->obj_index.find(sub_key(H));
        if (it == g->obj_index.end()) throw std::logic_error("geometry: face missing");
        g->children[it->second].push_back(id);
        g->faces[id].push_back(it->second);
      }
    }
  }
  for (auto& ch : g->children) {
    std::sort(ch.begin(), ch.end());
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
  }
  for (auto& fc : g->faces) {
    std::sort(fc.begin(), fc.end());
    fc.erase(std::unique(fc.begin(), fc.end()), fc.end());
  }

  // ---- maximal classes for the hyperbolic kind -----------------------------
  if (kind == GeomKind::HyperbolicQuadric) {
    size_t nmax = g->count_of_dim(n);
    g->max_class.assign(nmax, -1);
    // adjacency: maximals sharing a submaximal; the graph is connected and
    // bipartite, the two sides are the classes
    std::vector<std::vector<uint32_t>> adj(nmax);
    for (ObjId sm = g->dim_begin[n - 1]; sm < g->dim_begin[n]; ++sm) {
      const auto& tops = g->children[sm];
      if (tops.size() != 2) throw std::logic_error("geometry: submaximal not in exactly 2 maximals");
      uint32_t a = tops[0] - g->dim_begin[n], b = tops[1] - g->dim_begin[n];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<uint32_t> bfs{0};
    g->max_class[0] = 0;
    for (size_t head = 0; head < bfs.size(); ++head) {
      uint32_t cur = bfs[head];
      for (uint32_t nb : adj[cur]) {
        if (g->max_class[nb] == -1) {
          g->max_class[nb] = (int8_t)(1 - g->max_class[cur]);
          bfs.push_back(nb);
        } else if (g->max_class[nb] == g->max_class[cur]) {
          throw std::logic_error("geometry: maximal class graph not bipartite");
        }
      }
    }
    if (bfs.size() != nmax) throw std::logic_error("geometry: maximal class graph disconnected");
    // parity cross-check: same class <=> n - dim(M cap M0) even
    const Mat& M0 = g->basis(g->dim_begin[n]);
    for (ObjId id = g->dim_begin[n]; id < g->dim_begin[n + 1]; ++id) {
      int md = meet_dim(F, g->basis(id), M0);
      bool same_parity = ((n - md) % 2) == 0;
      bool same_cls = g->max_class[id - g->dim_begin[n]] == g->max_class[0];
      if (same_parity != same_cls) throw std::logic_error("geometry: class parity mismatch");
    }
  }

  return g;
}

}  // namespace

std::shared_ptr<const Geometry> build_projective(int n, int q, int q_cap) {
  return build_core(GeomKind::Projective, n, q, q_cap);
}

std::shared_ptr<const Geometry> build_hyperbolic_quadric(int n, int q, int q_cap) {
  return build_core(GeomKind::HyperbolicQuadric, n, q, q_cap);
}

std::shared_ptr<const Geometry> build_parabolic_quadric(int n, int q, int q_cap) {
  return build_core(GeomKind::ParabolicQuadric, n, q, q_cap);
}

std::shared_ptr<const Geometry> build_geometry(GeomKind kind, int n, int q, int q_cap) {
  return build_core(kind, n, q, q_cap);
}

}  // namespace rootgeo
