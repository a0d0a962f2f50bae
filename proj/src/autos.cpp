#include "rootgeo/autos.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace rootgeo {

namespace {

// {y : A y^T = 0} as a row space
Mat null_right(const GF& F, const Mat& A) { return kernel(F, transpose(A)); }

Mat scaled_canonical(const GF& F, const Mat& m) {
  for (int i = 0; i < m.r; ++i)
    for (int j = 0; j < m.c; ++j)
      if (m.at(i, j)) {
        Mat r = m;
        uint8_t iv = F.inv(m.at(i, j));
        for (int a = 0; a < m.r; ++a)
          for (int b = 0; b < m.c; ++b) r.at(a, b) = F.mul(iv, m.at(a, b));
        return r;
      }
  return m;
}

}  // namespace

Mat Automorphism::apply(const Mat& basis) const {
  const GF& F = *geom->F;
  Mat img = mat_mul(F, frob_entrywise(F, basis, frob), mat);
  if (duality) img = null_right(F, mat_mul(F, img, corr));
  rref(F, img);
  return img;
}

Vec Automorphism::apply_point_vec(const Vec& v) const {
  if (duality) throw std::logic_error("automorphism: duality has no point-to-point action");
  const GF& F = *geom->F;
  Vec w{};
  for (int i = 0; i < geom->vdim; ++i) w[i] = F.frob(v[i], frob);
  return vec_mul(F, w, geom->vdim, mat);
}

ObjId Automorphism::apply_obj(ObjId id) const {
  Mat img = apply(geom->basis(id));
  ObjId out = geom->lookup(img);
  if (out == NO_OBJ) throw std::logic_error("automorphism: image left the geometry");
  return out;
}

Chamber Automorphism::apply_chamber(const Chamber& c) const {
  Chamber out;
  int ns = geom->num_slots;
  if (geom->kind == GeomKind::Projective) {
    if (!duality) {
      for (int s = 0; s < ns; ++s) out.slot[s] = apply_obj(c.slot[s]);
    } else {
      // type map i -> n+1-i : the image of the dim-(n+1-s) member lands in slot s
      for (int s = 0; s < ns; ++s) out.slot[s] = apply_obj(c.slot[ns - 1 - s]);
    }
    return out;
  }
  if (geom->kind == GeomKind::ParabolicQuadric) {
    for (int s = 0; s < ns; ++s) out.slot[s] = apply_obj(c.slot[s]);
    return out;
  }
  // hyperbolic: realign the maximal slots by class
  int n = geom->n;
  for (int s = 0; s < n - 2; ++s) out.slot[s] = apply_obj(c.slot[s]);
  ObjId m0 = apply_obj(c.slot[n - 2]);
  ObjId m1 = apply_obj(c.slot[n - 1]);
  if (geom->max_class[m0 - geom->first_of_dim(n)] != 0) std::swap(m0, m1);
  out.slot[n - 2] = m0;
  out.slot[n - 1] = m1;
  return out;
}

bool Automorphism::fixes_obj(ObjId id) const { return apply(geom->basis(id)) == geom->basis(id); }

bool Automorphism::is_projective_identity() const {
  if (duality || frob != 0) return false;
  const GF& F = *geom->F;
  Mat c = scaled_canonical(F, mat);
  return c == Mat::identity(geom->vdim);
}

Automorphism identity_automorphism(std::shared_ptr<const Geometry> geom) {
  Automorphism a;
  a.geom = geom;
  a.mat = Mat::identity(geom->vdim);
  return a;
}

Automorphism make_collineation(std::shared_ptr<const Geometry> geom, const Mat& m, int frob) {
  Automorphism a;
  a.geom = geom;
  a.mat = m;
  a.frob = ((frob % geom->field.k) + geom->field.k) % geom->field.k;
  validate_automorphism(a);
  return a;
}

Automorphism make_duality(std::shared_ptr<const Geometry> geom, const Mat& m, const Mat& corr,
                          int frob) {
  if (geom->kind != GeomKind::Projective)
    throw std::invalid_argument("automorphism: dualities only for the projective kind here");
  Automorphism a;
  a.geom = geom;
  a.mat = m;
  a.corr = corr;
  a.duality = true;
  a.frob = ((frob % geom->field.k) + geom->field.k) % geom->field.k;
  validate_automorphism(a);
  return a;
}

void validate_automorphism(const Automorphism& a) {
  const GF& F = *a.geom->F;
  if (!is_invertible(F, a.mat)) throw std::invalid_argument("automorphism: singular matrix");
  if (a.duality && !is_invertible(F, a.corr))
    throw std::invalid_argument("automorphism: degenerate correlation form");
  if (a.geom->kind != GeomKind::Projective) {
    // singular points must map to singular points
    for (size_t pid = 0; pid < a.geom->num_points(); ++pid) {
      Mat img = a.apply(a.geom->basis(a.geom->point_obj(pid)));
      if (!a.geom->is_singular(img))
        throw std::invalid_argument("automorphism: does not preserve the quadric");
    }
  }
}

Automorphism compose(const Automorphism& x, const Automorphism& y) {
  if (x.geom != y.geom) throw std::invalid_argument("automorphism: different geometries");
  const GF& F = *x.geom->F;
  int k = x.geom->field.k;
  Automorphism r;
  r.geom = x.geom;
  r.frob = (x.frob + y.frob) % k;
  Mat m12 = mat_mul(F, frob_entrywise(F, x.mat, y.frob), y.mat);
  if (!x.duality && !y.duality) {
    r.mat = m12;
  } else if (!x.duality && y.duality) {
    r.mat = m12;
    r.duality = true;
    r.corr = y.corr;
  } else {
    // P_C . g = g . P_C'  with  C' = M^{-1} phi^f(C) M^{-T}
    Mat my_inv = inverse(F, y.mat);
    Mat cpp = mat_mul(F, mat_mul(F, my_inv, frob_entrywise(F, x.corr, y.frob)),
                      transpose(my_inv));
    if (!y.duality) {
      r.mat = m12;
      r.duality = true;
      r.corr = cpp;
    } else {
      // perp twice is linear: U -> U C'' C2^{-T}
      r.mat = mat_mul(F, m12, mat_mul(F, cpp, transpose(inverse(F, y.corr))));
      r.duality = false;
    }
  }
  return r;
}

Automorphism inverse_auto(const Automorphism& a) {
  const GF& F = *a.geom->F;
  int k = a.geom->field.k;
  Automorphism r;
  r.geom = a.geom;
  r.frob = (k - a.frob) % k;
  Mat mi = inverse(F, a.mat);
  if (!a.duality) {
    r.mat = frob_entrywise(F, mi, r.frob);
    return r;
  }
  // theta = P_C . g  =>  theta^{-1} = g^{-1} . P_{C^T} = P_{M phi^{-f}(C^T) M^T} . g^{-1}
  r.duality = true;
  r.mat = frob_entrywise(F, mi, r.frob);
  Mat ct = frob_entrywise(F, transpose(a.corr), r.frob);
  r.corr = mat_mul(F, mat_mul(F, r.mat, ct), transpose(r.mat));
  return r;
}

bool projectively_equal(const Automorphism& a, const Automorphism& b) {
  if (a.duality != b.duality || a.frob != b.frob) return false;
  const GF& F = *a.geom->F;
  if (!(scaled_canonical(F, a.mat) == scaled_canonical(F, b.mat))) return false;
  if (a.duality && !(scaled_canonical(F, a.corr) == scaled_canonical(F, b.corr))) return false;
  return true;
}

// ---- constructor zoo --------------------------------------------------------

Automorphism symplectic_polarity(std::shared_ptr<const Geometry> pg) {
  if (pg->kind != GeomKind::Projective || pg->n % 2 == 0)
    throw std::invalid_argument("symplectic_polarity: needs PG(n,q) with n odd");
  const GF& F = *pg->F;
  Mat J = Mat::zero(pg->vdim, pg->vdim);
  for (int i = 0; i + 1 < pg->vdim; i += 2) {
    J.at(i, i + 1) = 1;
    J.at(i + 1, i) = F.neg(1);
  }
  return make_duality(pg, Mat::identity(pg->vdim), J);
}

Automorphism spread_collineation(std::shared_ptr<const Geometry> pg) {
  if (pg->kind != GeomKind::Projective || pg->vdim % 2 != 0)
    throw std::invalid_argument("spread_collineation: needs even ambient dimension");
  const GF& F = *pg->F;
  int q = pg->field.q;
  // companion matrix of an irreducible t^2 - a t - b; multiplication by t
  // on GF(q^2) = GF(q)[t] gives a fixed-point-free collineation fixing the
  // GF(q^2)-line spread elementwise
  int aa = -1, bb = -1;
  for (int a = 0; a < q && aa < 0; ++a)
    for (int b = 1; b < q && aa < 0; ++b) {
      bool irreducible = true;
      for (int t = 0; t < q; ++t) {
        uint8_t val = F.sub(F.sub(F.mul((uint8_t)t, (uint8_t)t), F.mul((uint8_t)a, (uint8_t)t)),
                            (uint8_t)b);
        if (val == 0) irreducible = false;
      }
      if (irreducible) {
        aa = a;
        bb = b;
      }
    }
  if (aa < 0) throw std::logic_error("spread_collineation: no irreducible quadratic found");
  Mat M = Mat::zero(pg->vdim, pg->vdim);
  for (int blk = 0; blk < pg->vdim / 2; ++blk) {
    int o = 2 * blk;
    // basis (1, t): 1 -> t, t -> b + a t
    M.at(o, o + 1) = 1;
    M.at(o + 1, o) = (uint8_t)bb;
    M.at(o + 1, o + 1) = (uint8_t)aa;
  }
  return make_collineation(pg, M);
}

Automorphism central_collineation(std::shared_ptr<const Geometry> pg, ObjId center, ObjId axis,
                                  uint8_t data) {
  if (pg->kind != GeomKind::Projective)
    throw std::invalid_argument("central_collineation: projective only");
  if (pg->dim_of(center) != 1 || pg->dim_of(axis) != pg->n)
    throw std::invalid_argument("central_collineation: need a point and a hyperplane");
  const GF& F = *pg->F;
  Vec c{};
  std::memcpy(c.data(), pg->basis(center).row(0), pg->vdim);
  Mat w = kernel(F, transpose(pg->basis(axis)));  // the functional cutting the axis
  if (w.r != 1) throw std::logic_error("central_collineation: axis normal not unique");
  uint8_t fc = 0;
  for (int i = 0; i < pg->vdim; ++i) fc = F.add(fc, F.mul(w.at(0, i), c[i]));
  bool elation = (fc == 0);
  uint8_t lambda;
  if (elation) {
    if (data == 0) throw std::invalid_argument("central_collineation: elation scalar must be nonzero");
    lambda = data;
  } else {
    if (data == 0 || data == 1)
      throw std::invalid_argument("central_collineation: homology ratio must avoid {0,1}");
    lambda = F.div(F.sub(data, 1), fc);
  }
  Mat M = Mat::identity(pg->vdim);
  for (int i = 0; i < pg->vdim; ++i)
    for (int j = 0; j < pg->vdim; ++j)
      M.at(i, j) = F.add(M.at(i, j), F.mul(F.mul(lambda, w.at(0, i)), c[j]));
  return make_collineation(pg, M);
}

Automorphism baer_collineation(std::shared_ptr<const Geometry> pg) {
  if (pg->kind != GeomKind::Projective || pg->n != 2 || pg->field.k % 2 != 0)
    throw std::invalid_argument("baer_collineation: needs PG(2, q^2)");
  return make_collineation(pg, Mat::identity(pg->vdim), pg->field.k / 2);
}

Automorphism quadric_reflection(std::shared_ptr<const Geometry> quad, const Vec& v) {
  if (quad->kind == GeomKind::Projective)
    throw std::invalid_argument("quadric_reflection: quadric kinds only");
  if (quad->field.p == 2)
    throw std::invalid_argument(
        "quadric_reflection: characteristic 2 rejected (use central_elation_quadric)");
  const GF& F = *quad->F;
  uint8_t qv = quad->quad_value(v);
  if (qv == 0) throw std::invalid_argument("quadric_reflection: reflection vector is singular");
  Mat M = Mat::zero(quad->vdim, quad->vdim);
  for (int i = 0; i < quad->vdim; ++i) {
    Vec e{};
    e[i] = 1;
    uint8_t coef = F.div(quad->bil(e, v), qv);
    for (int j = 0; j < quad->vdim; ++j)
      M.at(i, j) = F.sub((uint8_t)(i == j ? 1 : 0), F.mul(coef, v[j]));
  }
  return make_collineation(quad, M);
}

Automorphism quadric_reflection_default(std::shared_ptr<const Geometry> quad) {
  Vec v{};
  if (quad->kind == GeomKind::ParabolicQuadric) {
    v[quad->n] = 1;  // X_0 -> -X_0
  } else {
    // reflection in the hyperplane X_{-1} = X_1
    v[quad->n - 1] = 1;
    v[quad->n] = quad->F->neg(1);
  }
  return quadric_reflection(quad, v);
}

Automorphism central_elation_quadric(std::shared_ptr<const Geometry> parab) {
  if (parab->kind != GeomKind::ParabolicQuadric || parab->field.p != 2)
    throw std::invalid_argument("central_elation_quadric: needs a parabolic quadric in char 2");
  int n = parab->n;
  Mat M = Mat::identity(parab->vdim);
  // X_1 -> X_1 + X_{-1}, X_0 -> X_0 + X_{-1}: the coordinate X_{-1} feeds
  // columns of X_0 and X_1, i.e. row of e_{-1} picks up e_0 and e_1
  M.at(n - 1, n) = 1;
  M.at(n - 1, n + 1) = 1;
  return make_collineation(parab, M);
}

Automorphism quadric_spread_collineation(std::shared_ptr<const Geometry> hyp) {
  if (hyp->kind != GeomKind::HyperbolicQuadric || hyp->n != 4)
    throw std::invalid_argument("quadric_spread_collineation: needs the rank-4 hyperbolic quadric");
  const GF& F = *hyp->F;
  int q = hyp->field.q;
  int vd = hyp->vdim;

  // GF(q^2) = GF(q)[t]/(t^2 - a t - b); norm form N(x,y) = x^2 + a xy - b y^2
  int aa = -1, bb = -1;
  for (int a = 0; a < q && aa < 0; ++a)
    for (int b = 1; b < q && aa < 0; ++b) {
      bool irreducible = true;
      for (int t = 0; t < q; ++t)
        if (F.sub(F.sub(F.mul((uint8_t)t, (uint8_t)t), F.mul((uint8_t)a, (uint8_t)t)),
                  (uint8_t)b) == 0)
          irreducible = false;
      if (irreducible) {
        aa = a;
        bb = b;
      }
    }
  auto normQ = [&](const Vec& v) {  // sum over 4 blocks of N
    uint8_t acc = 0;
    for (int blk = 0; blk < 4; ++blk) {
      uint8_t x = v[2 * blk], y = v[2 * blk + 1];
      uint8_t t = F.mul(x, x);
      t = F.add(t, F.mul((uint8_t)aa, F.mul(x, y)));
      t = F.sub(t, F.mul((uint8_t)bb, F.mul(y, y)));
      acc = F.add(acc, t);
    }
    return acc;
  };
  auto normB = [&](const Vec& u, const Vec& v) {
    Vec s{};
    for (int i = 0; i < vd; ++i) s[i] = F.add(u[i], v[i]);
    return F.sub(F.sub(normQ(s), normQ(u)), normQ(v));
  };

  // norm-one scalar c + d t with d != 0 (fixed-point-free on points);
  // N(c + d t) = c^2 + a c d - b d^2
  int cc = -1, dd = -1;
  for (int c = 0; c < q && cc < 0; ++c)
    for (int d = 1; d < q && cc < 0; ++d) {
      uint8_t nv = F.mul((uint8_t)c, (uint8_t)c);
      nv = F.add(nv, F.mul((uint8_t)aa, F.mul((uint8_t)c, (uint8_t)d)));
      nv = F.sub(nv, F.mul((uint8_t)bb, F.mul((uint8_t)d, (uint8_t)d)));
      if (nv == 1) {
        cc = c;
        dd = d;
      }
    }
  if (cc < 0) throw std::logic_error("quadric_spread_collineation: no norm-one scalar");
  Mat L = Mat::zero(vd, vd);
  for (int blk = 0; blk < 4; ++blk) {
    int o = 2 * blk;
    // multiplication by c + d t on basis (1, t)
    L.at(o, o) = (uint8_t)cc;
    L.at(o, o + 1) = (uint8_t)dd;
    L.at(o + 1, o) = F.mul((uint8_t)dd, (uint8_t)bb);
    L.at(o + 1, o + 1) = F.add((uint8_t)cc, F.mul((uint8_t)dd, (uint8_t)aa));
  }

  // constructive Witt: hyperbolic basis (s_i, h_i) for the norm form
  std::vector<Vec> pairs;  // s1,h1,s2,h2,...
  auto orthogonal_to_pairs = [&](const Vec& v) {
    for (const auto& w : pairs)
      if (normB(v, w)) return false;
    return true;
  };
  auto iterate_vecs = [&](auto&& fn) {
    uint64_t total = 1;
    for (int i = 0; i < vd; ++i) total *= q;
    for (uint64_t code = 1; code < total; ++code) {
      Vec v{};
      uint64_t c = code;
      for (int i = vd - 1; i >= 0; --i) {
        v[i] = (uint8_t)(c % q);
        c /= q;
      }
      if (fn(v)) return true;
    }
    return false;
  };
  for (int step = 0; step < 4; ++step) {
    Vec s{}, h{};
    bool found = iterate_vecs([&](const Vec& v) {
      if (normQ(v) != 0 || !orthogonal_to_pairs(v)) return false;
      Mat chosen = Mat::zero((int)pairs.size() + 1, vd);
      for (size_t i = 0; i < pairs.size(); ++i)
        std::memcpy(chosen.row((int)i), pairs[i].data(), vd);
      std::memcpy(chosen.row((int)pairs.size()), v.data(), vd);
      if (rank_of(F, chosen) != (int)pairs.size() + 1) return false;
      s = v;
      return true;
    });
    if (!found) throw std::logic_error("quadric_spread_collineation: norm form not hyperbolic");
    found = iterate_vecs([&](const Vec& v) {
      if (!orthogonal_to_pairs(v) || normB(s, v) == 0) return false;
      h = v;
      return true;
    });
    if (!found) throw std::logic_error("quadric_spread_collineation: no hyperbolic partner");
    // normalize: B(s,h) = 1, then make h singular
    uint8_t ib = F.inv(normB(s, h));
    for (int i = 0; i < vd; ++i) h[i] = F.mul(ib, h[i]);
    uint8_t qh = normQ(h);
    for (int i = 0; i < vd; ++i) h[i] = F.sub(h[i], F.mul(qh, s[i]));
    pairs.push_back(s);
    pairs.push_back(h);
  }

  // base change P: std coordinate x_{-i} row = s_i, x_{+i} row = h_i
  // std layout is [x_{-4} x_{-3} x_{-2} x_{-1} x_1 x_2 x_3 x_4]
  Mat P = Mat::zero(vd, vd);
  for (int i = 1; i <= 4; ++i) {
    std::memcpy(P.row(4 - i), pairs[2 * (i - 1)].data(), vd);      // x_{-i}
    std::memcpy(P.row(3 + i), pairs[2 * (i - 1) + 1].data(), vd);  // x_{+i}
  }
  Mat Pi = inverse(F, P);
  Mat M = mat_mul(F, mat_mul(F, P, L), Pi);
  return make_collineation(hyp, M);
}

Automorphism quadric_long_root_elation(std::shared_ptr<const Geometry> quad, ObjId line) {
  if (quad->kind == GeomKind::Projective)
    throw std::invalid_argument("quadric_long_root_elation: quadric kinds only");
  if (quad->dim_of(line) != 2)
    throw std::invalid_argument("quadric_long_root_elation: needs a singular line");
  const GF& F = *quad->F;
  Vec u{}, v{};
  std::memcpy(u.data(), quad->basis(line).row(0), quad->vdim);
  std::memcpy(v.data(), quad->basis(line).row(1), quad->vdim);
  // Siegel transformation x -> x + B(x,v)u - B(x,u)v (Q(v) = 0 here)
  Mat M = Mat::zero(quad->vdim, quad->vdim);
  for (int i = 0; i < quad->vdim; ++i) {
    Vec e{};
    e[i] = 1;
    uint8_t bu = quad->bil(e, u), bv = quad->bil(e, v);
    for (int j = 0; j < quad->vdim; ++j) {
      uint8_t x = (uint8_t)(i == j ? 1 : 0);
      x = F.add(x, F.mul(bv, u[j]));
      x = F.sub(x, F.mul(bu, v[j]));
      M.at(i, j) = x;
    }
  }
  return make_collineation(quad, M);
}

// ---- sampling / enumeration -------------------------------------------------

namespace {

Mat random_invertible(const GF& F, int n, std::mt19937_64& rng) {
  while (true) {
    Mat m = Mat::zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = (uint8_t)(rng() % F.q);
    if (is_invertible(F, m)) return m;
  }
}

// Siegel transformation for singular u, v in u^perp:
//   x -> x + B(x,v) u - B(x,u) v - Q(v) B(x,u) u
Mat siegel_matrix(const Geometry& g, const Vec& u, const Vec& v) {
  const GF& F = *g.F;
  Mat M = Mat::zero(g.vdim, g.vdim);
  uint8_t qv = g.quad_value(v);
  for (int i = 0; i < g.vdim; ++i) {
    Vec e{};
    e[i] = 1;
    uint8_t bu = g.bil(e, u), bv = g.bil(e, v);
    for (int j = 0; j < g.vdim; ++j) {
      uint8_t x = (uint8_t)(i == j ? 1 : 0);
      x = F.add(x, F.mul(bv, u[j]));
      x = F.sub(x, F.mul(bu, v[j]));
      x = F.sub(x, F.mul(F.mul(qv, bu), u[j]));
      M.at(i, j) = x;
    }
  }
  return M;
}

// nonsingular v: reflection (odd q) or orthogonal transvection (q even)
Mat reflection_matrix(const Geometry& g, const Vec& v) {
  const GF& F = *g.F;
  uint8_t qv = g.quad_value(v);
  Mat M = Mat::zero(g.vdim, g.vdim);
  for (int i = 0; i < g.vdim; ++i) {
    Vec e{};
    e[i] = 1;
    uint8_t coef = F.div(g.bil(e, v), qv);
    for (int j = 0; j < g.vdim; ++j) {
      uint8_t x = (uint8_t)(i == j ? 1 : 0);
      if (g.field.p == 2)
        x = F.add(x, F.mul(coef, v[j]));
      else
        x = F.sub(x, F.mul(coef, v[j]));
      M.at(i, j) = x;
    }
  }
  return M;
}

}  // namespace

Automorphism random_automorphism(std::shared_ptr<const Geometry> geom, uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  const GF& F = *geom->F;
  if (geom->kind == GeomKind::Projective) {
    Automorphism a;
    a.geom = geom;
    a.mat = random_invertible(F, geom->vdim, rng);
    return a;
  }
  // form preserving word: 64 Siegel transformations, then optionally one
  // reflection/transvection so that both classes of the orthogonal group
  // (and hence both maximal-class actions) are reachable
  Mat M = Mat::identity(geom->vdim);
  int words = 64;  // mixing length, tunable
  for (int w = 0; w < words; ++w) {
    size_t pid = (size_t)(rng() % geom->num_points());
    Vec u{};
    std::memcpy(u.data(), geom->basis(geom->point_obj(pid)).row(0), geom->vdim);
    // random v in u^perp
    const Mat& up = geom->perp_of[geom->point_obj(pid)];
    Vec coeff{};
    for (int i = 0; i < up.r; ++i) coeff[i] = (uint8_t)(rng() % F.q);
    Vec v = vec_mul(F, coeff, up.r, up);
    M = mat_mul(F, M, siegel_matrix(*geom, u, v));
  }
  if (rng() & 1) {
    Vec v{};
    do {
      for (int i = 0; i < geom->vdim; ++i) v[i] = (uint8_t)(rng() % F.q);
    } while (geom->quad_value(v) == 0);
    M = mat_mul(F, M, reflection_matrix(*geom, v));
  }
  Automorphism a;
  a.geom = geom;
  a.mat = M;
  return a;
}

uint64_t automorphism_group_size(const Geometry& geom) {
  if (geom.kind != GeomKind::Projective)
    throw std::invalid_argument("automorphism enumeration: projective kind only");
  int d = geom.vdim, q = geom.field.q;
  __int128 gl = 1;
  for (int i = 0; i < d; ++i) {
    __int128 qd = 1;
    for (int t = 0; t < d; ++t) qd *= q;
    __int128 qi = 1;
    for (int t = 0; t < i; ++t) qi *= q;
    gl *= (qd - qi);
  }
  uint64_t pgl = (uint64_t)(gl / (q - 1));
  return 2 * pgl * (uint64_t)geom.field.k;  // collineations + dualities, PGammaL
}

void enumerate_automorphism_group(std::shared_ptr<const Geometry> geom,
                                  const std::function<void(const Automorphism&)>& visit,
                                  uint64_t cap) {
  uint64_t size = automorphism_group_size(*geom);
  if (size > cap)
    throw std::length_error("automorphism enumeration: group size " + std::to_string(size) +
                            " exceeds cap " + std::to_string(cap));
  const GF& F = *geom->F;
  int d = geom->vdim, q = geom->field.q;
  uint64_t total = 1;
  for (int i = 0; i < d * d; ++i) total *= q;
  Mat corr = Mat::identity(d);
  for (uint64_t code = 0; code < total; ++code) {
    Mat m = Mat::zero(d, d);
    uint64_t c = code;
    for (int i = d * d - 1; i >= 0; --i) {
      m.at(i / d, i % d) = (uint8_t)(c % q);
      c /= q;
    }
    // canonical scaling: first nonzero entry is 1 (one representative per
    // projective class)
    uint8_t first = 0;
    for (int i = 0; i < d * d && !first; ++i) first = m.at(i / d, i % d);
    if (first != 1) continue;
    if (!is_invertible(F, m)) continue;
    for (int fr = 0; fr < geom->field.k; ++fr) {
      Automorphism a;
      a.geom = geom;
      a.mat = m;
      a.frob = fr;
      visit(a);
      Automorphism b;
      b.geom = geom;
      b.mat = m;
      b.frob = fr;
      b.duality = true;
      b.corr = corr;
      visit(b);
    }
  }
}

DiagramAutomorphism companion_sigma(const Automorphism& a) {
  const Geometry& g = *a.geom;
  int rank = g.cox->rank;
  DiagramAutomorphism s;
  s.rank = rank;
  for (int i = 0; i < rank; ++i) s.perm[i] = (uint8_t)i;
  if (g.kind == GeomKind::Projective && a.duality) {
    for (int i = 0; i < rank; ++i) s.perm[i] = (uint8_t)(rank - 1 - i);
  } else if (g.kind == GeomKind::HyperbolicQuadric) {
    ObjId m0 = g.first_of_dim(g.n);
    ObjId img = a.apply_obj(m0);
    if (g.max_class[img - g.first_of_dim(g.n)] != g.max_class[0])
      std::swap(s.perm[rank - 2], s.perm[rank - 1]);
  }
  return s;
}

std::vector<size_t> fixed_point_ids(const Automorphism& a) {
  std::vector<size_t> out;
  if (a.duality) return out;
  for (size_t pid = 0; pid < a.geom->num_points(); ++pid)
    if (a.fixes_obj(a.geom->point_obj(pid))) out.push_back(pid);
  return out;
}

std::vector<ObjId> fixed_objs_of_dim(const Automorphism& a, int dim) {
  std::vector<ObjId> out;
  for (ObjId id = a.geom->first_of_dim(dim); id < a.geom->first_of_dim(dim + 1); ++id)
    if (a.fixes_obj(id)) out.push_back(id);
  return out;
}

bool all_points_absolute(const Automorphism& a) {
  const GF& F = *a.geom->F;
  for (size_t pid = 0; pid < a.geom->num_points(); ++pid) {
    const Mat& p = a.geom->basis(a.geom->point_obj(pid));
    Mat img = a.apply(p);
    Vec v{};
    std::memcpy(v.data(), p.row(0), a.geom->vdim);
    if (!in_rowspace(F, img, v, a.geom->vdim)) return false;
  }
  return true;
}

}  // namespace rootgeo
