#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "rootgeo/autos.hpp"
#include "rootgeo/rootgeom.hpp"

using namespace rootgeo;

namespace {

ObjId random_obj(const Geometry& g, std::mt19937_64& rng) {
  return (ObjId)(rng() % g.num_objs());
}

}  // namespace

TEST_CASE("apply is a dimension-preserving bijection respecting incidence") {
  auto g = build_projective(3, 2);
  std::mt19937_64 rng(3);
  Automorphism th = random_automorphism(g, 99);
  std::set<ObjId> images;
  for (ObjId id = 0; id < g->num_objs(); ++id) {
    ObjId img = th.apply_obj(id);
    CHECK(g->dim_of(img) == g->dim_of(id));
    images.insert(img);
  }
  CHECK(images.size() == g->num_objs());
  for (int trial = 0; trial < 200; ++trial) {
    ObjId a = random_obj(*g, rng), b = random_obj(*g, rng);
    if (g->dim_of(a) >= g->dim_of(b)) continue;
    bool inc = g->pts_in[a].subset_of(g->pts_in[b]);
    bool inc_img = g->pts_in[th.apply_obj(a)].subset_of(g->pts_in[th.apply_obj(b)]);
    CHECK(inc == inc_img);
  }
}

TEST_CASE("duality reverses incidence and composes to a collineation") {
  auto g = build_projective(3, 2);
  Automorphism th = symplectic_polarity(g);
  for (ObjId p = g->first_of_dim(1); p < g->first_of_dim(2); ++p) {
    ObjId img = th.apply_obj(p);
    CHECK(g->dim_of(img) == 3);
  }
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    ObjId a = random_obj(*g, rng), b = random_obj(*g, rng);
    if (g->dim_of(a) >= g->dim_of(b)) continue;
    bool inc = g->pts_in[a].subset_of(g->pts_in[b]);
    ObjId ia = th.apply_obj(a), ib = th.apply_obj(b);
    bool inc_rev = g->pts_in[ib].subset_of(g->pts_in[ia]);
    CHECK(inc == inc_rev);
  }
  Automorphism sq = compose(th, th);
  CHECK_FALSE(sq.duality);
  CHECK(sq.is_projective_identity());
}

TEST_CASE("compose agrees with pointwise application; inverse undoes") {
  auto g = build_projective(3, 2);
  std::mt19937_64 rng(11);
  std::vector<Automorphism> pool = {random_automorphism(g, 1), random_automorphism(g, 2),
                                    symplectic_polarity(g), spread_collineation(g)};
  for (const auto& x : pool)
    for (const auto& y : pool) {
      Automorphism xy = compose(x, y);
      for (int t = 0; t < 25; ++t) {
        ObjId a = random_obj(*g, rng);
        CHECK(xy.apply_obj(a) == y.apply_obj(x.apply_obj(a)));
      }
    }
  for (const auto& x : pool) {
    Automorphism xi = inverse_auto(x);
    Automorphism id = compose(x, xi);
    for (int t = 0; t < 50; ++t) {
      ObjId a = random_obj(*g, rng);
      CHECK(id.apply_obj(a) == a);
      CHECK(xi.apply_obj(x.apply_obj(a)) == a);
    }
  }
}

TEST_CASE("symplectic polarity: absolute points and absolute lines") {
  auto g = build_projective(3, 2);
  Automorphism th = symplectic_polarity(g);
  CHECK(all_points_absolute(th));
  // squares to the identity on every subspace
  Automorphism sq = compose(th, th);
  for (ObjId l = g->first_of_dim(2); l < g->first_of_dim(3); ++l) CHECK(sq.apply_obj(l) == l);
  CHECK_THROWS(symplectic_polarity(build_projective(2, 2)));  // n must be odd

  // PG(5,2): the absolute lines are the totally isotropic lines; each point
  // carries 15 of them (all lines through p inside p^perp), so 63*15/3 = 315
  auto g5 = build_projective(5, 2);
  Automorphism th5 = symplectic_polarity(g5);
  size_t absolute_lines = 0;
  for (ObjId l = g5->first_of_dim(2); l < g5->first_of_dim(3); ++l) {
    ObjId img = th5.apply_obj(l);  // a 4-space
    if (g5->pts_in[l].subset_of(g5->pts_in[img])) ++absolute_lines;
  }
  CHECK(absolute_lines == 315);
}

TEST_CASE("spread collineation fixes a spread partitioning the points") {
  for (auto [n, q, spread_size] : {std::tuple{3, 2, 5}, std::tuple{3, 4, 17}}) {
    auto g = build_projective(n, q);
    Automorphism th = spread_collineation(g);
    CHECK(fixed_point_ids(th).empty());
    std::vector<ObjId> fixed_lines = fixed_objs_of_dim(th, 2);
    CHECK(fixed_lines.size() == (size_t)spread_size);
    BitVec covered(g->num_points());
    size_t covered_n = 0;
    for (ObjId l : fixed_lines)
      for (size_t p = 0; p < g->num_points(); ++p)
        if (g->pts_in[l].test(p)) {
          CHECK_FALSE(covered.test(p));
          covered.set(p);
          ++covered_n;
        }
    CHECK(covered_n == g->num_points());
  }
  CHECK_THROWS(spread_collineation(build_projective(2, 2)));  // odd ambient dimension
}

TEST_CASE("central collineations: elation and homology fixed structure") {
  auto g = build_projective(2, 2);
  ObjId axis = g->first_of_dim(2);
  ObjId center_on = NO_OBJ, center_off = NO_OBJ;
  for (ObjId p = g->first_of_dim(1); p < g->first_of_dim(2); ++p) {
    if (g->pts_in[axis].test(g->point_id(p)) && center_on == NO_OBJ) center_on = p;
    if (!g->pts_in[axis].test(g->point_id(p)) && center_off == NO_OBJ) center_off = p;
  }
  Automorphism elation = central_collineation(g, center_on, axis, 1);
  CHECK_FALSE(elation.is_projective_identity());
  // the axis is fixed pointwise; exactly the pencil through the center is fixed
  size_t fixed_lines = 0;
  for (ObjId l = g->first_of_dim(2); l < g->first_of_dim(3); ++l) {
    for (size_t p = 0; p < g->num_points(); ++p)
      if (g->pts_in[axis].test(p)) CHECK(elation.fixes_obj(g->point_obj(p)));
    if (elation.fixes_obj(l)) ++fixed_lines;
  }
  CHECK(fixed_lines == 3);  // the pencil through the center (axis included)

  auto g3 = build_projective(3, 3);
  ObjId axis3 = g3->first_of_dim(3);
  ObjId off3 = NO_OBJ;
  for (ObjId p = g3->first_of_dim(1); p < g3->first_of_dim(2); ++p)
    if (!g3->pts_in[axis3].test(g3->point_id(p))) {
      off3 = p;
      break;
    }
  Automorphism homology = central_collineation(g3, off3, axis3, 2);  // ratio -1
  Automorphism sq = compose(homology, homology);
  CHECK(sq.is_projective_identity());
  CHECK(homology.fixes_obj(off3));
  CHECK(homology.fixes_obj(axis3));
  CHECK_THROWS(central_collineation(g3, off3, axis3, 1));  // ratio must avoid {0,1}
}

TEST_CASE("baer collineation of PG(2,4)") {
  auto g = build_projective(2, 4);
  Automorphism th = baer_collineation(g);
  auto fixed = fixed_point_ids(th);
  CHECK(fixed.size() == 7);  // a Fano subplane
  CHECK(compose(th, th).is_projective_identity());  // involution over GF(4)
  // every line contains at least one fixed point
  for (ObjId l = g->first_of_dim(2); l < g->first_of_dim(3); ++l) {
    bool meets = false;
    for (size_t p : fixed)
      if (g->pts_in[l].test(p)) meets = true;
    CHECK(meets);
  }
  CHECK_THROWS(baer_collineation(build_projective(2, 2)));
}

TEST_CASE("quadric reflection fixes a geometric hyperplane pointwise") {
  auto g = build_parabolic_quadric(3, 3);
  Automorphism th = quadric_reflection_default(g);  // X_0 -> -X_0
  Automorphism sq = compose(th, th);
  CHECK(sq.is_projective_identity());
  auto fixed = fixed_point_ids(th);
  CHECK(!fixed.empty());
  CHECK(fixed.size() < g->num_points());
  BitVec fb(g->num_points());
  for (size_t p : fixed) fb.set(p);
  // geometric hyperplane: every singular line is inside or meets it once
  for (ObjId l = g->first_of_dim(2); l < g->first_of_dim(3); ++l) {
    size_t inside = 0, total = 0;
    for (size_t p = 0; p < g->num_points(); ++p)
      if (g->pts_in[l].test(p)) {
        ++total;
        if (fb.test(p)) ++inside;
      }
    CHECK((inside == 1 || inside == total));
  }
  // the fixed points are exactly the section X_0 = 0
  for (size_t p = 0; p < g->num_points(); ++p) {
    bool in_section = g->basis(g->point_obj(p)).at(0, g->n) == 0;
    CHECK(in_section == fb.test(p));
  }
  CHECK_THROWS(quadric_reflection_default(build_parabolic_quadric(3, 2)));  // char 2

  auto h = build_hyperbolic_quadric(4, 3);
  Automorphism rh = quadric_reflection_default(h);
  auto hf = fixed_point_ids(rh);
  CHECK(!hf.empty());
  CHECK(hf.size() < h->num_points());
  CHECK(compose(rh, rh).is_projective_identity());
}

TEST_CASE("central elation on the even-characteristic parabolic quadric") {
  auto g = build_parabolic_quadric(3, 2);
  Automorphism th = central_elation_quadric(g);
  CHECK_FALSE(th.is_projective_identity());
  CHECK(compose(th, th).is_projective_identity());  // involution in char 2
  auto fixed = fixed_point_ids(th);
  CHECK(!fixed.empty());
  BitVec fb(g->num_points());
  for (size_t p : fixed) fb.set(p);
  size_t fixed_lines = 0;
  for (ObjId l = g->first_of_dim(2); l < g->first_of_dim(3); ++l) {
    size_t inside = 0, total = 0;
    for (size_t p = 0; p < g->num_points(); ++p)
      if (g->pts_in[l].test(p)) {
        ++total;
        if (fb.test(p)) ++inside;
      }
    CHECK((inside == 1 || inside == total));  // fixed set meets every line
    // lines are fixed or at mutual position 2
    ObjId img = th.apply_obj(l);
    MutualPosition p = mutual_position(*g, RootPoint{l, NO_OBJ}, RootPoint{img, NO_OBJ});
    CHECK((p == MutualPosition::D0 || p == MutualPosition::D2));
    if (p == MutualPosition::D0) ++fixed_lines;
  }
  CHECK(fixed_lines > 0);
  CHECK_THROWS(central_elation_quadric(build_parabolic_quadric(3, 3)));  // odd char
}

TEST_CASE("quadric spread collineation: fixed-point-free, fixes a line spread") {
  auto g = build_hyperbolic_quadric(4, 2);
  Automorphism th = quadric_spread_collineation(g);
  CHECK(fixed_point_ids(th).empty());
  auto fixed_lines = fixed_objs_of_dim(th, 2);
  CHECK(fixed_lines.size() * 3 == g->num_points());  // q+1 points per line
  BitVec covered(g->num_points());
  for (ObjId l : fixed_lines)
    for (size_t p = 0; p < g->num_points(); ++p)
      if (g->pts_in[l].test(p)) {
        CHECK_FALSE(covered.test(p));
        covered.set(p);
      }
}

TEST_CASE("random quadric automorphisms preserve the form; seeds reproduce") {
  auto g = build_hyperbolic_quadric(4, 2);
  for (uint64_t seed : {1ull, 2ull, 77ull}) {
    Automorphism a = random_automorphism(g, seed);
    Automorphism b = random_automorphism(g, seed);
    CHECK(projectively_equal(a, b));
    CHECK_NOTHROW(validate_automorphism(a));
  }
  // both maximal-class behaviours are reachable
  bool swap_seen = false, keep_seen = false;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Automorphism a = random_automorphism(g, seed);
    DiagramAutomorphism s = companion_sigma(a);
    (s.is_identity() ? keep_seen : swap_seen) = true;
  }
  CHECK(swap_seen);
  CHECK(keep_seen);
}

TEST_CASE("group enumeration: sizes and caps") {
  auto fano = build_projective(2, 2);
  CHECK(automorphism_group_size(*fano) == 336);  // 168 + 168
  size_t count = 0, dualities = 0;
  enumerate_automorphism_group(fano, [&](const Automorphism& a) {
    ++count;
    if (a.duality) ++dualities;
  });
  CHECK(count == 336);
  CHECK(dualities == 168);

  auto pg32 = build_projective(3, 2);
  CHECK(automorphism_group_size(*pg32) == 40320);  // 20160 + 20160
  CHECK_THROWS_WITH_AS(
      enumerate_automorphism_group(pg32, [](const Automorphism&) {}, 100),
      doctest::Contains("exceeds cap"), std::length_error);
}

TEST_CASE("companion sigma: collineations, dualities, class swaps") {
  auto pg = build_projective(3, 2);
  CHECK(companion_sigma(random_automorphism(pg, 5)).is_identity());
  DiagramAutomorphism s = companion_sigma(symplectic_polarity(pg));
  CHECK(s.perm[0] == 2);
  CHECK(s.perm[2] == 0);

  auto q = build_hyperbolic_quadric(4, 3);
  DiagramAutomorphism r = companion_sigma(quadric_reflection_default(q));
  CHECK_FALSE(r.is_identity());  // a reflection swaps the two maximal classes
  CHECK(r.perm[2] == 3);
  CHECK(r.perm[3] == 2);
  CHECK(companion_sigma(identity_automorphism(q)).is_identity());
  // composition respects the companion map
  auto q2 = build_hyperbolic_quadric(4, 2);
  Automorphism a = random_automorphism(q2, 8), b = random_automorphism(q2, 9);
  DiagramAutomorphism sa = companion_sigma(a), sb = companion_sigma(b);
  CHECK(companion_sigma(compose(a, b)) == sb.compose(sa));
}

TEST_CASE("constructor zoo rejects wrong geometries") {
  auto parab = build_parabolic_quadric(3, 2);
  CHECK_THROWS(symplectic_polarity(parab));
  CHECK_THROWS(make_duality(parab, Mat::identity(parab->vdim), Mat::identity(parab->vdim)));
  auto pg = build_projective(3, 2);
  CHECK_THROWS(central_elation_quadric(pg));
  CHECK_THROWS(quadric_spread_collineation(pg));
}

TEST_CASE("central elation of the parabolic quadric fixes a chamber") {
  auto g = build_parabolic_quadric(3, 2);
  Automorphism th = central_elation_quadric(g);
  const auto& chambers = g->enumerate_chambers_capped();
  bool some_fixed = false;
  for (const auto& c : chambers)
    if (th.apply_chamber(c) == c) {
      some_fixed = true;
      break;
    }
  CHECK(some_fixed);
}

TEST_CASE("compose and inverse with Frobenius twists (PG(2,4))") {
  auto g = build_projective(2, 4);
  std::mt19937_64 rng(19);
  Mat m = Mat::identity(3);
  m.at(0, 2) = 2;  // a GF(4) entry with nontrivial Frobenius image
  std::vector<Automorphism> pool = {
      baer_collineation(g),
      make_collineation(g, m, 1),
      make_duality(g, Mat::identity(3), Mat::identity(3)),
      make_duality(g, m, Mat::identity(3), 1),
      random_automorphism(g, 23),
  };
  auto random_obj = [&](std::mt19937_64& r) { return (ObjId)(r() % g->num_objs()); };
  for (const auto& x : pool)
    for (const auto& y : pool) {
      Automorphism xy = compose(x, y);
      CHECK(((x.duality != y.duality) == xy.duality));
      for (int t = 0; t < 20; ++t) {
        ObjId a = random_obj(rng);
        CHECK(xy.apply_obj(a) == y.apply_obj(x.apply_obj(a)));
      }
    }
  for (const auto& x : pool) {
    Automorphism xi = inverse_auto(x);
    for (int t = 0; t < 30; ++t) {
      ObjId a = random_obj(rng);
      CHECK(xi.apply_obj(x.apply_obj(a)) == a);
      CHECK(x.apply_obj(xi.apply_obj(a)) == a);
    }
  }
}

TEST_CASE("group sizes over GF(3) and projective seed determinism") {
  auto g = build_projective(2, 3);
  CHECK(automorphism_group_size(*g) == 2 * 5616);
  size_t count = 0;
  enumerate_automorphism_group(g, [&](const Automorphism&) { ++count; });
  CHECK(count == 2 * 5616);

  auto pg = build_projective(3, 2);
  CHECK(projectively_equal(random_automorphism(pg, 31), random_automorphism(pg, 31)));
}

TEST_CASE("non-orthogonal matrices are rejected on quadrics") {
  auto g = build_hyperbolic_quadric(4, 2);
  Mat bad = Mat::identity(g->vdim);
  bad.at(0, 7) = 1;  // sends the singular e_{-4} to e_{-4}+e_4 with Q = 1
  CHECK_THROWS_AS(make_collineation(g, bad), std::invalid_argument);
}
