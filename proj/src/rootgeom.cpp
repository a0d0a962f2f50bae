#include "rootgeo/rootgeom.hpp"

#include <cstring>
#include <stdexcept>

namespace rootgeo {

std::string position_name(MutualPosition p) {
  switch (p) {
    case MutualPosition::D0: return "0";
    case MutualPosition::D1: return "1";
    case MutualPosition::D2: return "2";
    case MutualPosition::D2P: return "2'";
    case MutualPosition::D3: return "3";
  }
  return "?";
}

std::vector<RootPoint> root_points(const Geometry& g) {
  std::vector<RootPoint> out;
  if (g.kind == GeomKind::Projective) {
    int n = g.n;
    for (ObjId p = g.first_of_dim(1); p < g.first_of_dim(2); ++p) {
      size_t pid = g.point_id(p);
      for (ObjId h = g.first_of_dim(n); h < g.first_of_dim(n + 1); ++h)
        if (g.pts_in[h].test(pid)) out.push_back({p, h});
    }
  } else {
    for (ObjId l = g.first_of_dim(2); l < g.first_of_dim(3); ++l) out.push_back({l, NO_OBJ});
  }
  return out;
}

namespace {

MutualPosition position_projective(const Geometry& g, const RootPoint& x, const RootPoint& y) {
  if (x.a == y.a && x.b == y.b) return MutualPosition::D0;
  if (x.a == y.a || x.b == y.b) return MutualPosition::D1;
  bool x_in_yb = g.pts_in[y.b].test(g.point_id(x.a));
  bool y_in_xb = g.pts_in[x.b].test(g.point_id(y.a));
  if (x_in_yb && y_in_xb) return MutualPosition::D2;
  if (x_in_yb || y_in_xb) return MutualPosition::D2P;
  return MutualPosition::D3;
}

MutualPosition position_polar_lines(const Geometry& g, ObjId L, ObjId M) {
  if (L == M) return MutualPosition::D0;
  const GF& F = *g.F;
  const Mat& bl = g.basis(L);
  const Mat& bm = g.basis(M);
  int s = 2 + 2 - rank_of(F, stack(bl, bm));
  if (s == 1) {
    Mat sp = span_of(F, bl, bm);
    return g.is_singular(sp) ? MutualPosition::D1 : MutualPosition::D2;
  }
  if (s != 0) throw std::logic_error("rootgeom: distinct equal lines");
  int t = meet_dim(F, bl, g.perp_of[M]);
  if (t == 2) return MutualPosition::D2;  // common singular subspace
  if (t == 1) return MutualPosition::D2P;
  return MutualPosition::D3;
}

}  // namespace

MutualPosition mutual_position(const Geometry& g, const RootPoint& x, const RootPoint& y) {
  if (g.kind == GeomKind::Projective) return position_projective(g, x, y);
  return position_polar_lines(g, x.a, y.a);
}

RootPoint apply_root_point(const Automorphism& th, const RootPoint& x) {
  const Geometry& g = *th.geom;
  if (g.kind != GeomKind::Projective) return {th.apply_obj(x.a), NO_OBJ};
  if (!th.duality) return {th.apply_obj(x.a), th.apply_obj(x.b)};
  // (p, H) -> (H^theta, p^theta): the image of H is a point, of p a hyperplane
  return {th.apply_obj(x.b), th.apply_obj(x.a)};
}

std::string PositionHistogram::str() const {
  return "d0 " + std::to_string(count[0]) + " d1 " + std::to_string(count[1]) + " d2 " +
         std::to_string(count[2]) + " d2p " + std::to_string(count[3]) + " d3 " +
         std::to_string(count[4]);
}

PositionHistogram position_profile(const Automorphism& th, const std::vector<RootPoint>& pts) {
  PositionHistogram h;
  const Geometry& g = *th.geom;
  for (const auto& x : pts) {
    RootPoint y = apply_root_point(th, x);
    h.count[(int)mutual_position(g, x, y)] += 1;
  }
  return h;
}

PositionHistogram position_profile(const Automorphism& th) {
  return position_profile(th, root_points(*th.geom));
}

bool is_kangaroo(const PositionHistogram& h, const std::vector<MutualPosition>& D) {
  for (auto p : D)
    if (h.attains(p)) return false;
  return true;
}

}  // namespace rootgeo
