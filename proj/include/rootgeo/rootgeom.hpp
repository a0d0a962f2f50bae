#pragma once
// The long root subgroup geometry layer.  Its points are the incident
// point-hyperplane pairs for the projective kind, and the singular lines
// for the quadric kinds; pairs of them land in one of the five mutual
// positions 0, 1, 2, 2', 3 (equal / collinear / symplectic / special /
// opposite).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rootgeo/autos.hpp"
#include "rootgeo/geometry.hpp"

namespace rootgeo {

enum class MutualPosition : uint8_t { D0 = 0, D1 = 1, D2 = 2, D2P = 3, D3 = 4 };

std::string position_name(MutualPosition p);  // "0", "1", "2", "2'", "3"

struct RootPoint {
  ObjId a = NO_OBJ;  // projective: the point; quadrics: the singular line
  ObjId b = NO_OBJ;  // projective: the hyperplane through it
  bool operator==(const RootPoint& o) const { return a == o.a && b == o.b; }
};

std::vector<RootPoint> root_points(const Geometry& g);

MutualPosition mutual_position(const Geometry& g, const RootPoint& x, const RootPoint& y);

// image of a root point; dualities swap the flag per (p,H) -> (H^theta, p^theta)
RootPoint apply_root_point(const Automorphism& th, const RootPoint& x);

struct PositionHistogram {
  std::array<uint64_t, 5> count{};
  uint64_t total() const { return count[0] + count[1] + count[2] + count[3] + count[4]; }
  bool attains(MutualPosition p) const { return count[(int)p] > 0; }
  std::string str() const;  // "d0 d1 d2 d2p d3" labelled counts
};

PositionHistogram position_profile(const Automorphism& th, const std::vector<RootPoint>& pts);
PositionHistogram position_profile(const Automorphism& th);

// positions attained -> subset of {0,1,2,2',3}; kangaroo for D means the
// histogram puts no mass on D
bool is_kangaroo(const PositionHistogram& h, const std::vector<MutualPosition>& D);

}  // namespace rootgeo
