#pragma once
// Building automorphisms at finite scale: semilinear collineations and,
// for the projective kind, dualities (the correlation form is carried
// explicitly so that composition and squares stay computable subspace
// maps).  Matrices act on row vectors, v -> phi^frob(v) * mat, and are
// compared projectively.

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "rootgeo/geometry.hpp"

namespace rootgeo {

struct Automorphism {
  std::shared_ptr<const Geometry> geom;
  Mat mat;
  int frob = 0;
  bool duality = false;
  Mat corr;  // used when duality

  Mat apply(const Mat& basis) const;  // RREF image
  Vec apply_point_vec(const Vec& v) const;
  ObjId apply_obj(ObjId id) const;
  Chamber apply_chamber(const Chamber& c) const;  // duality allowed for projective
  bool fixes_obj(ObjId id) const;

  bool is_projective_identity() const;
};

Automorphism identity_automorphism(std::shared_ptr<const Geometry> geom);
Automorphism make_collineation(std::shared_ptr<const Geometry> geom, const Mat& m, int frob = 0);
Automorphism make_duality(std::shared_ptr<const Geometry> geom, const Mat& m, const Mat& corr,
                          int frob = 0);

// a after b is compose(b, a); compose(x, y) applies x first, then y
Automorphism compose(const Automorphism& first, const Automorphism& second);
Automorphism inverse_auto(const Automorphism& a);
bool projectively_equal(const Automorphism& a, const Automorphism& b);

// throws if the map does not preserve the geometry
void validate_automorphism(const Automorphism& a);

// ---- constructor zoo -------------------------------------------------------
Automorphism symplectic_polarity(std::shared_ptr<const Geometry> pg);
Automorphism spread_collineation(std::shared_ptr<const Geometry> pg);
Automorphism central_collineation(std::shared_ptr<const Geometry> pg, ObjId center, ObjId axis,
                                  uint8_t data);
Automorphism baer_collineation(std::shared_ptr<const Geometry> pg);
Automorphism quadric_reflection(std::shared_ptr<const Geometry> quad, const Vec& v);
Automorphism quadric_reflection_default(std::shared_ptr<const Geometry> quad);
Automorphism central_elation_quadric(std::shared_ptr<const Geometry> parab);
Automorphism quadric_spread_collineation(std::shared_ptr<const Geometry> hyp);
// long root elation of the orthogonal group: the Siegel transformation
// attached to a singular line (all characteristics)
Automorphism quadric_long_root_elation(std::shared_ptr<const Geometry> quad, ObjId line);

// ---- sampling & enumeration ------------------------------------------------
Automorphism random_automorphism(std::shared_ptr<const Geometry> geom, uint64_t seed);

constexpr uint64_t DEFAULT_AUTO_CAP = 100000;
// count = 2 * |PGammaL(n+1, q)| for the projective kind (dualities doubled)
uint64_t automorphism_group_size(const Geometry& geom);
// enumeration yields each element exactly once (canonically scaled matrices)
void enumerate_automorphism_group(std::shared_ptr<const Geometry> geom,
                                  const std::function<void(const Automorphism&)>& visit,
                                  uint64_t cap = DEFAULT_AUTO_CAP);

DiagramAutomorphism companion_sigma(const Automorphism& a);

// fixed structure probes
std::vector<size_t> fixed_point_ids(const Automorphism& a);
std::vector<ObjId> fixed_objs_of_dim(const Automorphism& a, int dim);
bool all_points_absolute(const Automorphism& a);  // p in p^theta for every point

}  // namespace rootgeo
