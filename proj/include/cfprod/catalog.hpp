#pragma once

// Named examples used throughout the tests, the demo and the verification suite.

#include <string>
#include <vector>

#include "cfprod/abgroup.hpp"
#include "cfprod/fusion.hpp"
#include "cfprod/metric.hpp"
#include "cfprod/phase.hpp"
#include "cfprod/pointed.hpp"

namespace cfprod::catalog {

/// C(Z/4, q) with q(a) = a^2 / 8, over sVec embedded at 2.
inline PointedCategory p4() {
  const FinAbGroup e({4}), b({2});
  auto pmg = validate_premetric(e, {Phase(0, 1), Phase(1, 8), Phase(1, 2), Phase(1, 8)}, "P4");
  return make_pointed(std::move(pmg), b, Element{1}, Hom(b, e, {Element{2}}));
}

/// The semion: Z/2 with q = [0, 1/4].
inline PreMetricGroup semion() { return validate_premetric(FinAbGroup({2}), {Phase(0, 1), Phase(1, 4)}, "Sem"); }

inline PreMetricGroup semion_squared() {
  auto p = deligne_product(semion(), semion());
  p.set_name("Sem [x] Sem");
  return p;
}

inline PointedCategory svec() { return make_Bz(FinAbGroup({2}), Element{1}); }
inline PointedCategory rep_z2() { return make_Bz(FinAbGroup({2}), Element{0}); }
inline PointedCategory z_svec() { return center_of_Bz(FinAbGroup({2}), Element{1}); }
inline PointedCategory toric_code() { return center_of_Bz(FinAbGroup({2}), Element{0}); }

/// SU(2)_4 fusion rules on {1, z, Y, X1, X-1}, graded by Z/2 with X1, X-1 odd; the
/// embedded Rep(Z/2) is {1, z}.
inline GradedFusionRing su2_4_ring() {
  FusionRingData d;
  d.name = "SU(2)_4";
  d.grading_group = FinAbGroup({2});
  d.basis = {"1", "z", "Y", "X1", "X-1"};
  d.grade = {Element{0}, Element{0}, Element{0}, Element{1}, Element{1}};
  d.unit = 0;
  d.dual = {0, 1, 2, 3, 4};
  enum { one, z, y, x1, xm };
  auto sym = [&](std::size_t a, std::size_t b, std::size_t c) {
    d.set(a, b, c, 1);
    if (a != b) d.set(b, a, c, 1);
  };
  for (std::size_t a = 0; a < 5; ++a) sym(one, a, a);
  sym(z, z, one);
  sym(z, y, y);
  sym(z, x1, xm);
  sym(z, xm, x1);
  sym(y, y, one);
  sym(y, y, z);
  sym(y, y, y);
  sym(y, x1, x1);
  sym(y, x1, xm);
  sym(y, xm, x1);
  sym(y, xm, xm);
  sym(x1, x1, y);
  sym(x1, x1, one);
  sym(xm, xm, y);
  sym(xm, xm, one);
  sym(x1, xm, y);
  sym(x1, xm, z);
  d.embedding = RingEmbedding{FinAbGroup({2}), {0, 1}};
  return validate_fusion_ring(d);
}

/// Vec_{Z/4} on {1, g, g2, g3}, graded by parity, with Rep(Z/2) embedded as {1, g2}.
inline GradedFusionRing vec_z4_ring() {
  const FinAbGroup e({4}), b({2});
  auto r = group_ring(e, Hom(e, b, {Element{1}}), {"1", "g", "g2", "g3"}, "Vec_Z4");
  return with_embedding(r, RingEmbedding{b, {0, 2}});
}

/// Vec_{Z/2} [x] Rep(Z/2) on {1, phi, g, g.phi}, graded by the Vec_{Z/2} factor.
inline GradedFusionRing vec_z2_rep_z2_ring() {
  const FinAbGroup e({2, 2}), b({2});
  auto r = group_ring(e, Hom(e, b, {Element{1}, Element{0}}), {"1", "phi", "g", "g.phi"}, "Vec_Z2 [x] Rep(Z2)");
  return with_embedding(r, RingEmbedding{b, {0, 1}});
}

}  // namespace cfprod::catalog
