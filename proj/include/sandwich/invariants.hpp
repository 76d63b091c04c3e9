#pragma once

#include <string>

#include "sandwich/flags.hpp"
#include "sandwich/principality.hpp"

namespace sandwich {

/// mult_Q(C~) = e_{O_Q}(C) - sum of e_p(C) over B_Q.
Int mult_at_q(const SurfaceModel& surface, const Curve& c, const Singularity& q);

/// Total order of singularity of the strict transform,
/// [T_n,C] - [T_0,C] - n for any flag; independent of m.
Int delta_on_x(const SurfaceModel& surface, const Curve& c);
Int delta_on_x(const SurfaceModel& surface, const Curve& c, IntVec m);
inline Int delta_from_pairings(const Int& tn_pairing, const Int& t0_pairing, const Int& n) {
  return tn_pairing - t0_pairing - n;
}

/// delta_O(C) - delta(Q_C) = sum d_p(d_p-1)/2 with d_p = e_p(C) - nu_p(Q_C);
/// both forms are evaluated and must agree. Requires a Cartier curve.
Int delta_cartier_case(const SurfaceModel& surface, const Curve& c);
inline Int delta_cartier_from(const Int& delta_curve, const Int& delta_qc) {
  return delta_curve - delta_qc;
}

/// Value semigroup of a branch at the singularity it passes through, stored
/// explicitly below the conductor.
struct Semigroup {
  IntVec elements_below_conductor;  // sorted, starts at 0 when nonempty
  Int conductor;

  bool contains(const Int& z) const;
};

/// S = {elements} together with every integer >= elements.back(). The list
/// must be strictly increasing and start at 0.
Semigroup semigroup_from_initial_elements(const IntVec& elements);

Int gap_count(const Semigroup& s);

/// z in S <=> conductor-1-z not in S, for all z below the conductor.
bool is_symmetric(const Semigroup& s);

struct SemigroupResult {
  Semigroup semigroup;
  IntVec alpha;            // [T_i,C] - [T_0,C], the first n+1 elements
  std::string attachment;  // singularity id or "smooth"
  Int delta;               // gap count, equals delta_on_x
};

/// Semigroup of an irreducible branch on the singularity its strict
/// transform passes through; the full semigroup of the integers when the
/// branch meets the exceptional locus at a smooth point.
SemigroupResult semigroup_at_q(const SurfaceModel& surface, const Curve& branch);

}  // namespace sandwich
