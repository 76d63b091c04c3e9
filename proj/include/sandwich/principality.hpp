#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sandwich/surface.hpp"

namespace sandwich {

struct Decomposition {
  bool solvable = false;
  RatVec coeffs;  // aligned with the support
  bool integral() const;
};

/// Writes `target` (a vector over the Kplus coordinates) in the L-vectors of
/// the support points: sum a_u L_u = target. With full support the L-vectors
/// form a basis and the system is always solvable; a proper subset may be
/// unsolvable, which is reported as a value.
Decomposition decompose_l(const SurfaceModel& surface, const IntVec& target,
                          std::span<const int> support);

/// Same solve on raw columns; support entries index the columns.
Decomposition decompose_columns(const std::vector<IntVec>& columns, const IntVec& target,
                                std::span<const int> support);

/// BP(J_C): place the curve's values on the dicritical points, zero
/// elsewhere on K, and unload. The values at Kplus must survive unchanged.
WeightedCluster ideal_cluster_qc(const SurfaceModel& surface, const Curve& c);

struct MumfordDivisor {
  TreePtr tree;             // the resolution the divisor lives on
  std::vector<int> points;  // contracted points, tree order of the resolution
  RatVec coeffs;
  bool integral() const;
};

/// The rational exceptional divisor D with |D.E_p| = -|C~.E_p| at every
/// contracted point of the resolution K' (the curve's extended tree).
MumfordDivisor mumford_divisor(const SurfaceModel& surface, const Curve& c);
/// Same, over an explicitly provided resolution tree containing K'.
MumfordDivisor mumford_divisor_on(const SurfaceModel& surface, const Curve& c,
                                  const TreePtr& resolution);

struct CartierVerdict {
  bool cartier = false;
  Decomposition decomposition;        // criterion: integral coordinates in the L-basis
  WeightedCluster qc;                 // criterion: dicritical points inside Kplus
  std::vector<int> qc_dicriticals;
  MumfordDivisor mumford;             // criterion: integral Mumford divisor
  bool by_decomposition = false, by_unloading = false, by_mumford = false;
};

/// Runs the three principality criteria and checks they agree.
CartierVerdict is_cartier(const SurfaceModel& surface, const Curve& c);

struct LocalVerdict {
  bool principal = false;
  std::vector<int> support;  // K_+^Q
  Decomposition decomposition;
  std::vector<std::string> branches;  // branches of C through Q
};

/// Local principality at the singularity Q: decompose the L-vector of the
/// subcurve through Q over the dicriticals adjacent to T_Q.
LocalVerdict local_principality(const SurfaceModel& surface, const Curve& c,
                                const Singularity& q);

/// Identifies where a branch meets the exceptional locus: the singularity
/// whose T_Q the branch's first off-K point is proximate to, or null for a
/// smooth point.
const Singularity* attachment_singularity(const SurfaceModel& surface, const Curve& c,
                                          int branch);

/// Least m with m*C Cartier, for a surface blown up from one simple ideal.
Int minimal_cartier_multiple(const SurfaceModel& surface, const Curve& c);

/// [C1,C2]_O - [Q_{C1},C2]_O.
Int intersection_on_x(const SurfaceModel& surface, const Curve& c1, const Curve& c2);
inline Int intersection_from_pairings(const Int& noether, const Int& qc_pairing) {
  return noether - qc_pairing;
}

/// The rational intersection number of the two strict transforms, computed
/// through the Mumford pullback on a common resolution.
Rat mumford_intersection(const SurfaceModel& surface, const Curve& c1, const Curve& c2);

/// C plus a_p generic curves through the dual-graph neighbours of each named
/// dicritical, reducing principality of C~ + sum a_p L_p to is_cartier.
Curve exceptional_reduction(const SurfaceModel& surface, const Curve& c,
                            std::span<const std::pair<int, Int>> coeffs);

}  // namespace sandwich
