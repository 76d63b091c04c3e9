#pragma once

#include <span>
#include <vector>

#include "sandwich/surface.hpp"

namespace sandwich {

/// A flag for (K, C): clusters T_0 < T_1 < ... < T_n over the extended tree
/// K', built by unit increments at the attachment points followed by partial
/// unloading relative to the dicritical set. The step count n, the offsets
/// omega and the displacement do not depend on the chosen excesses m.
struct Flag {
  TreePtr kprime;
  std::vector<int> p_points;               // kprime indices, branch order
  std::vector<int> p_by_branch;
  std::vector<int> kplus_in_kprime;        // dicriticals mapped into K'
  std::vector<WeightedCluster> clusters;   // T_0 .. T_n
  IntVec m;                                // excesses of T_0 on Kplus
  IntVec omega;                            // m - rho^{T_n} on Kplus
  IntVec displacement;                     // v(T_n) - v(T_0) per K' point
  IntVec curve_e;                          // e_p(C) on K'
  std::size_t ambient_size = 0;            // K' lists the K points first

  int steps() const { return static_cast<int>(clusters.size()) - 1; }
  const WeightedCluster& t0() const { return clusters.front(); }
  const WeightedCluster& tn() const { return clusters.back(); }
};

/// K' and the attachment points p_i (flag-level wrapper of the curve-side
/// extension).
Extension extend_tree(const SurfaceModel& surface, const Curve& c);

/// Builds the m-flag; m is indexed like surface.kplus() and must be >= 0.
Flag build_flag(const SurfaceModel& surface, const Curve& c, IntVec m);

/// Probes at m = 0 to learn omega, then rebuilds at m = omega so that every
/// cluster of the flag is consistent.
Flag build_flag_default(const SurfaceModel& surface, const Curve& c);

/// C_m = (K', tau^n - e_C); requires m >= omega. Its generic members B make
/// C + B v-minimal Cartier divisors.
WeightedCluster companion_cluster(const Flag& flag);

/// Coefficients of the divisor D-bar: the total unloading displacement per
/// point of K'; zero on the dicritical set.
IntVec dbar(const Flag& flag);

}  // namespace sandwich
