#include "sandwich/flags.hpp"

#include <algorithm>

#include "sandwich/error.hpp"

namespace sandwich {

Extension extend_tree(const SurfaceModel& surface, const Curve& c) {
  return extend_curve_tree(surface.tree(), c);
}

Flag build_flag(const SurfaceModel& surface, const Curve& c, IntVec m) {
  require(m.size() == surface.kplus().size(), "one excess per dicritical point required");
  for (const Int& x : m) require(x >= 0, "flag excesses must be non-negative");

  Extension ext = extend_curve_tree(surface.tree(), c);
  const ClusterTree& kp = *ext.kprime;
  const int n = static_cast<int>(kp.size());

  Flag flag;
  flag.kprime = ext.kprime;
  flag.p_points = ext.p_points;
  flag.p_by_branch = ext.p_by_branch;
  flag.m = m;
  flag.ambient_size = surface.tree().size();
  for (int u : surface.kplus()) {
    int i = kp.index_of(surface.tree().id_of(u));
    check_invariant(i >= 0, "dicritical point missing from K'");
    flag.kplus_in_kprime.push_back(i);
  }

  flag.curve_e.assign(n, 0);
  for (std::size_t p = 0; p < c.tree().size(); ++p) {
    int q = kp.index_of(c.tree().id_of(static_cast<int>(p)));
    if (q >= 0) flag.curve_e[q] = c.multiplicities()[p];
  }

  // T_0 has excess m_p on the dicritical set and 0 elsewhere.
  IntVec rho0(n, 0);
  for (std::size_t i = 0; i < flag.kplus_in_kprime.size(); ++i)
    rho0[flag.kplus_in_kprime[i]] = m[i];
  flag.clusters.emplace_back(flag.kprime, mults_from_excesses(kp, rho0));

  for (long round = 0;; ++round) {
    check_invariant(round < 1'000'000, "flag construction exceeded the step cap");
    const WeightedCluster& top = flag.clusters.back();
    int target = -1;
    for (int p : flag.p_points)
      if (top.nu()[p] <= 0) {
        target = p;
        break;
      }
    if (target < 0) break;
    IntVec nu = top.nu();
    nu[target] += 1;
    auto [next, trace] =
        partial_unload(WeightedCluster(flag.kprime, std::move(nu)), flag.kplus_in_kprime);
    flag.clusters.push_back(std::move(next));
  }

  const WeightedCluster& tn = flag.clusters.back();
  for (int p : flag.p_points)
    check_invariant(tn.nu()[p] == 1, "final flag cluster multiplicity at an attachment "
                                     "point is not 1");
  for (int u : flag.kplus_in_kprime)
    for (const auto& t : flag.clusters)
      check_invariant(t.values()[u] == flag.clusters.front().values()[u],
                      "values at the dicritical set drifted along the flag");

  for (std::size_t i = 0; i < flag.kplus_in_kprime.size(); ++i)
    flag.omega.push_back(m[i] - tn.excesses()[flag.kplus_in_kprime[i]]);

  flag.displacement.resize(n);
  for (int p = 0; p < n; ++p)
    flag.displacement[p] = tn.values()[p] - flag.clusters.front().values()[p];

  // With m >= omega every cluster is consistent and each step drops the
  // ideal by codimension one.
  bool dominates = true;
  for (std::size_t i = 0; i < flag.m.size(); ++i)
    if (flag.m[i] < flag.omega[i]) dominates = false;
  if (dominates)
    check_invariant(tn.codimension() - flag.clusters.front().codimension() == flag.steps(),
                    "flag length does not match the codimension jump");
  return flag;
}

Flag build_flag_default(const SurfaceModel& surface, const Curve& c) {
  Flag probe = build_flag(surface, c, IntVec(surface.kplus().size(), 0));
  return build_flag(surface, c, probe.omega);
}

WeightedCluster companion_cluster(const Flag& flag) {
  for (std::size_t i = 0; i < flag.m.size(); ++i)
    if (flag.m[i] < flag.omega[i])
      throw InputError("companion cluster needs m >= omega; omega = (" +
                       join(flag.omega) + ")");
  IntVec nu = flag.tn().nu();
  for (std::size_t p = 0; p < nu.size(); ++p) nu[p] -= flag.curve_e[p];
  WeightedCluster companion(flag.kprime, std::move(nu));
  check_invariant(companion.consistent(), "companion cluster is not consistent");
  for (int p : companion.dicritical_points())
    check_invariant(p < static_cast<int>(flag.ambient_size),
                    "companion cluster has a dicritical point outside the cluster");
  return companion;
}

IntVec dbar(const Flag& flag) {
  for (int u : flag.kplus_in_kprime)
    check_invariant(flag.displacement[u] == 0, "D-bar must vanish on the dicritical set");
  return flag.displacement;
}

}  // namespace sandwich
