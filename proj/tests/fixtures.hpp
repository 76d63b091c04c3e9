#pragma once

#include "sandwich/cluster.hpp"
#include "sandwich/curve.hpp"

// Shared small clusters used across the suites.
//   fix1: O with a free child p1, weights (2,1).
//   fix2: the same tree with weights (1,2); not consistent.
//   fix3: O, p1 free child, p2 child of p1 satellite of O, weights (3,2,1).
//   fix4: fix3 plus a free child qp of O and the branch d = (O, qp).
namespace fixtures {

using namespace sandwich;

inline TreePtr tree1() {
  return ClusterTree::make({{"O", std::nullopt, std::nullopt}, {"p1", "O", std::nullopt}});
}

inline WeightedCluster fix1() { return WeightedCluster(tree1(), {2, 1}); }
inline WeightedCluster fix2() { return WeightedCluster(tree1(), {1, 2}); }

inline TreePtr tree3() {
  return ClusterTree::make(
      {{"O", std::nullopt, std::nullopt}, {"p1", "O", std::nullopt}, {"p2", "p1", "O"}});
}

inline WeightedCluster fix3() { return WeightedCluster(tree3(), {3, 2, 1}); }

inline TreePtr tree4() {
  return ClusterTree::make({{"O", std::nullopt, std::nullopt},
                            {"p1", "O", std::nullopt},
                            {"p2", "p1", "O"},
                            {"qp", "O", std::nullopt}});
}

// the smooth branch through the free point qp
inline Curve delta_branch() {
  TreePtr t = tree4();
  return Curve(t, {{"d", {t->index_of("O"), t->index_of("qp")}, 1}});
}

}  // namespace fixtures
