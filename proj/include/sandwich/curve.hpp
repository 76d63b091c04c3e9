#pragma once

#include <span>
#include <string>
#include <vector>

#include "sandwich/cluster.hpp"

namespace sandwich {

/// A branch is a maximal chain of points starting at the root, with a
/// positive coefficient. Multiplicities along the chain follow the proximity
/// recursion with e = 1 at the last point.
struct BranchData {
  std::string name;
  std::vector<int> chain;  // indices into the curve tree, root first
  Int coeff = 1;
};

class Curve {
 public:
  Curve(TreePtr tree, std::vector<BranchData> branches);

  const ClusterTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  std::span<const BranchData> branches() const { return branches_; }
  bool empty() const { return branches_.empty(); }

  /// e_p(C) per tree point: coefficient-weighted sum of branch recursions.
  const IntVec& multiplicities() const { return e_; }
  /// v = P^{-1} e on the curve's tree.
  const IntVec& values() const { return values_; }
  /// Branch multiplicities along branch b's chain (chain order).
  std::span<const Int> branch_chain_multiplicities(int b) const { return branch_e_[b]; }

 private:
  TreePtr tree_;
  std::vector<BranchData> branches_;
  std::vector<IntVec> branch_e_;
  IntVec e_, values_;
};

/// Noether pairing [C,C']_O = sum e_p(C) e_p(C') over shared points; the
/// trees are merged by id first.
Int noether_pairing(const Curve& a, const Curve& b);

/// [K,C]_O = sum nu_p e_p(C) over the points shared by the cluster and the
/// curve's tree.
Int pair_with_curve(const WeightedCluster& wc, const Curve& c);

/// delta at the origin: sum e_p(e_p - 1)/2 over all points of the curve.
Int delta_origin(const Curve& c);
/// sum nu_p(nu_p - 1)/2 = K^2 - c(K); requires a consistent cluster.
Int delta_cluster(const WeightedCluster& wc);

/// A curve going sharply through wc: rho_p branches through each dicritical
/// p, each ending in a fresh free tail point. Its multiplicities equal nu.
/// Distinct labels keep the tails of separately drawn curves distinct.
Curve generic_curve(const WeightedCluster& wc, const std::string& label = "g");

/// One generic branch through the chain of p, with a fresh free tail.
BranchData generic_branch_through(const ClusterTree& tree, int p,
                                  std::vector<PointRecord>& extra,
                                  const std::string& name);

/// Union of two curves over the merged tree. Branch names are kept unique.
Curve merge_curves(const Curve& a, const Curve& b);

Curve scale_curve(const Curve& c, const Int& k);

struct TailValidation {
  /// Per branch, the first free point off the ambient cluster where the
  /// whole curve is non-singular, with only free such points after it.
  std::vector<int> p_points;  // indices into the curve tree
  /// The reading applied for "first non-singular point not in the cluster":
  /// non-singular for the whole curve (e_p(C) = 1), so the branches are
  /// pairwise separated and the total transform has normal crossings.
  static constexpr const char* reading =
      "first free point off the cluster with curve multiplicity 1 and only free "
      "simple points after it";
};

/// Checks every branch carries an admissible tail relative to `ambient` and
/// identifies the per-branch attachment points.
TailValidation validate_tails(const ClusterTree& ambient, const Curve& c);

/// K' = ambient plus every branch point up to and including its attachment
/// point. The attachment points are pairwise distinct and maximal in K'.
struct Extension {
  TreePtr kprime;
  std::vector<int> p_points;     // kprime indices, branch order
  std::vector<int> p_by_branch;  // kprime index per branch
};

Extension extend_curve_tree(const ClusterTree& ambient, const Curve& c);

}  // namespace sandwich
