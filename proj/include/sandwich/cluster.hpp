#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sandwich/numeric.hpp"

namespace sandwich {

/// One point of a cluster of infinitely near points. The root has no parent;
/// a satellite point names the second point it is proximate to.
struct PointRecord {
  std::string id;
  std::optional<std::string> parent;
  std::optional<std::string> satellite_of;
};

struct Violation {
  std::string point;
  std::string rule;
};

std::string to_string(const Violation& v);

/// Structural validation of a point list (unique ids, single root,
/// ancestor-first order, legal satellite targets). Violations are data, not
/// failures.
std::vector<Violation> validate_tree(const std::vector<PointRecord>& records);

class ClusterTree;
using TreePtr = std::shared_ptr<const ClusterTree>;

/// Immutable tree of infinitely near points with the proximity relation.
/// Points are identified by string labels; the stored order is the
/// serialization order and must list every point after its proximity targets.
class ClusterTree {
 public:
  static TreePtr make(std::vector<PointRecord> records);

  std::size_t size() const { return records_.size(); }
  const std::vector<PointRecord>& records() const { return records_; }
  const std::vector<Violation>& violations() const { return violations_; }
  bool valid() const { return violations_.empty(); }
  /// Throws InputError naming the first violation.
  void require_valid() const;

  const std::string& id_of(int i) const { return records_[i].id; }
  /// Index of a point id, or -1 when absent.
  int index_of(std::string_view id) const;
  int parent_of(int i) const { return parent_[i]; }
  int satellite_target_of(int i) const { return satellite_[i]; }
  int root() const { return root_; }
  bool is_satellite(int i) const { return satellite_[i] >= 0; }

  /// The one or two earlier points p is proximate to.
  std::span<const int> proximity_targets(int p) const { return prox_targets_[p]; }
  /// The points proximate to p (they all come after p).
  std::span<const int> proximate_to(int p) const { return prox_to_[p]; }
  /// omega(p) = 1 + #{q -> p}; minus the diagonal entry of A.
  int omega(int p) const { return 1 + static_cast<int>(prox_to_[p].size()); }
  /// Neighbours of p in the dual graph of the exceptional divisor.
  std::span<const int> dual_adjacent(int p) const { return dual_adj_[p]; }

  bool is_ancestor_or_self(int a, int d) const;

  /// New tree with one extra point appended; the addition is validated.
  TreePtr with_point(const PointRecord& rec) const;
  /// An id not used by any point of this tree, derived from `base`.
  std::string fresh_id(std::string_view base) const;

 private:
  std::vector<PointRecord> records_;
  std::vector<Violation> violations_;
  std::vector<int> parent_, satellite_;
  std::vector<std::vector<int>> prox_targets_;
  std::vector<std::vector<int>> prox_to_;
  std::vector<std::vector<int>> dual_adj_;
  std::vector<std::pair<std::string, int>> index_;  // sorted by id
  int root_ = -1;

  void build_caches();
};

/// Merge two trees sharing point ids; shared ids must carry identical
/// records. Points of `b` not in `a` are appended in b's order.
TreePtr merge_trees(const ClusterTree& a, const ClusterTree& b);

/// Proximity matrix P: unit lower triangular, P[p][q] = -1 iff p -> q.
IntMat proximity_matrix(const ClusterTree& tree);
/// Intersection matrix A = -P^t P of the exceptional divisor.
IntMat intersection_matrix(const ClusterTree& tree);
/// Edges {p,q} with A[p][q] = 1; asserted connected and acyclic.
std::vector<std::pair<int, int>> dual_graph(const ClusterTree& tree);

/// v = P^{-1} nu by forward substitution: v_p = nu_p + sum of v over targets.
IntVec values_from_mults(const ClusterTree& tree, const IntVec& nu);
/// nu = P v.
IntVec mults_from_values(const ClusterTree& tree, const IntVec& v);
/// rho = P^t nu: rho_p = nu_p - sum of nu over points proximate to p.
IntVec excesses_from_mults(const ClusterTree& tree, const IntVec& nu);
/// nu from rho = P^t nu by back substitution.
IntVec mults_from_excesses(const ClusterTree& tree, const IntVec& rho);
/// Exact solve of A x = rhs through the two triangular factors.
IntVec solve_intersection(const ClusterTree& tree, const IntVec& rhs);

/// Cluster with integer virtual multiplicities. nu is the stored truth;
/// values and excesses are derived once at construction.
class WeightedCluster {
 public:
  WeightedCluster(TreePtr tree, IntVec nu);
  static WeightedCluster from_values(TreePtr tree, IntVec values);

  const ClusterTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  const IntVec& nu() const { return nu_; }
  const IntVec& values() const { return values_; }
  const IntVec& excesses() const { return rho_; }

  bool consistent() const;           // all excesses >= 0
  bool strictly_consistent() const;  // consistent and all nu >= 1
  /// Points of positive excess.
  std::vector<int> dicritical_points() const;

  /// Virtual codimension sum nu(nu+1)/2.
  Int codimension() const;
  /// Self-intersection sum nu^2.
  Int self_intersection() const;

  bool operator==(const WeightedCluster& other) const;

 private:
  TreePtr tree_;
  IntVec nu_, values_, rho_;
};

Int codimension(const WeightedCluster& wc);
Int self_intersection(const WeightedCluster& wc);

}  // namespace sandwich
