#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sandwich/curve.hpp"
#include "sandwich/unloading.hpp"

namespace sandwich {

/// One singularity of the blown-up surface: the connected component T_Q of
/// zero-excess points contracting to it, its minimal point O_Q, and the
/// multiplicities nu^(Q) of the codimension-one cluster K_Q.
struct Singularity {
  std::string id;
  std::vector<int> t_q;  // tree order
  int o_q = -1;
  IntVec nu_q;                // over K; the attachment point is dropped
  std::vector<int> b_q;       // points where nu^(Q) = nu - 1
  Int mult;                   // 1 + #B_Q
};

/// The combinatorial model of X = Bl_I(S) for a strictly consistent cluster:
/// dicritical points, simple-ideal value vectors, and singularities.
class SurfaceModel {
 public:
  static SurfaceModel build(WeightedCluster k);

  const WeightedCluster& cluster() const { return k_; }
  const ClusterTree& tree() const { return k_.tree(); }
  const TreePtr& tree_ptr() const { return k_.tree_ptr(); }

  std::span<const int> kplus() const { return kplus_; }
  /// Position of a point inside kplus(), or -1.
  int kplus_position(int p) const;

  /// v(I_p): the value vector of the simple ideal through p, A v = -1_p.
  const IntVec& simple_values(int p) const { return simple_values_[p]; }
  /// L_u = (v_q(I_u))_{q in Kplus}.
  IntVec l_vector(int u) const;

  std::span<const Singularity> singularities() const { return sings_; }
  const Singularity& singularity(std::string_view id) const;
  /// The singularity whose T_Q contains the point, if any.
  const Singularity* singularity_containing(int p) const;

  /// Zariski factorization exponents: (dicritical point, its excess).
  std::vector<std::pair<int, Int>> zariski_factorization() const;

 private:
  WeightedCluster k_;
  std::vector<int> kplus_;
  std::vector<IntVec> simple_values_;
  std::vector<Singularity> sings_;

  explicit SurfaceModel(WeightedCluster k) : k_(std::move(k)) {}
};

/// K(p): the simple cluster of the chain down to p, multiplicity 1 at p.
WeightedCluster simple_cluster(TreePtr tree, int p);

/// K union a fresh simple free point attached below `attach`, unloaded.
WeightedCluster kq_extended(const WeightedCluster& k, int attach);

/// Recomputes (nu^(Q), B_Q) from scratch, checking that every choice of
/// attachment point in T_Q gives the same answer.
std::pair<IntVec, std::vector<int>> compute_kq(const SurfaceModel& surface,
                                               const Singularity& q);

/// Restriction of the curve's values to the dicritical points.
IntVec l_vector_of_curve(const SurfaceModel& surface, const Curve& c);

}  // namespace sandwich
