#include "sandwich/surface.hpp"

#include <algorithm>

#include "sandwich/error.hpp"

namespace sandwich {

int SurfaceModel::kplus_position(int p) const {
  auto it = std::find(kplus_.begin(), kplus_.end(), p);
  return it == kplus_.end() ? -1 : static_cast<int>(it - kplus_.begin());
}

IntVec SurfaceModel::l_vector(int u) const {
  IntVec out;
  out.reserve(kplus_.size());
  for (int q : kplus_) out.push_back(simple_values_[u][q]);
  return out;
}

const Singularity& SurfaceModel::singularity(std::string_view id) const {
  for (const auto& s : sings_)
    if (s.id == id) return s;
  throw InputError("unknown singularity " + std::string(id));
}

const Singularity* SurfaceModel::singularity_containing(int p) const {
  for (const auto& s : sings_)
    if (std::find(s.t_q.begin(), s.t_q.end(), p) != s.t_q.end()) return &s;
  return nullptr;
}

std::vector<std::pair<int, Int>> SurfaceModel::zariski_factorization() const {
  std::vector<std::pair<int, Int>> out;
  for (int p : kplus_) out.emplace_back(p, k_.excesses()[p]);
  return out;
}

WeightedCluster simple_cluster(TreePtr tree, int p) {
  tree->require_valid();
  require(p >= 0 && p < static_cast<int>(tree->size()), "unknown point");
  std::vector<int> chain;
  for (int a = p; a >= 0; a = tree->parent_of(a)) chain.push_back(a);
  std::reverse(chain.begin(), chain.end());
  IntVec nu(tree->size(), 0);
  // branch recursion along the chain, e = 1 at p
  IntVec e(chain.size(), 0);
  e.back() = 1;
  for (int j = static_cast<int>(chain.size()) - 2; j >= 0; --j)
    for (std::size_t i = j + 1; i < chain.size(); ++i)
      if (tree->parent_of(chain[i]) == chain[j] ||
          tree->satellite_target_of(chain[i]) == chain[j])
        e[j] += e[i];
  for (std::size_t j = 0; j < chain.size(); ++j) nu[chain[j]] = e[j];
  return WeightedCluster(std::move(tree), std::move(nu));
}

WeightedCluster kq_extended(const WeightedCluster& k, int attach) {
  const ClusterTree& tree = k.tree();
  require(attach >= 0 && attach < static_cast<int>(tree.size()), "unknown point");
  TreePtr big = tree.with_point({tree.fresh_id("q@" + tree.id_of(attach)),
                                 tree.id_of(attach), std::nullopt});
  IntVec nu = k.nu();
  nu.push_back(1);
  auto [result, trace] = unload(WeightedCluster(big, std::move(nu)));
  return result;
}

std::pair<IntVec, std::vector<int>> compute_kq(const SurfaceModel& surface,
                                               const Singularity& q) {
  const WeightedCluster& k = surface.cluster();
  const int n = static_cast<int>(k.tree().size());
  IntVec nu_q;
  for (std::size_t choice = 0; choice < q.t_q.size(); ++choice) {
    WeightedCluster ext = kq_extended(k, q.t_q[choice]);
    IntVec restricted(ext.nu().begin(), ext.nu().begin() + n);
    if (choice == 0)
      nu_q = restricted;
    else
      check_invariant(nu_q == restricted,
                      "K_Q depends on the attachment point chosen in T_Q");
    check_invariant(ext.nu().back() == 0, "attachment point kept nonzero multiplicity");
  }

  std::vector<int> b_q;
  for (int p = 0; p < n; ++p) {
    if (p == q.o_q) {
      check_invariant(nu_q[p] == k.nu()[p] + 1, "K_Q multiplicity at O_Q is not nu + 1");
      continue;
    }
    check_invariant(nu_q[p] <= k.nu()[p] && nu_q[p] >= k.nu()[p] - 1,
                    "K_Q multiplicity outside [nu-1, nu]");
    if (nu_q[p] == k.nu()[p] - 1) b_q.push_back(p);
  }
  Int sum = 0;
  for (int p : b_q) sum += k.nu()[p];
  check_invariant(sum == k.nu()[q.o_q], "nu_{O_Q} != sum of nu over B_Q");
  return {std::move(nu_q), std::move(b_q)};
}

SurfaceModel SurfaceModel::build(WeightedCluster k) {
  k.tree().require_valid();
  const ClusterTree& tree = k.tree();
  const int n = static_cast<int>(tree.size());
  for (int p = 0; p < n; ++p) {
    if (k.excesses()[p] < 0)
      throw InputError("cluster is not consistent: negative excess at " + tree.id_of(p));
    if (k.nu()[p] < 1)
      throw InputError("cluster is not strictly consistent: multiplicity " +
                       k.nu()[p].str() + " at " + tree.id_of(p));
  }

  SurfaceModel s(std::move(k));
  s.kplus_ = s.k_.dicritical_points();

  s.simple_values_.resize(n);
  for (int p = 0; p < n; ++p) {
    IntVec rhs(n, 0);
    rhs[p] = -1;
    s.simple_values_[p] = solve_intersection(tree, rhs);
    for (const Int& v : s.simple_values_[p])
      check_invariant(v > 0, "simple ideal values must be positive");
  }

  // Singularities: connected components of the zero-excess set in the dual
  // graph, ordered by their minimal point.
  std::vector<char> zero(n, 0), seen(n, 0);
  for (int p = 0; p < n; ++p) zero[p] = s.k_.excesses()[p] == 0;
  for (int p = 0; p < n; ++p) {
    if (!zero[p] || seen[p]) continue;
    std::vector<int> comp, stack{p};
    seen[p] = 1;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      comp.push_back(a);
      for (int b : tree.dual_adjacent(a))
        if (zero[b] && !seen[b]) {
          seen[b] = 1;
          stack.push_back(b);
        }
    }
    std::sort(comp.begin(), comp.end());

    Singularity sing;
    sing.id = "Q" + std::to_string(s.sings_.size() + 1);
    sing.t_q = std::move(comp);
    // unique infinitely-near-minimal point of T_Q
    std::vector<int> minimal;
    for (int a : sing.t_q) {
      bool has_lower = false;
      for (int b : sing.t_q)
        if (b != a && tree.is_ancestor_or_self(b, a)) has_lower = true;
      if (!has_lower) minimal.push_back(a);
    }
    check_invariant(minimal.size() == 1, "T_Q has no unique minimal point");
    sing.o_q = minimal.front();
    s.sings_.push_back(std::move(sing));
  }

  for (auto& sing : s.sings_) {
    auto [nu_q, b_q] = compute_kq(s, sing);
    sing.nu_q = std::move(nu_q);
    sing.b_q = std::move(b_q);
    sing.mult = 1 + static_cast<int>(sing.b_q.size());
  }
  return s;
}

IntVec l_vector_of_curve(const SurfaceModel& surface, const Curve& c) {
  // The curve's tree must contain the surface cluster; merging checks the
  // shared records agree.
  TreePtr merged = merge_trees(c.tree(), surface.tree());
  IntVec e(merged->size(), 0);
  for (std::size_t p = 0; p < c.tree().size(); ++p)
    e[merged->index_of(c.tree().id_of(static_cast<int>(p)))] = c.multiplicities()[p];
  IntVec v = values_from_mults(*merged, e);
  IntVec out;
  for (int u : surface.kplus()) out.push_back(v[merged->index_of(surface.tree().id_of(u))]);
  return out;
}

}  // namespace sandwich
