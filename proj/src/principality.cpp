#include "sandwich/principality.hpp"

#include <algorithm>
#include <set>

#include "sandwich/error.hpp"
#include "sandwich/linalg.hpp"

namespace sandwich {

bool Decomposition::integral() const {
  return solvable && std::all_of(coeffs.begin(), coeffs.end(),
                                 [](const Rat& r) { return is_integral(r); });
}

bool MumfordDivisor::integral() const {
  return std::all_of(coeffs.begin(), coeffs.end(),
                     [](const Rat& r) { return is_integral(r); });
}

Decomposition decompose_columns(const std::vector<IntVec>& columns, const IntVec& target,
                                std::span<const int> support) {
  require(!support.empty(), "decomposition needs a nonempty support");
  const std::size_t dim = target.size();
  std::vector<RatVec> m(dim, RatVec(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    require(support[j] >= 0 && support[j] < static_cast<int>(columns.size()),
            "support names an unknown column");
    require(columns[support[j]].size() == dim, "column length mismatch");
    for (std::size_t i = 0; i < dim; ++i) m[i][j] = columns[support[j]][i];
  }
  RatVec rhs(target.begin(), target.end());
  Decomposition out;
  if (auto x = solve_exact(m, rhs)) {
    out.solvable = true;
    out.coeffs = std::move(*x);
  }
  return out;
}

Decomposition decompose_l(const SurfaceModel& surface, const IntVec& target,
                          std::span<const int> support) {
  require(target.size() == surface.kplus().size(),
          "target must be a vector over the dicritical points");
  std::vector<IntVec> columns;
  for (int u : surface.kplus()) columns.push_back(surface.l_vector(u));
  std::vector<int> cols;
  for (int p : support) {
    int pos = surface.kplus_position(p);
    require(pos >= 0, "support point " + surface.tree().id_of(p) + " is not dicritical");
    cols.push_back(pos);
  }
  return decompose_columns(columns, target, cols);
}

WeightedCluster ideal_cluster_qc(const SurfaceModel& surface, const Curve& c) {
  const ClusterTree& tree = surface.tree();
  IntVec target = l_vector_of_curve(surface, c);
  IntVec values(tree.size(), 0);
  for (std::size_t i = 0; i < surface.kplus().size(); ++i)
    values[surface.kplus()[i]] = target[i];
  auto [qc, trace] = unload(WeightedCluster::from_values(surface.tree_ptr(), values));
  for (std::size_t i = 0; i < surface.kplus().size(); ++i)
    if (qc.values()[surface.kplus()[i]] != target[i])
      throw InputError("curve values at the dicritical points cannot be realized over "
                       "this cluster (value drift while unloading)");
  return qc;
}

static MumfordDivisor mumford_impl(const SurfaceModel& surface, const Curve& c,
                                   const TreePtr& res) {
  const ClusterTree& resolution = *res;
  resolution.require_valid();
  const int n = static_cast<int>(resolution.size());

  // curve multiplicities transported onto the resolution tree
  IntVec e(n, 0);
  for (std::size_t p = 0; p < c.tree().size(); ++p) {
    int q = resolution.index_of(c.tree().id_of(static_cast<int>(p)));
    if (q >= 0) e[q] = c.multiplicities()[p];
  }

  std::set<std::string> dicritical_ids;
  for (int u : surface.kplus()) dicritical_ids.insert(surface.tree().id_of(u));
  std::vector<int> contracted;
  for (int p = 0; p < n; ++p)
    if (!dicritical_ids.count(resolution.id_of(p))) contracted.push_back(p);

  // |C~ . E_p| = e_p(C) - sum of e over the points of K' proximate to p
  RatVec rhs;
  for (int p : contracted) {
    Int t = e[p];
    for (int q : resolution.proximate_to(p)) t -= e[q];
    rhs.push_back(Rat(-t));
  }

  std::vector<RatVec> m(contracted.size(), RatVec(contracted.size()));
  IntMat a = intersection_matrix(resolution);
  for (std::size_t i = 0; i < contracted.size(); ++i)
    for (std::size_t j = 0; j < contracted.size(); ++j)
      m[i][j] = a[contracted[i]][contracted[j]];

  auto x = solve_exact(m, rhs);
  check_invariant(x.has_value(), "Mumford system is not solvable");
  MumfordDivisor out;
  out.tree = res;
  out.points = std::move(contracted);
  out.coeffs = std::move(*x);
  return out;
}

MumfordDivisor mumford_divisor(const SurfaceModel& surface, const Curve& c) {
  Extension ext = extend_curve_tree(surface.tree(), c);
  return mumford_impl(surface, c, ext.kprime);
}

MumfordDivisor mumford_divisor_on(const SurfaceModel& surface, const Curve& c,
                                  const TreePtr& resolution) {
  return mumford_impl(surface, c, resolution);
}

static std::vector<int> full_support(const SurfaceModel& surface) {
  return {surface.kplus().begin(), surface.kplus().end()};
}

static bool subset_of_kplus(const SurfaceModel& surface, const std::vector<int>& points) {
  return std::all_of(points.begin(), points.end(),
                     [&](int p) { return surface.kplus_position(p) >= 0; });
}

CartierVerdict is_cartier(const SurfaceModel& surface, const Curve& c) {
  CartierVerdict v{.cartier = false,
                   .decomposition = {},
                   .qc = ideal_cluster_qc(surface, c),
                   .qc_dicriticals = {},
                   .mumford = {}};
  v.qc_dicriticals = v.qc.dicritical_points();
  v.decomposition =
      decompose_l(surface, l_vector_of_curve(surface, c), full_support(surface));
  check_invariant(v.decomposition.solvable, "full-support decomposition must be solvable");

  v.by_decomposition = v.decomposition.integral();
  v.by_unloading = subset_of_kplus(surface, v.qc_dicriticals);
  v.mumford = mumford_divisor(surface, c);
  v.by_mumford = v.mumford.integral();

  check_invariant(v.by_decomposition == v.by_unloading && v.by_unloading == v.by_mumford,
                  "principality criteria disagree");
  v.cartier = v.by_decomposition;
  return v;
}

static int first_off_cluster(const SurfaceModel& surface, const Curve& c, int branch) {
  const ClusterTree& tree = c.tree();
  for (int p : c.branches()[branch].chain)
    if (surface.tree().index_of(tree.id_of(p)) < 0) return p;
  throw InputError("branch " + c.branches()[branch].name +
                   " ends inside the cluster; extend it with a free simple tail");
}

const Singularity* attachment_singularity(const SurfaceModel& surface, const Curve& c,
                                          int branch) {
  const ClusterTree& tree = c.tree();
  int q = first_off_cluster(surface, c, branch);
  for (int t : tree.proximity_targets(q)) {
    int in_k = surface.tree().index_of(tree.id_of(t));
    check_invariant(in_k >= 0, "proximity target of the first off-cluster point must "
                               "belong to the cluster");
    if (const Singularity* s = surface.singularity_containing(in_k)) return s;
  }
  return nullptr;
}

LocalVerdict local_principality(const SurfaceModel& surface, const Curve& c,
                                const Singularity& q) {
  LocalVerdict out;
  // exceptional components through Q: dicriticals adjacent to T_Q
  std::set<int> support;
  for (int t : q.t_q)
    for (int u : surface.tree().dual_adjacent(t))
      if (surface.kplus_position(u) >= 0) support.insert(u);
  out.support.assign(support.begin(), support.end());
  check_invariant(!out.support.empty(), "singularity with no adjacent dicritical point");

  std::vector<BranchData> through;
  for (std::size_t b = 0; b < c.branches().size(); ++b) {
    const Singularity* s = attachment_singularity(surface, c, static_cast<int>(b));
    if (s && s->id == q.id) {
      through.push_back(c.branches()[b]);
      out.branches.push_back(c.branches()[b].name);
    }
  }
  Curve c_q(c.tree_ptr(), std::move(through));

  out.decomposition = decompose_l(surface, l_vector_of_curve(surface, c_q), out.support);
  out.principal = out.decomposition.integral();
  return out;
}

Int minimal_cartier_multiple(const SurfaceModel& surface, const Curve& c) {
  require(surface.kplus().size() == 1, "minimal multiple requires a simple blown-up ideal");
  const int p = surface.kplus()[0];
  require(surface.cluster().excesses()[p] == 1,
          "minimal multiple requires a primitive surface (excess 1)");
  const Int vp = l_vector_of_curve(surface, c)[0];
  require(vp > 0, "curve misses the cluster");
  const Int square = simple_cluster(surface.tree_ptr(), p).self_intersection();
  const Int m = lcm(vp, square) / vp;

  // m*C scales the values by m, so both value-based criteria must go green.
  IntVec scaled{m * vp};
  Decomposition dec = decompose_l(surface, scaled, full_support(surface));
  IntVec values(surface.tree().size(), 0);
  values[p] = scaled[0];
  auto [qc, trace] = unload(WeightedCluster::from_values(surface.tree_ptr(), values));
  check_invariant(dec.integral() && subset_of_kplus(surface, qc.dicritical_points()),
                  "minimal Cartier multiple fails the principality test");
  return m;
}

Int intersection_on_x(const SurfaceModel& surface, const Curve& c1, const Curve& c2) {
  WeightedCluster qc1 = ideal_cluster_qc(surface, c1);
  return intersection_from_pairings(noether_pairing(c1, c2), pair_with_curve(qc1, c2));
}

Rat mumford_intersection(const SurfaceModel& surface, const Curve& c1, const Curve& c2) {
  Extension e1 = extend_curve_tree(surface.tree(), c1);
  Extension e2 = extend_curve_tree(surface.tree(), c2);
  TreePtr common = merge_trees(*e1.kprime, *e2.kprime);
  MumfordDivisor d1 = mumford_divisor_on(surface, c1, common);

  auto e_on_common = [&](const Curve& c) {
    IntVec e(common->size(), 0);
    for (std::size_t p = 0; p < c.tree().size(); ++p) {
      int q = common->index_of(c.tree().id_of(static_cast<int>(p)));
      if (q >= 0) e[q] = c.multiplicities()[p];
    }
    return e;
  };
  IntVec ea = e_on_common(c1), eb = e_on_common(c2);

  // strict transforms on the common resolution
  Int strict = noether_pairing(c1, c2);
  for (std::size_t p = 0; p < common->size(); ++p) strict -= ea[p] * eb[p];

  Rat total = strict;
  for (std::size_t i = 0; i < d1.points.size(); ++i) {
    int p = d1.points[i];
    Int t = eb[p];
    for (int q : common->proximate_to(p)) t -= eb[q];
    total += d1.coeffs[i] * Rat(t);
  }
  return total;
}

Curve exceptional_reduction(const SurfaceModel& surface, const Curve& c,
                            std::span<const std::pair<int, Int>> coeffs) {
  const ClusterTree& tree = surface.tree();
  std::vector<PointRecord> extra;
  std::vector<BranchData> branches;
  for (const auto& [p, a] : coeffs) {
    require(surface.kplus_position(p) >= 0,
            "exceptional coefficients must sit on dicritical points");
    require(a >= 0, "exceptional coefficients must be non-negative");
    for (Int k = 1; k <= a; ++k)
      for (int q : tree.dual_adjacent(p)) {
        std::string name = "x" + tree.id_of(q) + "_" + k.str();
        branches.push_back(generic_branch_through(tree, q, extra, name));
      }
  }
  if (branches.empty()) return c;

  auto records = tree.records();
  records.insert(records.end(), extra.begin(), extra.end());
  TreePtr big = ClusterTree::make(std::move(records));
  big->require_valid();
  for (std::size_t i = 0; i < branches.size(); ++i)
    branches[i].chain.push_back(big->index_of(extra[i].id));
  return merge_curves(c, Curve(big, std::move(branches)));
}

}  // namespace sandwich
