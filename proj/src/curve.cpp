#include "sandwich/curve.hpp"

#include <algorithm>
#include <set>

#include "sandwich/error.hpp"

namespace sandwich {

static IntVec chain_multiplicities(const ClusterTree& tree, const std::vector<int>& chain) {
  const int len = static_cast<int>(chain.size());
  IntVec e(len, 0);
  e[len - 1] = 1;
  for (int j = len - 2; j >= 0; --j) {
    for (int i = j + 1; i < len; ++i) {
      if (tree.parent_of(chain[i]) == chain[j] || tree.satellite_target_of(chain[i]) == chain[j])
        e[j] += e[i];
    }
  }
  return e;
}

Curve::Curve(TreePtr tree, std::vector<BranchData> branches)
    : tree_(std::move(tree)), branches_(std::move(branches)) {
  tree_->require_valid();
  e_.assign(tree_->size(), 0);
  for (const auto& b : branches_) {
    require(!b.chain.empty(), "branch " + b.name + " has an empty chain");
    require(b.coeff >= 1, "branch " + b.name + " needs a positive coefficient");
    for (int p : b.chain)
      require(p >= 0 && p < static_cast<int>(tree_->size()),
              "branch " + b.name + " references an unknown point");
    require(b.chain.front() == tree_->root(), "branch " + b.name + " must start at the root");
    for (std::size_t j = 0; j + 1 < b.chain.size(); ++j)
      require(tree_->parent_of(b.chain[j + 1]) == b.chain[j],
              "branch " + b.name + " is not an ancestor-connected chain at " +
                  tree_->id_of(b.chain[j + 1]));
    branch_e_.push_back(chain_multiplicities(*tree_, b.chain));
    const IntVec& be = branch_e_.back();
    for (std::size_t j = 0; j < b.chain.size(); ++j) e_[b.chain[j]] += b.coeff * be[j];
  }
  values_ = values_from_mults(*tree_, e_);
}

Int noether_pairing(const Curve& a, const Curve& b) {
  const ClusterTree& ta = a.tree();
  const ClusterTree& tb = b.tree();
  if (ta.id_of(ta.root()) != tb.id_of(tb.root()))
    throw InputError("curves live over disjoint trees; merge them first");
  Int sum = 0;
  for (std::size_t p = 0; p < ta.size(); ++p) {
    int q = tb.index_of(ta.id_of(static_cast<int>(p)));
    if (q < 0) continue;
    const auto& ra = ta.records()[p];
    const auto& rb = tb.records()[q];
    if (ra.parent != rb.parent || ra.satellite_of != rb.satellite_of)
      throw InputError("point " + ra.id + " has conflicting proximity data");
    sum += a.multiplicities()[p] * b.multiplicities()[q];
  }
  return sum;
}

Int pair_with_curve(const WeightedCluster& wc, const Curve& c) {
  const ClusterTree& tc = c.tree();
  Int sum = 0;
  for (std::size_t p = 0; p < wc.tree().size(); ++p) {
    int q = tc.index_of(wc.tree().id_of(static_cast<int>(p)));
    if (q >= 0) sum += wc.nu()[p] * c.multiplicities()[q];
  }
  return sum;
}

Int delta_origin(const Curve& c) {
  Int d = 0;
  for (const Int& e : c.multiplicities()) d += e * (e - 1) / 2;
  return d;
}

Int delta_cluster(const WeightedCluster& wc) {
  require(wc.consistent(), "delta of a cluster requires a consistent weighting");
  Int d = 0;
  for (const Int& m : wc.nu()) d += m * (m - 1) / 2;
  return d;
}

BranchData generic_branch_through(const ClusterTree& tree, int p,
                                  std::vector<PointRecord>& extra, const std::string& name) {
  std::vector<int> chain;
  for (int a = p; a >= 0; a = tree.parent_of(a)) chain.push_back(a);
  std::reverse(chain.begin(), chain.end());
  std::set<std::string> used;
  for (const auto& r : extra) used.insert(r.id);
  std::string tail = name + "_t";
  for (int k = 1; used.count(tail) || tree.index_of(tail) >= 0; ++k)
    tail = name + "_t" + std::to_string(k + 1);
  extra.push_back({tail, tree.id_of(p), std::nullopt});
  BranchData b;
  b.name = name;
  b.chain = chain;          // tail index resolved by the caller
  b.coeff = 1;
  return b;
}

Curve generic_curve(const WeightedCluster& wc, const std::string& label) {
  require(wc.consistent(), "generic curve requires a consistent cluster");
  const ClusterTree& tree = wc.tree();
  std::vector<PointRecord> extra;
  std::vector<BranchData> branches;
  for (int p : wc.dicritical_points()) {
    for (Int k = 1; k <= wc.excesses()[p]; ++k) {
      std::string name = label + tree.id_of(p) + "_" + k.str();
      branches.push_back(generic_branch_through(tree, p, extra, name));
    }
  }
  auto records = tree.records();
  records.insert(records.end(), extra.begin(), extra.end());
  TreePtr big = ClusterTree::make(std::move(records));
  big->require_valid();
  // append each branch's fresh tail point, in the order they were created
  for (std::size_t i = 0; i < branches.size(); ++i)
    branches[i].chain.push_back(big->index_of(extra[i].id));
  return Curve(big, std::move(branches));
}

Curve merge_curves(const Curve& a, const Curve& b) {
  TreePtr merged = merge_trees(a.tree(), b.tree());
  std::vector<BranchData> branches;
  std::set<std::string> names;
  auto remap = [&](const Curve& c) {
    for (const auto& br : c.branches()) {
      BranchData nb = br;
      nb.chain.clear();
      for (int p : br.chain) nb.chain.push_back(merged->index_of(c.tree().id_of(p)));
      while (names.count(nb.name)) nb.name += "'";
      names.insert(nb.name);
      branches.push_back(std::move(nb));
    }
  };
  remap(a);
  remap(b);
  return Curve(merged, std::move(branches));
}

Curve scale_curve(const Curve& c, const Int& k) {
  require(k >= 1, "curve scaling needs a positive factor");
  std::vector<BranchData> branches(c.branches().begin(), c.branches().end());
  for (auto& b : branches) b.coeff *= k;
  return Curve(c.tree_ptr(), std::move(branches));
}

TailValidation validate_tails(const ClusterTree& ambient, const Curve& c) {
  ambient.require_valid();
  TailValidation out;
  const ClusterTree& tree = c.tree();
  const IntVec& e = c.multiplicities();
  for (std::size_t b = 0; b < c.branches().size(); ++b) {
    const auto& chain = c.branches()[b].chain;
    int found = -1;
    for (std::size_t j = 0; j < chain.size(); ++j) {
      if (ambient.index_of(tree.id_of(chain[j])) >= 0) continue;
      bool ok = true;
      for (std::size_t l = j; l < chain.size(); ++l)
        if (tree.is_satellite(chain[l]) || e[chain[l]] != 1) {
          ok = false;
          break;
        }
      if (ok) {
        found = chain[j];
        break;
      }
    }
    if (found < 0)
      throw InputError("branch " + c.branches()[b].name +
                       " has no admissible attachment point: extend it beyond the cluster "
                       "with a free simple tail of its own");
    out.p_points.push_back(found);
  }
  return out;
}

Extension extend_curve_tree(const ClusterTree& ambient, const Curve& c) {
  TailValidation tails = validate_tails(ambient, c);
  const ClusterTree& tree = c.tree();

  auto records = ambient.records();
  std::set<std::string> present;
  for (const auto& r : records) present.insert(r.id);
  for (std::size_t b = 0; b < c.branches().size(); ++b) {
    const auto& chain = c.branches()[b].chain;
    for (int p : chain) {
      const auto& rec = tree.records()[p];
      int amb = ambient.index_of(rec.id);
      if (amb >= 0) {
        const auto& other = ambient.records()[amb];
        if (other.parent != rec.parent || other.satellite_of != rec.satellite_of)
          throw InputError("point " + rec.id + " has conflicting proximity data");
      } else if (!present.count(rec.id)) {
        records.push_back(rec);
        present.insert(rec.id);
      }
      if (p == tails.p_points[b]) break;
    }
  }

  Extension out;
  out.kprime = ClusterTree::make(std::move(records));
  out.kprime->require_valid();
  for (std::size_t b = 0; b < c.branches().size(); ++b) {
    int p = out.kprime->index_of(tree.id_of(tails.p_points[b]));
    check_invariant(p >= 0, "attachment point missing from the extended tree");
    check_invariant(out.kprime->proximate_to(p).empty(),
                    "attachment point is not maximal in the extended tree");
    out.p_by_branch.push_back(p);
    if (std::find(out.p_points.begin(), out.p_points.end(), p) == out.p_points.end())
      out.p_points.push_back(p);
  }
  check_invariant(out.p_points.size() == c.branches().size() || c.branches().empty(),
                  "attachment points are not pairwise distinct");
  return out;
}

}  // namespace sandwich
