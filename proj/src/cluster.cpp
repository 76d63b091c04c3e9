#include "sandwich/cluster.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sandwich/error.hpp"

namespace sandwich {

std::string to_string(const Violation& v) { return v.point + ": " + v.rule; }

std::vector<Violation> validate_tree(const std::vector<PointRecord>& records) {
  std::vector<Violation> out;
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    const auto& r = records[i];
    if (r.id.empty()) out.push_back({"#" + std::to_string(i), "empty point id"});
    if (index.count(r.id))
      out.push_back({r.id, "duplicate point id"});
    else
      index[r.id] = i;
  }
  int roots = 0;
  for (const auto& r : records)
    if (!r.parent) ++roots;
  if (records.empty())
    out.push_back({"", "empty tree"});
  else if (roots != 1)
    out.push_back({records.front().id,
                   roots == 0 ? "no root point" : "more than one root point"});

  // targets(i) = the points i is proximate to, when resolvable
  auto targets = [&](int i) {
    std::vector<int> t;
    const auto& r = records[i];
    if (r.parent) {
      auto it = index.find(*r.parent);
      if (it != index.end() && it->second < i) t.push_back(it->second);
    }
    if (r.satellite_of) {
      auto it = index.find(*r.satellite_of);
      if (it != index.end() && it->second < i) t.push_back(it->second);
    }
    return t;
  };

  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    const auto& r = records[i];
    if (r.parent) {
      auto it = index.find(*r.parent);
      if (it == index.end())
        out.push_back({r.id, "unknown parent " + *r.parent});
      else if (it->second >= i)
        out.push_back({r.id, "parent " + *r.parent + " does not precede the point"});
    }
    if (r.satellite_of) {
      if (!r.parent) {
        out.push_back({r.id, "root cannot be a satellite"});
        continue;
      }
      auto it = index.find(*r.satellite_of);
      if (it == index.end()) {
        out.push_back({r.id, "unknown satellite target " + *r.satellite_of});
        continue;
      }
      if (it->second >= i) {
        out.push_back(
            {r.id, "satellite target " + *r.satellite_of + " does not precede the point"});
        continue;
      }
      // p can only be proximate to a point its parent is proximate to
      auto pit = index.find(*r.parent);
      if (pit != index.end() && pit->second < i) {
        const auto& par = records[pit->second];
        bool ok = (par.parent && *par.parent == *r.satellite_of) ||
                  (par.satellite_of && *par.satellite_of == *r.satellite_of);
        if (!ok)
          out.push_back({r.id, "satellite target " + *r.satellite_of +
                                   " is not a proximity target of parent " + *r.parent});
      }
    }
  }

  // A satellite point is the intersection of two exceptional components, so
  // two distinct points may not share the same pair of proximity targets.
  std::map<std::pair<int, int>, std::string> seen;
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    auto t = targets(i);
    if (t.size() != 2) continue;
    auto key = std::minmax(t[0], t[1]);
    auto [it, fresh] = seen.emplace(key, records[i].id);
    if (!fresh)
      out.push_back({records[i].id,
                     "satellite point duplicates the proximity pair of " + it->second});
  }
  return out;
}

TreePtr ClusterTree::make(std::vector<PointRecord> records) {
  auto tree = std::make_shared<ClusterTree>();
  tree->records_ = std::move(records);
  tree->violations_ = validate_tree(tree->records_);
  if (tree->violations_.empty()) tree->build_caches();
  return tree;
}

void ClusterTree::require_valid() const {
  if (!violations_.empty()) throw InputError("invalid tree: " + to_string(violations_.front()));
}

void ClusterTree::build_caches() {
  const int n = static_cast<int>(records_.size());
  parent_.assign(n, -1);
  satellite_.assign(n, -1);
  prox_targets_.assign(n, {});
  prox_to_.assign(n, {});
  index_.clear();
  for (int i = 0; i < n; ++i) index_.emplace_back(records_[i].id, i);
  std::sort(index_.begin(), index_.end());

  for (int i = 0; i < n; ++i) {
    const auto& r = records_[i];
    if (r.parent) {
      parent_[i] = index_of(*r.parent);
      prox_to_[parent_[i]].push_back(i);
      prox_targets_[i].push_back(parent_[i]);
    } else {
      root_ = i;
    }
    if (r.satellite_of) {
      satellite_[i] = index_of(*r.satellite_of);
      prox_to_[satellite_[i]].push_back(i);
      prox_targets_[i].push_back(satellite_[i]);
    }
  }

  // Dual graph: A_pq = [p ~ q proximate] - #{r proximate to both p and q}
  dual_adj_.assign(n, {});
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < p; ++q) {
      int a = (parent_[p] == q || satellite_[p] == q) ? 1 : 0;
      for (int r = p + 1; r < n; ++r) {
        bool to_p = parent_[r] == p || satellite_[r] == p;
        bool to_q = parent_[r] == q || satellite_[r] == q;
        if (to_p && to_q) --a;
      }
      check_invariant(a == 0 || a == 1, "off-diagonal intersection number outside {0,1}");
      if (a == 1) {
        dual_adj_[p].push_back(q);
        dual_adj_[q].push_back(p);
      }
    }
  }
}

int ClusterTree::index_of(std::string_view id) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), id,
                             [](const auto& e, std::string_view v) { return e.first < v; });
  if (it == index_.end() || it->first != id) return -1;
  return it->second;
}

bool ClusterTree::is_ancestor_or_self(int a, int d) const {
  while (d >= 0) {
    if (d == a) return true;
    d = parent_[d];
  }
  return false;
}

TreePtr ClusterTree::with_point(const PointRecord& rec) const {
  auto records = records_;
  records.push_back(rec);
  auto tree = ClusterTree::make(std::move(records));
  tree->require_valid();
  return tree;
}

std::string ClusterTree::fresh_id(std::string_view base) const {
  std::string id(base);
  int k = 1;
  while (index_of(id) >= 0) id = std::string(base) + "_" + std::to_string(++k);
  return id;
}

TreePtr merge_trees(const ClusterTree& a, const ClusterTree& b) {
  a.require_valid();
  b.require_valid();
  auto records = a.records();
  for (const auto& rec : b.records()) {
    int i = a.index_of(rec.id);
    if (i < 0) {
      records.push_back(rec);
      continue;
    }
    const auto& mine = a.records()[i];
    if (mine.parent != rec.parent || mine.satellite_of != rec.satellite_of)
      throw InputError("cannot merge trees: point " + rec.id +
                       " has conflicting proximity data");
  }
  auto merged = ClusterTree::make(std::move(records));
  if (!merged->valid())
    throw InputError("cannot merge trees: " + to_string(merged->violations().front()));
  return merged;
}

IntMat proximity_matrix(const ClusterTree& tree) {
  tree.require_valid();
  const int n = static_cast<int>(tree.size());
  IntMat p(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) {
    p[i][i] = 1;
    if (tree.parent_of(i) >= 0) p[i][tree.parent_of(i)] = -1;
    if (tree.satellite_target_of(i) >= 0) p[i][tree.satellite_target_of(i)] = -1;
  }
  return p;
}

IntMat intersection_matrix(const ClusterTree& tree) {
  tree.require_valid();
  const int n = static_cast<int>(tree.size());
  IntMat p = proximity_matrix(tree);
  IntMat a(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Int s = 0;
      for (int r = 0; r < n; ++r) s += p[r][i] * p[r][j];
      a[i][j] = -s;
      a[j][i] = a[i][j];
    }
  return a;
}

std::vector<std::pair<int, int>> dual_graph(const ClusterTree& tree) {
  tree.require_valid();
  const int n = static_cast<int>(tree.size());
  std::vector<std::pair<int, int>> edges;
  for (int p = 0; p < n; ++p)
    for (int q : tree.dual_adjacent(p))
      if (q < p) edges.emplace_back(q, p);
  // E_K is connected and contains no cycles, so the dual graph is a tree.
  check_invariant(edges.size() + 1 == tree.size(), "dual graph is not a tree");
  std::vector<int> seen(n, 0);
  std::vector<int> stack{tree.root()};
  seen[tree.root()] = 1;
  while (!stack.empty()) {
    int p = stack.back();
    stack.pop_back();
    for (int q : tree.dual_adjacent(p))
      if (!seen[q]) {
        seen[q] = 1;
        stack.push_back(q);
      }
  }
  check_invariant(std::count(seen.begin(), seen.end(), 1) == n, "dual graph is disconnected");
  return edges;
}

IntVec values_from_mults(const ClusterTree& tree, const IntVec& nu) {
  tree.require_valid();
  require(nu.size() == tree.size(), "multiplicity vector length mismatch");
  IntVec v(nu.size());
  for (std::size_t p = 0; p < nu.size(); ++p) {
    v[p] = nu[p];
    if (tree.parent_of(p) >= 0) v[p] += v[tree.parent_of(p)];
    if (tree.satellite_target_of(p) >= 0) v[p] += v[tree.satellite_target_of(p)];
  }
  return v;
}

IntVec mults_from_values(const ClusterTree& tree, const IntVec& v) {
  tree.require_valid();
  require(v.size() == tree.size(), "value vector length mismatch");
  IntVec nu(v.size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    nu[p] = v[p];
    if (tree.parent_of(p) >= 0) nu[p] -= v[tree.parent_of(p)];
    if (tree.satellite_target_of(p) >= 0) nu[p] -= v[tree.satellite_target_of(p)];
  }
  return nu;
}

IntVec excesses_from_mults(const ClusterTree& tree, const IntVec& nu) {
  tree.require_valid();
  require(nu.size() == tree.size(), "multiplicity vector length mismatch");
  IntVec rho(nu.size());
  for (std::size_t p = 0; p < nu.size(); ++p) {
    rho[p] = nu[p];
    for (int q : tree.proximate_to(static_cast<int>(p))) rho[p] -= nu[q];
  }
  return rho;
}

IntVec mults_from_excesses(const ClusterTree& tree, const IntVec& rho) {
  tree.require_valid();
  require(rho.size() == tree.size(), "excess vector length mismatch");
  IntVec nu(rho.size());
  for (int p = static_cast<int>(rho.size()) - 1; p >= 0; --p) {
    nu[p] = rho[p];
    for (int q : tree.proximate_to(p)) nu[p] += nu[q];
  }
  return nu;
}

IntVec solve_intersection(const ClusterTree& tree, const IntVec& rhs) {
  tree.require_valid();
  require(rhs.size() == tree.size(), "rhs length mismatch");
  // A x = rhs with A = -P^t P: solve P^t y = -rhs backwards, then P x = y.
  const int n = static_cast<int>(tree.size());
  IntVec y(n), x(n);
  for (int p = n - 1; p >= 0; --p) {
    y[p] = -rhs[p];
    for (int q : tree.proximate_to(p)) y[p] += y[q];
  }
  for (int p = 0; p < n; ++p) {
    x[p] = y[p];
    if (tree.parent_of(p) >= 0) x[p] += x[tree.parent_of(p)];
    if (tree.satellite_target_of(p) >= 0) x[p] += x[tree.satellite_target_of(p)];
  }
  return x;
}

WeightedCluster::WeightedCluster(TreePtr tree, IntVec nu) : tree_(std::move(tree)), nu_(std::move(nu)) {
  tree_->require_valid();
  require(nu_.size() == tree_->size(), "one multiplicity per point required");
  values_ = values_from_mults(*tree_, nu_);
  rho_ = excesses_from_mults(*tree_, nu_);
}

WeightedCluster WeightedCluster::from_values(TreePtr tree, IntVec values) {
  IntVec nu = mults_from_values(*tree, values);
  return WeightedCluster(std::move(tree), std::move(nu));
}

bool WeightedCluster::consistent() const {
  return std::all_of(rho_.begin(), rho_.end(), [](const Int& r) { return r >= 0; });
}

bool WeightedCluster::strictly_consistent() const {
  return consistent() &&
         std::all_of(nu_.begin(), nu_.end(), [](const Int& m) { return m >= 1; });
}

std::vector<int> WeightedCluster::dicritical_points() const {
  std::vector<int> out;
  for (int p = 0; p < static_cast<int>(rho_.size()); ++p)
    if (rho_[p] > 0) out.push_back(p);
  return out;
}

Int WeightedCluster::codimension() const {
  Int c = 0;
  for (const Int& m : nu_) c += m * (m + 1) / 2;
  return c;
}

Int WeightedCluster::self_intersection() const {
  Int s = 0;
  for (const Int& m : nu_) s += m * m;
  return s;
}

bool WeightedCluster::operator==(const WeightedCluster& other) const {
  if (nu_ != other.nu_ || tree_->size() != other.tree_->size()) return false;
  for (std::size_t i = 0; i < tree_->size(); ++i) {
    const auto& a = tree_->records()[i];
    const auto& b = other.tree_->records()[i];
    if (a.id != b.id || a.parent != b.parent || a.satellite_of != b.satellite_of) return false;
  }
  return true;
}

Int codimension(const WeightedCluster& wc) { return wc.codimension(); }
Int self_intersection(const WeightedCluster& wc) { return wc.self_intersection(); }

}  // namespace sandwich
