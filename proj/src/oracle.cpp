#include "sandwich/oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "sandwich/error.hpp"
#include "sandwich/unloading.hpp"

namespace sandwich {

namespace {

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet satellite_pairs(const std::vector<PointRecord>& records) {
  PairSet used;
  for (const auto& r : records)
    if (r.parent && r.satellite_of) used.insert(std::minmax(*r.parent, *r.satellite_of));
  return used;
}

}  // namespace

TreePtr random_tree(Rng& rng, const RandomClusterSpec& spec) {
  const int n = uniform(rng, 1, std::max(1, spec.max_points));
  std::vector<PointRecord> records{{"O", std::nullopt, std::nullopt}};
  PairSet used;
  for (int i = 1; i < n; ++i) {
    int parent = uniform(rng, 0, i - 1);
    PointRecord rec{"p" + std::to_string(i), records[parent].id, std::nullopt};
    if (records[parent].parent && chance(rng, spec.satellite_probability)) {
      std::vector<std::string> targets{*records[parent].parent};
      if (records[parent].satellite_of) targets.push_back(*records[parent].satellite_of);
      std::vector<std::string> open;
      for (const auto& t : targets)
        if (!used.count(std::minmax(records[parent].id, t))) open.push_back(t);
      if (!open.empty()) {
        rec.satellite_of = open[uniform(rng, 0, static_cast<int>(open.size()) - 1)];
        used.insert(std::minmax(*rec.parent, *rec.satellite_of));
      }
    }
    records.push_back(std::move(rec));
  }
  TreePtr tree = ClusterTree::make(std::move(records));
  tree->require_valid();
  return tree;
}

WeightedCluster random_weighted_cluster(Rng& rng, const RandomClusterSpec& spec) {
  TreePtr tree = random_tree(rng, spec);
  IntVec nu(tree->size());
  for (auto& m : nu) m = uniform(rng, -spec.max_multiplicity, spec.max_multiplicity);
  return WeightedCluster(std::move(tree), std::move(nu));
}

WeightedCluster random_strictly_consistent(Rng& rng, const RandomClusterSpec& spec) {
  TreePtr tree = random_tree(rng, spec);
  IntVec rho(tree->size());
  for (int p = 0; p < static_cast<int>(tree->size()); ++p) {
    if (tree->proximate_to(p).empty())
      rho[p] = uniform(rng, 1, 3);
    else
      rho[p] = chance(rng, 0.55) ? 0 : uniform(rng, 1, 2);
  }
  IntVec nu = mults_from_excesses(*tree, rho);
  return WeightedCluster(std::move(tree), std::move(nu));
}

SurfaceModel random_surface(Rng& rng, const RandomClusterSpec& spec) {
  return SurfaceModel::build(random_strictly_consistent(rng, spec));
}

Curve random_curve(Rng& rng, const RandomClusterSpec& spec, const SurfaceModel& surface,
                   const std::string& label, const std::vector<const Curve*>& coexisting) {
  const ClusterTree& k = surface.tree();
  auto records = k.records();
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < records.size(); ++i) where[records[i].id] = i;
  PairSet used = satellite_pairs(records);
  for (const Curve* c : coexisting) {
    PairSet theirs = satellite_pairs(c->tree().records());
    used.insert(theirs.begin(), theirs.end());
  }

  // departure points in the zero-excess regions make the branches actually
  // pass through singularities
  std::vector<int> singular_departs;
  for (const auto& q : surface.singularities())
    singular_departs.insert(singular_departs.end(), q.t_q.begin(), q.t_q.end());

  std::vector<std::vector<std::string>> chains;
  int counter = 0;
  const int nb = uniform(rng, 1, 3);
  for (int b = 0; b < nb; ++b) {
    int depart;
    if (!singular_departs.empty() && chance(rng, 0.6))
      depart = singular_departs[uniform(rng, 0, static_cast<int>(singular_departs.size()) - 1)];
    else
      depart = uniform(rng, 0, static_cast<int>(k.size()) - 1);
    std::vector<std::string> chain;
    for (int a = depart; a >= 0; a = k.parent_of(a)) chain.push_back(k.id_of(a));
    std::reverse(chain.begin(), chain.end());

    std::string cur = k.id_of(depart);
    const int extra = uniform(rng, 1, 3);
    // satellites below K give the strict transform genuine tangency with the
    // exceptional locus, so favour them a little
    const double sat_prob =
        spec.satellite_probability > 0 ? std::max(spec.satellite_probability, 0.5) : 0.0;
    for (int step = 0; step < extra; ++step) {
      PointRecord rec{label + std::to_string(++counter), cur, std::nullopt};
      const PointRecord& parent = records[where.at(cur)];
      if (parent.parent && step + 1 < extra && chance(rng, sat_prob)) {
        std::vector<std::string> targets{*parent.parent};
        if (parent.satellite_of) targets.push_back(*parent.satellite_of);
        std::vector<std::string> open;
        for (const auto& t : targets)
          if (!used.count(std::minmax(cur, t))) open.push_back(t);
        if (!open.empty()) {
          rec.satellite_of = open[uniform(rng, 0, static_cast<int>(open.size()) - 1)];
          used.insert(std::minmax(cur, *rec.satellite_of));
        }
      }
      chain.push_back(rec.id);
      cur = rec.id;
      where[rec.id] = records.size();
      records.push_back(std::move(rec));
    }
    if (records[where.at(cur)].satellite_of) {
      // end with a free point so the tail is admissible
      PointRecord rec{label + std::to_string(++counter), cur, std::nullopt};
      chain.push_back(rec.id);
      where[rec.id] = records.size();
      records.push_back(std::move(rec));
    }
    chains.push_back(std::move(chain));
  }

  TreePtr tree = ClusterTree::make(std::move(records));
  tree->require_valid();
  std::vector<BranchData> branches;
  for (std::size_t b = 0; b < chains.size(); ++b) {
    BranchData bd{label + std::to_string(b + 1) + "br", {}, 1};
    for (const auto& id : chains[b]) bd.chain.push_back(tree->index_of(id));
    branches.push_back(std::move(bd));
  }
  return Curve(tree, std::move(branches));
}

OracleOutcome minimality_oracle(const WeightedCluster& wc, std::span<const int> fixed,
                                const Int& bound) {
  const ClusterTree& tree = wc.tree();
  const int n = static_cast<int>(tree.size());
  std::vector<char> is_fixed(n, 0);
  for (int p : fixed) {
    require(p >= 0 && p < n, "fixed set names a point outside the cluster");
    is_fixed[p] = 1;
  }
  std::vector<int> free_points;
  for (int p = 0; p < n; ++p)
    if (!is_fixed[p]) free_points.push_back(p);
  const int f = static_cast<int>(free_points.size());
  require(bound >= 0 && bound <= 16, "oracle bound out of range");
  const int b = bound.convert_to<int>();
  double box = 1;
  for (int i = 0; i < f; ++i) box *= b + 1;
  require(box <= 4e7, "oracle box too large for exhaustive search");

  IntVec v(wc.values());
  IntVec candidate(v), minimum;
  bool any = false;
  std::vector<int> offset(f, 0);

  auto feasible = [&](const IntVec& vv) {
    // definitional recomputation, independent of the unloading engine
    IntVec nu(n), rho(n);
    for (int p = 0; p < n; ++p) {
      nu[p] = vv[p];
      for (int q : tree.proximity_targets(p)) nu[p] -= vv[q];
    }
    for (int p = 0; p < n; ++p) {
      rho[p] = nu[p];
      for (int q : tree.proximate_to(p)) rho[p] -= nu[q];
    }
    for (int p = 0; p < n; ++p)
      if (!is_fixed[p] && rho[p] < 0) return false;
    return true;
  };

  for (;;) {
    for (int i = 0; i < f; ++i) candidate[free_points[i]] = v[free_points[i]] + offset[i];
    if (feasible(candidate)) {
      if (!any) {
        minimum = candidate;
        any = true;
      } else {
        for (int p = 0; p < n; ++p) minimum[p] = std::min(minimum[p], candidate[p]);
      }
    }
    int i = 0;
    while (i < f && offset[i] == b) offset[i++] = 0;
    if (i == f) break;
    ++offset[i];
  }

  if (!any) return {OracleOutcome::Status::infeasible, {}};
  check_invariant(feasible(minimum), "componentwise minimum of the feasible box is not "
                                     "feasible");
  for (int i = 0; i < f; ++i)
    if (minimum[free_points[i]] == v[free_points[i]] + bound)
      return {OracleOutcome::Status::box_edge, std::move(minimum)};
  return {OracleOutcome::Status::ok, std::move(minimum)};
}

bool SuiteReport::all_passed() const {
  return std::all_of(lines.begin(), lines.end(),
                     [](const SuiteLine& l) { return l.failures == 0; });
}

std::string SuiteReport::to_string() const {
  std::ostringstream out;
  for (const auto& l : lines) {
    out << l.name << ": " << l.passes << " passed, " << l.failures << " failed";
    if (l.inconclusive) out << ", " << l.inconclusive << " inconclusive";
    out << "\n";
    for (const auto& c : l.counterexamples) out << "--- counterexample ---\n" << c;
  }
  return out.str();
}

namespace {

Scene scene_of(const WeightedCluster& wc) {
  Scene s;
  s.tree = wc.tree_ptr();
  s.ideal = wc;
  return s;
}

Scene scene_of(const SurfaceModel& surface, const std::vector<const Curve*>& curves) {
  Scene s;
  TreePtr tree = surface.tree_ptr();
  for (const Curve* c : curves) tree = merge_trees(*tree, c->tree());
  s.tree = tree;
  s.ideal = surface.cluster();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::vector<BranchData> branches;
    for (const auto& b : curves[i]->branches()) {
      BranchData nb = b;
      nb.chain.clear();
      for (int p : b.chain) nb.chain.push_back(tree->index_of(curves[i]->tree().id_of(p)));
      branches.push_back(std::move(nb));
    }
    s.curves.emplace_back("c" + std::to_string(i + 1), Curve(tree, std::move(branches)));
  }
  return s;
}

/// Drops maximal points while the predicate keeps failing; point-count
/// minimization for counterexample reports.
WeightedCluster shrink_cluster(WeightedCluster wc,
                               const std::function<bool(const WeightedCluster&)>& fails) {
  bool changed = true;
  while (changed && wc.tree().size() > 1) {
    changed = false;
    for (int p = static_cast<int>(wc.tree().size()) - 1; p >= 0; --p) {
      if (!wc.tree().proximate_to(p).empty()) continue;
      auto records = wc.tree().records();
      IntVec nu = wc.nu();
      records.erase(records.begin() + p);
      nu.erase(nu.begin() + p);
      TreePtr smaller = ClusterTree::make(std::move(records));
      if (!smaller->valid()) continue;
      WeightedCluster cand(smaller, std::move(nu));
      if (fails(cand)) {
        wc = std::move(cand);
        changed = true;
        break;
      }
    }
  }
  return wc;
}

}  // namespace

bool eval_scene(const Scene& scene, const SceneCheck& check) {
  try {
    SurfaceModel s = surface_of(scene);
    std::vector<const Curve*> curves;
    for (const auto& [name, c] : scene.curves) curves.push_back(&c);
    return check(s, curves);
  } catch (const InputError&) {
    return true;  // the shrunken scene is unusable, not a witness
  } catch (const InternalError&) {
    return false;
  }
}

namespace {

std::optional<Scene> remove_point(const Scene& scene, int p) {
  const std::string id = scene.tree->id_of(p);
  std::vector<PointRecord> records;
  for (const auto& r : scene.tree->records())
    if (r.id != id) records.push_back(r);
  if (records.empty()) return std::nullopt;
  TreePtr tree = ClusterTree::make(std::move(records));
  if (!tree->valid()) return std::nullopt;

  Scene out;
  out.tree = tree;
  try {
    if (scene.ideal) {
      const ClusterTree& it = scene.ideal->tree();
      std::vector<PointRecord> sub;
      IntVec nu;
      for (std::size_t i = 0; i < it.size(); ++i) {
        if (it.id_of(static_cast<int>(i)) == id) continue;
        sub.push_back(it.records()[i]);
        nu.push_back(scene.ideal->nu()[i]);
      }
      if (sub.empty()) return std::nullopt;
      TreePtr subtree = ClusterTree::make(std::move(sub));
      if (!subtree->valid()) return std::nullopt;
      out.ideal = WeightedCluster(subtree, std::move(nu));
    }
    for (const auto& [name, curve] : scene.curves) {
      std::vector<BranchData> branches;
      for (const auto& b : curve.branches()) {
        bool through = false;
        for (int q : b.chain) through = through || curve.tree().id_of(q) == id;
        if (through) continue;  // drop branches through the removed point
        BranchData nb = b;
        nb.chain.clear();
        for (int q : b.chain) nb.chain.push_back(tree->index_of(curve.tree().id_of(q)));
        branches.push_back(std::move(nb));
      }
      if (branches.empty()) return std::nullopt;
      out.curves.emplace_back(name, Curve(tree, std::move(branches)));
    }
  } catch (const InputError&) {
    return std::nullopt;
  }
  return out;
}

}  // namespace

Scene shrink_scene(Scene scene, const SceneCheck& check) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = static_cast<int>(scene.tree->size()) - 1; p >= 0; --p) {
      if (!scene.tree->proximate_to(p).empty()) continue;
      std::optional<Scene> candidate = remove_point(scene, p);
      if (!candidate) continue;
      if (!eval_scene(*candidate, check)) {
        scene = std::move(*candidate);
        changed = true;
        break;
      }
    }
  }
  return scene;
}

namespace {

struct SuiteRunner {
  SuiteReport report;
  RandomClusterSpec base;

  SuiteLine& line(const std::string& name) {
    for (auto& l : report.lines)
      if (l.name == name) return l;
    report.lines.push_back({name});
    return report.lines.back();
  }

  void outcome(const std::string& name, bool ok, const std::string& counterexample = "") {
    SuiteLine& l = line(name);
    if (ok)
      ++l.passes;
    else {
      ++l.failures;
      if (!counterexample.empty() && l.counterexamples.size() < 3)
        l.counterexamples.push_back(counterexample);
    }
  }

  void inconclusive(const std::string& name) { ++line(name).inconclusive; }
};

}  // namespace

SuiteReport differential_suite(std::span<const std::uint64_t> seeds,
                               const RandomClusterSpec& base) {
  SuiteRunner run;
  run.base = base;
  const char* kMinimality = "unloading-vs-minimality-oracle";
  const char* kOrder = "unloading-order-independence";
  const char* kUnit = "unit-vs-ceiling-steps";
  const char* kCriteria = "cartier-criteria-agreement";
  const char* kDeltaSemi = "delta-vs-semigroup-gaps";
  const char* kFlagM = "flag-m-independence";
  const char* kKq = "kq-choice-independence";
  const char* kProjection = "projection-formula";
  for (const char* name : {kMinimality, kOrder, kUnit, kCriteria, kDeltaSemi, kFlagM, kKq,
                           kProjection})
    run.line(name);

  for (std::uint64_t seed : seeds) {
    // -- unloading family, small clusters --
    {
      Rng rng(seed * 0x9E3779B97F4A7C15ULL + 1);
      RandomClusterSpec spec = base;
      spec.max_points = std::min(base.max_points, 6);
      spec.max_multiplicity = 4;
      WeightedCluster wc = random_weighted_cluster(rng, spec);
      std::vector<int> fixed;
      for (int p = 0; p < static_cast<int>(wc.tree().size()); ++p)
        if (chance(rng, 0.2)) fixed.push_back(p);

      auto [engine, trace] = partial_unload(wc, fixed);
      OracleOutcome oracle = minimality_oracle(wc, fixed, 6);
      if (oracle.status == OracleOutcome::Status::ok) {
        bool ok = oracle.values == engine.values();
        std::string cex;
        if (!ok) {
          WeightedCluster small = shrink_cluster(wc, [&](const WeightedCluster& x) {
            auto [e2, t2] = partial_unload(x, std::span<const int>{});
            OracleOutcome o2 = minimality_oracle(x, {}, 6);
            return o2.status == OracleOutcome::Status::ok && o2.values != e2.values();
          });
          cex = serialize_scene(scene_of(small));
        }
        run.outcome(kMinimality, ok, cex);
      } else {
        run.inconclusive(kMinimality);
      }

      bool order_ok = true;
      for (int trial = 0; trial < 20 && order_ok; ++trial) {
        UnloadOptions opts;
        auto picker = std::make_shared<Rng>(seed + trial);
        opts.selector = [picker](std::span<const int> eligible) {
          return static_cast<std::size_t>(std::uniform_int_distribution<int>(
              0, static_cast<int>(eligible.size()) - 1)(*picker));
        };
        auto [other, t2] = partial_unload(wc, fixed, opts);
        order_ok = other.values() == engine.values();
      }
      run.outcome(kOrder, order_ok, order_ok ? "" : serialize_scene(scene_of(wc)));

      UnloadOptions unit;
      unit.unit_steps = true;
      auto [viaunit, t3] = partial_unload(wc, fixed, unit);
      run.outcome(kUnit, viaunit.values() == engine.values(),
                  serialize_scene(scene_of(wc)));
    }

    // -- surface/curve family --
    try {
      Rng rng(seed * 0x9E3779B97F4A7C15ULL + 2);
      SurfaceModel surface = random_surface(rng, base);
      Curve c = random_curve(rng, base, surface, "a");
      Curve d = random_curve(rng, base, surface, "b", {&c});
      Scene scene = scene_of(surface, {&c, &d});
      const std::uint64_t m_seed = seed * 31 + 5;

      SceneCheck criteria = [](const SurfaceModel& s, const std::vector<const Curve*>& cs) {
        CartierVerdict v = is_cartier(s, *cs.at(0));
        return std::all_of(v.decomposition.coeffs.begin(), v.decomposition.coeffs.end(),
                           [](const Rat& r) { return r >= 0; });
      };
      SceneCheck kq = [](const SurfaceModel& s, const std::vector<const Curve*>&) {
        for (const auto& q : s.singularities()) compute_kq(s, q);
        return true;
      };
      SceneCheck delta_semi = [](const SurfaceModel& s,
                                 const std::vector<const Curve*>& cs) {
        std::vector<BranchData> one{cs.at(0)->branches().front()};
        Curve gamma(cs.at(0)->tree_ptr(), std::move(one));
        SemigroupResult r = semigroup_at_q(s, gamma);
        bool ok = r.delta == delta_on_x(s, gamma);
        ok = ok && r.semigroup.conductor <= r.alpha.back();
        for (const Int& x : r.semigroup.elements_below_conductor)
          for (const Int& y : r.semigroup.elements_below_conductor)
            ok = ok && r.semigroup.contains(x + y);
        return ok;
      };
      SceneCheck flag_m = [m_seed](const SurfaceModel& s,
                                   const std::vector<const Curve*>& cs) {
        Rng mr(m_seed);
        IntVec m1(s.kplus().size()), m2(s.kplus().size());
        for (auto& x : m1) x = uniform(mr, 0, 4);
        for (auto& x : m2) x = uniform(mr, 0, 4);
        Flag f1 = build_flag(s, *cs.at(0), m1);
        Flag f2 = build_flag(s, *cs.at(0), m2);
        bool ok = f1.steps() == f2.steps() && f1.omega == f2.omega &&
                  f1.displacement == f2.displacement;
        // multiplicities at the new points, and increments everywhere, are
        // independent of m; at K \ Kplus the T_0 multiplicities are not
        for (int j = 0; ok && j <= f1.steps(); ++j)
          for (std::size_t p = 0; p < f1.kprime->size(); ++p) {
            if (p >= f1.ambient_size && f1.clusters[j].nu()[p] != f2.clusters[j].nu()[p])
              ok = false;
            if (f1.clusters[j].nu()[p] - f1.t0().nu()[p] !=
                f2.clusters[j].nu()[p] - f2.t0().nu()[p])
              ok = false;
          }
        return ok;
      };
      SceneCheck projection = [](const SurfaceModel& s,
                                 const std::vector<const Curve*>& cs) {
        if (cs.size() < 2) return true;
        const Curve& a = *cs.at(0);
        const Curve& b = *cs.at(1);
        Rat rhs = mumford_intersection(s, a, b);
        IntVec va = l_vector_of_curve(s, a);
        Decomposition ab = decompose_l(s, l_vector_of_curve(s, b),
                                       std::vector<int>(s.kplus().begin(), s.kplus().end()));
        for (std::size_t i = 0; i < va.size(); ++i) rhs += Rat(va[i]) * ab.coeffs[i];
        return Rat(noether_pairing(a, b)) == rhs;
      };

      const std::pair<const char*, SceneCheck> checks[] = {{kCriteria, criteria},
                                                           {kKq, kq},
                                                           {kDeltaSemi, delta_semi},
                                                           {kFlagM, flag_m},
                                                           {kProjection, projection}};
      for (const auto& [name, check] : checks) {
        bool ok = eval_scene(scene, check);
        run.outcome(name, ok,
                    ok ? std::string() : serialize_scene(shrink_scene(scene, check)));
      }
    } catch (const InputError&) {
      // a generator produced an unusable configuration; skip the seed
    }
  }
  return run.report;
}

}  // namespace sandwich
