#include "sandwich/unloading.hpp"

#include "sandwich/error.hpp"

namespace sandwich {

static void check_fixed(const WeightedCluster& wc, std::span<const int> fixed) {
  for (int p : fixed)
    require(p >= 0 && p < static_cast<int>(wc.tree().size()),
            "fixed set names a point outside the cluster");
}

static std::pair<WeightedCluster, UnloadingTrace> run(const WeightedCluster& wc,
                                                      std::span<const int> fixed,
                                                      const UnloadOptions& opts) {
  const ClusterTree& tree = wc.tree();
  check_fixed(wc, fixed);
  const int n = static_cast<int>(tree.size());
  std::vector<char> is_fixed(n, 0);
  for (int p : fixed) is_fixed[p] = 1;

  IntVec v = wc.values();
  IntVec rho = wc.excesses();
  UnloadingTrace trace;
  trace.initial_values = v;

  std::vector<int> eligible;
  long steps = 0;
  for (;;) {
    eligible.clear();
    for (int p = 0; p < n; ++p)
      if (!is_fixed[p] && rho[p] < 0) eligible.push_back(p);
    if (eligible.empty()) break;

    std::size_t pick = 0;
    if (opts.selector) {
      pick = opts.selector(eligible);
      check_invariant(pick < eligible.size(), "unloading selector out of range");
    }
    const int p = eligible[pick];
    const Int need = ceil_div(-rho[p], Int(tree.omega(p)));
    const Int inc = opts.unit_steps ? Int(1) : need;

    // rho = -A v, so raising v_p by inc moves rho_p by inc*omega(p) and
    // lowers rho by inc at the dual-graph neighbours of p.
    v[p] += inc;
    rho[p] += inc * tree.omega(p);
    for (int q : tree.dual_adjacent(p)) rho[q] -= inc;
    trace.steps.push_back({p, inc});

    if (++steps > opts.max_steps) throw InternalError("unloading exceeded the step cap");
  }

  trace.final_values = v;
  return {WeightedCluster::from_values(wc.tree_ptr(), std::move(v)), std::move(trace)};
}

WeightedCluster tame_step(const WeightedCluster& wc, int p) {
  require(p >= 0 && p < static_cast<int>(wc.tree().size()), "unknown point");
  require(wc.excesses()[p] < 0, "tame step requires negative excess at the point");
  IntVec v = wc.values();
  v[p] += ceil_div(-wc.excesses()[p], Int(wc.tree().omega(p)));
  return WeightedCluster::from_values(wc.tree_ptr(), std::move(v));
}

std::pair<WeightedCluster, UnloadingTrace> unload(const WeightedCluster& wc,
                                                  const UnloadOptions& opts) {
  return run(wc, {}, opts);
}

std::pair<WeightedCluster, UnloadingTrace> partial_unload(const WeightedCluster& wc,
                                                          std::span<const int> fixed,
                                                          const UnloadOptions& opts) {
  return run(wc, fixed, opts);
}

IntVec unload_displacement(const WeightedCluster& wc, std::span<const int> fixed) {
  auto [result, trace] = partial_unload(wc, fixed);
  IntVec out(trace.final_values.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = trace.final_values[i] - trace.initial_values[i];
  return out;
}

}  // namespace sandwich
