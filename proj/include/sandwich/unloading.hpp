#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sandwich/cluster.hpp"

namespace sandwich {

struct UnloadStep {
  int point;
  Int increment;  // value increase at the point; excess there was negative
};

struct UnloadingTrace {
  std::vector<UnloadStep> steps;
  IntVec initial_values;
  IntVec final_values;
};

struct UnloadOptions {
  /// Unit increments instead of the ceiling step; same fixed point, more
  /// steps. Kept for differential testing.
  bool unit_steps = false;
  /// Exceeding the cap is treated as a bug, never expected.
  long max_steps = 1'000'000;
  /// Chooses among the eligible points (indices into the passed span);
  /// default picks the earliest point in tree order.
  std::function<std::size_t(std::span<const int>)> selector;
};

/// One tame unloading step at p: raises the value at p by the least n >= 1
/// making the excess there non-negative, n = ceil(-rho_p / omega(p)). All
/// other values are kept; multiplicities are re-derived.
WeightedCluster tame_step(const WeightedCluster& wc, int p);

/// The unique equivalent consistent cluster on the same points, together
/// with the step trace. The result does not depend on the step order.
std::pair<WeightedCluster, UnloadingTrace> unload(const WeightedCluster& wc,
                                                  const UnloadOptions& opts = {});

/// Unloading restricted to points outside `fixed`: the result has
/// non-negative excess off `fixed`, unchanged values on `fixed`, and is the
/// componentwise-minimal such value vector dominating the input.
std::pair<WeightedCluster, UnloadingTrace> partial_unload(const WeightedCluster& wc,
                                                          std::span<const int> fixed,
                                                          const UnloadOptions& opts = {});

/// Per-point value increase of partial_unload; zero on `fixed`.
IntVec unload_displacement(const WeightedCluster& wc, std::span<const int> fixed);

}  // namespace sandwich
