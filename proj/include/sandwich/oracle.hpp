#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sandwich/scene.hpp"

namespace sandwich {

struct RandomClusterSpec {
  int max_points = 8;
  int max_multiplicity = 9;
  double satellite_probability = 0.25;
  std::uint64_t seed = 0;
};

using Rng = std::mt19937_64;

TreePtr random_tree(Rng& rng, const RandomClusterSpec& spec);
/// Arbitrary-sign multiplicities; inconsistent on purpose most of the time.
WeightedCluster random_weighted_cluster(Rng& rng, const RandomClusterSpec& spec);
/// Excess-driven generation: always strictly consistent, with zero-excess
/// regions so the surface has singularities.
WeightedCluster random_strictly_consistent(Rng& rng, const RandomClusterSpec& spec);
SurfaceModel random_surface(Rng& rng, const RandomClusterSpec& spec);
/// 1..3 branches over an extension of the surface tree, each with a fresh
/// free simple tail; `label` keeps point names of separate curves disjoint.
/// Curves meant to live on one scene must see each other through
/// `coexisting` so that satellite slots are never minted twice.
Curve random_curve(Rng& rng, const RandomClusterSpec& spec, const SurfaceModel& surface,
                   const std::string& label = "a",
                   const std::vector<const Curve*>& coexisting = {});

struct OracleOutcome {
  enum class Status { ok, box_edge, infeasible } status;
  IntVec values;  // the componentwise-minimal feasible value vector
};

/// Exhaustive search over value vectors v' in [v, v + bound], fixed on
/// `fixed`, with non-negative excesses elsewhere. Excesses are recomputed
/// from the definition; the unloading engine is never consulted. A minimum
/// touching the box edge is reported as inconclusive.
OracleOutcome minimality_oracle(const WeightedCluster& wc, std::span<const int> fixed,
                                const Int& bound);

/// A surface-and-curves check: true means pass. Checks are evaluated off a
/// scene so that counterexamples shrink and replay through the same path.
using SceneCheck =
    std::function<bool(const SurfaceModel&, const std::vector<const Curve*>&)>;

/// Rebuilds the surface and curves from the scene and runs the check.
/// Unusable scenes pass vacuously; internal-invariant failures fail.
bool eval_scene(const Scene& scene, const SceneCheck& check);

/// Point-count minimization of a failing scene: drops maximal points (and
/// the branches through them) while the check keeps failing.
Scene shrink_scene(Scene scene, const SceneCheck& check);

struct SuiteLine {
  std::string name;
  int passes = 0;
  int failures = 0;
  int inconclusive = 0;
  std::vector<std::string> counterexamples;  // scenes in the scene format
};

struct SuiteReport {
  std::vector<SuiteLine> lines;
  bool all_passed() const;
  std::string to_string() const;
};

/// Cross-checks everything that has an independent route: unloading against
/// the minimality oracle and against unit steps, the three principality
/// criteria, delta against semigroup gaps, flag m-independence, K_Q choice
/// independence, and the projection formula. One run per seed.
SuiteReport differential_suite(std::span<const std::uint64_t> seeds,
                               const RandomClusterSpec& base = {});

}  // namespace sandwich
