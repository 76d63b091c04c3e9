#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "sandwich/error.hpp"
#include "sandwich/oracle.hpp"
#include "sandwich/unloading.hpp"

using namespace sandwich;

TEST_CASE("tame step on fix2") {
  WeightedCluster wc = fixtures::fix2();
  REQUIRE(wc.excesses() == IntVec{-1, 2});
  WeightedCluster stepped = tame_step(wc, 0);
  CHECK(stepped.nu() == IntVec{2, 1});
  CHECK(stepped.excesses() == IntVec{1, 1});
  CHECK_THROWS_AS(tame_step(stepped, 0), InputError);
}

TEST_CASE("tame step uses the ceiling increment") {
  // rho = -4 at a point of omega 3 needs n = 2
  TreePtr t = ClusterTree::make({{"O", std::nullopt, std::nullopt},
                                 {"a", "O", std::nullopt},
                                 {"b", "O", std::nullopt}});
  WeightedCluster wc(t, {0, 2, 2});
  REQUIRE(wc.excesses()[0] == -4);
  REQUIRE(t->omega(0) == 3);
  WeightedCluster stepped = tame_step(wc, 0);
  CHECK(stepped.values()[0] - wc.values()[0] == 2);
  CHECK(stepped.excesses()[0] >= 0);
}

TEST_CASE("tame step on the extended fix3 cluster") {
  TreePtr t = ClusterTree::make({{"O", std::nullopt, std::nullopt},
                                 {"p1", "O", std::nullopt},
                                 {"p2", "p1", "O"},
                                 {"q", "O", std::nullopt}});
  WeightedCluster wc(t, {3, 2, 1, 1});
  REQUIRE(wc.excesses()[0] == -1);
  REQUIRE(t->omega(0) == 4);
  WeightedCluster stepped = tame_step(wc, 0);
  CHECK(stepped.nu() == IntVec{4, 1, 0, 0});
}

TEST_CASE("unload fix2 and keep consistent input unchanged") {
  auto [unloaded, trace] = unload(fixtures::fix2());
  CHECK(unloaded.nu() == IntVec{2, 1});
  CHECK(trace.steps.size() == 1);
  CHECK(trace.steps.front().point == 0);

  auto [same, empty_trace] = unload(fixtures::fix1());
  CHECK(same.nu() == fixtures::fix1().nu());
  CHECK(empty_trace.steps.empty());
}

TEST_CASE("unloading the T_delta values on fix3") {
  WeightedCluster t_delta = WeightedCluster::from_values(fixtures::tree3(), {0, 1, 2});
  auto [unloaded, trace] = unload(t_delta);
  CHECK(unloaded.values() == IntVec{1, 1, 2});
  CHECK(unloaded.nu() == IntVec{1, 0, 0});
  CHECK(unloaded.excesses() == IntVec{1, 0, 0});
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps.front().point == 0);
  CHECK(trace.steps.front().increment == 1);
}

TEST_CASE("partial unloading fixes the requested values") {
  WeightedCluster wc = fixtures::fix2();
  std::vector<int> fixed{1};
  auto [result, trace] = partial_unload(wc, fixed);
  CHECK(result.nu() == IntVec{2, 1});  // only O is ever unloaded

  auto [unchanged, t2] = partial_unload(fixtures::fix1(), fixed);
  CHECK(unchanged.nu() == fixtures::fix1().nu());

  std::vector<int> bogus{9};
  CHECK_THROWS_AS(partial_unload(wc, bogus), InputError);
}

TEST_CASE("unload displacement") {
  CHECK(unload_displacement(fixtures::fix2(), {}) == IntVec{1, 0});
  CHECK(unload_displacement(fixtures::fix1(), {}) == IntVec{0, 0});
  WeightedCluster t_delta = WeightedCluster::from_values(fixtures::tree3(), {0, 1, 2});
  CHECK(unload_displacement(t_delta, {}) == IntVec{1, 0, 0});
}

TEST_CASE("unloading twice is unloading once") {
  Rng rng(3);
  RandomClusterSpec spec;
  spec.max_points = 10;
  for (int trial = 0; trial < 60; ++trial) {
    WeightedCluster wc = random_weighted_cluster(rng, spec);
    auto [once, t1] = unload(wc);
    CHECK(once.consistent());
    auto [twice, t2] = unload(once);
    CHECK(twice.values() == once.values());
    CHECK(t2.steps.empty());
  }
}

TEST_CASE("order independence on random clusters") {
  Rng rng(17);
  RandomClusterSpec spec;
  spec.max_points = 10;
  for (int trial = 0; trial < 40; ++trial) {
    WeightedCluster wc = random_weighted_cluster(rng, spec);
    auto [reference, t0] = unload(wc);
    for (int run = 0; run < 20; ++run) {
      UnloadOptions opts;
      auto picker = std::make_shared<Rng>(trial * 100 + run);
      opts.selector = [picker](std::span<const int> eligible) {
        return static_cast<std::size_t>(std::uniform_int_distribution<int>(
            0, static_cast<int>(eligible.size()) - 1)(*picker));
      };
      auto [other, t1] = unload(wc, opts);
      CHECK(other.values() == reference.values());
    }
  }
}

TEST_CASE("unit steps reach the same fixed point") {
  Rng rng(23);
  RandomClusterSpec spec;
  spec.max_points = 8;
  spec.max_multiplicity = 6;
  for (int trial = 0; trial < 60; ++trial) {
    WeightedCluster wc = random_weighted_cluster(rng, spec);
    UnloadOptions unit;
    unit.unit_steps = true;
    auto [a, t1] = unload(wc);
    auto [b, t2] = unload(wc, unit);
    CHECK(a.values() == b.values());
    CHECK(t2.steps.size() >= t1.steps.size());
  }
}

TEST_CASE("engine agrees with the exhaustive minimality oracle") {
  Rng rng(29);
  RandomClusterSpec spec;
  spec.max_points = 5;
  spec.max_multiplicity = 3;
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    WeightedCluster wc = random_weighted_cluster(rng, spec);
    std::vector<int> fixed;
    for (int p = 0; p < static_cast<int>(wc.tree().size()); ++p)
      if (trial % 3 == 0 && p % 2 == 1) fixed.push_back(p);
    auto [engine, trace] = partial_unload(wc, fixed);
    OracleOutcome oracle = minimality_oracle(wc, fixed, 6);
    if (oracle.status != OracleOutcome::Status::ok) continue;
    CHECK(oracle.values == engine.values());
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("fixture oracle values") {
  OracleOutcome o = minimality_oracle(fixtures::fix2(), {}, 3);
  REQUIRE(o.status == OracleOutcome::Status::ok);
  CHECK(o.values == IntVec{2, 3});

  OracleOutcome consistent = minimality_oracle(fixtures::fix1(), {}, 3);
  REQUIRE(consistent.status == OracleOutcome::Status::ok);
  CHECK(consistent.values == fixtures::fix1().values());

  WeightedCluster t_delta = WeightedCluster::from_values(fixtures::tree3(), {0, 1, 2});
  OracleOutcome td = minimality_oracle(t_delta, {}, 4);
  REQUIRE(td.status == OracleOutcome::Status::ok);
  CHECK(td.values == IntVec{1, 1, 2});
}

TEST_CASE("a skipped step is caught by the oracle") {
  WeightedCluster wc = fixtures::fix2();
  auto [engine, trace] = partial_unload(wc, {});
  REQUIRE(!trace.steps.empty());
  // sabotage: withdraw the final step
  IntVec tampered = engine.values();
  tampered[trace.steps.back().point] -= trace.steps.back().increment;
  OracleOutcome oracle = minimality_oracle(wc, {}, 6);
  REQUIRE(oracle.status == OracleOutcome::Status::ok);
  CHECK(oracle.values != tampered);
}
