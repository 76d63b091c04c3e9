#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "sandwich/error.hpp"
#include "sandwich/linalg.hpp"
#include "sandwich/oracle.hpp"

using namespace sandwich;

TEST_CASE("validation accepts the fixtures") {
  CHECK(validate_tree(fixtures::tree1()->records()).empty());
  CHECK(validate_tree(fixtures::tree3()->records()).empty());
  CHECK(validate_tree(fixtures::tree4()->records()).empty());
}

TEST_CASE("validation flags a bad satellite target") {
  // p2's parent p1 is not proximate to p1 itself
  auto violations = validate_tree(
      {{"O", std::nullopt, std::nullopt}, {"p1", "O", std::nullopt}, {"p2", "p1", "p1"}});
  REQUIRE(!violations.empty());
  CHECK(violations.front().point == "p2");
}

TEST_CASE("validation flags ordering, duplicate roots and duplicate ids") {
  CHECK(!validate_tree({{"p1", "O", std::nullopt}, {"O", std::nullopt, std::nullopt}}).empty());
  CHECK(!validate_tree({{"O", std::nullopt, std::nullopt}, {"Q", std::nullopt, std::nullopt}})
             .empty());
  CHECK(!validate_tree({{"O", std::nullopt, std::nullopt}, {"O", "O", std::nullopt}}).empty());
}

TEST_CASE("two satellites may not share a proximity pair") {
  auto violations = validate_tree({{"O", std::nullopt, std::nullopt},
                                   {"a", "O", std::nullopt},
                                   {"b", "a", "O"},
                                   {"c", "a", "O"}});
  REQUIRE(!violations.empty());
  CHECK(violations.front().point == "c");
}

TEST_CASE("proximity matrices of the fixtures") {
  CHECK(proximity_matrix(*fixtures::tree1()) == IntMat{{1, 0}, {-1, 1}});
  CHECK(proximity_matrix(*fixtures::tree3()) == IntMat{{1, 0, 0}, {-1, 1, 0}, {-1, -1, 1}});
  TreePtr single = ClusterTree::make({{"O", std::nullopt, std::nullopt}});
  CHECK(proximity_matrix(*single) == IntMat{{1}});
}

TEST_CASE("values, multiplicities and excesses on the fixtures") {
  WeightedCluster f1 = fixtures::fix1();
  CHECK(f1.values() == IntVec{2, 3});
  CHECK(f1.excesses() == IntVec{1, 1});

  WeightedCluster f3 = fixtures::fix3();
  CHECK(f3.values() == IntVec{3, 5, 9});
  CHECK(f3.excesses() == IntVec{0, 1, 1});

  CHECK(mults_from_values(*fixtures::tree1(), {2, 3}) == IntVec{2, 1});
  CHECK(mults_from_values(*fixtures::tree3(), {3, 5, 9}) == IntVec{3, 2, 1});
  CHECK(values_from_mults(*fixtures::tree1(), {0, 0}) == IntVec{0, 0});

  CHECK(WeightedCluster(fixtures::tree1(), {1, 2}).excesses() == IntVec{-1, 2});
}

TEST_CASE("multiplicities from a value indicator at the root") {
  // nu = P v has 1 at the root and -1 at each point proximate to it
  TreePtr t = fixtures::tree3();
  CHECK(mults_from_values(*t, {1, 0, 0}) == IntVec{1, -1, -1});
}

TEST_CASE("codimension and pairings") {
  CHECK(fixtures::fix1().codimension() == 4);
  CHECK(fixtures::fix3().codimension() == 10);
  CHECK(WeightedCluster(fixtures::tree1(), {0, 0}).codimension() == 0);

  CHECK(fixtures::fix1().self_intersection() == 5);
  CHECK(pair_with_curve(fixtures::fix3(), fixtures::delta_branch()) == 3);
  CHECK(pair_with_curve(fixtures::fix1(), Curve(fixtures::tree1(), {})) == 0);
}

TEST_CASE("raising a zero multiplicity raises the codimension by one") {
  WeightedCluster wc(fixtures::tree3(), {3, 2, 0});
  IntVec bumped = wc.nu();
  bumped[2] += 1;
  CHECK(WeightedCluster(fixtures::tree3(), bumped).codimension() - wc.codimension() == 1);
}

TEST_CASE("dual graph of the fixtures") {
  auto e1 = dual_graph(*fixtures::tree1());
  REQUIRE(e1.size() == 1);
  CHECK(e1.front() == std::pair<int, int>{0, 1});

  // p2 is proximate to both O and p1, so E_O and E_p1 are separated
  auto e3 = dual_graph(*fixtures::tree3());
  CHECK(e3 == std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});

  TreePtr single = ClusterTree::make({{"O", std::nullopt, std::nullopt}});
  CHECK(dual_graph(*single).empty());
}

TEST_CASE("intersection matrix identities on random trees") {
  Rng rng(7);
  RandomClusterSpec spec;
  spec.max_points = 12;
  for (int trial = 0; trial < 120; ++trial) {
    TreePtr tree = random_tree(rng, spec);
    const int n = static_cast<int>(tree->size());
    IntMat p = proximity_matrix(*tree);
    IntMat a = intersection_matrix(*tree);

    CHECK(determinant(p) == 1);

    // A symmetric, off-diagonal in {0,1}, diagonal -omega
    for (int i = 0; i < n; ++i) {
      CHECK(a[i][i] == -Int(tree->omega(i)));
      for (int j = 0; j < i; ++j) {
        CHECK(a[i][j] == a[j][i]);
        CHECK((a[i][j] == 0 || a[i][j] == 1));
      }
    }

    // -A positive definite
    IntMat minus(n, IntVec(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) minus[i][j] = -a[i][j];
    for (const Int& minor : leading_principal_minors(minus)) CHECK(minor > 0);

    dual_graph(*tree);  // asserts the tree shape internally
  }
}

TEST_CASE("round trip and excess routes on random weightings") {
  Rng rng(11);
  RandomClusterSpec spec;
  spec.max_points = 12;
  spec.max_multiplicity = 9;
  for (int trial = 0; trial < 200; ++trial) {
    WeightedCluster wc = random_weighted_cluster(rng, spec);
    const ClusterTree& tree = wc.tree();
    CHECK(mults_from_values(tree, values_from_mults(tree, wc.nu())) == wc.nu());

    // rho = P^t nu = -A v
    IntMat a = intersection_matrix(tree);
    const int n = static_cast<int>(tree.size());
    IntVec via_matrix(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) via_matrix[i] -= a[i][j] * wc.values()[j];
    CHECK(wc.excesses() == via_matrix);

    CHECK(mults_from_excesses(tree, wc.excesses()) == wc.nu());
  }
}

TEST_CASE("solve_intersection gives the simple ideal values") {
  TreePtr t = fixtures::tree1();
  CHECK(solve_intersection(*t, {0, -1}) == IntVec{1, 2});
  TreePtr t3 = fixtures::tree3();
  CHECK(solve_intersection(*t3, {0, -1, 0}) == IntVec{1, 2, 3});
  CHECK(solve_intersection(*t3, {0, 0, -1}) == IntVec{2, 3, 6});
}

TEST_CASE("operations on an invalid tree raise a structured error") {
  TreePtr bad = ClusterTree::make({{"p1", "O", std::nullopt}, {"O", std::nullopt, std::nullopt}});
  CHECK(!bad->valid());
  CHECK_THROWS_AS(proximity_matrix(*bad), InputError);
}
