#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "grank/csv.hpp"
#include "grank/decomposition.hpp"
#include "grank/synth.hpp"
#include "test_support.hpp"

using namespace grank;
using namespace grank::testing;

namespace {

std::vector<bool> dangling_mask(const DirectedGraph& g) {
  std::vector<bool> mask(g.node_count(), false);
  for (NodeId v : g.dangling_nodes()) mask[v] = true;
  return mask;
}

}  // namespace

TEST_CASE("reachable closure") {
  auto g = g4();
  auto dangling = dangling_mask(g);

  SUBCASE("cycle saturates") {
    auto r = reachable_closure(g, 0, 4, dangling);
    CHECK_FALSE(r.is_core);
    CHECK(r.limit_set == std::vector<NodeId>{0, 1});
  }

  SUBCASE("closure covering the whole graph is core") {
    auto r = reachable_closure(g, 2, 4, dangling);
    CHECK(r.is_core);
  }

  SUBCASE("dangling shortcut") {
    auto sink = DirectedGraph::from_edges(2, {{0, 1}});
    auto r = reachable_closure(sink, 0, 2, dangling_mask(sink));
    CHECK(r.is_core);
  }

  SUBCASE("known-core shortcut") {
    std::vector<bool> known(4, false);
    known[1] = true;
    auto r = reachable_closure(g, 0, 4, dangling, known);
    CHECK(r.is_core);
  }
}

TEST_CASE("decompose on the fixtures") {
  SUBCASE("G4") {
    auto d = decompose(g4());
    CHECK(d.core == std::vector<NodeId>{2, 3});
    REQUIRE(d.subspaces.size() == 1);
    CHECK(d.subspaces[0].members == std::vector<NodeId>{0, 1});
    CHECK(d.subspaces[0].root == 0);
    CHECK(d.subspace_node_count() == 2);
  }

  SUBCASE("G5 has a first-order zero node merged in") {
    auto d = decompose(g5());
    CHECK(d.core == std::vector<NodeId>{2, 3});
    REQUIRE(d.subspaces.size() == 1);
    const auto& sub = d.subspaces[0];
    CHECK(sub.members == std::vector<NodeId>{0, 1, 4});
    CHECK(sub.zero_orders == std::vector<int>{0, 0, 1});
    CHECK(sub.reduced_members() == std::vector<NodeId>{0, 1});
    CHECK(sub.root == 0);
  }

  SUBCASE("G6 splits into two subspaces") {
    auto d = decompose(g6());
    CHECK(d.core == std::vector<NodeId>{4});
    REQUIRE(d.subspaces.size() == 2);
    CHECK(d.subspaces[0].members == std::vector<NodeId>{0, 1});
    CHECK(d.subspaces[1].members == std::vector<NodeId>{2, 3});
  }

  SUBCASE("G7 exhibits a second-order zero node") {
    auto d = decompose(g7());
    CHECK(d.core == std::vector<NodeId>{2, 3});
    REQUIRE(d.subspaces.size() == 1);
    const auto& sub = d.subspaces[0];
    CHECK(sub.members == std::vector<NodeId>{0, 1, 4, 5});
    CHECK(sub.zero_orders == std::vector<int>{0, 0, 2, 1});
  }
}

TEST_CASE("zero node orders") {
  SUBCASE("G5 subspace") {
    auto orders = zero_node_orders(g5(), std::vector<NodeId>{0, 1, 4});
    CHECK(orders == std::vector<int>{0, 0, 1});
  }

  SUBCASE("G7 subspace strips in two waves") {
    auto orders = zero_node_orders(g7(), std::vector<NodeId>{0, 1, 4, 5});
    CHECK(orders == std::vector<int>{0, 0, 2, 1});
  }

  SUBCASE("pure cycle has no strippable node") {
    auto orders = zero_node_orders(g4(), std::vector<NodeId>{0, 1});
    CHECK(orders == std::vector<int>{0, 0});
  }
}

TEST_CASE("verify_decomposition") {
  SUBCASE("production output passes") {
    auto g = g4();
    auto report = verify_decomposition(g, decompose(g));
    CHECK(report.pass);
    CHECK(report.violating_edges.empty());
  }

  SUBCASE("hand-built violation is caught") {
    auto g = g4();
    Decomposition bad;
    bad.node_count = 4;
    bad.core = {3};
    Subspace sub;
    sub.root = 0;
    sub.members = {0, 1, 2};
    sub.zero_orders = {0, 0, 1};
    bad.subspaces.push_back(sub);
    bad.subspace_of = {0, 0, 0, -1};
    auto report = verify_decomposition(g, bad);
    CHECK_FALSE(report.pass);
    REQUIRE_FALSE(report.violating_edges.empty());
    CHECK(report.violating_edges[0] == std::pair<NodeId, NodeId>{2, 3});
  }
}

TEST_CASE("decompose matches the brute-force classifier on random digraphs") {
  std::size_t with_subspaces = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 11;
    const double p = 0.08 + 0.02 * static_cast<double>(seed % 7);
    auto g = random_digraph(n, p, seed * 31 + 1);
    auto d = decompose(g);
    auto oracle = brute_force_decompose(g);
    REQUIRE_MESSAGE(matches_brute_force(d, oracle), "seed ", seed);
    CHECK(verify_decomposition(g, d).pass);
    with_subspaces += !d.subspaces.empty();
  }
  CHECK(with_subspaces > 20);  // the ensemble genuinely exercises both outcomes
}

TEST_CASE("decompose is label-permutation equivariant") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_digraph(12, 0.12, 500 + seed);
    auto d = decompose(g);

    // Relabel v -> (v + 5) mod n and decompose again.
    const auto n = static_cast<NodeId>(g.node_count());
    auto perm = [&](NodeId v) { return static_cast<NodeId>((v + 5) % n); };
    std::vector<Edge> edges;
    for (NodeId j = 0; j < n; ++j)
      for (NodeId i : g.out_neighbors(j)) edges.emplace_back(perm(j), perm(i));
    auto pd = decompose(DirectedGraph::from_edges(n, std::move(edges)));

    std::vector<NodeId> permuted_core;
    for (NodeId v : d.core) permuted_core.push_back(perm(v));
    std::sort(permuted_core.begin(), permuted_core.end());
    CHECK(pd.core == permuted_core);

    std::vector<std::vector<NodeId>> expected_sets;
    for (const auto& sub : d.subspaces) {
      std::vector<NodeId> members;
      for (NodeId v : sub.members) members.push_back(perm(v));
      std::sort(members.begin(), members.end());
      expected_sets.push_back(std::move(members));
    }
    std::sort(expected_sets.begin(), expected_sets.end());
    std::vector<std::vector<NodeId>> actual_sets;
    for (const auto& sub : pd.subspaces) actual_sets.push_back(sub.members);
    std::sort(actual_sets.begin(), actual_sets.end());
    CHECK(actual_sets == expected_sets);
  }
}

TEST_CASE("merged subspaces are closure-closed") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = random_digraph(14, 0.1, 900 + seed);
    auto d = decompose(g);
    auto dangling = dangling_mask(g);
    for (const auto& sub : d.subspaces) {
      std::vector<NodeId> union_of_closures;
      for (NodeId v : sub.members) {
        auto r = reachable_closure(g, v, g.node_count(), dangling);
        REQUIRE_FALSE(r.is_core);
        union_of_closures.insert(union_of_closures.end(), r.limit_set.begin(),
                                 r.limit_set.end());
      }
      std::sort(union_of_closures.begin(), union_of_closures.end());
      union_of_closures.erase(std::unique(union_of_closures.begin(), union_of_closures.end()),
                              union_of_closures.end());
      CHECK(union_of_closures == sub.members);
    }
  }
}

TEST_CASE("budget changes nothing when subspaces are small") {
  // Planted sizes stay far below a tenth of N, so every budget agrees.
  PlantedSubspaceParams params{{2, 3, 2}, 3, 2};
  std::vector<std::size_t> pad(30, 1);  // 30 single-node self-loop subspaces
  for (std::size_t s : pad) params.cycle_sizes.push_back(s);
  auto g = generate_synthetic(params, 1);
  auto reference = decompose(g, 1.0);
  for (double b : {0.1, 0.3, 0.7}) {
    auto d = decompose(g, b);
    CHECK(d.core == reference.core);
    REQUIRE(d.subspaces.size() == reference.subspaces.size());
    for (std::size_t s = 0; s < d.subspaces.size(); ++s)
      CHECK(d.subspaces[s].members == reference.subspaces[s].members);
  }
}

TEST_CASE("decomposition csv round-trips") {
  auto g = g7();
  auto d = decompose(g);
  std::ostringstream out;
  write_decomposition_csv(out, d);
  std::istringstream in(out.str());
  auto d2 = read_decomposition_csv(in, g);
  CHECK(d2.core == d.core);
  REQUIRE(d2.subspaces.size() == d.subspaces.size());
  for (std::size_t s = 0; s < d.subspaces.size(); ++s) {
    CHECK(d2.subspaces[s].members == d.subspaces[s].members);
    CHECK(d2.subspaces[s].zero_orders == d.subspaces[s].zero_orders);
  }
  CHECK(verify_decomposition(g, d2).pass);
}

TEST_CASE("planted ensembles are recovered exactly") {
  // Cycle sizes drawn from the inverse CDF of (1 + 2x)^{-1.5}.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> sizes;
  std::multiset<std::size_t> planted;
  for (int k = 0; k < 200; ++k) {
    const double u = unit(rng);
    const double x = 0.5 * (std::pow(u, -1.0 / 1.5) - 1.0);
    const auto size = static_cast<std::size_t>(std::max(1.0, std::round(20.0 * x)));
    sizes.push_back(size);
    planted.insert(size);
  }
  auto g = generate_synthetic(PlantedSubspaceParams{sizes, 2, 1}, 5);
  // Heavy-tailed sizes can exceed any fractional budget; classify exactly.
  auto d = decompose(g, 1.0);
  std::multiset<std::size_t> recovered;
  for (const auto& sub : d.subspaces) recovered.insert(sub.members.size());
  CHECK(recovered == planted);
}
