#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "grank/graph.hpp"

namespace grank {

/// G(n, p): every ordered pair (j, i), self-loops included, becomes a link
/// independently with probability edge_prob.
struct UniformDigraphParams {
  std::size_t nodes = 0;
  double edge_prob = 0.0;
};

/// Disjoint directed cycles (the planted invariant subspaces) attached to
/// a strongly connected block of core nodes; the first core node links to
/// the head of every cycle, and optional dangling sinks hang off the last
/// core node. Cycle nodes come first in id order, then core, then sinks.
struct PlantedSubspaceParams {
  std::vector<std::size_t> cycle_sizes;
  std::size_t core_size = 1;
  std::size_t dangling_count = 0;
};

/// Growing digraph: each new node emits out_degree links to existing nodes
/// picked proportionally to (in-degree + 1), seeded by a small cycle.
struct PreferentialAttachmentParams {
  std::size_t nodes = 0;
  std::size_t out_degree = 1;
};

using SyntheticSpec =
    std::variant<UniformDigraphParams, PlantedSubspaceParams, PreferentialAttachmentParams>;

/// Deterministic for a fixed (spec, seed) pair. Throws std::invalid_argument
/// on out-of-range parameters (probability outside [0,1], zero sizes).
DirectedGraph generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace grank
