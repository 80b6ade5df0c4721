#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grank/graph.hpp"

namespace grank {

/// One merged invariant subspace: a node set with no link leaving it.
struct Subspace {
  NodeId root = 0;                // smallest surviving candidate root
  std::vector<NodeId> members;    // sorted ascending
  std::vector<int> zero_orders;   // aligned with members; 0 = regular node

  /// Members with zero order 0 (the block that carries the nonzero spectrum).
  std::vector<NodeId> reduced_members() const;
};

/// Partition of the node set into core space and merged invariant subspaces.
struct Decomposition {
  std::size_t node_count = 0;
  std::vector<NodeId> core;               // sorted ascending
  std::vector<Subspace> subspaces;
  std::vector<std::int32_t> subspace_of;  // size N; -1 = core, else subspace index
  std::vector<std::string> warnings;      // budget-related diagnostics

  std::size_t core_size() const { return core.size(); }
  std::size_t subspace_node_count() const { return node_count - core.size(); }
  double mean_subspace_dimension() const {
    return subspaces.empty()
               ? 0.0
               : static_cast<double>(subspace_node_count()) / static_cast<double>(subspaces.size());
  }
  bool is_core(NodeId v) const { return subspace_of[v] < 0; }
};

/// Forward closure of {start} through nonzero elements of S. is_core is set
/// as soon as the closure hits a dangling node, a node flagged in
/// known_core, grows past cutoff nodes, or saturates at the whole graph;
/// otherwise limit_set holds the saturated closure (start included), sorted.
struct ClosureResult {
  bool is_core = false;
  std::vector<NodeId> limit_set;
};

ClosureResult reachable_closure(const DirectedGraph& g, NodeId start, std::size_t cutoff,
                                const std::vector<bool>& dangling,
                                const std::vector<bool>& known_core = {});

/// Three-step classification: per-node closures with the core shortcut,
/// merging of overlapping limit sets, then zero-node orders per merged
/// subspace. budget_fraction bounds closure growth at budget_fraction * N
/// nodes (never below min(N, 128), so small graphs are classified exactly).
Decomposition decompose(const DirectedGraph& g, double budget_fraction = 0.1);

/// Iterative stripping of an invariant member set: order 1 = no in-link
/// from the set, order k = all in-set in-links come from already stripped
/// nodes; survivors get order 0. Result aligned with `members`.
std::vector<int> zero_node_orders(const DirectedGraph& g, std::span<const NodeId> members);

struct VerificationReport {
  bool pass = true;
  std::vector<std::pair<NodeId, NodeId>> violating_edges;  // subspace -> outside
  std::vector<std::string> messages;
};

/// Checks disjointness, coverage, invariance (no subspace -> outside link)
/// and that no subspace contains a dangling node.
VerificationReport verify_decomposition(const DirectedGraph& g, const Decomposition& d);

}  // namespace grank
