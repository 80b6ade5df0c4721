#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace grank {

using NodeId = std::uint32_t;
using ExternalId = std::uint64_t;

/// Error raised while reading an edge-list stream; carries the 1-based
/// line number of the offending input line (0 when not line-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t line)
      : std::runtime_error(std::move(msg)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Immutable directed graph in column-major (CSC-like) form: for every
/// source node j the sorted, duplicate-free list of targets i of the
/// links j -> i. Node ids are dense [0, N); the mapping to the external
/// ids seen at parse time is kept alongside.
///
/// Instances never change after construction, so concurrent reads are
/// safe without locking.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Build from explicit dense edges (j -> i pairs). External ids default
  /// to the identity mapping. Duplicate edges collapse; self-loops stay.
  static DirectedGraph from_edges(std::size_t node_count,
                                  std::vector<std::pair<NodeId, NodeId>> edges,
                                  std::vector<ExternalId> external_ids = {});

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t link_count() const { return targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId source) const {
    return {targets_.data() + offsets_[source],
            targets_.data() + offsets_[source + 1]};
  }
  std::size_t out_degree(NodeId source) const {
    return offsets_[source + 1] - offsets_[source];
  }

  ExternalId external_id(NodeId node) const { return external_ids_[node]; }
  const std::vector<ExternalId>& external_ids() const { return external_ids_; }
  std::optional<NodeId> dense_id(ExternalId ext) const;

  /// Graph with every link reversed; N, L and the id map are preserved.
  DirectedGraph transpose() const;

  /// Nodes with out-degree zero, ascending.
  std::vector<NodeId> dangling_nodes() const;

  bool has_edge(NodeId source, NodeId target) const;

  /// Structural equality: same dense adjacency and same id map.
  bool operator==(const DirectedGraph& other) const = default;

 private:
  std::vector<std::uint64_t> offsets_;  // size N+1
  std::vector<NodeId> targets_;         // size L, sorted per column
  std::vector<ExternalId> external_ids_;
  std::unordered_map<ExternalId, NodeId> dense_of_external_;
};

/// Parse a whitespace-separated edge list ("src dst" per line, '#' lines
/// ignored). External ids are remapped to dense indices in order of first
/// appearance. Throws ParseError on malformed input or an empty graph.
DirectedGraph parse_edge_list(std::istream& in);

/// Emit the graph as an edge list over external ids, one "src dst" line
/// per link, columns in dense order. parse_edge_list on the output yields
/// a graph with the same external edge set.
void write_edge_list(std::ostream& out, const DirectedGraph& g);

/// The set of (external src, external dst) pairs; order-insensitive
/// comparison helper for round-trip checks.
std::vector<std::pair<ExternalId, ExternalId>> external_edges(const DirectedGraph& g);

}  // namespace grank
