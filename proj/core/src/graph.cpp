#include "grank/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

namespace grank {

namespace {

// Sorts and dedups the target list of every column, producing CSC arrays.
void freeze_columns(std::size_t n,
                    std::vector<std::pair<NodeId, NodeId>>& edges,
                    std::vector<std::uint64_t>& offsets,
                    std::vector<NodeId>& targets) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  offsets.assign(n + 1, 0);
  for (const auto& [src, dst] : edges) ++offsets[src + 1];
  for (std::size_t j = 0; j < n; ++j) offsets[j + 1] += offsets[j];

  targets.resize(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) targets[k] = edges[k].second;
}

}  // namespace

DirectedGraph DirectedGraph::from_edges(std::size_t node_count,
                                        std::vector<std::pair<NodeId, NodeId>> edges,
                                        std::vector<ExternalId> external_ids) {
  DirectedGraph g;
  for (const auto& [src, dst] : edges) {
    if (src >= node_count || dst >= node_count)
      throw std::invalid_argument("edge endpoint out of range");
  }
  if (external_ids.empty()) {
    external_ids.resize(node_count);
    for (std::size_t v = 0; v < node_count; ++v) external_ids[v] = v;
  } else if (external_ids.size() != node_count) {
    throw std::invalid_argument("external id table size mismatch");
  }
  freeze_columns(node_count, edges, g.offsets_, g.targets_);
  g.external_ids_ = std::move(external_ids);
  g.dense_of_external_.reserve(node_count);
  for (std::size_t v = 0; v < node_count; ++v)
    g.dense_of_external_.emplace(g.external_ids_[v], static_cast<NodeId>(v));
  return g;
}

std::optional<NodeId> DirectedGraph::dense_id(ExternalId ext) const {
  auto it = dense_of_external_.find(ext);
  if (it == dense_of_external_.end()) return std::nullopt;
  return it->second;
}

DirectedGraph DirectedGraph::transpose() const {
  const std::size_t n = node_count();
  std::vector<std::pair<NodeId, NodeId>> reversed;
  reversed.reserve(link_count());
  for (NodeId j = 0; j < n; ++j)
    for (NodeId i : out_neighbors(j)) reversed.emplace_back(i, j);
  return from_edges(n, std::move(reversed), external_ids_);
}

std::vector<NodeId> DirectedGraph::dangling_nodes() const {
  std::vector<NodeId> out;
  const std::size_t n = node_count();
  for (NodeId j = 0; j < n; ++j)
    if (out_degree(j) == 0) out.push_back(j);
  return out;
}

bool DirectedGraph::has_edge(NodeId source, NodeId target) const {
  auto nbrs = out_neighbors(source);
  return std::binary_search(nbrs.begin(), nbrs.end(), target);
}

DirectedGraph parse_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<ExternalId> external_ids;
  std::unordered_map<ExternalId, NodeId> dense_of;

  auto intern = [&](ExternalId ext) -> NodeId {
    auto [it, inserted] = dense_of.try_emplace(ext, static_cast<NodeId>(external_ids.size()));
    if (inserted) external_ids.push_back(ext);
    return it->second;
  };

  auto parse_id = [](std::string_view tok, std::size_t line) -> ExternalId {
    ExternalId value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw ParseError("line " + std::to_string(line) + ": malformed node id '" +
                           std::string(tok) + "'",
                       line);
    return value;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r\f\v");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;

    std::vector<std::string_view> tokens;
    std::string_view rest(line);
    while (true) {
      std::size_t start = rest.find_first_not_of(" \t\r\f\v");
      if (start == std::string_view::npos) break;
      std::size_t end = rest.find_first_of(" \t\r\f\v", start);
      tokens.push_back(rest.substr(start, end == std::string_view::npos ? end : end - start));
      if (end == std::string_view::npos) break;
      rest = rest.substr(end);
    }
    if (tokens.size() != 2)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'src dst', got " +
                           std::to_string(tokens.size()) + " token(s)",
                       line_no);
    NodeId src = intern(parse_id(tokens[0], line_no));
    NodeId dst = intern(parse_id(tokens[1], line_no));
    edges.emplace_back(src, dst);
  }

  if (external_ids.empty()) throw ParseError("no nodes", 0);
  const std::size_t node_count = external_ids.size();
  return DirectedGraph::from_edges(node_count, std::move(edges), std::move(external_ids));
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  for (NodeId j = 0; j < n; ++j)
    for (NodeId i : g.out_neighbors(j))
      out << g.external_id(j) << ' ' << g.external_id(i) << '\n';
}

std::vector<std::pair<ExternalId, ExternalId>> external_edges(const DirectedGraph& g) {
  std::vector<std::pair<ExternalId, ExternalId>> pairs;
  pairs.reserve(g.link_count());
  const std::size_t n = g.node_count();
  for (NodeId j = 0; j < n; ++j)
    for (NodeId i : g.out_neighbors(j))
      pairs.emplace_back(g.external_id(j), g.external_id(i));
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace grank
