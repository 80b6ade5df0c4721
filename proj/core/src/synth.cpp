#include "grank/synth.hpp"

#include <cmath>
#include <random>

namespace grank {

namespace {

DirectedGraph make_uniform(const UniformDigraphParams& p, std::uint64_t seed) {
  if (p.nodes == 0) throw std::invalid_argument("uniform digraph: zero nodes");
  if (!(p.edge_prob >= 0.0 && p.edge_prob <= 1.0))
    throw std::invalid_argument("uniform digraph: edge probability outside [0,1]");

  std::mt19937_64 rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  const std::size_t n = p.nodes;

  if (p.edge_prob >= 1.0) {
    for (NodeId j = 0; j < n; ++j)
      for (NodeId i = 0; i < n; ++i) edges.emplace_back(j, i);
  } else if (p.edge_prob > 0.0) {
    // Geometric skipping over the n*n Bernoulli lattice.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_q = std::log1p(-p.edge_prob);
    const std::uint64_t total = static_cast<std::uint64_t>(n) * n;
    std::uint64_t cursor = 0;
    while (true) {
      double u = unit(rng);
      std::uint64_t skip = static_cast<std::uint64_t>(std::floor(std::log(1.0 - u) / log_q));
      if (skip > total || cursor + skip >= total) break;
      cursor += skip;
      edges.emplace_back(static_cast<NodeId>(cursor / n), static_cast<NodeId>(cursor % n));
      ++cursor;
      if (cursor >= total) break;
    }
  }
  return DirectedGraph::from_edges(n, std::move(edges));
}

DirectedGraph make_planted(const PlantedSubspaceParams& p) {
  if (p.cycle_sizes.empty()) throw std::invalid_argument("planted graph: no cycles");
  for (std::size_t c : p.cycle_sizes)
    if (c == 0) throw std::invalid_argument("planted graph: zero cycle size");
  if (p.core_size == 0) throw std::invalid_argument("planted graph: zero core size");

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> cycle_heads;
  NodeId next = 0;
  for (std::size_t c : p.cycle_sizes) {
    cycle_heads.push_back(next);
    for (std::size_t k = 0; k < c; ++k) {
      NodeId from = next + static_cast<NodeId>(k);
      NodeId to = next + static_cast<NodeId>((k + 1) % c);
      edges.emplace_back(from, to);
    }
    next += static_cast<NodeId>(c);
  }

  const NodeId core_base = next;
  if (p.core_size > 1) {
    for (std::size_t k = 0; k < p.core_size; ++k) {
      NodeId from = core_base + static_cast<NodeId>(k);
      NodeId to = core_base + static_cast<NodeId>((k + 1) % p.core_size);
      edges.emplace_back(from, to);
    }
  }
  for (NodeId head : cycle_heads) edges.emplace_back(core_base, head);
  next += static_cast<NodeId>(p.core_size);

  const NodeId core_last = core_base + static_cast<NodeId>(p.core_size - 1);
  for (std::size_t k = 0; k < p.dangling_count; ++k) {
    edges.emplace_back(core_last, next);
    ++next;
  }
  return DirectedGraph::from_edges(next, std::move(edges));
}

DirectedGraph make_preferential(const PreferentialAttachmentParams& p, std::uint64_t seed) {
  if (p.nodes == 0) throw std::invalid_argument("preferential attachment: zero nodes");
  if (p.out_degree == 0) throw std::invalid_argument("preferential attachment: zero out-degree");

  std::mt19937_64 rng(seed);
  const std::size_t seed_size = std::min(p.nodes, p.out_degree + 1);
  std::vector<std::pair<NodeId, NodeId>> edges;
  // Seed block: a directed cycle so early nodes are never dangling.
  for (std::size_t k = 0; k < seed_size; ++k)
    if (seed_size > 1)
      edges.emplace_back(static_cast<NodeId>(k), static_cast<NodeId>((k + 1) % seed_size));

  // One pool entry per in-link plus one per node keeps probabilities ∝ indeg+1.
  std::vector<NodeId> pool;
  for (std::size_t k = 0; k < seed_size; ++k) {
    pool.push_back(static_cast<NodeId>(k));
    if (seed_size > 1) pool.push_back(static_cast<NodeId>((k + 1) % seed_size));
  }

  for (std::size_t t = seed_size; t < p.nodes; ++t) {
    std::vector<NodeId> picked;
    const std::size_t want = std::min(p.out_degree, t);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::size_t attempts = 0;
    while (picked.size() < want && attempts < 64 * want) {
      NodeId candidate = pool[pick(rng)];
      ++attempts;
      if (std::find(picked.begin(), picked.end(), candidate) == picked.end())
        picked.push_back(candidate);
    }
    for (NodeId target : picked) {
      edges.emplace_back(static_cast<NodeId>(t), target);
      pool.push_back(target);
    }
    pool.push_back(static_cast<NodeId>(t));
  }
  return DirectedGraph::from_edges(p.nodes, std::move(edges));
}

}  // namespace

DirectedGraph generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  return std::visit(
      [&](const auto& p) -> DirectedGraph {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UniformDigraphParams>) return make_uniform(p, seed);
        if constexpr (std::is_same_v<T, PlantedSubspaceParams>) return make_planted(p);
        if constexpr (std::is_same_v<T, PreferentialAttachmentParams>)
          return make_preferential(p, seed);
      },
      spec);
}

}  // namespace grank
