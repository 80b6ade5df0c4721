#include "grank/decomposition.hpp"

#include <algorithm>
#include <numeric>

namespace grank {

std::vector<NodeId> Subspace::reduced_members() const {
  std::vector<NodeId> reduced;
  for (std::size_t k = 0; k < members.size(); ++k)
    if (zero_orders[k] == 0) reduced.push_back(members[k]);
  return reduced;
}

ClosureResult reachable_closure(const DirectedGraph& g, NodeId start, std::size_t cutoff,
                                const std::vector<bool>& dangling,
                                const std::vector<bool>& known_core) {
  const std::size_t n = g.node_count();
  std::vector<bool> visited(n, false);
  std::vector<NodeId> frontier{start};
  std::vector<NodeId> closure;
  visited[start] = true;

  auto hits_core_fact = [&](NodeId v) {
    return dangling[v] || (!known_core.empty() && known_core[v]);
  };
  if (hits_core_fact(start)) return {true, {}};
  closure.push_back(start);
  if (closure.size() == n || closure.size() > cutoff) return {true, {}};

  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (NodeId v : frontier) {
      for (NodeId w : g.out_neighbors(v)) {
        if (visited[w]) continue;
        visited[w] = true;
        if (hits_core_fact(w)) return {true, {}};
        closure.push_back(w);
        if (closure.size() == n || closure.size() > cutoff) return {true, {}};
        next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  std::sort(closure.begin(), closure.end());
  return {false, std::move(closure)};
}

Decomposition decompose(const DirectedGraph& g, double budget_fraction) {
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0))
    throw std::invalid_argument("budget fraction must be in (0, 1]");
  const std::size_t n = g.node_count();

  std::vector<bool> dangling(n, false);
  for (NodeId v : g.dangling_nodes()) dangling[v] = true;

  // Closures below the budget are classified exactly; the floor keeps
  // small graphs out of the budget regime entirely.
  const std::size_t budget = static_cast<std::size_t>(budget_fraction * static_cast<double>(n));
  const std::size_t cutoff = std::max(budget, std::min<std::size_t>(n, 128));

  std::vector<bool> known_core(n, false);
  std::vector<std::int32_t> set_of(n, -1);   // merged-set id per subspace node
  std::vector<std::vector<NodeId>> sets;     // member lists (dead after merge)
  std::vector<NodeId> set_root;              // smallest candidate root per set
  std::vector<bool> alive;
  std::size_t budget_classified = 0;

  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;

  for (NodeId j = 0; j < n; ++j) {
    if (set_of[j] >= 0) continue;  // already a subspace member

    // Plain forward BFS; the closure must count genuinely reachable nodes
    // only, since saturation below N is what makes j a subspace node.
    ++epoch;
    std::vector<NodeId> frontier{j};
    std::vector<NodeId> closure{j};
    stamp[j] = epoch;
    bool is_core = dangling[j] || known_core[j];
    bool hit_budget = false;

    while (!is_core && !frontier.empty()) {
      std::vector<NodeId> next;
      for (NodeId v : frontier) {
        for (NodeId w : g.out_neighbors(v)) {
          if (stamp[w] == epoch) continue;
          stamp[w] = epoch;
          if (dangling[w] || known_core[w]) {
            is_core = true;
            break;
          }
          closure.push_back(w);
          if (closure.size() == n) {
            is_core = true;
            break;
          }
          if (closure.size() > cutoff) {
            is_core = true;
            hit_budget = true;
            break;
          }
          next.push_back(w);
        }
        if (is_core) break;
      }
      frontier = std::move(next);
    }

    if (is_core) {
      known_core[j] = true;
      if (hit_budget) ++budget_classified;
      continue;
    }

    // New subspace: the saturated closure merged with every recorded set
    // it overlaps (the closure may cover such a set only partially, e.g.
    // miss its root, so the union has to be explicit).
    NodeId root = j;
    for (std::size_t k = 0; k < closure.size(); ++k) {
      const std::int32_t old = set_of[closure[k]];
      if (old >= 0 && alive[old]) {
        alive[old] = false;
        root = std::min(root, set_root[old]);
        for (NodeId u : sets[old])
          if (stamp[u] != epoch) {
            stamp[u] = epoch;
            closure.push_back(u);
          }
      }
    }
    auto id = static_cast<std::int32_t>(sets.size());
    std::sort(closure.begin(), closure.end());
    for (NodeId v : closure) set_of[v] = id;
    sets.push_back(std::move(closure));
    set_root.push_back(root);
    alive.push_back(true);
  }

  Decomposition d;
  d.node_count = n;
  d.subspace_of.assign(n, -1);
  for (NodeId v = 0; v < n; ++v)
    if (set_of[v] < 0) d.core.push_back(v);

  // Subspaces ordered by smallest member.
  std::vector<std::int32_t> live_ids;
  for (std::size_t s = 0; s < sets.size(); ++s)
    if (alive[s]) live_ids.push_back(static_cast<std::int32_t>(s));
  std::sort(live_ids.begin(), live_ids.end(), [&](std::int32_t a, std::int32_t b) {
    return sets[a].front() < sets[b].front();
  });

  d.subspaces.reserve(live_ids.size());
  for (std::int32_t s : live_ids) {
    Subspace sub;
    sub.root = set_root[s];
    sub.members = std::move(sets[s]);
    sub.zero_orders = zero_node_orders(g, sub.members);
    for (NodeId v : sub.members)
      d.subspace_of[v] = static_cast<std::int32_t>(d.subspaces.size());
    d.subspaces.push_back(std::move(sub));
  }

  if (budget_classified > 0) {
    std::size_t max_dim = 0;
    for (const auto& sub : d.subspaces) max_dim = std::max(max_dim, sub.members.size());
    if (static_cast<double>(max_dim) > 0.5 * budget_fraction * static_cast<double>(n))
      d.warnings.push_back(
          "budget cutoff classified " + std::to_string(budget_classified) +
          " node(s) as core while a subspace of dimension " + std::to_string(max_dim) +
          " exceeds half the budget; results may depend on the budget fraction");
  }
  return d;
}

std::vector<int> zero_node_orders(const DirectedGraph& g, std::span<const NodeId> members) {
  const std::size_t m = members.size();
  std::vector<int> orders(m, 0);
  std::vector<std::int32_t> local(g.node_count(), -1);
  for (std::size_t k = 0; k < m; ++k) local[members[k]] = static_cast<std::int32_t>(k);

  // In-set in-link counts from not-yet-stripped members.
  std::vector<std::size_t> live_in(m, 0);
  for (std::size_t k = 0; k < m; ++k)
    for (NodeId w : g.out_neighbors(members[k]))
      if (local[w] >= 0) ++live_in[static_cast<std::size_t>(local[w])];

  std::vector<std::size_t> wave;
  for (std::size_t k = 0; k < m; ++k)
    if (live_in[k] == 0) wave.push_back(k);

  int order = 1;
  std::vector<bool> stripped(m, false);
  while (!wave.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t k : wave) {
      orders[k] = order;
      stripped[k] = true;
    }
    for (std::size_t k : wave)
      for (NodeId w : g.out_neighbors(members[k])) {
        if (local[w] < 0) continue;
        auto t = static_cast<std::size_t>(local[w]);
        if (!stripped[t] && --live_in[t] == 0) next.push_back(t);
      }
    wave = std::move(next);
    ++order;
  }
  return orders;
}

VerificationReport verify_decomposition(const DirectedGraph& g, const Decomposition& d) {
  VerificationReport report;
  const std::size_t n = g.node_count();

  if (d.node_count != n || d.subspace_of.size() != n) {
    report.pass = false;
    report.messages.push_back("node count mismatch");
    return report;
  }

  std::vector<std::int32_t> seen(n, -2);  // -2 unseen, -1 core, >=0 subspace
  for (NodeId v : d.core) {
    if (seen[v] != -2) {
      report.pass = false;
      report.messages.push_back("node " + std::to_string(v) + " assigned twice");
    }
    seen[v] = -1;
  }
  for (std::size_t s = 0; s < d.subspaces.size(); ++s)
    for (NodeId v : d.subspaces[s].members) {
      if (seen[v] != -2) {
        report.pass = false;
        report.messages.push_back("node " + std::to_string(v) + " assigned twice");
      }
      seen[v] = static_cast<std::int32_t>(s);
    }
  for (NodeId v = 0; v < n; ++v)
    if (seen[v] == -2) {
      report.pass = false;
      report.messages.push_back("node " + std::to_string(v) + " unassigned");
    }

  for (const auto& sub : d.subspaces) {
    for (NodeId v : sub.members) {
      if (g.out_degree(v) == 0) {
        report.pass = false;
        report.messages.push_back("subspace contains dangling node " + std::to_string(v));
      }
      for (NodeId w : g.out_neighbors(v))
        if (seen[w] != seen[v]) {
          report.pass = false;
          report.violating_edges.emplace_back(v, w);
        }
    }
  }
  if (!report.violating_edges.empty())
    report.messages.push_back(std::to_string(report.violating_edges.size()) +
                              " link(s) leave a subspace");
  return report;
}

}  // namespace grank
