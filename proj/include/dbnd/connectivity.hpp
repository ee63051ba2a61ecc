#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dbnd/max_flow.hpp"

namespace dbnd {

// Solver-side integer connectivity queries on an arc/edge list over {0..n-1}.
// Undirected edges are used in both directions.

// Number of internally disjoint u→v paths, capped at `limit` when given.
// Every direct u→v arc counts as its own path.
inline int local_connectivity(int n, const std::vector<std::pair<int, int>>& edges, bool directed, int u, int v,
                              std::optional<int> limit = std::nullopt) {
  FlowNetwork<int> net(2 * n);
  // in-copy v, out-copy n + v; u and v are not split.
  auto in = [&](int x) { return x; };
  auto out = [&](int x) { return (x == u || x == v) ? x : n + x; };
  for (int x = 0; x < n; ++x)
    if (x != u && x != v) net.add_arc(in(x), out(x), 1);
  for (auto [a, b] : edges) {
    net.add_arc(out(a), in(b), 1);
    if (!directed) net.add_arc(out(b), in(a), 1);
  }
  return net.max_flow(u, v, limit);
}

inline bool is_k_outconnected(int n, const std::vector<std::pair<int, int>>& arcs, int root, int k) {
  for (int v = 0; v < n; ++v)
    if (v != root && local_connectivity(n, arcs, true, root, v, k) < k) return false;
  return true;
}

inline bool is_k_inconnected(int n, const std::vector<std::pair<int, int>>& arcs, int root, int k) {
  for (int v = 0; v < n; ++v)
    if (v != root && local_connectivity(n, arcs, true, v, root, k) < k) return false;
  return true;
}

// κ(u,v) ≥ k for all pairs (ordered pairs for digraphs).
inline bool is_k_connected(int n, const std::vector<std::pair<int, int>>& edges, bool directed, int k) {
  for (int u = 0; u < n; ++u)
    for (int v = directed ? 0 : u + 1; v < n; ++v)
      if (u != v && local_connectivity(n, edges, directed, u, v, k) < k) return false;
  return true;
}

}  // namespace dbnd
