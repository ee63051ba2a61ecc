#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dbnd/connectivity_function.hpp"
#include "dbnd/instance.hpp"

namespace dbnd {

// Ground-truth checks. Deliberately shares nothing with the solver beyond the
// instance and the edge list: its own flow code, its own cover counting.

struct Graph {
  int n = 0;
  bool directed = false;
  std::vector<std::pair<int, int>> edges;
};

inline Graph graph_of(const Instance& inst, const std::vector<int>& ids) {
  Graph g{inst.n, inst.directed, {}};
  for (int id : ids) g.edges.emplace_back(inst.edges[id].tail, inst.edges[id].head);
  return g;
}

namespace detail {

// Integer augmenting-path flow on a dense capacity matrix.
class DenseFlow {
 public:
  explicit DenseFlow(int nodes) : n_(nodes), cap_(static_cast<std::size_t>(nodes) * nodes, 0) {}
  void add(int u, int v, int c) { cap_[idx(u, v)] += c; }

  int run(int s, int t) {
    int flow = 0;
    std::vector<int> prev(n_);
    for (;;) {
      std::fill(prev.begin(), prev.end(), -1);
      prev[s] = s;
      std::vector<int> queue{s};
      for (std::size_t h = 0; h < queue.size() && prev[t] < 0; ++h) {
        const int u = queue[h];
        for (int v = 0; v < n_; ++v)
          if (prev[v] < 0 && cap_[idx(u, v)] > 0) {
            prev[v] = u;
            queue.push_back(v);
          }
      }
      if (prev[t] < 0) return flow;
      int push = kInf;
      for (int v = t; v != s; v = prev[v]) push = std::min(push, cap_[idx(prev[v], v)]);
      for (int v = t; v != s; v = prev[v]) {
        cap_[idx(prev[v], v)] -= push;
        cap_[idx(v, prev[v])] += push;
      }
      flow += push;
    }
  }

  static constexpr int kInf = 1 << 28;

 private:
  [[nodiscard]] std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }
  int n_;
  std::vector<int> cap_;
};

// Nodes in `capped` get capacity 1 (split), the rest are unrestricted.
// Edges carry `edge_cap` per copy.
inline int disjoint_paths(const Graph& g, int u, int v, NodeSet capped, int edge_cap) {
  const int n = g.n;
  DenseFlow net(2 * n);
  auto in = [&](int x) { return x; };
  auto out = [&](int x) { return n + x; };
  for (int x = 0; x < n; ++x) net.add(in(x), out(x), (capped.contains(x) && x != u && x != v) ? 1 : DenseFlow::kInf);
  for (auto [a, b] : g.edges) {
    net.add(out(a), in(b), edge_cap);
    if (!g.directed) net.add(out(b), in(a), edge_cap);
  }
  return net.run(out(u), in(v));
}

}  // namespace detail

// κ(u,v): internally node-disjoint paths; each direct uv edge is a path.
inline int node_connectivity(const Graph& g, int u, int v) {
  if (u == v) throw Error(Errc::kPrecondition, "node_connectivity needs u != v");
  return detail::disjoint_paths(g, u, v, NodeSet::range(g.n), 1);
}

// λ^T(u,v): paths disjoint in edges and in non-terminal nodes.
inline int element_connectivity(const Graph& g, NodeSet terminals, int u, int v) {
  if (!terminals.contains(u) || !terminals.contains(v)) throw Error(Errc::kNotTerminal, "element connectivity between non-terminals");
  if (u == v) throw Error(Errc::kPrecondition, "element_connectivity needs u != v");
  NodeSet capped;
  for (int x = 0; x < g.n; ++x)
    if (!terminals.contains(x)) capped = capped.with(x);
  return detail::disjoint_paths(g, u, v, capped, 1);
}

struct PairCheck {
  int u = 0;
  int v = 0;
  int required = 0;
  int achieved = 0;
  [[nodiscard]] bool pass() const { return achieved >= required; }
};

// One line per requirement pair of f. Residual edges of f are added to g.
inline std::vector<PairCheck> connectivity_checks(Graph g, const ConnectivityFunction& f) {
  for (const auto& e : f.residual_edges()) g.edges.push_back(e);
  std::vector<PairCheck> out;
  switch (f.kind()) {
    case FunctionKind::kOutConnectivity:
      for (int v = 0; v < g.n; ++v)
        if (v != f.root()) out.push_back({f.root(), v, f.k(), node_connectivity(g, f.root(), v)});
      break;
    case FunctionKind::kElement:
      for (int u : f.terminals())
        for (int v : f.terminals())
          if (u < v && f.requirements()(u, v) > 0)
            out.push_back({u, v, f.requirements()(u, v), element_connectivity(g, f.terminals(), u, v)});
      break;
    case FunctionKind::kKConnectivity:
      for (int u = 0; u < g.n; ++u)
        for (int v = g.directed ? 0 : u + 1; v < g.n; ++v)
          if (u != v) out.push_back({u, v, f.k(), node_connectivity(g, u, v)});
      break;
    case FunctionKind::kCustom: {
      // Biset scan; a deficient biset is reported with its first inner node.
      const auto base = f.without_residual();
      for_each_biset(g.n, [&](const Biset& s) {
        const int req = base(s);
        if (req <= 0) return;
        int cov = 0;
        for (auto [a, b] : g.edges) {
          const bool a_in = s.inner().contains(a), b_in = s.inner().contains(b);
          const bool a_out = !s.outer().contains(a), b_out = !s.outer().contains(b);
          cov += g.directed ? (a_out && b_in) : ((a_in && b_out) || (b_in && a_out));
        }
        if (cov < req) out.push_back({-1, s.inner().first(), req, cov});
      });
      break;
    }
  }
  return out;
}

inline bool is_f_connected(const Graph& g, const ConnectivityFunction& f) {
  const auto checks = connectivity_checks(g, f);
  return std::all_of(checks.begin(), checks.end(), [](const PairCheck& c) { return c.pass(); });
}

struct NodeDegreeCheck {
  int node = 0;
  bool in = false;
  int degree = 0;
  int bound = 0;
  [[nodiscard]] int excess() const { return degree - bound; }
};

struct VerificationReport {
  std::vector<PairCheck> pairs;
  std::vector<NodeDegreeCheck> degrees;
  Rational cost;
  std::optional<Rational> lp_bound;

  [[nodiscard]] bool connectivity_ok() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const PairCheck& c) { return c.pass(); });
  }
  [[nodiscard]] bool degrees_ok() const {
    return std::all_of(degrees.begin(), degrees.end(), [](const NodeDegreeCheck& c) { return c.excess() <= 0; });
  }
  [[nodiscard]] int max_excess() const {
    int m = 0;
    for (const auto& d : degrees) m = std::max(m, d.excess());
    return m;
  }
  [[nodiscard]] std::optional<Rational> ratio() const {
    if (!lp_bound || sgn(*lp_bound) == 0) return std::nullopt;
    return Rational(cost / *lp_bound);
  }
};

inline int count_degree(const Graph& g, int v, bool in) {
  int d = 0;
  for (auto [a, b] : g.edges) d += g.directed ? (in ? b == v : a == v) : (a == v) + (b == v);
  return d;
}

inline VerificationReport verify_solution(const Instance& inst, const std::vector<int>& ids,
                                          std::optional<Rational> lp_bound = std::nullopt) {
  VerificationReport r;
  const Graph g = graph_of(inst, ids);
  r.pairs = connectivity_checks(g, ConnectivityFunction::for_instance(inst));
  for (int v : inst.bounded()) r.degrees.push_back({v, false, count_degree(g, v, false), inst.bound(v)});
  for (int v : inst.in_bounded()) r.degrees.push_back({v, true, count_degree(g, v, true), inst.in_bound(v)});
  for (int id : ids) r.cost += inst.edges[id].cost;
  r.lp_bound = std::move(lp_bound);
  return r;
}

// Exact minimum-cost f-connected subgraph obeying deg ≤ b, by branch and bound.
struct IlpResult {
  Rational cost;
  std::vector<int> witness;
  long nodes = 0;
};

constexpr int kIlpMaxEdges = 22;

inline IlpResult ilp_opt(const Instance& inst, const ConnectivityFunction& f) {
  const int m = inst.m();
  if (m > kIlpMaxEdges) throw Error(Errc::kTooLarge, "ilp_opt handles at most 22 edges");
  auto connected = [&](std::uint32_t mask) {
    Graph g{inst.n, inst.directed, {}};
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1U) g.edges.emplace_back(inst.edges[i].tail, inst.edges[i].head);
    return is_f_connected(g, f);
  };
  auto degree_ok = [&](std::uint32_t mask) {
    for (int v : inst.bounded()) {
      int d = 0;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1U) d += inst.directed ? inst.edges[i].tail == v : inst.edges[i].touches(v);
      if (d > inst.bound(v)) return false;
    }
    for (int v : inst.in_bounded()) {
      int d = 0;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1U) d += inst.edges[i].head == v;
      if (d > inst.in_bound(v)) return false;
    }
    return true;
  };
  auto cost_of = [&](std::uint32_t mask) {
    Rational c = 0;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1U) c += inst.edges[i].cost;
    return c;
  };
  // Branch on expensive edges first.
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return inst.edges[a].cost > inst.edges[b].cost; });

  std::optional<Rational> best;
  std::uint32_t best_mask = 0;
  long nodes = 0;
  // in: chosen; open: still undecided.
  std::function<void(std::uint32_t, std::uint32_t, int)> search = [&](std::uint32_t in, std::uint32_t open, int pos) {
    ++nodes;
    if (!degree_ok(in)) return;
    if (!connected(in | open)) return;
    // Undecided edges whose loss breaks connectivity are mandatory.
    for (int i = 0; i < m; ++i)
      if ((open >> i & 1U) && !connected((in | open) & ~(1U << i))) {
        in |= 1U << i;
        open &= ~(1U << i);
      }
    if (!degree_ok(in)) return;
    const Rational c = cost_of(in);
    if (best && c >= *best) return;
    if (connected(in)) {
      best = c;
      best_mask = in;
      return;
    }
    while (pos < m && !(open >> order[pos] & 1U)) ++pos;
    if (pos == m) return;
    const std::uint32_t bit = 1U << order[pos];
    search(in, open & ~bit, pos + 1);
    search(in | bit, open & ~bit, pos + 1);
  };
  search(0, m == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << m) - 1), 0);
  if (!best) throw Error(Errc::kInfeasible, "no feasible subgraph");
  IlpResult r;
  r.cost = *best;
  for (int i = 0; i < m; ++i)
    if (best_mask >> i & 1U) r.witness.push_back(i);
  r.nodes = nodes;
  return r;
}

inline IlpResult ilp_opt(const Instance& inst) { return ilp_opt(inst, ConnectivityFunction::for_instance(inst)); }

// Instance generator.
enum class GenKind { kOutConnDirected, kOutConnUndirected, kElement, kKConnUndirected, kKConnDirected };

inline const char* gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::kOutConnDirected: return "outconn-directed";
    case GenKind::kOutConnUndirected: return "outconn-undirected";
    case GenKind::kElement: return "element";
    case GenKind::kKConnUndirected: return "kconn-undirected";
    case GenKind::kKConnDirected: return "kconn-directed";
  }
  return "?";
}

constexpr int kUnboundedSlack = -1;

struct GenParams {
  std::uint64_t seed = 1;
  int n = 6;
  double density = 0.3;  // probability of each extra pair
  GenKind kind = GenKind::kOutConnDirected;
  int k = 1;
  int slack = 1;  // kUnboundedSlack: no degree bounds
};

// Feasible by construction: a (k+1)-clique on {0..k} plus nodes attached to
// k earlier nodes (both directions for digraphs where needed). The known
// subgraph H is k-connected, hence satisfies every supported requirement.
inline Instance generate(const GenParams& p) {
  if (p.n < 2 || p.n > 16) throw Error(Errc::kPrecondition, "generate: n must be in [2, 16]");
  if (p.k < 1 || p.k + 1 > p.n) throw Error(Errc::kPrecondition, "generate: need 1 <= k <= n-1");
  std::mt19937_64 rng(p.seed);
  auto pick = [&](std::uint64_t bound) { return rng() % bound; };
  auto cost = [&]() { return frac(1 + static_cast<long>(pick(20)), 1 + static_cast<long>(pick(4))); };

  Instance inst;
  inst.n = p.n;
  inst.directed = p.kind == GenKind::kOutConnDirected || p.kind == GenKind::kKConnDirected;
  const bool both_ways = p.kind == GenKind::kKConnDirected;

  std::vector<std::vector<bool>> used(p.n, std::vector<bool>(p.n, false));
  auto add = [&](int u, int v) {
    if (!inst.directed && u > v) std::swap(u, v);
    if (used[u][v]) return;
    used[u][v] = true;
    inst.edges.push_back(make_edge(inst.directed, u, v, cost()));
  };
  for (int u = 0; u <= p.k; ++u)
    for (int v = 0; v <= p.k; ++v)
      if (u != v && (inst.directed || u < v)) add(u, v);
  for (int v = p.k + 1; v < p.n; ++v) {
    std::vector<int> earlier(v);
    for (int i = 0; i < v; ++i) earlier[i] = i;
    for (int i = 0; i < p.k; ++i) {
      const int j = i + static_cast<int>(pick(static_cast<std::uint64_t>(v - i)));
      std::swap(earlier[i], earlier[j]);
      add(earlier[i], v);
      if (both_ways) add(v, earlier[i]);
    }
  }
  const std::vector<Edge> core = inst.edges;
  for (int u = 0; u < p.n; ++u)
    for (int v = 0; v < p.n; ++v) {
      if (u == v || (!inst.directed && u > v)) continue;
      if (static_cast<double>(pick(1000000)) / 1e6 < p.density) add(u, v);
    }

  if (p.slack != kUnboundedSlack) {
    inst.bounds.assign(p.n, std::nullopt);
    for (int v = 0; v < p.n; ++v) {
      int d = 0;
      for (const auto& e : core) d += inst.directed ? e.tail == v : e.touches(v);
      inst.bounds[v] = std::max(d + p.slack, 1);
    }
  }

  switch (p.kind) {
    case GenKind::kOutConnDirected:
    case GenKind::kOutConnUndirected:
      inst.requirement = OutConnRequirement{0, p.k};
      break;
    case GenKind::kKConnUndirected:
    case GenKind::kKConnDirected:
      inst.requirement = KConnRequirement{p.k};
      break;
    case GenKind::kElement: {
      ElementRequirement er;
      er.k = p.k;
      er.r = RequirementMatrix(p.n);
      er.terminals = NodeSet::single(0).with(p.n - 1);
      for (int v = 1; v < p.n - 1; ++v)
        if (pick(2) == 0) er.terminals = er.terminals.with(v);
      for (int u : er.terminals)
        for (int v : er.terminals)
          if (u < v) er.r.set(u, v, static_cast<int>(pick(static_cast<std::uint64_t>(p.k + 1))));
      er.r.set(0, p.n - 1, p.k);
      inst.requirement = std::move(er);
      break;
    }
  }
  return inst;
}

}  // namespace dbnd
