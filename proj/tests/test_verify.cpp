#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "dbnd/verify.hpp"

using namespace dbnd;

namespace {

Graph complete(int n) {
  Graph g{n, false, {}};
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  return g;
}

// All simple u→v paths as edge index lists.
std::vector<std::vector<int>> simple_paths(const Graph& g, int u, int v) {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<bool> seen(g.n, false);
  std::function<void(int)> walk = [&](int x) {
    if (x == v) {
      out.push_back(path);
      return;
    }
    seen[x] = true;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
      auto [a, b] = g.edges[i];
      int y = -1;
      if (a == x) y = b;
      else if (!g.directed && b == x) y = a;
      if (y < 0 || seen[y]) continue;
      path.push_back(i);
      walk(y);
      path.pop_back();
    }
    seen[x] = false;
  };
  walk(u);
  return out;
}

// Largest family of paths sharing no edge and no node outside `free_nodes`
// (other than u and v).
int packing(const Graph& g, int u, int v, NodeSet free_nodes) {
  const auto paths = simple_paths(g, u, v);
  std::vector<std::pair<std::uint64_t, NodeSet>> sig;
  for (const auto& p : paths) {
    std::uint64_t edges = 0;
    NodeSet inner;
    for (int i : p) {
      edges |= std::uint64_t{1} << i;
      for (int x : {g.edges[i].first, g.edges[i].second})
        if (x != u && x != v && !free_nodes.contains(x)) inner = inner.with(x);
    }
    sig.emplace_back(edges, inner);
  }
  int best = 0;
  std::function<void(std::size_t, std::uint64_t, NodeSet, int)> rec = [&](std::size_t i, std::uint64_t e, NodeSet used,
                                                                          int count) {
    best = std::max(best, count);
    if (count + static_cast<int>(sig.size() - i) <= best) return;
    for (std::size_t j = i; j < sig.size(); ++j)
      if (!(sig[j].first & e) && !sig[j].second.intersects(used))
        rec(j + 1, e | sig[j].first, NodeSet(used.bits() | sig[j].second.bits()), count + 1);
  };
  rec(0, 0, NodeSet{}, 0);
  return best;
}

Graph random_graph(std::mt19937_64& rng, int n, bool directed, int m) {
  Graph g{n, directed, {}};
  for (int i = 0; i < m; ++i) {
    const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a != b) g.edges.emplace_back(a, b);
  }
  return g;
}

Instance from_graph(const Graph& g, std::vector<Rational> costs) {
  Instance inst;
  inst.n = g.n;
  inst.directed = g.directed;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    inst.edges.push_back(make_edge(g.directed, g.edges[i].first, g.edges[i].second, costs[i]));
  return inst;
}

}  // namespace

TEST(NodeConnectivity, CompleteGraph) {
  const Graph k4 = complete(4);
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      if (u != v) EXPECT_EQ(node_connectivity(k4, u, v), 3);
}

TEST(NodeConnectivity, PathEndpoints) {
  const Graph p{4, false, {{0, 1}, {1, 2}, {2, 3}}};
  EXPECT_EQ(node_connectivity(p, 0, 3), 1);
  EXPECT_THROW((void)node_connectivity(p, 1, 1), Error);
}

TEST(NodeConnectivity, ParallelEdgesCountSeparately) {
  const Graph g{2, false, {{0, 1}, {0, 1}}};
  EXPECT_EQ(node_connectivity(g, 0, 1), 2);
}

TEST(NodeConnectivity, RandomAgainstPathPacking) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);  // ≤ 6
    const bool directed = trial % 2 == 1;
    const Graph g = random_graph(rng, n, directed, 2 * n);
    const int u = static_cast<int>(rng() % n);
    int v = static_cast<int>(rng() % n);
    if (v == u) v = (u + 1) % n;
    EXPECT_EQ(node_connectivity(g, u, v), packing(g, u, v, NodeSet{})) << "trial " << trial;
  }
}

TEST(NodeConnectivity, SymmetricAndMonotone) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    Graph g = random_graph(rng, n, false, 2 * n);
    const int before = node_connectivity(g, 0, n - 1);
    EXPECT_EQ(before, node_connectivity(g, n - 1, 0));
    g.edges.emplace_back(static_cast<int>(rng() % (n - 1)), n - 1);
    EXPECT_GE(node_connectivity(g, 0, n - 1), before);
  }
}

TEST(ElementConnectivity, TwoPathsThroughDistinctNonTerminals) {
  // 0-1-3 and 0-2-3 with T = {0, 3}.
  const Graph g{4, false, {{0, 1}, {1, 3}, {0, 2}, {2, 3}}};
  EXPECT_EQ(element_connectivity(g, NodeSet::single(0).with(3), 0, 3), 2);
}

TEST(ElementConnectivity, SingleEdge) {
  const Graph g{2, false, {{0, 1}}};
  EXPECT_EQ(element_connectivity(g, NodeSet::range(2), 0, 1), 1);
}

TEST(ElementConnectivity, TerminalsMayBeShared) {
  // Two paths through terminal 1: 0-1-2 twice via distinct edges.
  const Graph g{3, false, {{0, 1}, {0, 1}, {1, 2}, {1, 2}}};
  EXPECT_EQ(element_connectivity(g, NodeSet::range(3), 0, 2), 2);
  EXPECT_EQ(element_connectivity(g, NodeSet::single(0).with(2), 0, 2), 1);
}

TEST(ElementConnectivity, NotTerminal) {
  const Graph g{3, false, {{0, 1}}};
  EXPECT_THROW((void)element_connectivity(g, NodeSet::single(0), 0, 1), Error);
}

TEST(ElementConnectivity, RandomAgainstPathPacking) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const Graph g = random_graph(rng, n, false, 2 * n);
    NodeSet t = NodeSet::single(0).with(n - 1);
    for (int v = 1; v < n - 1; ++v)
      if (rng() % 2) t = t.with(v);
    EXPECT_EQ(element_connectivity(g, t, 0, n - 1), packing(g, 0, n - 1, t)) << "trial " << trial;
  }
}

TEST(IsFConnected, Examples) {
  EXPECT_TRUE(is_f_connected(complete(4), ConnectivityFunction::k_connectivity(4, false, 3)));
  EXPECT_FALSE(is_f_connected(Graph{3, true, {}}, ConnectivityFunction::out_connectivity(3, true, 0, 1)));
  const Graph arb{3, true, {{0, 1}, {1, 2}}};
  EXPECT_TRUE(is_f_connected(arb, ConnectivityFunction::out_connectivity(3, true, 0, 1)));
  EXPECT_FALSE(is_f_connected(arb, ConnectivityFunction::out_connectivity(3, true, 1, 1)));
}

TEST(IsFConnected, AgreesWithBisetScan) {
  // Menger: pairwise connectivity ≥ requirement iff every biset is covered enough.
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const bool directed = trial % 3 == 0;
    const Graph g = random_graph(rng, n, directed, 3 * n);
    const int k = 1 + static_cast<int>(rng() % 2);
    ConnectivityFunction f = trial % 2 ? ConnectivityFunction::out_connectivity(n, directed, 0, k)
                                       : ConnectivityFunction::k_connectivity(n, directed, k);
    const auto as_custom = ConnectivityFunction::custom(n, directed, [f](const Biset& s) { return f(s); }, k - 1);
    EXPECT_EQ(is_f_connected(g, f), is_f_connected(g, as_custom)) << "trial " << trial;
  }
}

TEST(IlpOpt, SingleRequiredEdge) {
  Instance inst;
  inst.n = 2;
  inst.directed = true;
  inst.edges = {make_edge(true, 0, 1, 7)};
  inst.requirement = OutConnRequirement{0, 1};
  const auto r = ilp_opt(inst);
  EXPECT_EQ(r.cost, Rational(7));
  EXPECT_EQ(r.witness, std::vector<int>{0});
}

TEST(IlpOpt, InfeasibleBounds) {
  Instance inst;
  inst.n = 3;
  inst.directed = true;
  inst.edges = {make_edge(true, 0, 1, 1), make_edge(true, 0, 2, 1)};
  inst.bounds = {1, std::nullopt, std::nullopt};
  inst.requirement = OutConnRequirement{0, 1};
  try {
    (void)ilp_opt(inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInfeasible);
  }
}

TEST(IlpOpt, TooLarge) {
  Instance inst;
  inst.n = 8;
  for (int u = 0; u < 8; ++u)
    for (int v = u + 1; v < 8; ++v) inst.edges.push_back(make_edge(false, u, v, 1));
  inst.requirement = KConnRequirement{1};
  EXPECT_THROW((void)ilp_opt(inst), Error);
}

TEST(IlpOpt, MatchesSubsetEnumeration) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const bool directed = trial % 2 == 0;
    const Graph g = random_graph(rng, n, directed, 2 * n + 2);
    std::vector<Rational> costs;
    for (std::size_t i = 0; i < g.edges.size(); ++i) costs.push_back(frac(1 + static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 2)));
    Instance inst = from_graph(g, costs);
    inst.requirement = OutConnRequirement{0, 1 + static_cast<int>(rng() % 2)};
    if (rng() % 2) {
      inst.bounds.assign(n, std::nullopt);
      inst.bounds[rng() % n] = 1 + static_cast<int>(rng() % 2);
    }
    const auto f = ConnectivityFunction::for_instance(inst);
    std::optional<Rational> best;
    for (std::uint32_t mask = 0; mask < (1U << inst.m()); ++mask) {
      std::vector<int> ids;
      for (int i = 0; i < inst.m(); ++i)
        if (mask >> i & 1U) ids.push_back(i);
      const auto rep = verify_solution(inst, ids);
      if (rep.connectivity_ok() && rep.degrees_ok() && (!best || rep.cost < *best)) best = rep.cost;
    }
    if (!best) {
      EXPECT_THROW((void)ilp_opt(inst), Error) << "trial " << trial;
    } else {
      const auto r = ilp_opt(inst);
      EXPECT_EQ(r.cost, *best) << "trial " << trial;
      EXPECT_EQ(inst.cost_of(r.witness), r.cost);
    }
  }
}

TEST(VerifySolution, ReportsDeficientPairAndDegreeExcess) {
  Instance inst;
  inst.n = 3;
  inst.directed = false;
  inst.edges = {make_edge(false, 0, 1, 1), make_edge(false, 1, 2, 1), make_edge(false, 0, 2, 1)};
  inst.bounds = {1, std::nullopt, std::nullopt};
  inst.requirement = KConnRequirement{2};
  const auto all = verify_solution(inst, {0, 1, 2}, Rational(2));
  EXPECT_TRUE(all.connectivity_ok());
  EXPECT_FALSE(all.degrees_ok());
  EXPECT_EQ(all.max_excess(), 1);
  EXPECT_EQ(*all.ratio(), frac(3, 2));
  const auto cut = verify_solution(inst, {0, 1});
  EXPECT_FALSE(cut.connectivity_ok());
}

TEST(Generate, Deterministic) {
  GenParams p;
  p.seed = 77;
  p.n = 7;
  p.k = 2;
  p.kind = GenKind::kElement;
  const Instance a = generate(p), b = generate(p);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.bounds, b.bounds);
  EXPECT_EQ(a.requirement, b.requirement);
}

TEST(Generate, UnboundedSentinel) {
  GenParams p;
  p.slack = kUnboundedSlack;
  EXPECT_TRUE(generate(p).bounded().empty());
}

TEST(Generate, InstancesAreValidAndFeasible) {
  const GenKind kinds[] = {GenKind::kOutConnDirected, GenKind::kOutConnUndirected, GenKind::kElement,
                           GenKind::kKConnUndirected, GenKind::kKConnDirected};
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenParams p;
    p.seed = seed;
    p.kind = kinds[seed % 5];
    p.n = 4 + static_cast<int>(seed % 4);
    p.k = 1 + static_cast<int>(seed % 2);
    p.density = 0.2;
    p.slack = static_cast<int>(seed % 3);
    const Instance inst = generate(p);
    EXPECT_NO_THROW(validate(inst));
    if (inst.m() <= kIlpMaxEdges) {
      EXPECT_NO_THROW((void)ilp_opt(inst)) << "seed " << seed;
      ++checked;
    }
  }
  EXPECT_GE(checked, 10);
}
