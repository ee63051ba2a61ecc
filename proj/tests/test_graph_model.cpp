#include <gtest/gtest.h>

#include <random>

#include "dbnd/connectivity_function.hpp"
#include "dbnd/instance.hpp"

using namespace dbnd;

namespace {

NodeSet ns(std::initializer_list<int> v) {
  NodeSet s;
  for (int x : v) s = s.with(x);
  return s;
}
Biset bs(std::initializer_list<int> in, std::initializer_list<int> out) { return Biset(ns(in), ns(out)); }

Biset random_biset(std::mt19937_64& rng, int n) {
  std::uint64_t in = 0, out = 0;
  for (int v = 0; v < n; ++v) {
    const auto r = rng() % 3;
    if (r == 0) in |= 1ULL << v;
    if (r <= 1) out |= 1ULL << v;
  }
  return Biset(NodeSet(in), NodeSet(out));
}

// Edges entering (directed) or crossing (undirected) the biset, counted by hand.
int cut_size(const std::vector<std::pair<int, int>>& f, const Biset& s, bool directed) {
  int c = 0;
  for (auto [u, v] : f) {
    const bool in_u = s.inner().contains(u), in_v = s.inner().contains(v);
    const bool out_u = !s.outer().contains(u), out_v = !s.outer().contains(v);
    if (directed) c += out_u && in_v;
    else c += (in_u && out_v) || (in_v && out_u);
  }
  return c;
}

}  // namespace

TEST(Covers, Examples) {
  // Nodes 1..3 of the example; node 0 unused.
  const Biset s = bs({1}, {1, 2});
  EXPECT_TRUE(covers(3, 1, s, CoverMode::kIn));
  EXPECT_FALSE(covers(2, 1, s, CoverMode::kIn));
  EXPECT_TRUE(covers(1, 3, s, CoverMode::kUndirected));
  EXPECT_TRUE(covers(3, 1, s, CoverMode::kUndirected));
  EXPECT_TRUE(covers(1, 3, s, CoverMode::kOut));
}

TEST(Covers, ModeMismatch) {
  const Edge e{1, 3, 0};
  try {
    (void)covers(e, bs({1}, {1}), CoverMode::kUndirected, true);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::kModeMismatch);
  }
  EXPECT_THROW((void)covers(e, bs({1}, {1}), CoverMode::kIn, false), Error);
}

TEST(Delta, MatchesScan) {
  const std::vector<Edge> edges{{0, 1, 0}, {2, 1, 0}, {3, 1, 0}, {1, 3, 0}};
  const auto d = delta(edges, bs({1}, {1, 2}), CoverMode::kIn, true);
  EXPECT_EQ(d, (std::vector<int>{0, 2}));
}

TEST(FunctionG, Examples) {
  EXPECT_EQ(eval_g(bs({1}, {1, 2}), 0, 3), 2);
  EXPECT_EQ(eval_g(bs({1}, {0, 1}), 0, 3), 0);
  EXPECT_EQ(eval_g(bs({}, {}), 0, 3), 0);
}

TEST(FunctionH, Examples) {
  RequirementMatrix r(5);
  r.set(1, 4, 2);
  const NodeSet t = ns({1, 4});
  EXPECT_EQ(eval_h(bs({1}, {1, 2}), t, r), 1);
  EXPECT_EQ(eval_h(bs({1}, {1, 4}), t, r), 0);
  EXPECT_EQ(eval_h(bs({2}, {2}), t, r), 0);
}

TEST(FunctionFk, Examples) {
  // V = {1..4} mapped to {0..3}.
  const NodeSet all = NodeSet::range(4);
  EXPECT_EQ(eval_fk(bs({0}, {0, 1}), all, 2), 1);
  EXPECT_EQ(eval_fk(Biset(all, all), all, 2), 0);
  EXPECT_EQ(eval_fk(Biset(ns({0}), all), all, 2), 0);
}

TEST(Residual, Examples) {
  // g with k = 2 on nodes {0..3}, s = 0; S = ({2},{2}) entered by the chosen arc 0→2.
  const auto g = ConnectivityFunction::out_connectivity(4, true, 0, 2);
  EXPECT_EQ(eval_residual(g, {{0, 2}}, bs({2}, {2})), 1);
  EXPECT_EQ(eval_residual(g, {}, bs({2}, {2})), 2);
}

TEST(Residual, RandomAgainstEdgeScan) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 4);
    const bool directed = trial % 2 == 0;
    std::vector<std::pair<int, int>> j;
    for (int t = 0; t < 6; ++t) {
      int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
      if (u == v) continue;
      if (!directed && u > v) std::swap(u, v);
      j.emplace_back(u, v);
    }
    const auto f = directed ? ConnectivityFunction::out_connectivity(n, true, 0, 2)
                            : ConnectivityFunction::k_connectivity(n, false, 3);
    const auto fj = f.residual(j);
    for (int s = 0; s < 30; ++s) {
      const Biset b = random_biset(rng, n);
      EXPECT_EQ(fj(b), f(b) - cut_size(j, b, directed));
    }
  }
}

TEST(ResidualBound, Examples) {
  Instance inst;
  inst.directed = true;
  inst.n = 3;
  inst.edges = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}};
  inst.bounds = {3, 1, std::nullopt};
  EXPECT_EQ(residual_bound(inst, {0, 1}, 2, 0), Rational(2));
  EXPECT_EQ(residual_bound(inst, {}, 2, 0), Rational(3));
  inst.bounds = {1, 1, std::nullopt};
  inst.edges.push_back({0, 1, 1});
  EXPECT_EQ(residual_bound(inst, {0, 1, 3}, 2, 0), frac(-1, 2));
  try {
    (void)residual_bound(inst, {}, 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNodeNotBounded);
  }
}

TEST(Gamma, Examples) {
  EXPECT_EQ(gamma_of(ConnectivityFunction::out_connectivity(5, true, 0, 4)), 3);
  RequirementMatrix r(4);
  r.set(0, 3, 2);
  EXPECT_EQ(gamma_of(ConnectivityFunction::element(4, ns({0, 3}), r)), 1);
  EXPECT_EQ(gamma_of(ConnectivityFunction::k_connectivity(4, false, 1)), 0);
}

TEST(Gamma, AnalyticBoundHolds) {
  for (int k = 1; k <= 3; ++k) {
    const auto g = ConnectivityFunction::out_connectivity(5, true, 0, k);
    const auto fk = ConnectivityFunction::k_connectivity(5, false, k);
    for_each_biset(5, [&](const Biset& s) {
      for (const auto* f : {&g, &fk}) {
        const int v = (*f)(s);
        EXPECT_LE(v, k);
        if (v > 0) EXPECT_LE(s.boundary().size(), k - 1);
      }
    });
  }
}

TEST(Supermodularity, GIntersecting) {
  const auto rep = supermodularity_audit(ConnectivityFunction::out_connectivity(4, true, 0, 2), 4);
  EXPECT_TRUE(rep.pass());
  EXPECT_GT(rep.pairs_checked, 0);
}

TEST(Supermodularity, HSkew) {
  RequirementMatrix r(4);
  r.set(0, 3, 1);
  const auto rep = supermodularity_audit(ConnectivityFunction::element(4, ns({0, 3}), r), 4);
  EXPECT_TRUE(rep.pass());
}

TEST(Supermodularity, DroppingRootConditionLeavesAModularFunction) {
  // Without "s ∉ S⁺", g becomes k - |Γ| on nonempty S. On pairs with
  // intersecting inner parts both sides then equal 2k - |Γ(X)| - |Γ(Y)|, so the
  // intersecting audit has nothing to report.
  const auto bad = ConnectivityFunction::custom(
      4, true, [](const Biset& s) { return s.inner().empty() ? 0 : 2 - s.boundary().size(); }, 1);
  EXPECT_TRUE(supermodularity_audit(bad, 4, SupermodularProperty::kIntersecting).pass());
}

TEST(Supermodularity, AllowingTerminalsOnTheBoundaryIsCaught) {
  // h without "T ∩ Γ = ∅", every node a terminal with r = 2: plain node
  // connectivity, which is not skew supermodular.
  constexpr int n = 4;
  const auto bad = ConnectivityFunction::custom(
      n, false,
      [](const Biset& s) {
        const NodeSet t = NodeSet::range(n);
        if ((s.inner() & t).empty() || (t - s.outer()).empty()) return 0;
        return 2 - s.boundary().size();
      },
      1);
  const auto rep = supermodularity_audit(bad, n, SupermodularProperty::kSkew);
  EXPECT_FALSE(rep.pass());
  EXPECT_FALSE(rep.violations.empty());
}

TEST(Supermodularity, ZeroExtensionFailsOnAllPairs) {
  // X = ({1,2},{1,2}) and Y = ({0,2},{0,1,2}) with s = 0: 2 + 0 > 1 + 0.
  const auto g = ConnectivityFunction::out_connectivity(4, true, 0, 2);
  const Biset x = bs({1, 2}, {1, 2}), y = bs({0, 2}, {0, 1, 2});
  EXPECT_GT(g(x) + g(y), g(intersect(x, y)) + g(unite(x, y)));
  EXPECT_FALSE(supermodularity_audit(g, 4, SupermodularProperty::kIntersecting, AuditDomain::kAllPairs).pass());
}

TEST(Supermodularity, TooLarge) {
  try {
    (void)supermodularity_audit(ConnectivityFunction::k_connectivity(9, false, 2), 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTooLarge);
  }
}

TEST(Supermodularity, ResidualsStaySupermodular) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<std::pair<int, int>> j;
    for (int t = 0; t < 3; ++t) {
      int u = static_cast<int>(rng() % 5), v = static_cast<int>(rng() % 5);
      if (u == v) continue;
      if (trial % 2 && u > v) std::swap(u, v);
      j.emplace_back(u, v);
    }
    if (trial % 2 == 0) {
      const auto g = ConnectivityFunction::out_connectivity(5, true, 0, 2).residual(j);
      EXPECT_TRUE(supermodularity_audit(g, 5, SupermodularProperty::kIntersecting).pass());
    } else {
      RequirementMatrix r(5);
      r.set(0, 4, 2);
      r.set(1, 4, 1);
      const auto h = ConnectivityFunction::element(5, ns({0, 1, 4}), r).residual(j);
      EXPECT_TRUE(supermodularity_audit(h, 5, SupermodularProperty::kSkew).pass());
    }
  }
}

TEST(CutFunction, RandomSubmodularity) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const bool directed = trial % 2 == 0;
    std::vector<std::pair<int, int>> f;
    for (int t = 0; t < 10; ++t) {
      const int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
      if (u != v) f.emplace_back(u, v);
    }
    const Biset x = random_biset(rng, n), y = random_biset(rng, n);
    const int lhs = cut_size(f, x, directed) + cut_size(f, y, directed);
    EXPECT_GE(lhs, cut_size(f, intersect(x, y), directed) + cut_size(f, unite(x, y), directed));
    if (!directed) EXPECT_GE(lhs, cut_size(f, subtract(x, y), false) + cut_size(f, subtract(y, x), false));
  }
}

TEST(Validation, RejectsBadInstances) {
  Instance inst;
  inst.directed = false;
  inst.n = 3;
  inst.edges = {{0, 1, 1}, {1, 2, 1}};
  inst.requirement = KConnRequirement{1};
  EXPECT_NO_THROW(validate(inst));
  auto expect_invalid = [](const Instance& i) {
    try {
      validate(i);
      ADD_FAILURE() << "accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kValidation);
    }
  };
  Instance zero = inst;
  zero.bounds = {0, std::nullopt, std::nullopt};
  expect_invalid(zero);
  Instance loop = inst;
  loop.edges.push_back({2, 2, 1});
  expect_invalid(loop);
  Instance neg = inst;
  neg.edges[0].cost = -1;
  expect_invalid(neg);
  Instance flipped = inst;
  flipped.edges[0] = {1, 0, 1};
  expect_invalid(flipped);
  Instance badk = inst;
  badk.requirement = KConnRequirement{0};
  expect_invalid(badk);
  Instance elem = inst;
  RequirementMatrix r(3);
  r.set(0, 1, 1);
  elem.requirement = ElementRequirement{1, ns({0}), r};
  expect_invalid(elem);
}

TEST(Instance, DegreesAndSimplicity) {
  Instance inst;
  inst.directed = true;
  inst.n = 3;
  inst.edges = {{0, 1, 1}, {0, 2, 1}, {1, 0, 1}};
  EXPECT_EQ(inst.degree({0, 1, 2}, 0), 2);
  EXPECT_EQ(inst.in_degree({0, 1, 2}, 0), 1);
  EXPECT_TRUE(inst.is_simple());
  inst.edges.push_back({0, 1, 2});
  EXPECT_FALSE(inst.is_simple());
  EXPECT_EQ(make_edge(false, 2, 1, 0).tail, 1);
}
