#include <gtest/gtest.h>

#include <random>

#include "dbnd/biset.hpp"

using namespace dbnd;

namespace {

NodeSet ns(std::initializer_list<int> v) {
  NodeSet s;
  for (int x : v) s = s.with(x);
  return s;
}
Biset bs(std::initializer_list<int> in, std::initializer_list<int> out) { return Biset(ns(in), ns(out)); }

// Random biset over {0..n-1}, each node independently in S, Γ or outside.
Biset random_biset(std::mt19937_64& rng, int n) {
  std::uint64_t in = 0, out = 0;
  for (int v = 0; v < n; ++v) {
    const auto r = rng() % 3;
    if (r == 0) in |= 1ULL << v;
    if (r <= 1) out |= 1ULL << v;
  }
  return Biset(NodeSet(in), NodeSet(out));
}

// Δ(v) straight from the definition, on raw masks.
int delta_oracle(const std::vector<Biset>& fam, int v) {
  int count = 0;
  for (const auto& x : fam) {
    if (!(x.outer().bits() & ~x.inner().bits() & (1ULL << v))) continue;
    bool minimal = true;
    for (const auto& y : fam) {
      if (y == x || !(y.outer().bits() & ~y.inner().bits() & (1ULL << v))) continue;
      const bool below = (y.inner().bits() & ~x.inner().bits()) == 0 && (y.outer().bits() & ~x.outer().bits()) == 0;
      if (below) minimal = false;
    }
    count += minimal;
  }
  return count;
}

}  // namespace

TEST(BisetAlgebra, SubtractExample) { EXPECT_EQ(subtract(bs({1}, {1, 2}), bs({2, 3}, {2, 3})), bs({1}, {1})); }

TEST(BisetAlgebra, Idempotence) {
  const Biset x = bs({1}, {1, 2});
  EXPECT_EQ(intersect(x, x), x);
  EXPECT_EQ(unite(x, x), x);
}

TEST(BisetAlgebra, UnionIntersect) {
  const Biset x = bs({1, 2}, {1, 2, 3}), y = bs({2}, {2, 4});
  EXPECT_EQ(unite(x, y), bs({1, 2}, {1, 2, 3, 4}));
  EXPECT_EQ(intersect(x, y), bs({2}, {2}));
}

TEST(BisetAlgebra, InvalidBisetRejected) {
  EXPECT_THROW(Biset(ns({1, 2}), ns({1})), Error);
}

TEST(BisetAlgebra, Boundary) { EXPECT_EQ(bs({1}, {1, 2, 5}).boundary(), ns({2, 5})); }

TEST(BisetOrder, Contains) {
  EXPECT_TRUE(contains(bs({1}, {1}), bs({1, 2}, {1, 2, 3})));
  EXPECT_TRUE(contains(bs({1}, {1, 2}), bs({1}, {1, 2})));
  EXPECT_FALSE(contains(bs({1}, {1, 4}), bs({1, 2}, {1, 2, 3})));
}

TEST(BisetOrder, RandomAlgebraProperties) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 2000; ++it) {
    const Biset x = random_biset(rng, 8), y = random_biset(rng, 8);
    EXPECT_TRUE(contains(intersect(x, y), x));
    EXPECT_TRUE(contains(x, unite(x, y)));
    const Biset a = subtract(x, y), b = subtract(y, x);
    // X∖Y and Y∖X are strongly disjoint.
    EXPECT_FALSE(a.inner().intersects(b.outer()));
    EXPECT_FALSE(b.inner().intersects(a.outer()));
  }
}

TEST(Laminarity, Examples) {
  const BisetFamily a{bs({1}, {1, 2}), bs({3}, {3})};
  EXPECT_TRUE(is_laminar(a));
  EXPECT_TRUE(is_strongly_laminar(a));
  const BisetFamily b{bs({1}, {1, 2}), bs({2}, {2, 3})};
  EXPECT_TRUE(is_laminar(b));
  EXPECT_FALSE(is_strongly_laminar(b));
  const BisetFamily c{bs({1, 2}, {1, 2}), bs({2, 3}, {2, 3})};
  EXPECT_FALSE(is_laminar(c));
  EXPECT_FALSE(is_strongly_laminar(c));
}

TEST(Laminarity, DuplicatesForbidden) {
  BisetFamily f;
  EXPECT_TRUE(f.add(bs({1}, {1})));
  EXPECT_FALSE(f.add(bs({1}, {1})));
  EXPECT_EQ(f.size(), 1U);
}

TEST(Forest, ParentAndLeaves) {
  const LaminarForest forest = build_forest(BisetFamily{bs({1}, {1}), bs({1, 2}, {1, 2})});
  ASSERT_TRUE(forest.parent(0).has_value());
  EXPECT_EQ(*forest.parent(0), 1U);
  EXPECT_EQ(forest.leaves(), std::vector<std::size_t>{0});
  EXPECT_EQ(forest.roots(), std::vector<std::size_t>{1});
}

TEST(Forest, SingletonAndDisjoint) {
  const LaminarForest one = build_forest(BisetFamily{bs({1}, {1, 2})});
  EXPECT_EQ(one.roots().size(), 1U);
  EXPECT_EQ(one.leaves().size(), 1U);
  const LaminarForest two = build_forest(BisetFamily{bs({1}, {1}), bs({3}, {3, 4})});
  EXPECT_EQ(two.roots().size(), 2U);
  EXPECT_EQ(two.leaves().size(), 2U);
}

TEST(Forest, NotLaminarThrows) {
  try {
    build_forest(BisetFamily{bs({1, 2}, {1, 2}), bs({2, 3}, {2, 3})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotLaminar);
  }
}

TEST(Forest, ParentIsMinimalContaining) {
  const LaminarForest f = build_forest(BisetFamily{bs({1, 2, 3}, {1, 2, 3, 4}), bs({1}, {1}), bs({1, 2}, {1, 2, 4})});
  EXPECT_EQ(*f.parent(1), 2U);
  EXPECT_EQ(*f.parent(2), 0U);
  EXPECT_FALSE(f.parent(0).has_value());
}

TEST(Ownership, Examples) {
  const LaminarForest f = build_forest(BisetFamily{bs({1}, {1, 2})});
  EXPECT_EQ(f.owns(1), bs({1}, {1, 2}));
  EXPECT_EQ(f.shares_count(1), 0);
  EXPECT_FALSE(f.owns(2).has_value());
  EXPECT_EQ(f.shares_count(2), 1);
  const LaminarForest g = build_forest(BisetFamily{bs({1}, {1, 3}), bs({2}, {2, 3})});
  EXPECT_EQ(g.shares_count(3), 2);
}

TEST(CountAudit, Examples) {
  // Two strongly laminar leaves, γ = 1, C = {3} with Δ = 1.
  const LaminarForest f = build_forest(BisetFamily{bs({1}, {1, 3}), bs({2}, {2})});
  const CountAudit a = count_audit(f, ns({3}), 1);
  EXPECT_EQ(a.lhs, 1);
  EXPECT_EQ(a.rhs_strongly, 3);
  EXPECT_TRUE(a.pass());
  const CountAudit empty = count_audit(f, NodeSet{}, 1);
  EXPECT_EQ(empty.lhs, 0);
  EXPECT_TRUE(empty.pass());
}

TEST(CountAudit, RandomFamiliesAgainstExhaustiveDelta) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const bool strong = trial % 2 == 0;
    BisetFamily fam;
    for (int t = 0; t < 40; ++t) {
      const Biset b = random_biset(rng, n);
      if (b.inner().empty()) continue;
      bool ok = true;
      for (const auto& m : fam)
        ok = ok && (strong ? strongly_laminar_compatible(b, m) : laminar_compatible(b, m));
      if (ok) fam.add(b);
    }
    ASSERT_TRUE(is_laminar(fam));
    if (strong) ASSERT_TRUE(is_strongly_laminar(fam));
    const LaminarForest forest(fam);
    const int gamma = forest.max_boundary();
    const NodeSet c = NodeSet::range(n);
    long lhs = 0;
    for (int v = 0; v < n; ++v) {
      const int d = delta_oracle(fam.members(), v);
      EXPECT_EQ(forest.shares_count(v), d);
      lhs += std::max(d, 1);
      // Members counted by Δ are pairwise incomparable.
      const auto sh = forest.sharers(v);
      for (auto i : sh)
        for (auto j : sh)
          if (i != j) EXPECT_FALSE(fam[i].subset_of(fam[j]));
      // At most one owner.
      int owners = 0;
      for (const auto& m : fam) {
        if (!m.inner().contains(v)) continue;
        bool minimal = true;
        for (const auto& o : fam)
          if (!(o == m) && o.inner().contains(v) && o.subset_of(m)) minimal = false;
        owners += minimal;
      }
      EXPECT_LE(owners, 1);
    }
    const CountAudit a = count_audit(forest, c, gamma);
    EXPECT_EQ(a.lhs, lhs);
    const long leaves = static_cast<long>(forest.leaves().size());
    EXPECT_LE(lhs, 2L * gamma * std::max(leaves - 1, 0L) + n);
    if (strong) EXPECT_LE(lhs, gamma * leaves + n);
    EXPECT_TRUE(a.pass());
  }
}

TEST(Enumeration, ThreeToTheN) {
  for (int n = 0; n <= 6; ++n) {
    long count = 0;
    for_each_biset(n, [&](const Biset&) { ++count; });
    long expect = 1;
    for (int i = 0; i < n; ++i) expect *= 3;
    EXPECT_EQ(count, expect);
  }
}
