#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dbnd/error.hpp"

namespace dbnd {

// Node sets over at most 64 dense node identifiers.
class NodeSet {
 public:
  static constexpr int kMaxNodes = 64;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = int;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}
  constexpr NodeSet(std::initializer_list<int> nodes) {
    for (int v : nodes) bits_ |= bit(v);
  }

  static constexpr NodeSet single(int v) { return NodeSet(bit(v)); }
  // {0, ..., n-1}
  static constexpr NodeSet range(int n) {
    return NodeSet(n >= kMaxNodes ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
  [[nodiscard]] constexpr bool contains(int v) const { return (bits_ >> v) & 1U; }
  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  [[nodiscard]] constexpr int size() const { return std::popcount(bits_); }
  [[nodiscard]] constexpr bool subset_of(NodeSet other) const { return (bits_ & ~other.bits_) == 0; }
  [[nodiscard]] constexpr bool intersects(NodeSet other) const { return (bits_ & other.bits_) != 0; }
  [[nodiscard]] constexpr int first() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }
  [[nodiscard]] constexpr NodeSet with(int v) const { return NodeSet(bits_ | bit(v)); }
  [[nodiscard]] constexpr NodeSet without(int v) const { return NodeSet(bits_ & ~bit(v)); }

  constexpr NodeSet operator&(NodeSet o) const { return NodeSet(bits_ & o.bits_); }
  constexpr NodeSet operator|(NodeSet o) const { return NodeSet(bits_ | o.bits_); }
  constexpr NodeSet operator-(NodeSet o) const { return NodeSet(bits_ & ~o.bits_); }
  constexpr NodeSet& operator&=(NodeSet o) { bits_ &= o.bits_; return *this; }
  constexpr NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
  constexpr NodeSet& operator-=(NodeSet o) { bits_ &= ~o.bits_; return *this; }
  constexpr auto operator<=>(const NodeSet&) const = default;

  [[nodiscard]] constexpr iterator begin() const { return iterator(bits_); }
  [[nodiscard]] constexpr iterator end() const { return iterator(0); }

  [[nodiscard]] std::vector<int> to_vector() const { return {begin(), end()}; }

 private:
  static constexpr std::uint64_t bit(int v) { return std::uint64_t{1} << v; }
  std::uint64_t bits_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, NodeSet s) {
  os << '{';
  bool first = true;
  for (int v : s) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  return os << '}';
}

// Ordered pair (inner, outer) with inner ⊆ outer.
class Biset {
 public:
  constexpr Biset() = default;
  constexpr Biset(NodeSet inner, NodeSet outer) : inner_(inner), outer_(outer) {
    if (!inner.subset_of(outer)) throw Error(Errc::kInvalidBiset, "inner part not contained in outer part");
  }
  // The plain set (S, S).
  static constexpr Biset of_set(NodeSet s) { return Biset(s, s); }

  [[nodiscard]] constexpr NodeSet inner() const { return inner_; }
  [[nodiscard]] constexpr NodeSet outer() const { return outer_; }
  [[nodiscard]] constexpr NodeSet boundary() const { return outer_ - inner_; }

  // X ⊆ Y in the biset inclusion order.
  [[nodiscard]] constexpr bool subset_of(const Biset& y) const {
    return inner_.subset_of(y.inner_) && outer_.subset_of(y.outer_);
  }

  constexpr auto operator<=>(const Biset&) const = default;

  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    os << '(' << inner_ << ',' << outer_ << ')';
    return os.str();
  }

 private:
  NodeSet inner_;
  NodeSet outer_;
};

inline std::ostream& operator<<(std::ostream& os, const Biset& b) { return os << b.str(); }

constexpr Biset intersect(const Biset& x, const Biset& y) {
  return Biset(x.inner() & y.inner(), x.outer() & y.outer());
}
constexpr Biset unite(const Biset& x, const Biset& y) {
  return Biset(x.inner() | y.inner(), x.outer() | y.outer());
}
// (X ∖ Y⁺, X⁺ ∖ Y)
constexpr Biset subtract(const Biset& x, const Biset& y) {
  return Biset(x.inner() - y.outer(), x.outer() - y.inner());
}
constexpr bool contains(const Biset& x, const Biset& y) { return x.subset_of(y); }

constexpr bool laminar_compatible(const Biset& x, const Biset& y) {
  return x.subset_of(y) || y.subset_of(x) || !x.inner().intersects(y.inner());
}
constexpr bool strongly_laminar_compatible(const Biset& x, const Biset& y) {
  return x.subset_of(y) || y.subset_of(x) ||
         (!x.inner().intersects(y.outer()) && !y.inner().intersects(x.outer()));
}

// Calls fn(Biset) for all 3^n bisets on {0..n-1}.
template <typename Fn>
void for_each_biset(int n, Fn&& fn) {
  const std::uint64_t full = NodeSet::range(n).bits();
  for (std::uint64_t outer = 0;; outer = (outer - full) & full) {
    for (std::uint64_t inner = outer;; inner = (inner - 1) & outer) {
      fn(Biset(NodeSet(inner), NodeSet(outer)));
      if (inner == 0) break;
    }
    if (outer == full) break;
  }
}

// Ordered, duplicate-free collection of bisets.
class BisetFamily {
 public:
  BisetFamily() = default;
  BisetFamily(std::initializer_list<Biset> members) {
    for (const auto& b : members) add(b);
  }

  // Returns false (and leaves the family unchanged) on duplicates.
  bool add(const Biset& b) {
    if (contains(b)) return false;
    members_.push_back(b);
    return true;
  }
  [[nodiscard]] bool contains(const Biset& b) const {
    return std::find(members_.begin(), members_.end(), b) != members_.end();
  }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] const Biset& operator[](std::size_t i) const { return members_[i]; }
  [[nodiscard]] const std::vector<Biset>& members() const { return members_; }
  [[nodiscard]] auto begin() const { return members_.begin(); }
  [[nodiscard]] auto end() const { return members_.end(); }

 private:
  std::vector<Biset> members_;
};

inline bool is_laminar(const BisetFamily& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (!laminar_compatible(f[i], f[j])) return false;
  return true;
}

inline bool is_strongly_laminar(const BisetFamily& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (!strongly_laminar_compatible(f[i], f[j])) return false;
  return true;
}

// Forest of a laminar family under biset inclusion. Members are referred to by
// their index in the family.
class LaminarForest {
 public:
  explicit LaminarForest(BisetFamily family) : family_(std::move(family)) {
    if (!is_laminar(family_)) throw Error(Errc::kNotLaminar, "family is not laminar");
    const std::size_t m = family_.size();
    parent_.assign(m, std::nullopt);
    children_.assign(m, {});
    for (std::size_t i = 0; i < m; ++i) {
      std::optional<std::size_t> best;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i || !family_[i].subset_of(family_[j])) continue;
        if (!best || family_[j].subset_of(family_[*best])) best = j;
      }
      parent_[i] = best;
      if (best) children_[*best].push_back(i);
    }
  }

  [[nodiscard]] const BisetFamily& family() const { return family_; }
  [[nodiscard]] std::size_t size() const { return family_.size(); }
  [[nodiscard]] std::optional<std::size_t> parent(std::size_t i) const { return parent_[i]; }
  [[nodiscard]] const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }

  [[nodiscard]] std::vector<std::size_t> roots() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (!parent_[i]) out.push_back(i);
    return out;
  }
  [[nodiscard]] std::vector<std::size_t> leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (children_[i].empty()) out.push_back(i);
    return out;
  }
  [[nodiscard]] int max_boundary() const {
    int g = 0;
    for (const auto& b : family_) g = std::max(g, b.boundary().size());
    return g;
  }

  // The minimal member whose inner part contains v.
  [[nodiscard]] std::optional<Biset> owns(int v) const {
    auto idx = minimal_where([&](const Biset& b) { return b.inner().contains(v); });
    if (idx.empty()) return std::nullopt;
    return family_[idx.front()];
  }

  // Members that are minimal among those having v on their boundary.
  [[nodiscard]] std::vector<std::size_t> sharers(int v) const {
    return minimal_where([&](const Biset& b) { return b.boundary().contains(v); });
  }

  // Δ(v)
  [[nodiscard]] int shares_count(int v) const { return static_cast<int>(sharers(v).size()); }

 private:
  template <typename Pred>
  std::vector<std::size_t> minimal_where(Pred pred) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!pred(family_[i])) continue;
      bool minimal = true;
      for (std::size_t j = 0; j < size() && minimal; ++j)
        if (j != i && pred(family_[j]) && family_[j].subset_of(family_[i])) minimal = false;
      if (minimal) out.push_back(i);
    }
    return out;
  }

  BisetFamily family_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<std::vector<std::size_t>> children_;
};

inline LaminarForest build_forest(const BisetFamily& f) { return LaminarForest(f); }

struct CountAudit {
  long lhs = 0;                // Σ_{v∈C} max{Δ(v),1}
  long rhs_laminar = 0;        // 2γ(|leaves|-1)+|C|
  long rhs_strongly = 0;       // γ|leaves|+|C|
  bool laminar_pass = true;
  bool strongly_laminar = false;
  bool strongly_pass = true;
  bool gamma_ok = true;        // γ ≥ max boundary size of the family
  int leaves = 0;
  [[nodiscard]] bool pass() const { return gamma_ok && laminar_pass && (!strongly_laminar || strongly_pass); }
};

inline CountAudit count_audit(const LaminarForest& forest, NodeSet c, int gamma) {
  CountAudit a;
  a.leaves = static_cast<int>(forest.leaves().size());
  a.gamma_ok = gamma >= forest.max_boundary();
  for (int v : c) a.lhs += std::max(forest.shares_count(v), 1);
  // An empty family has every Δ equal to 0, so both sides reduce to |C|.
  a.rhs_laminar = 2L * gamma * std::max(a.leaves - 1, 0) + c.size();
  a.rhs_strongly = static_cast<long>(gamma) * a.leaves + c.size();
  a.laminar_pass = a.lhs <= a.rhs_laminar;
  a.strongly_laminar = is_strongly_laminar(forest.family());
  a.strongly_pass = a.lhs <= a.rhs_strongly;
  return a;
}

}  // namespace dbnd
