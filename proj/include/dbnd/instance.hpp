#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dbnd/biset.hpp"
#include "dbnd/error.hpp"
#include "dbnd/rational.hpp"

namespace dbnd {

// An edge or arc. Undirected edges are stored with tail < head.
struct Edge {
  int tail = 0;
  int head = 0;
  Rational cost;

  [[nodiscard]] bool touches(int v) const { return tail == v || head == v; }
  bool operator==(const Edge&) const = default;
};

// r as a dense symmetric matrix over the node set, zero outside T.
class RequirementMatrix {
 public:
  RequirementMatrix() = default;
  explicit RequirementMatrix(int n) : n_(n), r_(static_cast<std::size_t>(n) * n, 0) {}

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int operator()(int u, int v) const { return r_[index(u, v)]; }
  void set(int u, int v, int value) {
    r_[index(u, v)] = value;
    r_[index(v, u)] = value;
  }
  [[nodiscard]] int max() const { return r_.empty() ? 0 : *std::max_element(r_.begin(), r_.end()); }
  bool operator==(const RequirementMatrix&) const = default;

 private:
  [[nodiscard]] std::size_t index(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }
  int n_ = 0;
  std::vector<int> r_;
};

struct OutConnRequirement {
  int root = 0;
  int k = 1;
  bool operator==(const OutConnRequirement&) const = default;
};

struct ElementRequirement {
  int k = 1;  // declared maximum requirement
  NodeSet terminals;
  RequirementMatrix r;
  bool operator==(const ElementRequirement&) const = default;
};

struct KConnRequirement {
  int k = 1;
  bool operator==(const KConnRequirement&) const = default;
};

using RequirementSpec = std::variant<OutConnRequirement, ElementRequirement, KConnRequirement>;

struct Instance {
  bool directed = false;
  int n = 0;
  std::vector<Edge> edges;
  // b(v) for v ∈ B (out-degree for digraphs, degree otherwise).
  std::vector<std::optional<int>> bounds;
  // Optional in-degree bounds b⁻ on B⁻ (digraphs only).
  std::vector<std::optional<int>> in_bounds;
  RequirementSpec requirement = KConnRequirement{};

  [[nodiscard]] NodeSet nodes() const { return NodeSet::range(n); }
  [[nodiscard]] int m() const { return static_cast<int>(edges.size()); }

  [[nodiscard]] NodeSet bounded() const {
    NodeSet b;
    for (int v = 0; v < n; ++v)
      if (v < static_cast<int>(bounds.size()) && bounds[v]) b = b.with(v);
    return b;
  }
  [[nodiscard]] NodeSet in_bounded() const {
    NodeSet b;
    for (int v = 0; v < n; ++v)
      if (v < static_cast<int>(in_bounds.size()) && in_bounds[v]) b = b.with(v);
    return b;
  }
  [[nodiscard]] int bound(int v) const {
    if (v >= static_cast<int>(bounds.size()) || !bounds[v]) throw Error(Errc::kNodeNotBounded, "node " + std::to_string(v));
    return *bounds[v];
  }
  [[nodiscard]] int in_bound(int v) const {
    if (v >= static_cast<int>(in_bounds.size()) || !in_bounds[v])
      throw Error(Errc::kNodeNotBounded, "node " + std::to_string(v) + " (in-degree)");
    return *in_bounds[v];
  }

  [[nodiscard]] Rational cost_of(const std::vector<int>& ids) const {
    Rational c = 0;
    for (int id : ids) c += edges[id].cost;
    return c;
  }

  // Out-degree (digraph) or degree of v in the edge subset.
  [[nodiscard]] int degree(const std::vector<int>& ids, int v) const {
    int d = 0;
    for (int id : ids) {
      const Edge& e = edges[id];
      d += directed ? (e.tail == v) : (e.tail == v) + (e.head == v);
    }
    return d;
  }
  [[nodiscard]] int in_degree(const std::vector<int>& ids, int v) const {
    int d = 0;
    for (int id : ids) d += edges[id].head == v;
    return d;
  }

  [[nodiscard]] bool is_simple() const {
    std::vector<std::pair<int, int>> seen;
    for (const auto& e : edges) seen.emplace_back(e.tail, e.head);
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  }

  [[nodiscard]] int requirement_k() const {
    return std::visit([](const auto& r) -> int {
      using T = std::decay_t<decltype(r)>;
      if constexpr (std::is_same_v<T, ElementRequirement>) return r.r.max();
      else return r.k;
    }, requirement);
  }
};

inline Edge make_edge(bool directed, int u, int v, Rational cost) {
  if (!directed && u > v) std::swap(u, v);
  return Edge{u, v, std::move(cost)};
}

// Throws Errc::kValidation describing the first problem found.
inline void validate(const Instance& inst) {
  auto fail = [](const std::string& msg) { throw Error(Errc::kValidation, msg); };
  if (inst.n < 1 || inst.n > NodeSet::kMaxNodes) fail("node count must be in [1, 64]");
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const Edge& e = inst.edges[i];
    const std::string where = "edge " + std::to_string(i);
    if (e.tail < 0 || e.tail >= inst.n || e.head < 0 || e.head >= inst.n) fail(where + ": endpoint out of range");
    if (e.tail == e.head) fail(where + ": self-loop");
    if (e.cost < 0) fail(where + ": negative cost");
    if (!inst.directed && e.tail > e.head) fail(where + ": undirected edge not canonical (u < v)");
  }
  auto check_bounds = [&](const std::vector<std::optional<int>>& b, const char* what) {
    if (b.size() > static_cast<std::size_t>(inst.n)) fail(std::string(what) + ": more entries than nodes");
    for (std::size_t v = 0; v < b.size(); ++v)
      if (b[v] && *b[v] < 1) fail(std::string(what) + " of node " + std::to_string(v) + " must be >= 1");
  };
  check_bounds(inst.bounds, "degree bound");
  check_bounds(inst.in_bounds, "in-degree bound");
  if (!inst.directed && !inst.in_bounded().empty()) fail("in-degree bounds require a directed graph");
  std::visit([&](const auto& r) {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, OutConnRequirement>) {
      if (r.k < 1) fail("k must be >= 1");
      if (r.root < 0 || r.root >= inst.n) fail("root out of range");
    } else if constexpr (std::is_same_v<T, KConnRequirement>) {
      if (r.k < 1) fail("k must be >= 1");
    } else {
      if (r.k < 1) fail("k must be >= 1");
      if (inst.directed) fail("element connectivity requires an undirected graph");
      if (!r.terminals.subset_of(inst.nodes())) fail("terminal out of range");
      if (r.r.n() != inst.n) fail("requirement matrix size mismatch");
      for (int u = 0; u < inst.n; ++u) {
        if (r.r(u, u) != 0) fail("requirement diagonal must be zero");
        for (int v = 0; v < inst.n; ++v) {
          if (r.r(u, v) != r.r(v, u)) fail("requirement must be symmetric");
          if (r.r(u, v) < 0) fail("requirement must be nonnegative");
          if (r.r(u, v) > 0 && (!r.terminals.contains(u) || !r.terminals.contains(v)))
            fail("requirement between non-terminals");
          if (r.r(u, v) > r.k) fail("requirement exceeds declared k");
        }
      }
    }
  }, inst.requirement);
}

}  // namespace dbnd
