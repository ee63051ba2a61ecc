#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dbnd/biset.hpp"
#include "dbnd/connectivity_function.hpp"
#include "dbnd/max_flow.hpp"
#include "dbnd/rational.hpp"

namespace dbnd {

// Edge-indexed point x over the current edge set E.
struct FractionalSolution {
  std::vector<std::pair<int, int>> edges;
  std::vector<Rational> x;
};

struct ViolatedConstraint {
  Biset biset;
  int required = 0;  // f_J(S)
  Rational actual;   // x(δ_E(S))
  Rational slack;    // actual - required, negative
};

// x(δ_E(S)) by direct scan.
inline Rational coverage(const FractionalSolution& point, const Biset& s, bool directed) {
  const CoverMode mode = requirement_mode(directed);
  Rational sum = 0;
  for (std::size_t i = 0; i < point.edges.size(); ++i)
    if (covers(point.edges[i].first, point.edges[i].second, s, mode)) sum += point.x[i];
  return sum;
}

namespace detail {

inline std::optional<ViolatedConstraint> evaluate(const FractionalSolution& point, const ConnectivityFunction& f, const Biset& s) {
  ViolatedConstraint vc{s, f(s), coverage(point, s, f.directed()), 0};
  vc.slack = vc.actual - vc.required;
  if (vc.slack < 0) return vc;
  return std::nullopt;
}

// Min cut for one (source, sink) pair; returns a violated biset when the flow
// stays below `required`.
inline std::optional<ViolatedConstraint> separate_pair(const FractionalSolution& point, const ConnectivityFunction& f,
                                                       int source, int sink, NodeSet split, int required) {
  if (required <= 0) return std::nullopt;
  SplitNetwork net(f.n(), split);
  auto add = [&](int u, int v, const Rational& cap, int ref) {
    net.add_edge_arc(u, v, cap, ref);
    if (!f.directed()) net.add_edge_arc(v, u, cap, ref);
  };
  for (std::size_t i = 0; i < point.edges.size(); ++i)
    if (point.x[i] > 0) add(point.edges[i].first, point.edges[i].second, point.x[i], static_cast<int>(i));
  for (const auto& [u, v] : f.residual_edges()) add(u, v, Rational(1), -1);
  net.set_terminals(source, sink);
  const MaxFlowResult flow = max_flow(net, Rational(required));
  if (flow.complete == false) return std::nullopt;
  return evaluate(point, f, cut_to_biset(net, flow.min_cut));
}

}  // namespace detail

// One violated constraint per violating (source, sink) pair, in pair order,
// without duplicates. `f` carries the chosen edges J as its residual part.
inline std::vector<ViolatedConstraint> separate_all(const FractionalSolution& point, const ConnectivityFunction& f) {
  std::vector<ViolatedConstraint> out;
  auto push = [&](std::optional<ViolatedConstraint> vc) {
    if (!vc) return;
    for (const auto& o : out)
      if (o.biset == vc->biset) return;
    out.push_back(std::move(*vc));
  };
  const int n = f.n();
  const NodeSet all = NodeSet::range(n);
  switch (f.kind()) {
    case FunctionKind::kOutConnectivity:
      for (int v = 0; v < n; ++v) {
        if (v == f.root()) continue;
        push(detail::separate_pair(point, f, f.root(), v, all.without(v).without(f.root()), f.k()));
      }
      break;
    case FunctionKind::kElement: {
      const NodeSet t = f.terminals();
      for (int u : t)
        for (int v : t)
          if (u < v) push(detail::separate_pair(point, f, u, v, all - t, f.requirements()(u, v)));
      break;
    }
    case FunctionKind::kKConnectivity:
      for (int u = 0; u < n; ++u)
        for (int v = f.directed() ? 0 : u + 1; v < n; ++v)
          if (u != v) push(detail::separate_pair(point, f, u, v, all.without(u).without(v), f.k()));
      break;
    case FunctionKind::kCustom: {
      // No flow characterization; enumerate every biset and keep the worst few.
      std::vector<ViolatedConstraint> found;
      for_each_biset(n, [&](const Biset& s) {
        if (auto vc = detail::evaluate(point, f, s)) found.push_back(std::move(*vc));
      });
      std::stable_sort(found.begin(), found.end(),
                       [](const auto& a, const auto& b) { return a.slack < b.slack; });
      if (found.size() > static_cast<std::size_t>(n)) found.resize(n);
      out = std::move(found);
      break;
    }
  }
  return out;
}

// Most violated constraint (minimum slack, first pair on ties), or none when x
// satisfies every biset constraint of f_J.
inline std::optional<ViolatedConstraint> separate(const FractionalSolution& point, const ConnectivityFunction& f) {
  auto all = separate_all(point, f);
  if (all.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i].slack < all[best].slack) best = i;
  return all[best];
}

inline std::optional<ViolatedConstraint> separate(const FractionalSolution& point, const ConnectivityFunction& f,
                                                  const std::vector<std::pair<int, int>>& chosen) {
  return separate(point, f.residual(chosen));
}

}  // namespace dbnd
