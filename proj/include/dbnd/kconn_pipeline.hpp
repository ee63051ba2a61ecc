#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dbnd/connectivity.hpp"
#include "dbnd/iterative_rounding.hpp"

namespace dbnd {

using PairList = std::vector<std::pair<int, int>>;

// k nodes with the largest b(v); unbounded nodes first, ties by index.
inline std::vector<int> select_r(const Instance& inst, int k) {
  if (k < 1 || k > inst.n) throw Error(Errc::kBadR, "need 1 <= k <= n to pick R");
  std::vector<int> order(inst.n);
  for (int v = 0; v < inst.n; ++v) order[v] = v;
  auto key = [&](int v) {
    const bool bounded = v < static_cast<int>(inst.bounds.size()) && inst.bounds[v];
    return bounded ? *inst.bounds[v] : std::numeric_limits<int>::max();
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) > key(b); });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

struct ExternalResult {
  std::vector<int> J;        // instance edge ids
  std::vector<int> J_plus;   // k-outconnected part (ids), s-edges stripped
  std::vector<int> J_minus;  // digraphs: k-inconnected part (ids), s-edges stripped
  std::vector<int> R;
  Instance augmented;  // G' with s = n
  RoundingParams params;
  Rational tau_plus;  // LP value of the out-connectivity run
  Rational tau_minus;
};

// G plus a node s joined to R by cost-zero edges; b' = b+1 on R.
inline Instance with_root(const Instance& inst, const std::vector<int>& R, bool into_s) {
  Instance g;
  g.directed = inst.directed;
  g.n = inst.n + 1;
  g.edges = inst.edges;
  const int s = inst.n;
  for (int r : R) g.edges.push_back(into_s ? make_edge(g.directed, r, s, 0) : make_edge(g.directed, s, r, 0));
  g.bounds = inst.bounds;
  g.bounds.resize(g.n);
  for (int r : R)
    if (g.bounds[r]) *g.bounds[r] += 1;
  g.in_bounds = inst.in_bounds;
  g.requirement = OutConnRequirement{s, static_cast<int>(R.size())};
  return g;
}

inline Instance reversed(const Instance& inst) {
  Instance g = inst;
  for (auto& e : g.edges) std::swap(e.tail, e.head);
  std::swap(g.bounds, g.in_bounds);
  return g;
}

inline ExternalResult external_outconnectivity(const Instance& inst, int k, const std::vector<int>& R, int alpha) {
  if (static_cast<int>(R.size()) != k) throw Error(Errc::kBadR, "|R| must equal k");
  for (int r : R)
    if (r < 0 || r >= inst.n) throw Error(Errc::kBadR, "R not inside V");
  ExternalResult out;
  out.R = R;
  const int s = inst.n;
  const int m = inst.m();
  auto strip = [&](const std::vector<int>& ids) {
    std::vector<int> kept;
    for (int id : ids)
      if (id < m) kept.push_back(id);
    return kept;
  };
  out.augmented = with_root(inst, R, false);
  if (!inst.directed) {
    const auto u = undirected_outconnected(out.augmented, k, s, alpha);
    out.params = u.params;
    out.tau_plus = u.tau0;
    out.J_plus = strip(u.edges);
  } else {
    const Instance& g = out.augmented;
    out.params = preset_params(PresetKind::kDirectedOut, alpha, k - 1);
    const auto f = ConnectivityFunction::out_connectivity(g.n, true, s, k);
    const auto rr = run(g, f, out.params);
    out.tau_plus = rr.tau0;
    const auto plus = prune_minimal(g, rr.J, [&](const std::vector<int>& ids) {
      return is_k_outconnected(g.n, arc_list(g, ids), s, k);
    });
    out.J_plus = strip(plus);
    // J⁻: minimum-cost k-inconnected to s, solved as out-connectivity on the
    // reversed digraph without degree bounds.
    Instance back = reversed(with_root(inst, R, true));
    back.bounds.clear();
    back.in_bounds.clear();
    const auto rr_minus = run(back, f, preset_params(PresetKind::kDirectedOut, std::max(alpha, 2), k - 1));
    out.tau_minus = rr_minus.tau0;
    const auto minus = prune_minimal(back, rr_minus.J, [&](const std::vector<int>& ids) {
      return is_k_outconnected(back.n, arc_list(back, ids), s, k);
    });
    out.J_minus = strip(minus);
  }
  out.J = out.J_plus;
  out.J.insert(out.J.end(), out.J_minus.begin(), out.J_minus.end());
  std::sort(out.J.begin(), out.J.end());
  out.J.erase(std::unique(out.J.begin(), out.J.end()), out.J.end());
  return out;
}

// Completion set F on R.
struct CompletionSet {
  PairList F;
  int max_deg = 0;  // max F-degree (out-degree for digraphs)
  bool forest = true;  // undirected: acyclic; digraphs: acyclic in the bipartite tail/head graph
  bool size_ok = true;
};

namespace detail {

inline bool acyclic(int nodes, const PairList& edges) {
  std::vector<int> parent(nodes);
  for (int i = 0; i < nodes; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [a, b] : edges) {
    const int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

inline bool contains_pair(const PairList& edges, int a, int b, bool directed) {
  for (auto [x, y] : edges)
    if ((x == a && y == b) || (!directed && x == b && y == a)) return true;
  return false;
}

inline int f_degree(const PairList& F, int v, bool directed, bool in = false) {
  int d = 0;
  for (auto [a, b] : F) d += directed ? (in ? b == v : a == v) : (a == v) + (b == v);
  return d;
}

inline PairList joined(const PairList& a, const PairList& b) {
  PairList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace detail

inline CompletionSet certify(int n, const PairList& F, int k, bool directed) {
  CompletionSet c;
  c.F = F;
  for (int v = 0; v < n; ++v) c.max_deg = std::max(c.max_deg, detail::f_degree(F, v, directed));
  if (directed) {
    PairList bip;
    for (auto [a, b] : F) bip.emplace_back(a, n + b);
    c.forest = detail::acyclic(2 * n, bip);
    c.size_ok = static_cast<int>(F.size()) <= 2 * k - 1;
  } else {
    c.forest = detail::acyclic(n, F);
    c.size_ok = static_cast<int>(F.size()) <= std::max(k - 1, 0);
  }
  return c;
}

// Inclusion-minimal F ⊆ (complete graph on R) ∖ J with J ∪ F k-connected.
// Pairs are tried for deletion in lexicographic order.
inline CompletionSet minimal_completion(int n, const PairList& J, const std::vector<int>& R, int k, bool directed) {
  PairList F;
  for (int a : R)
    for (int b : R)
      if (a != b && (directed || a < b) && !detail::contains_pair(J, a, b, directed)) F.emplace_back(a, b);
  std::sort(F.begin(), F.end());
  if (!is_k_connected(n, detail::joined(J, F), directed, k))
    throw Error(Errc::kNotCompletable, "J plus the complete graph on R is not k-connected");
  for (std::size_t i = 0; i < F.size();) {
    PairList trial = F;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (is_k_connected(n, detail::joined(J, trial), directed, k)) F = std::move(trial);
    else ++i;
  }
  return certify(n, F, k, directed);
}

// max{3, 3/2+√(2k+1/4)} undirected, max{3, 1.5+√(2k+1.25)} directed.
inline double degree_threshold(int k, bool directed) {
  return std::max(3.0, 1.5 + std::sqrt(2.0 * k + (directed ? 1.25 : 0.25)));
}

// Exact form of "d exceeds the threshold": d ≥ 4 and (2d−3)² > 8k+1 (8k+5).
inline bool above_threshold(int d, int k, bool directed) {
  const long lhs = static_cast<long>(2 * d - 3) * (2 * d - 3);
  return d >= 4 && lhs > 8L * k + (directed ? 5 : 1);
}

struct DegreeReduceStats {
  int swaps = 0;
  int pruned = 0;  // F edges that became redundant after a swap
  int max_before = 0;
  int max_after = 0;
  int max_in_after = 0;  // digraphs
  double threshold = 0;
  bool connectivity_kept = true;  // checked after every swap
};

struct DegreeReduceResult {
  PairList F;
  DegreeReduceStats stats;
};

struct DegreeReduceOptions {
  // Called after every swap with the current F.
  std::function<void(const PairList&)> on_swap;
};

namespace detail {

inline PairList prune_critical(int n, const PairList& E, PairList F, int k, bool directed, int& pruned) {
  for (std::size_t i = 0; i < F.size();) {
    PairList trial = F;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (is_k_connected(n, joined(E, trial), directed, k)) {
      F = std::move(trial);
      ++pruned;
    } else {
      ++i;
    }
  }
  return F;
}

inline std::string dump_reduce(int n, const PairList& E, const PairList& F, int k, bool directed) {
  std::string s = "n=" + std::to_string(n) + " k=" + std::to_string(k) + (directed ? " directed" : " undirected") + "\nE:";
  for (auto [a, b] : E) s += " " + std::to_string(a) + "-" + std::to_string(b);
  s += "\nF:";
  for (auto [a, b] : F) s += " " + std::to_string(a) + "-" + std::to_string(b);
  return s;
}

// Lowers the maximum (out-)degree of F by swaps ut → vt.
inline PairList reduce_out(int n, const PairList& E, PairList F, int k, bool directed, DegreeReduceStats& st,
                           const DegreeReduceOptions& opt, const std::function<PairList(const PairList&)>& view) {
  for (;;) {
    F = prune_critical(n, E, F, k, directed, st.pruned);
    int u = -1, d = -1;
    for (int v = 0; v < n; ++v)
      if (f_degree(F, v, directed) > d) {
        d = f_degree(F, v, directed);
        u = v;
      }
    if (!above_threshold(d, k, directed)) return F;
    bool swapped = false;
    for (std::size_t i = 0; i < F.size() && !swapped; ++i) {
      auto [a, b] = F[i];
      if (a != u && (directed || b != u)) continue;
      const int t = a == u ? b : a;
      for (int v = 0; v < n && !swapped; ++v) {
        if (v == u || v == t || f_degree(F, v, directed) > d - 2) continue;
        if (contains_pair(E, v, t, directed) || contains_pair(F, v, t, directed)) continue;
        PairList trial = F;
        trial[i] = directed ? std::make_pair(v, t) : std::make_pair(std::min(v, t), std::max(v, t));
        if (!is_k_connected(n, joined(E, trial), directed, k)) continue;
        F = std::move(trial);
        ++st.swaps;
        st.connectivity_kept = st.connectivity_kept && is_k_connected(n, joined(E, F), directed, k);
        if (opt.on_swap) opt.on_swap(view(F));
        swapped = true;
      }
    }
    if (!swapped)
      throw Error(Errc::kNoSwapFound, "no degree-reducing swap above the threshold\n" + dump_reduce(n, E, F, k, directed));
  }
}

inline PairList flip(const PairList& p) {
  PairList out;
  for (auto [a, b] : p) out.emplace_back(b, a);
  return out;
}

}  // namespace detail

inline DegreeReduceResult degree_reduce(int n, const PairList& E, const PairList& F, int k, bool directed,
                                        const DegreeReduceOptions& opt = {}) {
  for (int v = 0; v < n; ++v) {
    const int out_deg = detail::f_degree(E, v, directed);
    const int in_deg = detail::f_degree(E, v, directed, true);
    if (out_deg < k - 1 || (directed && in_deg < k - 1))
      throw Error(Errc::kPrecondition, "degree_reduce needs every E-degree >= k-1");
  }
  PairList all = detail::joined(E, F);
  PairList sorted = all;
  for (auto& [a, b] : sorted)
    if (!directed && a > b) std::swap(a, b);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(Errc::kPrecondition, "degree_reduce needs E ∪ F simple");
  if (!is_k_connected(n, all, directed, k)) throw Error(Errc::kPrecondition, "degree_reduce needs E ∪ F k-connected");

  DegreeReduceResult r;
  r.stats.threshold = degree_threshold(k, directed);
  for (int v = 0; v < n; ++v) r.stats.max_before = std::max(r.stats.max_before, detail::f_degree(F, v, directed));
  auto same = [](const PairList& p) { return p; };
  PairList cur = detail::reduce_out(n, E, F, k, directed, r.stats, opt, same);
  if (directed) {
    // In-degrees: the same swaps on the reversed digraph; out-degrees are untouched.
    const PairList back = detail::reduce_out(n, detail::flip(E), detail::flip(cur), k, true, r.stats, opt,
                                             [](const PairList& p) { return detail::flip(p); });
    cur = detail::flip(back);
  }
  r.F = cur;
  for (int v = 0; v < n; ++v) {
    r.stats.max_after = std::max(r.stats.max_after, detail::f_degree(cur, v, directed));
    if (directed) r.stats.max_in_after = std::max(r.stats.max_in_after, detail::f_degree(cur, v, true, true));
  }
  return r;
}

// Minimum-cost I ⊆ E∖J such that J ∪ I has k internally disjoint u–t paths,
// then pruned to inclusion-minimal.
struct AugmentResult {
  std::vector<int> I;
  Rational cost;
};

namespace detail {

// Successive shortest paths with Bellman-Ford, integer capacities.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : adj_(nodes) {}
  int add(int u, int v, int cap, const Rational& cost) {
    const int id = static_cast<int>(to_.size());
    push(u, v, cap, cost);
    push(v, u, 0, -cost);
    return id;
  }
  [[nodiscard]] int flow_on(int id) const { return cap0_[id] - cap_[id]; }

  // Sends up to `want` units; returns the amount sent.
  int run(int s, int t, int want) {
    int sent = 0;
    const int n = static_cast<int>(adj_.size());
    while (sent < want) {
      std::vector<std::optional<Rational>> dist(n);
      std::vector<int> via(n, -1);
      dist[s] = Rational(0);
      for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
          if (!dist[u]) continue;
          for (int id : adj_[u]) {
            if (cap_[id] <= 0) continue;
            const Rational nd = *dist[u] + cost_[id];
            if (!dist[to_[id]] || nd < *dist[to_[id]]) {
              dist[to_[id]] = nd;
              via[to_[id]] = id;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (!dist[t]) break;
      for (int v = t; v != s; v = to_[via[v] ^ 1]) {
        --cap_[via[v]];
        ++cap_[via[v] ^ 1];
      }
      ++sent;
    }
    return sent;
  }

 private:
  void push(int u, int v, int cap, const Rational& cost) {
    adj_[u].push_back(static_cast<int>(to_.size()));
    to_.push_back(v);
    cap_.push_back(cap);
    cap0_.push_back(cap);
    cost_.push_back(cost);
  }
  std::vector<std::vector<int>> adj_;
  std::vector<int> to_, cap_, cap0_;
  std::vector<Rational> cost_;
};

}  // namespace detail

inline AugmentResult min_cost_augment(const Instance& inst, const std::vector<int>& J, int u, int t, int k) {
  const int n = inst.n;
  std::vector<bool> in_j(inst.m(), false);
  for (int id : J) in_j[id] = true;
  detail::MinCostFlow net(2 * n);
  auto in = [&](int x) { return x; };
  auto out = [&](int x) { return (x == u || x == t) ? x : n + x; };
  for (int x = 0; x < n; ++x)
    if (x != u && x != t) net.add(in(x), out(x), 1, 0);
  std::vector<std::pair<int, int>> arc_ids;  // (arc id, edge id)
  for (int id = 0; id < inst.m(); ++id) {
    const Edge& e = inst.edges[id];
    const Rational c = in_j[id] ? Rational(0) : e.cost;
    arc_ids.emplace_back(net.add(out(e.tail), in(e.head), 1, c), id);
    if (!inst.directed) arc_ids.emplace_back(net.add(out(e.head), in(e.tail), 1, c), id);
  }
  if (net.run(out(u), in(t), k) < k)
    throw Error(Errc::kInsufficientConnectivity, "fewer than k disjoint paths between " + std::to_string(u) + " and " +
                                                    std::to_string(t));
  std::vector<int> I;
  for (auto [arc, id] : arc_ids)
    if (!in_j[id] && net.flow_on(arc) > 0) I.push_back(id);
  std::sort(I.begin(), I.end());
  I.erase(std::unique(I.begin(), I.end()), I.end());
  I = prune_minimal(inst, I, [&](const std::vector<int>& ids) {
    std::vector<int> all = J;
    all.insert(all.end(), ids.begin(), ids.end());
    return local_connectivity(n, arc_list(inst, all), inst.directed, u, t, k) >= k;
  });
  AugmentResult r;
  r.I = I;
  r.cost = inst.cost_of(I);
  return r;
}

struct KConnNodeLine {
  int node = 0;
  int degree = 0;
  std::optional<int> bound;
  Rational claimed;  // reported degree bound
  bool pass = true;
};

struct KConnReport {
  std::vector<int> R;
  ExternalResult external;
  CompletionSet completion;  // before reduction
  DegreeReduceResult reduced;
  std::vector<std::pair<std::pair<int, int>, AugmentResult>> augments;
  int F_size = 0;
  int d = 0;  // max F-degree after reduction (out-degree for digraphs)
  Rational cost;
  Rational cost_factor;  // claimed: cost ≤ cost_factor · OPT
  std::vector<KConnNodeLine> degrees;
  bool k_connected = false;
  bool degree_pass = true;
};

struct KConnSolution {
  std::vector<int> edges;
  KConnReport report;
};

// Out-connectivity subroutine ratios: undirected (2α, αb'+β+k), directed (α, αb'+β).
inline KConnSolution db_k_connected(const Instance& inst, int k, int alpha) {
  if (!inst.is_simple()) throw Error(Errc::kPrecondition, "k-connectivity pipeline needs a simple graph");
  KConnSolution sol;
  KConnReport& rep = sol.report;
  rep.R = select_r(inst, k);
  rep.external = external_outconnectivity(inst, k, rep.R, alpha);
  const std::vector<int>& J = rep.external.J;
  const PairList jp = arc_list(inst, J);
  rep.completion = minimal_completion(inst.n, jp, rep.R, k, inst.directed);
  if (rep.completion.F.empty()) {
    rep.reduced.F = {};
  } else {
    rep.reduced = degree_reduce(inst.n, jp, rep.completion.F, k, inst.directed);
  }
  const PairList& F = rep.reduced.F;
  rep.F_size = static_cast<int>(F.size());
  for (int v = 0; v < inst.n; ++v) rep.d = std::max(rep.d, detail::f_degree(F, v, inst.directed));

  std::vector<int> all = J;
  for (auto [u, t] : F) {
    auto aug = min_cost_augment(inst, J, u, t, k);
    all.insert(all.end(), aug.I.begin(), aug.I.end());
    rep.augments.push_back({{u, t}, std::move(aug)});
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  sol.edges = all;
  rep.cost = inst.cost_of(all);
  rep.k_connected = is_k_connected(inst.n, arc_list(inst, all), inst.directed, k);

  const RoundingParams& p = rep.external.params;
  const Rational fsz = rep.F_size;
  const Rational kd2 = Rational(k * rep.d) / 2;
  rep.cost_factor = inst.directed ? Rational(alpha + 1 + rep.F_size) : Rational(2 * alpha + rep.F_size);
  for (int v : inst.bounded()) {
    KConnNodeLine line;
    line.node = v;
    line.degree = inst.degree(all, v);
    line.bound = inst.bound(v);
    const bool in_r = std::find(rep.R.begin(), rep.R.end(), v) != rep.R.end();
    const int b_prime = *line.bound + (in_r ? 1 : 0);
    if (inst.directed) line.claimed = alpha * b_prime + p.beta + k + fsz + kd2;
    else line.claimed = alpha * b_prime + p.beta + k - (in_r ? 1 : 0) + 2 * fsz + kd2;
    line.pass = Rational(line.degree) <= line.claimed;
    rep.degree_pass = rep.degree_pass && line.pass;
    rep.degrees.push_back(line);
  }
  return sol;
}

}  // namespace dbnd
