#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "dbnd/biset.hpp"
#include "dbnd/error.hpp"
#include "dbnd/rational.hpp"

namespace dbnd {

// Residual network with paired arcs; arc i and i^1 are mutual reverses.
// Shortest augmenting paths, so termination does not depend on the capacity type.
template <typename Cap>
class FlowNetwork {
 public:
  struct Arc {
    int from;
    int to;
    Cap cap;
    Cap flow;
  };

  explicit FlowNetwork(int nodes = 0) : adj_(nodes) {}

  int add_node() {
    adj_.emplace_back();
    return static_cast<int>(adj_.size()) - 1;
  }

  int add_arc(int from, int to, Cap cap) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({from, to, cap, Cap(0)});
    arcs_.push_back({to, from, Cap(0), Cap(0)});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  [[nodiscard]] int node_count() const { return static_cast<int>(adj_.size()); }
  [[nodiscard]] const Arc& arc(int id) const { return arcs_[id]; }
  [[nodiscard]] int arc_count() const { return static_cast<int>(arcs_.size()); }

  // Augments until no path remains or the flow value reaches `limit`.
  Cap max_flow(int s, int t, const std::optional<Cap>& limit = std::nullopt) {
    Cap total(0);
    std::vector<int> via(adj_.size());
    while (!limit || total < *limit) {
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> queue{s};
      via[s] = -2;
      while (!queue.empty() && via[t] == -1) {
        const int u = queue.front();
        queue.pop_front();
        for (int id : adj_[u]) {
          const Arc& a = arcs_[id];
          if (via[a.to] != -1 || !(a.flow < a.cap)) continue;
          via[a.to] = id;
          queue.push_back(a.to);
        }
      }
      if (via[t] == -1) break;
      Cap push = residual(via[t]);
      for (int v = arcs_[via[t]].from; v != s; v = arcs_[via[v]].from) {
        const Cap r = residual(via[v]);
        if (r < push) push = r;
      }
      if (limit && *limit - total < push) push = *limit - total;
      for (int v = t; v != s; v = arcs_[via[v]].from) {
        arcs_[via[v]].flow += push;
        arcs_[via[v] ^ 1].flow -= push;
      }
      total += push;
    }
    return total;
  }

  // Nodes reachable from s in the residual network.
  [[nodiscard]] std::vector<bool> reachable(int s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<int> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int id : adj_[u]) {
        const Arc& a = arcs_[id];
        if (!seen[a.to] && a.flow < a.cap) {
          seen[a.to] = true;
          queue.push_back(a.to);
        }
      }
    }
    return seen;
  }

  void reset() {
    for (auto& a : arcs_) a.flow = Cap(0);
  }

 private:
  Cap residual(int id) const { return arcs_[id].cap - arcs_[id].flow; }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
};

// Menger network over an original node set: split nodes get an (in, out) pair
// joined by a unit arc, the others keep a single copy.
class SplitNetwork {
 public:
  enum class Role { kSplit, kEdge };
  struct ArcInfo {
    Role role;
    int ref;  // original node for kSplit, caller supplied edge reference for kEdge
  };

  SplitNetwork(int n, NodeSet split) : n_(n), in_(n), out_(n) {
    for (int v = 0; v < n; ++v) {
      in_[v] = net_.add_node();
      if (split.contains(v)) {
        out_[v] = net_.add_node();
        add(in_[v], out_[v], Rational(1), {Role::kSplit, v});
      } else {
        out_[v] = in_[v];
      }
    }
  }

  // Arc u -> v (original nodes) with the given capacity.
  void add_edge_arc(int u, int v, const Rational& cap, int ref) { add(out_[u], in_[v], cap, {Role::kEdge, ref}); }

  void set_terminals(int source, int sink) {
    source_ = source;
    sink_ = sink;
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int source() const { return source_; }
  [[nodiscard]] int sink() const { return sink_; }
  [[nodiscard]] int in_copy(int v) const { return in_[v]; }
  [[nodiscard]] int out_copy(int v) const { return out_[v]; }
  [[nodiscard]] bool is_split(int v) const { return in_[v] != out_[v]; }
  [[nodiscard]] const FlowNetwork<Rational>& flow() const { return net_; }
  FlowNetwork<Rational>& flow() { return net_; }
  [[nodiscard]] const ArcInfo& info(int arc_id) const { return info_[arc_id / 2]; }

 private:
  void add(int from, int to, const Rational& cap, ArcInfo info) {
    net_.add_arc(from, to, cap);
    info_.push_back(info);
  }

  int n_;
  int source_ = -1;
  int sink_ = -1;
  std::vector<int> in_;
  std::vector<int> out_;
  FlowNetwork<Rational> net_;
  std::vector<ArcInfo> info_;
};

struct MaxFlowResult {
  Rational value;
  bool complete = true;     // false when stopped at the limit; the cut is then empty
  std::vector<int> min_cut;  // forward arc ids
};

inline MaxFlowResult max_flow(SplitNetwork& net, const std::optional<Rational>& stop_at = std::nullopt) {
  auto& f = net.flow();
  f.reset();
  const int s = net.out_copy(net.source());
  const int t = net.in_copy(net.sink());
  MaxFlowResult res;
  res.value = f.max_flow(s, t, stop_at);
  if (stop_at && res.value >= *stop_at) {
    res.complete = false;
    return res;
  }
  const auto side = f.reachable(s);
  for (int id = 0; id < f.arc_count(); id += 2) {
    const auto& a = f.arc(id);
    if (side[a.from] && !side[a.to]) res.min_cut.push_back(id);
  }
  return res;
}

// Sink side of the cut becomes the biset: S holds nodes whose copies are both on
// the sink side, Γ the split nodes whose unit arc is cut.
inline Biset cut_to_biset(const SplitNetwork& net, const std::vector<int>& cut) {
  const auto& f = net.flow();
  std::vector<bool> removed(f.arc_count() / 2, false);
  for (int id : cut) {
    if (id < 0 || id >= f.arc_count() || id % 2 != 0) throw Error(Errc::kMalformedCut, "bad arc id " + std::to_string(id));
    removed[id / 2] = true;
  }
  const int s = net.out_copy(net.source());
  const int t = net.in_copy(net.sink());
  std::vector<bool> side(f.node_count(), false);
  std::deque<int> queue{s};
  side[s] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int id = 0; id < f.arc_count(); id += 2) {
      const auto& a = f.arc(id);
      if (a.from != u || removed[id / 2] || side[a.to] || !(Rational(0) < a.cap)) continue;
      side[a.to] = true;
      queue.push_back(a.to);
    }
  }
  if (side[t]) throw Error(Errc::kMalformedCut, "sink reachable after removing the cut arcs");
  NodeSet inner, outer;
  for (int v = 0; v < net.n(); ++v) {
    if (side[net.out_copy(v)]) continue;
    outer = outer.with(v);
    if (!side[net.in_copy(v)]) inner = inner.with(v);
  }
  return Biset(inner, outer);
}

}  // namespace dbnd
