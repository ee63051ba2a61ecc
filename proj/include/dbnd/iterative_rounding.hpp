#pragma once

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dbnd/connectivity.hpp"
#include "dbnd/cutting_plane.hpp"

namespace dbnd {

enum class PresetKind { kDirectedOut, kElementCost, kElementDegreeOnly };

struct RoundingParams {
  int alpha = 2;
  int beta = 0;
  int sigma = 0;
  bool move_unbounded_edges = false;
  // Fix every high edge per iteration. Not covered by the guarantees.
  bool batch_fix = false;
};

inline void check_params(const RoundingParams& p) {
  if (p.alpha < 1) throw Error(Errc::kBadAlpha, "alpha must be >= 1");
  if (p.beta < 0) throw Error(Errc::kBadParams, "beta must be >= 0");
  if (p.sigma > p.alpha) throw Error(Errc::kBadParams, "sigma must be <= alpha");
}

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

inline RoundingParams preset_params(PresetKind kind, int alpha, int gamma) {
  if (gamma < 0) throw Error(Errc::kBadParams, "gamma must be >= 0");
  RoundingParams p;
  p.alpha = alpha;
  switch (kind) {
    case PresetKind::kDirectedOut:
      if (alpha < 2) throw Error(Errc::kBadAlpha, "directed-out preset needs alpha >= 2");
      p.sigma = alpha;
      p.beta = ceil_div(2 * gamma, alpha - 1) + 1;
      break;
    case PresetKind::kElementCost:
      if (alpha < 4) throw Error(Errc::kBadAlpha, "element-cost preset needs alpha >= 4");
      p.sigma = 0;
      p.beta = ceil_div(4 * (gamma + 2), alpha - 2) + 5;
      break;
    case PresetKind::kElementDegreeOnly:
      if (alpha != 2) throw Error(Errc::kBadAlpha, "element-degree-only preset fixes alpha = 2");
      p.sigma = 0;
      // γ(γ+5) is even, so 1.5γ²+7.5γ+16 is an integer.
      p.beta = (3 * gamma * (gamma + 5)) / 2 + 16;
      p.move_unbounded_edges = true;
      break;
  }
  return p;
}

inline const char* preset_name(PresetKind kind) {
  switch (kind) {
    case PresetKind::kDirectedOut: return "directed-out";
    case PresetKind::kElementCost: return "element-cost";
    case PresetKind::kElementDegreeOnly: return "element-degree-only";
  }
  return "?";
}

enum class ActionKind { kDropZeroEdge, kFixHighEdge, kMoveUnboundedEdge, kDropBound, kDropInBound, kStuck };

inline const char* action_name(ActionKind a) {
  switch (a) {
    case ActionKind::kDropZeroEdge: return "drop-zero-edge";
    case ActionKind::kFixHighEdge: return "fix-high-edge";
    case ActionKind::kMoveUnboundedEdge: return "move-unbounded-edge";
    case ActionKind::kDropBound: return "drop-bound";
    case ActionKind::kDropInBound: return "drop-in-bound";
    case ActionKind::kStuck: return "stuck";
  }
  return "?";
}

struct Action {
  ActionKind kind = ActionKind::kStuck;
  int element = -1;  // edge id or node
  bool operator==(const Action&) const = default;
};

struct RoundingState {
  std::vector<int> E;  // increasing edge ids
  std::vector<int> J;
  NodeSet B;
  NodeSet B_in;
};

// deg_E(v) ≤ σ·b_J^α(v) + β, exact.
inline bool droppable(const Instance& inst, const RoundingState& st, const RoundingParams& p, int v, bool in) {
  const int deg = in ? inst.in_degree(st.E, v) : inst.degree(st.E, v);
  const Rational slack = in ? residual_in_bound(inst, st.J, p.alpha, v) : residual_bound(inst, st.J, p.alpha, v);
  return Rational(deg) <= Rational(p.sigma * slack + p.beta);
}

// First applicable action: zero edge, high edge (largest x, then lowest id),
// unbounded edge (degree-only variant), droppable node (lowest index).
inline Action progress_check(const Instance& inst, const LPResult& lp, const RoundingState& st, const RoundingParams& p) {
  const Rational threshold = frac(1, p.alpha);
  const int m = static_cast<int>(lp.x.size());
  auto id_of = [&](int j) { return lp.edge_ids.empty() ? st.E[j] : lp.edge_ids[j]; };
  for (int j = 0; j < m; ++j)
    if (sgn(lp.x[j]) == 0) return {ActionKind::kDropZeroEdge, id_of(j)};
  int best = -1;
  for (int j = 0; j < m; ++j)
    if (lp.x[j] >= threshold && (best < 0 || lp.x[j] > lp.x[best])) best = j;
  if (best >= 0) return {ActionKind::kFixHighEdge, id_of(best)};
  if (p.move_unbounded_edges) {
    for (int j = 0; j < m; ++j) {
      const Edge& e = inst.edges[id_of(j)];
      const bool bounded = inst.directed ? st.B.contains(e.tail) : st.B.contains(e.tail) || st.B.contains(e.head);
      if (!bounded) return {ActionKind::kMoveUnboundedEdge, id_of(j)};
    }
  }
  for (int v : st.B)
    if (droppable(inst, st, p, v, false)) return {ActionKind::kDropBound, v};
  for (int v : st.B_in)
    if (droppable(inst, st, p, v, true)) return {ActionKind::kDropInBound, v};
  return {ActionKind::kStuck, -1};
}

struct TraceRecord {
  int iteration = 0;
  Rational objective;
  bool lp_reused = false;
  Action action;
  Rational value;  // x(e) for edge actions, deg_E(v) for node actions
  int edges_left = 0;
  int bounds_left = 0;
  int cut_rounds = 0;
  bool integral = false;
};

struct RoundingTrace {
  std::vector<TraceRecord> records;
  int lp_solves = 0;
  long cut_rounds = 0;
  long pivots = 0;
};

struct RoundingResult {
  std::vector<int> J;
  Rational tau0;  // first LP objective
  RoundingTrace trace;
  bool has_theorem = true;
};

struct RunOptions {
  // Called on every freshly solved vertex.
  std::function<void(const LPResult&, const RoundingState&)> on_vertex;
};

inline bool is_integral_point(const std::vector<Rational>& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& q) { return is_integral(q); });
}

inline std::string dump_state(const Instance& inst, const LPResult& lp, const RoundingState& st, const RoundingParams& p) {
  std::ostringstream os;
  os << "alpha=" << p.alpha << " beta=" << p.beta << " sigma=" << p.sigma << "\n";
  os << "objective=" << lp.objective.get_str() << "\n";
  for (std::size_t j = 0; j < lp.x.size(); ++j) {
    const int id = lp.edge_ids.empty() ? st.E[j] : lp.edge_ids[j];
    const Edge& e = inst.edges[id];
    os << "  e" << id << " " << e.tail << (inst.directed ? "->" : "-") << e.head << " x=" << lp.x[j].get_str() << "\n";
  }
  for (int v : st.B)
    os << "  B " << v << " deg_E=" << inst.degree(st.E, v)
       << " b_J=" << residual_bound(inst, st.J, p.alpha, v).get_str() << "\n";
  for (int v : st.B_in)
    os << "  B- " << v << " indeg_E=" << inst.in_degree(st.E, v)
       << " b_J=" << residual_in_bound(inst, st.J, p.alpha, v).get_str() << "\n";
  os << "  J =";
  for (int id : st.J) os << " e" << id;
  return os.str();
}

// Drops variable position j from an optimal vertex. The restricted point is
// still an optimal vertex of the smaller polytope.
inline void restrict_lp(LPResult& lp, int j) {
  lp.x.erase(lp.x.begin() + j);
  lp.edge_ids.erase(lp.edge_ids.begin() + j);
  for (auto& row : lp.pool.rows) row.coeffs.erase(row.coeffs.begin() + j);
  --lp.pool.num_vars;
  lp.tight.clear();
  lp.certificate.clear();
}

inline RoundingResult run(const Instance& inst, const ConnectivityFunction& f, const RoundingParams& params,
                          const RunOptions& options = {}) {
  check_params(params);
  RoundingResult out;
  out.has_theorem = f.has_theorem();
  RoundingState st;
  for (int id = 0; id < inst.m(); ++id) st.E.push_back(id);
  st.B = inst.bounded();
  st.B_in = inst.in_bounded();

  CuttingPlaneLp engine(inst, f);
  LPResult lp;
  bool need_solve = true;
  bool first = true;
  int iteration = 0;
  for (;;) {
    bool reused = !need_solve;
    if (need_solve && (first || !st.E.empty())) {
      lp = engine.solve(st.E, st.J, st.B, st.B_in, params.alpha);
      ++out.trace.lp_solves;
      if (first) out.tau0 = lp.objective;
      first = false;
      if (options.on_vertex) options.on_vertex(lp, st);
    }
    if (st.E.empty()) break;

    const Action act = progress_check(inst, lp, st, params);
    if (act.kind == ActionKind::kStuck)
      throw Error(Errc::kStuck, "no rounding action applies\n" + dump_state(inst, lp, st, params));

    TraceRecord rec;
    rec.iteration = iteration++;
    rec.objective = lp.objective;
    rec.lp_reused = reused;
    rec.action = act;
    rec.cut_rounds = reused ? 0 : lp.rounds;
    rec.integral = is_integral_point(lp.x);

    auto pos = [&](int id) {
      return static_cast<int>(std::find(lp.edge_ids.begin(), lp.edge_ids.end(), id) - lp.edge_ids.begin());
    };
    auto remove_from_e = [&](int id) { st.E.erase(std::find(st.E.begin(), st.E.end(), id)); };

    switch (act.kind) {
      case ActionKind::kDropZeroEdge: {
        const int j = pos(act.element);
        rec.value = lp.x[j];
        remove_from_e(act.element);
        restrict_lp(lp, j);
        lp.objective = 0;
        for (int q = 0; q < static_cast<int>(lp.x.size()); ++q) lp.objective += lp.x[q] * inst.edges[lp.edge_ids[q]].cost;
        need_solve = false;
        break;
      }
      case ActionKind::kFixHighEdge:
      case ActionKind::kMoveUnboundedEdge: {
        rec.value = lp.x[pos(act.element)];
        std::vector<int> fix{act.element};
        if (params.batch_fix && act.kind == ActionKind::kFixHighEdge) {
          const Rational threshold = frac(1, params.alpha);
          for (std::size_t j = 0; j < lp.x.size(); ++j)
            if (lp.edge_ids[j] != act.element && lp.x[j] >= threshold) fix.push_back(lp.edge_ids[j]);
        }
        for (int id : fix) {
          remove_from_e(id);
          st.J.push_back(id);
        }
        need_solve = true;
        break;
      }
      case ActionKind::kDropBound:
        rec.value = inst.degree(st.E, act.element);
        st.B = st.B.without(act.element);
        need_solve = true;
        break;
      case ActionKind::kDropInBound:
        rec.value = inst.in_degree(st.E, act.element);
        st.B_in = st.B_in.without(act.element);
        need_solve = true;
        break;
      case ActionKind::kStuck: break;
    }
    rec.edges_left = static_cast<int>(st.E.size());
    rec.bounds_left = st.B.size() + st.B_in.size();
    out.trace.records.push_back(std::move(rec));
  }
  out.trace.cut_rounds = engine.total_rounds();
  out.trace.pivots = engine.total_pivots();
  std::sort(st.J.begin(), st.J.end());
  out.J = std::move(st.J);
  return out;
}

// Guarantee ledger for a finished run.
inline int degree_limit(const RoundingParams& p, int b) {
  return p.sigma == 0 ? p.alpha * b + std::max(p.beta - 1, 0) : p.alpha * b + p.beta;
}

struct DegreeCheck {
  int node = 0;
  bool in = false;
  int degree = 0;
  int bound = 0;
  int limit = 0;
  bool pass = true;
};

struct GuaranteeReport {
  bool cost_claimed = true;
  Rational cost;
  Rational tau0;
  Rational cost_limit;
  bool cost_pass = true;
  std::vector<DegreeCheck> degrees;
  bool degree_pass = true;

  [[nodiscard]] bool pass() const { return (!cost_claimed || cost_pass) && degree_pass; }
};

inline GuaranteeReport check_guarantees(const Instance& inst, const std::vector<int>& J, const Rational& tau0,
                                        const RoundingParams& p) {
  GuaranteeReport r;
  r.cost_claimed = !p.move_unbounded_edges;
  r.cost = inst.cost_of(J);
  r.tau0 = tau0;
  r.cost_limit = p.alpha * tau0;
  r.cost_pass = r.cost <= r.cost_limit;
  auto add = [&](int v, bool in, int b) {
    DegreeCheck d;
    d.node = v;
    d.in = in;
    d.degree = in ? inst.in_degree(J, v) : inst.degree(J, v);
    d.bound = b;
    d.limit = degree_limit(p, b);
    d.pass = d.degree <= d.limit;
    r.degree_pass = r.degree_pass && d.pass;
    r.degrees.push_back(d);
  };
  for (int v : inst.bounded()) add(v, false, inst.bound(v));
  for (int v : inst.in_bounded()) add(v, true, inst.in_bound(v));
  return r;
}

inline std::vector<std::pair<int, int>> arc_list(const Instance& inst, const std::vector<int>& ids) {
  std::vector<std::pair<int, int>> out;
  for (int id : ids) out.emplace_back(inst.edges[id].tail, inst.edges[id].head);
  return out;
}

// Greedy deletion to an inclusion-minimal subset that keeps `keep` true.
// Tries expensive edges first, then higher ids.
inline std::vector<int> prune_minimal(const Instance& inst, std::vector<int> ids,
                                      const std::function<bool(const std::vector<int>&)>& keep) {
  std::vector<int> order = ids;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.edges[a].cost != inst.edges[b].cost) return inst.edges[a].cost > inst.edges[b].cost;
    return a > b;
  });
  for (int id : order) {
    std::vector<int> trial;
    for (int x : ids)
      if (x != id) trial.push_back(x);
    if (keep(trial)) ids = std::move(trial);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct UndirectedOutResult {
  std::vector<int> edges;  // undirected edge ids of the input instance
  Instance bidirected;
  std::vector<int> arcs;  // pruned directed solution in `bidirected`
  RoundingParams params;
  Rational tau0;  // LP value of the bidirected problem
  Rational cost;
  std::vector<DegreeCheck> degrees;  // limit α·b(v)+β+k
  bool cost_pass = true;
  bool degree_pass = true;
};

// k-outconnectivity from s in an undirected graph through the bidirected
// digraph. The directed solution is pruned to an inclusion-minimal
// k-outconnected one, so every v ≠ s has in-degree exactly k.
inline UndirectedOutResult undirected_outconnected(const Instance& inst, int k, int s, int alpha) {
  if (inst.directed) throw Error(Errc::kPrecondition, "undirected_outconnected needs an undirected instance");
  UndirectedOutResult out;
  Instance& d = out.bidirected;
  d.directed = true;
  d.n = inst.n;
  d.bounds = inst.bounds;
  d.requirement = OutConnRequirement{s, k};
  std::vector<int> origin;
  for (int id = 0; id < inst.m(); ++id) {
    const Edge& e = inst.edges[id];
    d.edges.push_back(Edge{e.tail, e.head, e.cost});
    d.edges.push_back(Edge{e.head, e.tail, e.cost});
    origin.push_back(id);
    origin.push_back(id);
  }
  out.params = preset_params(PresetKind::kDirectedOut, alpha, std::max(k - 1, 0));
  const auto f = ConnectivityFunction::out_connectivity(d.n, true, s, k);
  const RoundingResult rr = run(d, f, out.params);
  out.tau0 = rr.tau0;
  out.arcs = prune_minimal(d, rr.J, [&](const std::vector<int>& ids) {
    return is_k_outconnected(d.n, arc_list(d, ids), s, k);
  });
  for (int a : out.arcs) out.edges.push_back(origin[a]);
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  out.cost = inst.cost_of(out.edges);
  out.cost_pass = out.cost <= alpha * out.tau0;
  for (int v : inst.bounded()) {
    DegreeCheck c;
    c.node = v;
    c.degree = inst.degree(out.edges, v);
    c.bound = inst.bound(v);
    c.limit = alpha * c.bound + out.params.beta + k;
    c.pass = c.degree <= c.limit;
    out.degree_pass = out.degree_pass && c.pass;
    out.degrees.push_back(c);
  }
  return out;
}

}  // namespace dbnd
