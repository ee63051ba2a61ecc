#pragma once

#include <map>
#include <vector>

#include "dbnd/connectivity_function.hpp"
#include "dbnd/instance.hpp"
#include "dbnd/separation.hpp"
#include "dbnd/simplex.hpp"

namespace dbnd {

inline long cutting_plane_round_cap(int n) {
  long cap = 10;
  for (int i = 0; i < n; ++i) cap *= 3;
  return cap;
}

// min{c·x : x ∈ P(f_J, b_J^α, E)} by cutting planes over the biset rows.
//
// Biset cuts persist across calls. Each call re-projects them onto the current
// E and f_J, drops rows whose right-hand side fell to ≤ 0, merges rows with the
// same coefficient pattern (largest RHS kept), and keeps only the rows that were
// tight at the previous optimum; separation adds back whatever is still needed.
// A vertex of the relaxed polytope that satisfies every biset row is a vertex of
// P, so the returned x is an extreme point of P.
class CuttingPlaneLp {
 public:
  CuttingPlaneLp(const Instance& inst, ConnectivityFunction f) : inst_(&inst), f_(std::move(f)) {}

  LPResult solve(const std::vector<int>& E, const std::vector<int>& J, NodeSet B, NodeSet B_in, int alpha) {
    if (alpha < 1) throw Error(Errc::kBadAlpha, "alpha must be >= 1");
    const Instance& inst = *inst_;
    const ConnectivityFunction fj = f_.residual(inst, J);
    const int m = static_cast<int>(E.size());
    const CoverMode mode = requirement_mode(inst.directed);

    ConstraintPool pool;
    pool.num_vars = m;
    std::vector<Rational> cost(m);
    for (int j = 0; j < m; ++j) cost[j] = inst.edges[E[j]].cost;

    for (int v : B) {
      LinearRow row;
      row.coeffs.assign(m, Rational(0));
      for (int j = 0; j < m; ++j) {
        const Edge& e = inst.edges[E[j]];
        if (inst.directed ? e.tail == v : e.touches(v)) row.coeffs[j] = 1;
      }
      row.sense = Sense::kLessEqual;
      row.rhs = residual_bound(inst, J, alpha, v);
      row.kind = RowKind::kDegree;
      row.node = v;
      pool.rows.push_back(std::move(row));
    }
    for (int v : B_in) {
      LinearRow row;
      row.coeffs.assign(m, Rational(0));
      for (int j = 0; j < m; ++j)
        if (inst.edges[E[j]].head == v) row.coeffs[j] = 1;
      row.sense = Sense::kLessEqual;
      row.rhs = residual_in_bound(inst, J, alpha, v);
      row.kind = RowKind::kInDegree;
      row.node = v;
      pool.rows.push_back(std::move(row));
    }

    auto biset_row = [&](const Biset& s) {
      LinearRow row;
      row.coeffs.assign(m, Rational(0));
      for (int j = 0; j < m; ++j)
        if (covers(inst.edges[E[j]], s, mode, inst.directed)) row.coeffs[j] = 1;
      row.rhs = fj(s);
      row.kind = RowKind::kBiset;
      row.biset = s;
      return row;
    };

    if (!seeded_) {
      for (int v = 0; v < inst.n; ++v) cuts_.push_back(Biset::of_set(NodeSet::single(v)));
      seeded_ = true;
    }
    // Re-projection with pattern dedupe.
    std::map<std::vector<bool>, std::size_t> by_pattern;
    std::vector<Biset> kept;
    for (const auto& s : cuts_) {
      LinearRow row = biset_row(s);
      if (row.rhs <= 0) continue;
      std::vector<bool> key(m);
      for (int j = 0; j < m; ++j) key[j] = sgn(row.coeffs[j]) != 0;
      auto it = by_pattern.find(key);
      if (it != by_pattern.end()) {
        auto& other = pool.rows[it->second];
        if (row.rhs > other.rhs) other = std::move(row);
        continue;
      }
      by_pattern.emplace(std::move(key), pool.rows.size());
      pool.rows.push_back(std::move(row));
    }

    DualSimplex lp(cost);
    for (const auto& row : pool.rows) lp.add_row(row);

    FractionalSolution point;
    for (int id : E) point.edges.emplace_back(inst.edges[id].tail, inst.edges[id].head);

    const long cap = cutting_plane_round_cap(inst.n);
    int rounds = 0;
    for (;;) {
      if (lp.solve() == DualSimplex::Status::kInfeasible) throw Error(Errc::kInfeasible, "LP relaxation is empty");
      point.x = lp.primal();
      ++rounds;
      const auto violated = separate_all(point, fj);
      if (violated.empty()) break;
      if (rounds >= cap) throw Error(Errc::kIterationCap, "cutting-plane round cap reached");
      for (const auto& vc : violated) {
        LinearRow row = biset_row(vc.biset);
        lp.add_row(row);
        pool.rows.push_back(std::move(row));
      }
    }

    LPResult res;
    res.x = point.x;
    res.pool = std::move(pool);
    res.edge_ids = E;
    res.pivots = lp.pivots();
    res.rounds = rounds;
    fill_vertex_data(res, cost);

    cuts_.clear();
    for (const auto& ref : res.tight)
      if (ref.kind == RowRef::Kind::kPool && res.pool.rows[ref.index].biset)
        cuts_.push_back(*res.pool.rows[ref.index].biset);
    total_rounds_ += rounds;
    total_pivots_ += res.pivots;
    return res;
  }

  [[nodiscard]] const ConnectivityFunction& function() const { return f_; }
  [[nodiscard]] const std::vector<Biset>& cuts() const { return cuts_; }
  [[nodiscard]] long total_rounds() const { return total_rounds_; }
  [[nodiscard]] long total_pivots() const { return total_pivots_; }

 private:
  const Instance* inst_;
  ConnectivityFunction f_;
  std::vector<Biset> cuts_;
  bool seeded_ = false;
  long total_rounds_ = 0;
  long total_pivots_ = 0;
};

// One-shot form: E = all edges not in J, B and B⁻ as in the instance.
inline LPResult cutting_plane(const Instance& inst, const ConnectivityFunction& f, const std::vector<int>& J, int alpha) {
  std::vector<bool> in_j(inst.m(), false);
  for (int id : J) in_j[id] = true;
  std::vector<int> E;
  for (int id = 0; id < inst.m(); ++id)
    if (!in_j[id]) E.push_back(id);
  CuttingPlaneLp lp(inst, f);
  return lp.solve(E, J, inst.bounded(), inst.in_bounded(), alpha);
}

struct Classification {
  std::vector<int> zeros;
  std::vector<int> high;  // x ≥ 1/α
  std::vector<int> fractional;
};

// Partition by exact comparison; entries are instance edge ids when the result
// carries them, variable positions otherwise.
inline Classification classify(const LPResult& lp, int alpha) {
  if (alpha < 1) throw Error(Errc::kBadAlpha, "alpha must be >= 1");
  const Rational threshold = frac(1, alpha);
  Classification c;
  for (int j = 0; j < static_cast<int>(lp.x.size()); ++j) {
    const int id = lp.edge_ids.empty() ? j : lp.edge_ids[j];
    if (sgn(lp.x[j]) == 0) c.zeros.push_back(id);
    else if (lp.x[j] >= threshold) c.high.push_back(id);
    else c.fractional.push_back(id);
  }
  return c;
}

}  // namespace dbnd
