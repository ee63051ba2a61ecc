#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "dbnd/iterative_rounding.hpp"

namespace dbnd {

// Diagnostics on LP vertices: a laminar independent tight family and the
// token counts built on it. The solver never calls into this header.

enum class LaminarMode { kLaminar, kStronglyLaminar };

inline LaminarMode default_mode(bool directed) {
  return directed ? LaminarMode::kLaminar : LaminarMode::kStronglyLaminar;
}

// A vertex in residual form: edges E with values x, the residual function and
// the right-hand sides of the degree rows.
struct VertexData {
  const Instance* inst = nullptr;
  std::vector<int> E;
  std::vector<Rational> x;
  ConnectivityFunction f = ConnectivityFunction::k_connectivity(1, false, 0);
  std::vector<std::pair<int, Rational>> degree_rhs;     // v ∈ B
  std::vector<std::pair<int, Rational>> in_degree_rhs;  // v ∈ B⁻
  std::vector<Biset> seeds;  // tight biset rows of the LP, used above 8 nodes
  std::vector<int> ones;     // edges with x = 1 folded into f and the rhs
};

inline VertexData vertex_data(const Instance& inst, const LPResult& lp, const RoundingState& st,
                              const ConnectivityFunction& f, int alpha) {
  VertexData d;
  d.inst = &inst;
  d.E = lp.edge_ids.empty() ? st.E : lp.edge_ids;
  d.x = lp.x;
  d.f = f.residual(inst, st.J);
  for (int v : st.B) d.degree_rhs.emplace_back(v, residual_bound(inst, st.J, alpha, v));
  for (int v : st.B_in) d.in_degree_rhs.emplace_back(v, residual_in_bound(inst, st.J, alpha, v));
  for (const auto& ref : lp.tight)
    if (ref.kind == RowRef::Kind::kPool && lp.pool.rows[ref.index].biset) d.seeds.push_back(*lp.pool.rows[ref.index].biset);
  return d;
}

// Drops x = 0 edges and folds x = 1 edges into the residual. The result is a
// vertex of the restricted polytope with every value strictly between 0 and 1.
inline VertexData fractional_core(const VertexData& in) {
  const Instance& inst = *in.inst;
  VertexData d = in;
  d.E.clear();
  d.x.clear();
  std::vector<int> ones;
  for (std::size_t j = 0; j < in.E.size(); ++j) {
    if (sgn(in.x[j]) == 0) continue;
    if (in.x[j] == 1) ones.push_back(in.E[j]);
    else {
      d.E.push_back(in.E[j]);
      d.x.push_back(in.x[j]);
    }
  }
  d.f = in.f.residual(inst, ones);
  for (auto& [v, rhs] : d.degree_rhs) rhs -= inst.degree(ones, v);
  for (auto& [v, rhs] : d.in_degree_rhs) rhs -= inst.in_degree(ones, v);
  d.ones.insert(d.ones.end(), ones.begin(), ones.end());
  return d;
}

struct TightFamily {
  BisetFamily L;
  NodeSet C;     // tight degree rows
  NodeSet C_in;  // tight in-degree rows
  int rank = 0;
  int edges = 0;
  int uncross_steps = 0;
  int tight_bisets = 0;  // candidates scanned
};

struct Extraction {
  std::optional<TightFamily> family;
  std::string failure;
  std::optional<std::pair<Biset, Biset>> conflict;
  [[nodiscard]] bool ok() const { return family.has_value(); }
};

namespace detail {

inline std::vector<Rational> cover_vector(const VertexData& d, const Biset& s) {
  const Instance& inst = *d.inst;
  const CoverMode mode = requirement_mode(inst.directed);
  std::vector<Rational> v(d.E.size());
  for (std::size_t j = 0; j < d.E.size(); ++j) v[j] = covers(inst.edges[d.E[j]], s, mode, inst.directed) ? 1 : 0;
  return v;
}

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

}  // namespace detail

inline bool tight(const VertexData& d, const Biset& s) {
  return detail::dot(detail::cover_vector(d, s), d.x) == Rational(d.f(s));
}

inline bool compatible(const Biset& a, const Biset& b, LaminarMode mode) {
  return mode == LaminarMode::kLaminar ? laminar_compatible(a, b) : strongly_laminar_compatible(a, b);
}

// Independent tight family with |L|+|C| = |E|. Tight bisets are enumerated
// exhaustively up to 8 nodes and taken from the LP rows above that.
// A biset that crosses the current family is replaced by an uncrossed pair
// {X∩Y, X∪Y} or {X∖Y, Y∖X} whose members are tight and whose cover vectors
// sum to those of X and Y.
inline Extraction extract_tight_family(const VertexData& d, LaminarMode mode, int max_steps = 100000) {
  Extraction out;
  for (const auto& q : d.x)
    if (sgn(q) <= 0 || q >= 1) throw Error(Errc::kPrecondition, "extraction needs 0 < x(e) < 1 on every edge");
  const int m = static_cast<int>(d.E.size());
  const int n = d.inst->n;

  std::deque<Biset> work;
  auto consider = [&](const Biset& s) {
    if (d.f(s) >= 1 && tight(d, s)) work.push_back(s);
  };
  if (n <= 8) for_each_biset(n, consider);
  else for (const auto& s : d.seeds) consider(s);

  TightFamily tf;
  tf.edges = m;
  tf.tight_bisets = static_cast<int>(work.size());
  EchelonBasis basis(m);
  std::vector<std::vector<Rational>> l_vectors;

  while (!work.empty()) {
    const Biset s = work.front();
    work.pop_front();
    const auto chi = detail::cover_vector(d, s);
    if (detail::is_zero(chi) || basis.in_span(chi)) continue;
    const Biset* crossing = nullptr;
    for (const auto& y : tf.L)
      if (!compatible(s, y, mode)) {
        crossing = &y;
        break;
      }
    if (!crossing) {
      basis.add(chi);
      tf.L.add(s);
      continue;
    }
    if (++tf.uncross_steps > max_steps) {
      out.failure = "uncrossing step cap reached";
      out.conflict = std::make_pair(s, *crossing);
      return out;
    }
    const Biset y = *crossing;
    const auto chi_y = detail::cover_vector(d, y);
    std::vector<std::pair<Biset, Biset>> options = {{intersect(s, y), unite(s, y)}};
    if (mode == LaminarMode::kStronglyLaminar) options.emplace_back(subtract(s, y), subtract(y, s));
    bool done = false;
    for (const auto& [a, b] : options) {
      if (!tight(d, a) || !tight(d, b)) continue;
      const auto ca = detail::cover_vector(d, a), cb = detail::cover_vector(d, b);
      bool additive = true;
      for (int j = 0; j < m && additive; ++j) additive = chi[j] + chi_y[j] == ca[j] + cb[j];
      if (!additive) continue;
      // χ(s) = χ(a) + χ(b) − χ(y); one of a, b leaves the current span.
      work.push_front(b);
      work.push_front(a);
      done = true;
      break;
    }
    if (!done) {
      out.failure = "no tight uncrossing for a crossing pair";
      out.conflict = std::make_pair(s, y);
      return out;
    }
  }

  const Instance& inst = *d.inst;
  for (const auto& [v, rhs] : d.degree_rhs) {
    std::vector<Rational> row(m);
    for (int j = 0; j < m; ++j) {
      const Edge& e = inst.edges[d.E[j]];
      row[j] = (inst.directed ? e.tail == v : e.touches(v)) ? 1 : 0;
    }
    if (detail::dot(row, d.x) == rhs && basis.add(row)) tf.C = tf.C.with(v);
  }
  for (const auto& [v, rhs] : d.in_degree_rhs) {
    std::vector<Rational> row(m);
    for (int j = 0; j < m; ++j) row[j] = inst.edges[d.E[j]].head == v ? 1 : 0;
    if (detail::dot(row, d.x) == rhs && basis.add(row)) tf.C_in = tf.C_in.with(v);
  }
  tf.rank = basis.rank();
  if (tf.rank != m) {
    out.failure = "tight rows have rank " + std::to_string(tf.rank) + " < |E| = " + std::to_string(m);
    return out;
  }
  out.family = std::move(tf);
  return out;
}

// Exact rank of L ∪ C, recomputed from scratch.
inline int family_rank(const VertexData& d, const TightFamily& tf) {
  const Instance& inst = *d.inst;
  const int m = static_cast<int>(d.E.size());
  EchelonBasis basis(m);
  for (const auto& s : tf.L) basis.add(detail::cover_vector(d, s));
  for (int v : tf.C) {
    std::vector<Rational> row(m);
    for (int j = 0; j < m; ++j) {
      const Edge& e = inst.edges[d.E[j]];
      row[j] = (inst.directed ? e.tail == v : e.touches(v)) ? 1 : 0;
    }
    basis.add(row);
  }
  for (int v : tf.C_in) {
    std::vector<Rational> row(m);
    for (int j = 0; j < m; ++j) row[j] = inst.edges[d.E[j]].head == v ? 1 : 0;
    basis.add(row);
  }
  return basis.rank();
}

// E⁺_S and E⁻_S for one member of a laminar family.
struct ChainDecomposition {
  std::vector<int> plus;   // positions in E
  std::vector<int> minus;
};

inline ChainDecomposition chain_decomposition(const VertexData& d, const LaminarForest& forest, std::size_t i) {
  const Instance& inst = *d.inst;
  const CoverMode mode = requirement_mode(inst.directed);
  ChainDecomposition c;
  for (int j = 0; j < static_cast<int>(d.E.size()); ++j) {
    const Edge& e = inst.edges[d.E[j]];
    const bool self = covers(e, forest.family()[i], mode, inst.directed);
    bool child = false;
    for (std::size_t ch : forest.children(i)) child = child || covers(e, forest.family()[ch], mode, inst.directed);
    if (self && !child) c.plus.push_back(j);
    if (child && !self) c.minus.push_back(j);
  }
  return c;
}

struct TokenLine {
  Biset biset;
  bool leaf = false;
  int plus = 0;
  int minus = 0;
  std::optional<Rational> tokens;  // α·x(E⁺)+|E⁻|−α·x(E⁻), digraphs
  bool nonempty = true;            // E⁺ ∪ E⁻ ≠ ∅
  bool integral = true;
  // Positivity is claimed only when every edge of E⁻ has x < 1/α.
  bool positivity_claimed = false;
  bool positive = true;
  bool leaf_tight = true;  // leaves: x(δ(S)) = f(S) ≥ 1
  [[nodiscard]] bool pass() const { return nonempty && integral && (!positivity_claimed || positive) && leaf_tight; }
};

struct TokenAudit {
  std::vector<TokenLine> lines;
  CountAudit count;
  bool laminar = true;
  bool strongly_laminar = true;
  bool rank_ok = true;
  [[nodiscard]] bool pass() const {
    if (!laminar || !rank_ok || !count.pass()) return false;
    return std::all_of(lines.begin(), lines.end(), [](const TokenLine& l) { return l.pass(); });
  }
};

inline TokenAudit token_audit(const VertexData& d, const TightFamily& tf, LaminarMode mode, int alpha) {
  TokenAudit a;
  a.laminar = is_laminar(tf.L);
  a.strongly_laminar = is_strongly_laminar(tf.L);
  if (mode == LaminarMode::kStronglyLaminar && !a.strongly_laminar) a.laminar = false;
  a.rank_ok = family_rank(d, tf) == static_cast<int>(tf.L.size()) + tf.C.size() + tf.C_in.size() &&
              tf.rank == static_cast<int>(d.E.size());
  if (!is_laminar(tf.L)) return a;
  const LaminarForest forest(tf.L);
  const Rational inv = frac(1, alpha);
  for (std::size_t i = 0; i < forest.size(); ++i) {
    TokenLine line;
    line.biset = tf.L[i];
    line.leaf = forest.children(i).empty();
    const auto c = chain_decomposition(d, forest, i);
    line.plus = static_cast<int>(c.plus.size());
    line.minus = static_cast<int>(c.minus.size());
    line.nonempty = !c.plus.empty() || !c.minus.empty();
    if (d.inst->directed) {
      Rational xp = 0, xm = 0;
      for (int j : c.plus) xp += d.x[j];
      for (int j : c.minus) xm += d.x[j];
      const Rational t = alpha * xp + line.minus - alpha * xm;
      line.tokens = t;
      line.integral = is_integral(t);
      line.positivity_claimed = std::all_of(c.minus.begin(), c.minus.end(), [&](int j) { return d.x[j] < inv; });
      line.positive = sgn(t) > 0;
    }
    if (line.leaf) line.leaf_tight = d.f(line.biset) >= 1 && tight(d, line.biset);
    a.lines.push_back(std::move(line));
  }
  a.count = count_audit(forest, NodeSet(tf.C.bits() | tf.C_in.bits()), forest.max_boundary());
  return a;
}

}  // namespace dbnd
