#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dbnd/biset.hpp"
#include "dbnd/error.hpp"
#include "dbnd/rational.hpp"

namespace dbnd {

enum class Sense { kGreaterEqual, kLessEqual };
enum class RowKind { kGeneric, kBiset, kDegree, kInDegree };

struct LinearRow {
  std::vector<Rational> coeffs;  // dense over the variables
  Sense sense = Sense::kGreaterEqual;
  Rational rhs;
  RowKind kind = RowKind::kGeneric;
  std::optional<Biset> biset;  // for kBiset rows
  int node = -1;               // for degree rows
};

// Rows of the LP; every variable additionally carries the box 0 ≤ x ≤ 1.
struct ConstraintPool {
  int num_vars = 0;
  std::vector<LinearRow> rows;
};

struct RowRef {
  enum class Kind { kPool, kLower, kUpper };
  Kind kind;
  int index;  // pool row, or variable for box rows
  bool operator==(const RowRef&) const = default;
};

struct LPResult {
  std::vector<Rational> x;
  Rational objective;
  ConstraintPool pool;              // rows the solution was computed against
  std::vector<RowRef> tight;        // all rows active at x
  std::vector<RowRef> certificate;  // |x| linearly independent tight rows
  std::vector<int> edge_ids;        // instance edge of each variable (cutting plane only)
  long pivots = 0;
  int rounds = 0;
};

inline Rational row_activity(const LinearRow& row, const std::vector<Rational>& x) {
  Rational s = 0;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (sgn(row.coeffs[j]) != 0) s += row.coeffs[j] * x[j];
  return s;
}

inline bool row_satisfied(const LinearRow& row, const std::vector<Rational>& x) {
  const Rational a = row_activity(row, x);
  return row.sense == Sense::kGreaterEqual ? a >= row.rhs : a <= row.rhs;
}

// Incremental exact row-echelon basis used for rank and independence checks.
class EchelonBasis {
 public:
  explicit EchelonBasis(int dim) : dim_(dim) {}

  // Adds v when it is independent of the rows so far; returns whether it was added.
  bool add(std::vector<Rational> v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int p = pivot_[i];
      if (sgn(v[p]) == 0) continue;
      const Rational factor = v[p];
      for (int j = p; j < dim_; ++j)
        if (sgn(rows_[i][j]) != 0) v[j] -= factor * rows_[i][j];
    }
    int p = 0;
    while (p < dim_ && sgn(v[p]) == 0) ++p;
    if (p == dim_) return false;
    const Rational lead = v[p];
    for (int j = p; j < dim_; ++j) v[j] /= lead;
    // Keep earlier rows reduced in the new pivot column.
    for (auto& r : rows_) {
      if (sgn(r[p]) == 0) continue;
      const Rational factor = r[p];
      for (int j = p; j < dim_; ++j)
        if (sgn(v[j]) != 0) r[j] -= factor * v[j];
    }
    rows_.push_back(std::move(v));
    pivot_.push_back(p);
    return true;
  }
  [[nodiscard]] bool in_span(std::vector<Rational> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int p = pivot_[i];
      if (sgn(v[p]) == 0) continue;
      const Rational factor = v[p];
      for (int j = 0; j < dim_; ++j)
        if (sgn(rows_[i][j]) != 0) v[j] -= factor * rows_[i][j];
    }
    for (const auto& c : v)
      if (sgn(c) != 0) return false;
    return true;
  }
  [[nodiscard]] int rank() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] int dim() const { return dim_; }

 private:
  int dim_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<int> pivot_;
};

inline std::vector<Rational> row_vector(const ConstraintPool& pool, const RowRef& ref) {
  if (ref.kind == RowRef::Kind::kPool) return pool.rows[ref.index].coeffs;
  std::vector<Rational> v(pool.num_vars, Rational(0));
  v[ref.index] = 1;
  return v;
}

inline std::vector<RowRef> tight_rows(const ConstraintPool& pool, const std::vector<Rational>& x) {
  std::vector<RowRef> out;
  for (int i = 0; i < static_cast<int>(pool.rows.size()); ++i)
    if (row_activity(pool.rows[i], x) == pool.rows[i].rhs) out.push_back({RowRef::Kind::kPool, i});
  for (int j = 0; j < pool.num_vars; ++j) {
    if (sgn(x[j]) == 0) out.push_back({RowRef::Kind::kLower, j});
    if (x[j] == 1) out.push_back({RowRef::Kind::kUpper, j});
  }
  return out;
}

// A maximal independent subset of the tight rows; its size equals the number of
// variables exactly when x is a vertex.
inline std::vector<RowRef> vertex_certificate(const ConstraintPool& pool, const std::vector<RowRef>& tight) {
  EchelonBasis basis(pool.num_vars);
  std::vector<RowRef> cert;
  for (const auto& ref : tight) {
    if (basis.rank() == pool.num_vars) break;
    if (basis.add(row_vector(pool, ref))) cert.push_back(ref);
  }
  return cert;
}

// Dense-tableau dual simplex over bounded variables 0 ≤ x ≤ 1. Every row gets a
// slack: a·x - s = r for ≥ rows, a·x + s = r for ≤ rows, s ≥ 0. Starting from
// the all-slack basis with each x_j at the bound matching the sign of c_j keeps
// the tableau dual feasible, so rows can be appended and re-optimized without a
// phase one. Smallest-index choices on both the leaving row and the entering
// column prevent cycling.
class DualSimplex {
 public:
  enum class Status { kOptimal, kInfeasible };

  explicit DualSimplex(std::vector<Rational> cost) : n_(static_cast<int>(cost.size())), cost_(std::move(cost)) {
    d_ = cost_;
    at_upper_.assign(n_, 0);
    for (int j = 0; j < n_; ++j) at_upper_[j] = cost_[j] < 0;
    row_of_.assign(n_, -1);
  }

  void add_row(const LinearRow& row) {
    const int col = n_ + m_;
    const bool ge = row.sense == Sense::kGreaterEqual;
    for (auto& r : t_) r.emplace_back(0);
    std::vector<Rational> fresh(col + 1, Rational(0));
    for (int j = 0; j < n_; ++j)
      if (sgn(row.coeffs[j]) != 0) fresh[j] = ge ? Rational(-row.coeffs[j]) : row.coeffs[j];
    fresh[col] = 1;
    Rational rhs = ge ? Rational(-row.rhs) : row.rhs;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (sgn(fresh[b]) == 0) continue;
      const Rational factor = fresh[b];
      for (int j = 0; j <= col; ++j)
        if (sgn(t_[i][j]) != 0) fresh[j] -= factor * t_[i][j];
      rhs -= factor * rhs_[i];
    }
    t_.push_back(std::move(fresh));
    rhs_.push_back(std::move(rhs));
    basis_.push_back(col);
    d_.emplace_back(0);
    at_upper_.push_back(0);
    row_of_.push_back(m_);
    ++m_;
  }

  Status solve(long max_pivots = 1'000'000) {
    std::vector<Rational> beta;
    for (;;) {
      basic_values(beta);
      // Leaving: infeasible basic variable with the smallest column index.
      int r = -1;
      bool below = false;
      for (int i = 0; i < m_; ++i) {
        const int b = basis_[i];
        const bool lo = sgn(beta[i]) < 0;
        const bool hi = b < n_ && beta[i] > 1;
        if ((lo || hi) && (r < 0 || b < basis_[r])) {
          r = i;
          below = lo;
        }
      }
      if (r < 0) return Status::kOptimal;
      if (pivots_ >= max_pivots) throw Error(Errc::kIterationCap, "dual simplex pivot cap reached");
      // Entering: minimum |d_j / t_rj| over eligible nonbasic columns, smallest index on ties.
      int q = -1;
      Rational best, ratio;
      const auto& tr = t_[r];
      for (int j = 0; j < n_ + m_; ++j) {
        if (row_of_[j] >= 0 || sgn(tr[j]) == 0) continue;
        const bool up = at_upper_[j];
        const bool eligible = below ? ((!up && sgn(tr[j]) < 0) || (up && sgn(tr[j]) > 0))
                                    : ((!up && sgn(tr[j]) > 0) || (up && sgn(tr[j]) < 0));
        if (!eligible) continue;
        ratio = abs(d_[j] / tr[j]);
        if (q < 0 || ratio < best) {
          q = j;
          best = ratio;
        }
      }
      if (q < 0) return Status::kInfeasible;
      const int leaving = basis_[r];
      pivot(r, q);
      at_upper_[leaving] = below ? 0 : 1;
      at_upper_[q] = 0;
    }
  }

  [[nodiscard]] std::vector<Rational> primal() const {
    std::vector<Rational> beta;
    basic_values(beta);
    std::vector<Rational> x(n_);
    for (int j = 0; j < n_; ++j) x[j] = row_of_[j] >= 0 ? beta[row_of_[j]] : Rational(at_upper_[j] ? 1 : 0);
    return x;
  }

  [[nodiscard]] long pivots() const { return pivots_; }
  [[nodiscard]] int rows() const { return m_; }

 private:
  void basic_values(std::vector<Rational>& beta) const {
    beta = rhs_;
    for (int j = 0; j < n_; ++j) {
      if (row_of_[j] >= 0 || !at_upper_[j]) continue;
      for (int i = 0; i < m_; ++i)
        if (sgn(t_[i][j]) != 0) beta[i] -= t_[i][j];
    }
  }

  void pivot(int r, int q) {
    ++pivots_;
    auto& tr = t_[r];
    const int cols = n_ + m_;
    const Rational inv = 1 / tr[q];
    std::vector<int> nz;
    for (int j = 0; j < cols; ++j) {
      if (sgn(tr[j]) == 0) continue;
      tr[j] *= inv;
      nz.push_back(j);
    }
    rhs_[r] *= inv;
    Rational tmp;
    for (int i = 0; i < m_; ++i) {
      if (i == r || sgn(t_[i][q]) == 0) continue;
      const Rational factor = t_[i][q];
      auto& ti = t_[i];
      for (int j : nz) {
        tmp = factor * tr[j];
        ti[j] -= tmp;
      }
      tmp = factor * rhs_[r];
      rhs_[i] -= tmp;
    }
    if (sgn(d_[q]) != 0) {
      const Rational factor = d_[q];
      for (int j : nz) {
        tmp = factor * tr[j];
        d_[j] -= tmp;
      }
    }
    row_of_[basis_[r]] = -1;
    basis_[r] = q;
    row_of_[q] = r;
  }

  int n_;
  int m_ = 0;
  std::vector<Rational> cost_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> rhs_;
  std::vector<Rational> d_;
  std::vector<int> basis_;
  std::vector<char> at_upper_;
  std::vector<int> row_of_;
  long pivots_ = 0;
};

inline void fill_vertex_data(LPResult& res, const std::vector<Rational>& cost) {
  res.objective = 0;
  for (std::size_t j = 0; j < cost.size(); ++j) res.objective += cost[j] * res.x[j];
  res.tight = tight_rows(res.pool, res.x);
  res.certificate = vertex_certificate(res.pool, res.tight);
}

// Optimal vertex of min{c·x : pool rows, 0 ≤ x ≤ 1}. Throws Errc::kInfeasible.
inline LPResult solve_vertex(const std::vector<Rational>& cost, const ConstraintPool& pool) {
  DualSimplex lp(cost);
  for (const auto& row : pool.rows) lp.add_row(row);
  if (lp.solve() == DualSimplex::Status::kInfeasible) throw Error(Errc::kInfeasible, "LP has no feasible point");
  LPResult res;
  res.x = lp.primal();
  res.pool = pool;
  res.pivots = lp.pivots();
  fill_vertex_data(res, cost);
  return res;
}

}  // namespace dbnd
