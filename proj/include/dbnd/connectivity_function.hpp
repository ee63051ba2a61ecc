#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dbnd/biset.hpp"
#include "dbnd/error.hpp"
#include "dbnd/instance.hpp"
#include "dbnd/rational.hpp"

namespace dbnd {

enum class CoverMode { kIn, kOut, kUndirected };

// Directed in: tail ∉ S⁺, head ∈ S. Directed out: tail ∈ S, head ∉ S⁺.
// Undirected: one end in S, the other outside S⁺.
inline bool covers(int tail, int head, const Biset& s, CoverMode mode) {
  const NodeSet in = s.inner();
  const NodeSet out = s.outer();
  switch (mode) {
    case CoverMode::kIn: return !out.contains(tail) && in.contains(head);
    case CoverMode::kOut: return in.contains(tail) && !out.contains(head);
    case CoverMode::kUndirected:
      return (in.contains(tail) && !out.contains(head)) || (in.contains(head) && !out.contains(tail));
  }
  return false;
}

inline void check_mode(CoverMode mode, bool directed) {
  if (directed == (mode == CoverMode::kUndirected))
    throw Error(Errc::kModeMismatch, directed ? "undirected cover mode on a digraph" : "directed cover mode on an undirected graph");
}

inline bool covers(const Edge& e, const Biset& s, CoverMode mode, bool directed) {
  check_mode(mode, directed);
  return covers(e.tail, e.head, s, mode);
}

// Indices (into `edges`) of the edges covering s.
inline std::vector<int> delta(const std::vector<Edge>& edges, const Biset& s, CoverMode mode, bool directed) {
  check_mode(mode, directed);
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i)
    if (covers(edges[i].tail, edges[i].head, s, mode)) out.push_back(i);
  return out;
}

inline CoverMode requirement_mode(bool directed) { return directed ? CoverMode::kIn : CoverMode::kUndirected; }

// g: k - |Γ| when S ≠ ∅ and s ∉ S⁺.
inline int eval_g(const Biset& s, int root, int k) {
  if (s.inner().empty() || s.outer().contains(root)) return 0;
  return k - s.boundary().size();
}

// h: max r(u,v) - |Γ| over u ∈ S∩T, v ∈ T∖S⁺, when both are nonempty and no terminal is on Γ.
inline int eval_h(const Biset& s, NodeSet terminals, const RequirementMatrix& r) {
  const NodeSet in = s.inner() & terminals;
  const NodeSet out = terminals - s.outer();
  if (in.empty() || out.empty() || s.boundary().intersects(terminals)) return 0;
  int best = 0;
  for (int u : in)
    for (int v : out) best = std::max(best, r(u, v));
  return best - s.boundary().size();
}

// f^k: k - |Γ| when S ≠ ∅ and S⁺ ≠ V.
inline int eval_fk(const Biset& s, NodeSet all, int k) {
  if (s.inner().empty() || s.outer() == all) return 0;
  return k - s.boundary().size();
}

enum class FunctionKind { kOutConnectivity, kElement, kKConnectivity, kCustom };

inline const char* kind_name(FunctionKind k) {
  switch (k) {
    case FunctionKind::kOutConnectivity: return "out-connectivity";
    case FunctionKind::kElement: return "element-connectivity";
    case FunctionKind::kKConnectivity: return "k-connectivity";
    case FunctionKind::kCustom: return "custom";
  }
  return "?";
}

// A biset requirement function, optionally taken residual to a chosen edge set J.
class ConnectivityFunction {
 public:
  using Evaluator = std::function<int(const Biset&)>;

  static ConnectivityFunction out_connectivity(int n, bool directed, int root, int k) {
    ConnectivityFunction f(FunctionKind::kOutConnectivity, n, directed);
    f.root_ = root;
    f.k_ = k;
    return f;
  }
  static ConnectivityFunction element(int n, NodeSet terminals, RequirementMatrix r) {
    ConnectivityFunction f(FunctionKind::kElement, n, false);
    f.terminals_ = terminals;
    f.k_ = r.max();
    f.r_ = std::make_shared<const RequirementMatrix>(std::move(r));
    return f;
  }
  static ConnectivityFunction k_connectivity(int n, bool directed, int k) {
    ConnectivityFunction f(FunctionKind::kKConnectivity, n, directed);
    f.k_ = k;
    return f;
  }
  // User supplied function; no approximation guarantee is claimed for it.
  static ConnectivityFunction custom(int n, bool directed, Evaluator eval, int gamma, std::string name = "custom") {
    ConnectivityFunction f(FunctionKind::kCustom, n, directed);
    f.custom_ = std::make_shared<const Evaluator>(std::move(eval));
    f.k_ = gamma + 1;
    f.name_ = std::move(name);
    return f;
  }
  static ConnectivityFunction for_instance(const Instance& inst) {
    return std::visit([&](const auto& r) -> ConnectivityFunction {
      using T = std::decay_t<decltype(r)>;
      if constexpr (std::is_same_v<T, OutConnRequirement>) return out_connectivity(inst.n, inst.directed, r.root, r.k);
      else if constexpr (std::is_same_v<T, ElementRequirement>) return element(inst.n, r.terminals, r.r);
      else return k_connectivity(inst.n, inst.directed, r.k);
    }, inst.requirement);
  }

  // f_J for J = this->residual_edges() ∪ chosen.
  [[nodiscard]] ConnectivityFunction residual(const std::vector<std::pair<int, int>>& chosen) const {
    ConnectivityFunction f = *this;
    f.chosen_.insert(f.chosen_.end(), chosen.begin(), chosen.end());
    return f;
  }
  [[nodiscard]] ConnectivityFunction residual(const Instance& inst, const std::vector<int>& ids) const {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(ids.size());
    for (int id : ids) pairs.emplace_back(inst.edges[id].tail, inst.edges[id].head);
    return residual(pairs);
  }
  [[nodiscard]] ConnectivityFunction without_residual() const {
    ConnectivityFunction f = *this;
    f.chosen_.clear();
    return f;
  }

  [[nodiscard]] int base(const Biset& s) const {
    switch (kind_) {
      case FunctionKind::kOutConnectivity: return eval_g(s, root_, k_);
      case FunctionKind::kElement: return eval_h(s, terminals_, *r_);
      case FunctionKind::kKConnectivity: return eval_fk(s, NodeSet::range(n_), k_);
      case FunctionKind::kCustom: return (*custom_)(s);
    }
    return 0;
  }

  [[nodiscard]] int cover_count(const Biset& s) const {
    const CoverMode mode = requirement_mode(directed_);
    int c = 0;
    for (const auto& [u, v] : chosen_) c += covers(u, v, s, mode);
    return c;
  }

  [[nodiscard]] int operator()(const Biset& s) const {
    const int f = base(s);
    return chosen_.empty() ? f : f - cover_count(s);
  }

  // max_{f(S)>0} |Γ(S)| bounded analytically by k-1; residuals only shrink the support.
  [[nodiscard]] int gamma() const { return std::max(k_ - 1, 0); }

  [[nodiscard]] FunctionKind kind() const { return kind_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] bool directed() const { return directed_; }
  [[nodiscard]] int root() const { return root_; }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] NodeSet terminals() const { return terminals_; }
  [[nodiscard]] const RequirementMatrix& requirements() const { return *r_; }
  [[nodiscard]] const std::vector<std::pair<int, int>>& residual_edges() const { return chosen_; }
  [[nodiscard]] bool has_theorem() const { return kind_ != FunctionKind::kCustom; }
  [[nodiscard]] std::string name() const { return kind_ == FunctionKind::kCustom ? name_ : kind_name(kind_); }

 private:
  ConnectivityFunction(FunctionKind kind, int n, bool directed) : kind_(kind), n_(n), directed_(directed) {}

  FunctionKind kind_;
  int n_ = 0;
  bool directed_ = false;
  int root_ = 0;
  int k_ = 0;
  NodeSet terminals_;
  std::shared_ptr<const RequirementMatrix> r_;
  std::shared_ptr<const Evaluator> custom_;
  std::string name_;
  std::vector<std::pair<int, int>> chosen_;
};

inline int eval_residual(const ConnectivityFunction& f, const std::vector<std::pair<int, int>>& chosen, const Biset& s) {
  return f.residual(chosen)(s);
}

inline int gamma_of(const ConnectivityFunction& f) { return f.gamma(); }

// b_J^α(v) = b(v) - deg_J(v)/α
inline Rational residual_bound(const Instance& inst, const std::vector<int>& chosen, int alpha, int v) {
  if (alpha < 1) throw Error(Errc::kBadAlpha, "alpha must be >= 1");
  const int b = inst.bound(v);
  return Rational(b) - frac(inst.degree(chosen, v), alpha);
}

inline Rational residual_in_bound(const Instance& inst, const std::vector<int>& chosen, int alpha, int v) {
  if (alpha < 1) throw Error(Errc::kBadAlpha, "alpha must be >= 1");
  const int b = inst.in_bound(v);
  return Rational(b) - frac(inst.in_degree(chosen, v), alpha);
}

enum class SupermodularProperty { kIntersecting, kSkew, kCrossing };

inline SupermodularProperty default_property(const ConnectivityFunction& f) {
  switch (f.kind()) {
    case FunctionKind::kOutConnectivity: return SupermodularProperty::kIntersecting;
    case FunctionKind::kElement: return SupermodularProperty::kSkew;
    default: return SupermodularProperty::kCrossing;
  }
}

// Which pairs the inequalities are demanded on. g and h are extended by 0 outside
// their support, and the extension breaks the inequalities on pairs where one
// side is 0 (e.g. g with s in Ŷ). kPositivePairs asks only for pairs with
// f(X̂) > 0 and f(Ŷ) > 0, which is what uncrossing tight bisets relies on.
enum class AuditDomain { kPositivePairs, kAllPairs };

struct SupermodularityReport {
  SupermodularProperty property{};
  AuditDomain domain{};
  long long pairs_checked = 0;
  long long violation_count = 0;
  std::vector<std::pair<Biset, Biset>> violations;  // first few, for inspection
  [[nodiscard]] bool pass() const { return violation_count == 0; }
};

// Exhaustive check over all pairs of the 3^n bisets; n ≤ 8.
inline SupermodularityReport supermodularity_audit(const ConnectivityFunction& f, int n, SupermodularProperty property,
                                                   AuditDomain domain = AuditDomain::kPositivePairs) {
  constexpr int kMax = 8;
  if (n > kMax) throw Error(Errc::kTooLarge, "supermodularity audit limited to 8 nodes");
  std::array<int, 1 << kMax> pow3{};
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    int p = 0, w = 1;
    for (int v = 0; v < n; ++v, w *= 3)
      if (mask >> v & 1U) p += w;
    pow3[mask] = p;
  }
  auto code = [&](const Biset& b) { return pow3[b.outer().bits()] + pow3[b.inner().bits()]; };
  std::vector<Biset> all;
  for_each_biset(n, [&](const Biset& b) { all.push_back(b); });
  std::vector<int> value(all.size());
  for (const auto& b : all) value[code(b)] = f(b);
  const NodeSet full = NodeSet::range(n);
  SupermodularityReport rep;
  rep.property = property;
  rep.domain = domain;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Biset& x = all[i];
    const int fx = value[code(x)];
    if (domain == AuditDomain::kPositivePairs && fx <= 0) continue;
    for (std::size_t j = i; j < all.size(); ++j) {
      const Biset& y = all[j];
      if (domain == AuditDomain::kPositivePairs && value[code(y)] <= 0) continue;
      if (property == SupermodularProperty::kIntersecting && !x.inner().intersects(y.inner())) continue;
      if (property == SupermodularProperty::kCrossing &&
          (!x.inner().intersects(y.inner()) || (x.outer() | y.outer()) == full))
        continue;
      ++rep.pairs_checked;
      const int lhs = fx + value[code(y)];
      bool ok = lhs <= value[code(intersect(x, y))] + value[code(unite(x, y))];
      if (!ok && property == SupermodularProperty::kSkew)
        ok = lhs <= value[code(subtract(x, y))] + value[code(subtract(y, x))];
      if (!ok) {
        ++rep.violation_count;
        if (rep.violations.size() < 16) rep.violations.emplace_back(x, y);
      }
    }
  }
  return rep;
}

inline SupermodularityReport supermodularity_audit(const ConnectivityFunction& f, int n) {
  return supermodularity_audit(f, n, default_property(f));
}

}  // namespace dbnd
