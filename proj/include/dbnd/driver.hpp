#pragma once

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "dbnd/io.hpp"
#include "dbnd/iterative_rounding.hpp"
#include "dbnd/kconn_pipeline.hpp"
#include "dbnd/laminar_analysis.hpp"
#include "dbnd/verify.hpp"

namespace dbnd {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitInfeasible = 2, kExitTheorem = 3, kExitVerify = 4 };

inline int exit_code_for(const Error& e) {
  if (e.code() == Errc::kInfeasible) return kExitInfeasible;
  if (e.is_theorem_violation()) return kExitTheorem;
  return kExitInput;
}

enum class SolveKind { kOutConn, kElement, kKConn };
enum class TraceLevel { kOff, kSummary, kFull };

inline std::optional<SolveKind> parse_solve_kind(const std::string& s) {
  if (s == "outconn") return SolveKind::kOutConn;
  if (s == "element") return SolveKind::kElement;
  if (s == "kconn") return SolveKind::kKConn;
  return std::nullopt;
}

inline TraceLevel trace_level(const char* value) {
  if (value == nullptr) return TraceLevel::kSummary;
  const std::string v = value;
  if (v == "full") return TraceLevel::kFull;
  if (v == "off") return TraceLevel::kOff;
  return TraceLevel::kSummary;
}

struct SolveOptions {
  SolveKind kind = SolveKind::kOutConn;
  int alpha = 2;
  bool degree_only = false;
  std::optional<int> sigma;
  std::optional<int> beta;
  TraceLevel trace = TraceLevel::kSummary;
  bool audit = true;  // token audit of fractional vertices, n ≤ 8 only
};

// One claimed bound with the result that backs it.
struct LedgerLine {
  std::string claim;
  std::string observed;
  std::string source;
  bool pass = true;
};

struct SolveOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::string report;
  std::vector<int> solution;
  Rational cost;
  std::optional<Rational> tau;
  std::vector<LedgerLine> ledger;
  std::map<int, int> limits;     // per-node degree limit claimed for the output
  std::map<int, int> in_limits;  // digraph in-degree limits
  int audited = 0;
  int audit_passed = 0;
  bool guarantees_pass() const {
    return std::all_of(ledger.begin(), ledger.end(), [](const LedgerLine& l) { return l.pass; });
  }
};

namespace detail {

inline const char* kind_word(const Instance& inst) {
  return std::visit([](const auto& r) -> const char* {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, OutConnRequirement>) return "outconn";
    else if constexpr (std::is_same_v<T, KConnRequirement>) return "kconn";
    else return "element";
  }, inst.requirement);
}

inline std::string digest(const Instance& inst) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << std::hash<std::string>{}(serialize_instance(inst));
  return s.str();
}

inline std::string pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

inline void audit_vertex(const Instance& inst, const LPResult& lp, const RoundingState& st,
                         const ConnectivityFunction& f, int alpha, SolveOutcome& out) {
  const VertexData core = fractional_core(vertex_data(inst, lp, st, f, alpha));
  if (core.E.empty()) return;
  ++out.audited;
  const LaminarMode mode = default_mode(inst.directed);
  const auto ex = extract_tight_family(core, mode);
  if (ex.ok() && token_audit(core, *ex.family, mode, alpha).pass()) ++out.audit_passed;
}

}  // namespace detail

inline SolveOutcome solve(const Instance& inst, const SolveOptions& opt) {
  SolveOutcome out;
  std::ostringstream trace;
  std::string algorithm;
  RoundingParams params;
  int gamma = 0;
  std::vector<DegreeCheck> degree_lines;
  std::vector<std::string> notes;
  try {
    validate(inst);
    const char* want = opt.kind == SolveKind::kOutConn ? "outconn" : opt.kind == SolveKind::kElement ? "element" : "kconn";
    if (std::string(want) != detail::kind_word(inst))
      throw Error(Errc::kValidation, std::string("--kind ") + want + " but the instance requires " + detail::kind_word(inst));
    const bool override_params = opt.sigma || opt.beta;
    const std::string override_tag = "user-set sigma/beta, no theorem";

    auto apply_overrides = [&](RoundingParams& p) {
      if (opt.sigma) p.sigma = *opt.sigma;
      if (opt.beta) p.beta = *opt.beta;
    };
    auto record_trace = [&](const RoundingTrace& t) {
      if (opt.trace == TraceLevel::kOff) return;
      trace << "lp_solves " << t.lp_solves << " cut_rounds " << t.cut_rounds << " pivots " << t.pivots << " iterations "
            << t.records.size() << "\n";
      if (opt.trace != TraceLevel::kFull) return;
      for (const auto& r : t.records)
        trace << "it " << r.iteration << " obj " << r.objective << (r.lp_reused ? " reused" : " solved") << " "
              << action_name(r.action.kind) << " " << r.action.element << " value " << r.value << " E " << r.edges_left
              << " B " << r.bounds_left << (r.integral ? " integral" : " fractional") << "\n";
    };
    auto rounding = [&](PresetKind preset, const std::string& source) {
      const auto f = ConnectivityFunction::for_instance(inst);
      gamma = f.gamma();
      params = preset_params(preset, opt.alpha, gamma);
      apply_overrides(params);
      algorithm = preset_name(preset);
      RunOptions ro;
      if (opt.audit && inst.n <= 8)
        ro.on_vertex = [&](const LPResult& lp, const RoundingState& st) {
          detail::audit_vertex(inst, lp, st, f, params.alpha, out);
        };
      const auto rr = run(inst, f, params, ro);
      record_trace(rr.trace);
      out.solution = rr.J;
      out.tau = rr.tau0;
      const auto g = check_guarantees(inst, rr.J, rr.tau0, params);
      const std::string tag = override_params ? override_tag : source;
      if (g.cost_claimed)
        out.ledger.push_back({"cost <= alpha*tau", to_string(g.cost) + " <= " + to_string(g.cost_limit), tag, g.cost_pass});
      else
        notes.push_back("cost not claimed: edges with no bounded endpoint are moved into J at any x > 0");
      for (const auto& d : g.degrees) {
        (d.in ? out.in_limits : out.limits)[d.node] = d.limit;
        degree_lines.push_back(d);
      }
      out.ledger.push_back({params.sigma == 0 ? "deg <= alpha*b + beta - 1" : "deg <= alpha*b + beta",
                            g.degree_pass ? "all bounded nodes" : "violated", tag, g.degree_pass});
    };

    if (opt.kind == SolveKind::kOutConn && inst.directed) {
      rounding(PresetKind::kDirectedOut, "directed k-out-connectivity rounding theorem");
    } else if (opt.kind == SolveKind::kOutConn) {
      const auto& r = std::get<OutConnRequirement>(inst.requirement);
      if (override_params) notes.push_back("sigma/beta overrides ignored for undirected out-connectivity");
      const auto u = undirected_outconnected(inst, r.k, r.root, opt.alpha);
      params = u.params;
      gamma = r.k - 1;
      algorithm = "bidirected directed-out";
      out.solution = u.edges;
      out.tau = u.tau0;
      const std::string tag = "bidirected out-connectivity reduction";
      out.ledger.push_back({"cost <= alpha*tau(bidirected)", to_string(u.cost) + " <= " + to_string(opt.alpha * u.tau0),
                            tag, u.cost_pass});
      for (const auto& d : u.degrees) {
        out.limits[d.node] = d.limit;
        degree_lines.push_back(d);
      }
      out.ledger.push_back({"deg <= alpha*b + beta + k", u.degree_pass ? "all bounded nodes" : "violated", tag, u.degree_pass});
    } else if (opt.kind == SolveKind::kElement) {
      if (opt.degree_only)
        rounding(PresetKind::kElementDegreeOnly, "element-connectivity rounding theorem, degree-only version");
      else
        rounding(PresetKind::kElementCost, "element-connectivity rounding theorem, cost version");
    } else {
      const int k = std::get<KConnRequirement>(inst.requirement).k;
      if (override_params) notes.push_back("sigma/beta overrides ignored for k-connectivity");
      const auto sol = db_k_connected(inst, k, opt.alpha);
      const auto& rep = sol.report;
      params = rep.external.params;
      gamma = k - 1;
      algorithm = "k-connectivity pipeline";
      out.solution = sol.edges;
      std::ostringstream r;
      for (int v : rep.R) r << (r.tellp() > 0 ? "," : "") << v;
      notes.push_back("R = {" + r.str() + "} (k nodes of largest b, unbounded first)");
      notes.push_back("|F| = " + std::to_string(rep.F_size) + ", d = " + std::to_string(rep.d) + ", swaps " +
                      std::to_string(rep.reduced.stats.swaps));
      out.ledger.push_back({"k-connected", detail::pass_word(rep.k_connected), "k-connectivity reduction lemma", rep.k_connected});
      out.ledger.push_back({"cost <= " + to_string(rep.cost_factor) + " * OPT", "not checked (OPT unknown)",
                            "k-connectivity reduction lemma", true});
      const bool d_ok = !above_threshold(rep.d, k, inst.directed);
      out.ledger.push_back({"d <= max{3, 1.5+sqrt(2k+c)}", std::to_string(rep.d), "degree-reduction corollary", d_ok});
      for (const auto& line : rep.degrees) {
        DegreeCheck d;
        d.node = line.node;
        d.degree = line.degree;
        d.bound = *line.bound;
        d.limit = static_cast<int>(floor(line.claimed).get_num().get_si());
        d.pass = line.pass;
        out.limits[d.node] = d.limit;
        degree_lines.push_back(d);
      }
      out.ledger.push_back({"deg <= claimed bound", rep.degree_pass ? "all bounded nodes" : "violated",
                            "k-connectivity reduction lemma", rep.degree_pass});
    }
    out.cost = inst.cost_of(out.solution);
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e);
    out.message = e.what();
    out.report = std::string("# solve failed\nerror ") + e.what() + "\n";
    return out;
  }

  std::ostringstream rep;
  rep << "# dbnd report\n";
  rep << "instance n " << inst.n << " m " << inst.m() << " directed " << inst.directed << " requirement "
      << detail::kind_word(inst) << " digest " << detail::digest(inst) << "\n";
  rep << "algorithm " << algorithm << " alpha " << params.alpha << " beta " << params.beta << " sigma " << params.sigma
      << " gamma " << gamma << (params.move_unbounded_edges ? " move-unbounded" : "") << "\n";
  if (out.tau) rep << "lp_objective " << *out.tau << "\n";
  rep << "cost " << out.cost << "\n";
  rep << serialize_solution(inst, out.solution);
  rep << "[degrees]\n";
  for (const auto& d : degree_lines)
    rep << (d.in ? "in " : "") << "node " << d.node << " degree " << d.degree << " bound " << d.bound << " limit "
        << d.limit << " " << detail::pass_word(d.pass) << "\n";
  rep << "[limits]\n";
  for (auto [v, l] : out.limits) rep << v << " " << l << "\n";
  if (!out.in_limits.empty()) {
    rep << "[inlimits]\n";
    for (auto [v, l] : out.in_limits) rep << v << " " << l << "\n";
  }
  rep << "[guarantees]\n";
  for (const auto& l : out.ledger)
    rep << l.claim << " : " << l.observed << " : " << detail::pass_word(l.pass) << " [" << l.source << "]\n";
  rep << "[audit]\n";
  if (opt.kind == SolveKind::kKConn || (opt.kind == SolveKind::kOutConn && !inst.directed) || !opt.audit || inst.n > 8)
    rep << "token audit not run\n";
  else
    rep << "token audit " << out.audit_passed << "/" << out.audited << " fractional vertices passed\n";
  for (const auto& n : notes) rep << "note " << n << "\n";
  if (opt.trace != TraceLevel::kOff) rep << "[trace]\n" << trace.str();
  out.report = rep.str();
  return out;
}

// Per-node limits written by solve; absent sections mean "check against b".
inline std::pair<std::map<int, int>, std::map<int, int>> parse_limits(const std::string& text) {
  std::map<int, int> limits, in_limits;
  std::map<int, int>* cur = nullptr;
  std::istringstream in(text);
  for (std::string raw; std::getline(in, raw);) {
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      cur = line == "[limits]" ? &limits : line == "[inlimits]" ? &in_limits : nullptr;
      continue;
    }
    if (!cur) continue;
    const auto w = detail::words(line);
    if (w.size() != 2) throw Error(Errc::kParse, "limit lines are 'v limit'");
    (*cur)[detail::parse_int(w[0], 0)] = detail::parse_int(w[1], 0);
  }
  return {limits, in_limits};
}

struct VerifyOutcome {
  int exit_code = kExitOk;
  std::string text;
  VerificationReport report;
};

inline VerifyOutcome verify(const Instance& inst, const std::string& solution_text) {
  VerifyOutcome out;
  std::ostringstream s;
  try {
    validate(inst);
    const auto ids = parse_solution_text(solution_text, inst);
    const auto [limits, in_limits] = parse_limits(solution_text);
    Instance checked = inst;
    checked.bounds.resize(inst.n);
    checked.in_bounds.resize(inst.n);
    for (auto [v, l] : limits)
      if (v >= 0 && v < inst.n && checked.bounds[v]) checked.bounds[v] = l;
    for (auto [v, l] : in_limits)
      if (v >= 0 && v < inst.n && checked.in_bounds[v]) checked.in_bounds[v] = l;
    out.report = verify_solution(checked, ids, std::nullopt);
    s << "cost " << out.report.cost << "\n";
    for (const auto& p : out.report.pairs)
      if (!p.pass())
        s << "deficient pair " << p.u << " " << p.v << " required " << p.required << " achieved " << p.achieved << "\n";
    for (const auto& d : out.report.degrees)
      if (d.excess() > 0)
        s << "degree violation node " << d.node << (d.in ? " (in)" : "") << " degree " << d.degree << " limit " << d.bound
          << "\n";
    const bool ok = out.report.connectivity_ok() && out.report.degrees_ok();
    s << "connectivity " << detail::pass_word(out.report.connectivity_ok()) << "\n";
    s << "degrees " << detail::pass_word(out.report.degrees_ok()) << "\n";
    s << (ok ? "OK" : "FAILED") << "\n";
    out.exit_code = ok ? kExitOk : kExitVerify;
  } catch (const Error& e) {
    s << "error " << e.what() << "\n";
    out.exit_code = kExitInput;
  }
  out.text = s.str();
  return out;
}

struct BenchOptions {
  std::uint64_t seed = 1;
  int count = 10;
  int n = 6;
  int k = 1;
  GenKind kind = GenKind::kOutConnDirected;
  std::optional<int> alpha;  // default: 4 for element, else 2
  bool degree_only = false;
  double density = 0.3;
  int slack = 1;
};

struct BenchRow {
  int index = 0;
  int n = 0;
  int m = 0;
  int exit_code = 0;
  Rational cost;
  std::optional<Rational> tau;
  std::optional<Rational> ilp;
  int max_excess = 0;  // max over bounded nodes of degree − claimed limit
  int audited = 0;
  int audit_passed = 0;
  bool verified = false;
  bool guarantees = false;
};

struct BenchSummary {
  std::vector<BenchRow> rows;
  std::string table;
  double wall_ms = 0;
};

inline std::optional<GenKind> parse_gen_kind(const std::string& s) {
  for (GenKind k : {GenKind::kOutConnDirected, GenKind::kOutConnUndirected, GenKind::kElement, GenKind::kKConnUndirected,
                    GenKind::kKConnDirected})
    if (s == gen_kind_name(k)) return k;
  return std::nullopt;
}

inline BenchSummary bench(const BenchOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  BenchSummary sum;
  std::mt19937_64 rng(opt.seed);
  SolveOptions so;
  so.kind = opt.kind == GenKind::kElement                                            ? SolveKind::kElement
            : opt.kind == GenKind::kOutConnDirected || opt.kind == GenKind::kOutConnUndirected ? SolveKind::kOutConn
                                                                                     : SolveKind::kKConn;
  so.alpha = opt.alpha.value_or(opt.kind == GenKind::kElement && !opt.degree_only ? 4 : 2);
  so.degree_only = opt.degree_only;
  so.trace = TraceLevel::kOff;
  std::ostringstream t;
  t << "# bench seed " << opt.seed << " count " << opt.count << " n " << opt.n << " k " << opt.k << " kind "
    << gen_kind_name(opt.kind) << " alpha " << so.alpha << (opt.degree_only ? " degree-only" : "") << "\n";
  t << "idx  m  exit  cost  tau  cost/tau  ilp  cost/ilp  excess  audit  verified  guarantees\n";
  for (int i = 0; i < opt.count; ++i) {
    GenParams gp;
    gp.seed = rng();
    gp.n = opt.n;
    gp.k = opt.k;
    gp.kind = opt.kind;
    gp.density = opt.density;
    gp.slack = opt.slack;
    const Instance inst = generate(gp);
    BenchRow row;
    row.index = i;
    row.n = inst.n;
    row.m = inst.m();
    const SolveOutcome s = solve(inst, so);
    row.exit_code = s.exit_code;
    if (s.exit_code == kExitOk) {
      row.cost = s.cost;
      row.tau = s.tau;
      row.audited = s.audited;
      row.audit_passed = s.audit_passed;
      row.guarantees = s.guarantees_pass();
      const VerifyOutcome v = verify(inst, s.report);
      row.verified = v.report.connectivity_ok();
      for (const auto& d : v.report.degrees) row.max_excess = std::max(row.max_excess, d.excess());
      if (inst.m() <= kIlpMaxEdges) {
        try {
          row.ilp = ilp_opt(inst).cost;
        } catch (const Error&) {
        }
      }
    }
    auto ratio = [](const Rational& a, const std::optional<Rational>& b) {
      if (!b || sgn(*b) == 0) return std::string("-");
      std::ostringstream o;
      o << std::fixed << std::setprecision(4) << Rational(a / *b).get_d();
      return o.str();
    };
    t << row.index << "  " << row.m << "  " << row.exit_code << "  " << row.cost << "  "
      << (row.tau ? to_string(*row.tau) : "-") << "  " << ratio(row.cost, row.tau) << "  "
      << (row.ilp ? to_string(*row.ilp) : "-") << "  " << ratio(row.cost, row.ilp) << "  " << row.max_excess << "  "
      << row.audit_passed << "/" << row.audited << "  " << detail::pass_word(row.verified) << "  "
      << detail::pass_word(row.guarantees) << "\n";
    sum.rows.push_back(row);
  }
  double mean_lp = 0, max_lp = 0, mean_ilp = 0, max_ilp = 0;
  int n_lp = 0, n_ilp = 0, audited = 0, passed = 0, max_excess = 0, ok = 0;
  for (const auto& r : sum.rows) {
    if (r.exit_code != kExitOk) continue;
    ++ok;
    if (r.tau && sgn(*r.tau) > 0) {
      const double q = Rational(r.cost / *r.tau).get_d();
      mean_lp += q;
      max_lp = std::max(max_lp, q);
      ++n_lp;
    }
    if (r.ilp && sgn(*r.ilp) > 0) {
      const double q = Rational(r.cost / *r.ilp).get_d();
      mean_ilp += q;
      max_ilp = std::max(max_ilp, q);
      ++n_ilp;
    }
    audited += r.audited;
    passed += r.audit_passed;
    max_excess = std::max(max_excess, r.max_excess);
  }
  t << std::fixed << std::setprecision(4);
  t << "solved " << ok << "/" << opt.count << "\n";
  t << "cost/tau mean " << (n_lp ? mean_lp / n_lp : 0) << " max " << max_lp << "\n";
  t << "cost/ilp mean " << (n_ilp ? mean_ilp / n_ilp : 0) << " max " << max_ilp << "\n";
  t << "max degree excess over limit " << max_excess << "\n";
  t << "audit pass " << passed << "/" << audited << "\n";
  sum.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  t << "wall_ms " << std::setprecision(1) << sum.wall_ms << "\n";
  sum.table = t.str();
  return sum;
}

}  // namespace dbnd
