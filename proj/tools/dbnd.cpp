// dbnd: solve, verify and benchmark degree-bounded network design instances.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "dbnd/driver.hpp"

namespace {

int load(const std::string& path, dbnd::Instance& inst) {
  try {
    inst = dbnd::parse_instance_text(dbnd::read_file(path));
    return dbnd::kExitOk;
  } catch (const dbnd::Error& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return dbnd::kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree-bounded survivable network design by iterative rounding"};
  app.require_subcommand(1);

  std::string kind = "outconn", in_path, out_path;
  dbnd::SolveOptions so;
  std::optional<int> sigma, beta;
  auto* solve = app.add_subcommand("solve", "Solve an instance and write a report");
  solve->add_option("--kind", kind, "outconn | element | kconn")->check(CLI::IsMember({"outconn", "element", "kconn"}));
  solve->add_option("--alpha", so.alpha, "rounding threshold 1/alpha")->default_val(2);
  solve->add_flag("--degree-only", so.degree_only, "element connectivity with degree bounds only (alpha = 2)");
  solve->add_option("--sigma", sigma, "override sigma");
  solve->add_option("--beta", beta, "override beta");
  solve->add_option("IN", in_path, "instance file")->required();
  solve->add_option("-o,--output", out_path, "report file (stdout when omitted)");

  std::string sol_path;
  auto* verify = app.add_subcommand("verify", "Check a solution or report against an instance");
  verify->add_option("IN", in_path, "instance file")->required();
  verify->add_option("SOL", sol_path, "solution or report file")->required();

  dbnd::BenchOptions bo;
  std::string gen_kind = "outconn-directed";
  std::optional<int> bench_alpha;
  auto* bench = app.add_subcommand("bench", "Run generated instances through solve, verify and the exact oracle");
  bench->add_option("--seed", bo.seed)->default_val(1);
  bench->add_option("--count", bo.count)->default_val(10);
  bench->add_option("--n", bo.n)->default_val(6);
  bench->add_option("--k", bo.k)->default_val(1);
  bench->add_option("--kind", gen_kind, "outconn-directed | outconn-undirected | element | kconn-undirected | kconn-directed")
      ->default_val("outconn-directed");
  bench->add_option("--alpha", bench_alpha);
  bench->add_flag("--degree-only", bo.degree_only);
  bench->add_option("--density", bo.density)->default_val(0.3);
  bench->add_option("--slack", bo.slack, "degree slack over the planted core; -1 for no bounds")->default_val(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : dbnd::kExitInput;
  }

  if (solve->parsed()) {
    dbnd::Instance inst;
    if (int rc = load(in_path, inst); rc != 0) return rc;
    so.kind = *dbnd::parse_solve_kind(kind);
    so.sigma = sigma;
    so.beta = beta;
    so.trace = dbnd::trace_level(std::getenv("SOLVER_TRACE"));
    const auto outcome = dbnd::solve(inst, so);
    if (outcome.exit_code != 0) std::cerr << outcome.message << "\n";
    if (out_path.empty()) {
      std::cout << outcome.report;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return dbnd::kExitInput;
      }
      out << outcome.report;
    }
    return outcome.exit_code;
  }
  if (verify->parsed()) {
    dbnd::Instance inst;
    if (int rc = load(in_path, inst); rc != 0) return rc;
    std::string text;
    try {
      text = dbnd::read_file(sol_path);
    } catch (const dbnd::Error& e) {
      std::cerr << e.what() << "\n";
      return dbnd::kExitInput;
    }
    const auto outcome = dbnd::verify(inst, text);
    std::cout << outcome.text;
    return outcome.exit_code;
  }
  const auto k = dbnd::parse_gen_kind(gen_kind);
  if (!k) {
    std::cerr << "unknown kind " << gen_kind << "\n";
    return dbnd::kExitInput;
  }
  bo.kind = *k;
  bo.alpha = bench_alpha;
  std::cout << dbnd::bench(bo).table;
  return 0;
}
