// subq: submodular analysis and optimization CLI.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "subq/bench.hpp"
#include "subq/graph.hpp"
#include "subq/maxds.hpp"
#include "subq/prox.hpp"
#include "subq/spec_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace subq;

namespace {

SetFunctionOracle load_oracle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json spec = json::parse(in);
  return oracle_from_spec(spec, fs::path(path).parent_path());
}

json subset_json(const Subset& s) {
  json out = json::array();
  s.for_each([&](int k) { out.push_back(k + 1); });
  return out;
}

std::vector<double> load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_vector_csv(in);
}

int cmd_eval(const std::string& fpath, const std::string& set_text) {
  SetFunctionOracle F = load_oracle(fpath);
  Subset a = subset_from_string(F.p(), set_text);
  json out{{"set", subset_json(a)}, {"value", F(a)}, {"p", F.p()}};
  std::cout << out.dump(1) << "\n";
  return 0;
}

int cmd_minimize(const std::string& fpath, const std::string& algo_name,
                 int steps, double tol, std::uint64_t max_calls,
                 const std::string& trace_path) {
  SetFunctionOracle F = load_oracle(fpath);
  auto algo = sfm_algo_from_string(algo_name);
  if (!algo) throw std::runtime_error("unknown algorithm: " + algo_name);
  MinimizeOptions opt;
  opt.algo = *algo;
  opt.steps = steps;
  opt.mnp_tol = tol;
  if (max_calls) opt.budget.max_oracle_calls = max_calls;
  SfmResult r = minimize(F, opt);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    r.trace.write_csv(out);
  }
  json out{{"algorithm", r.algorithm},
           {"minimizer", subset_json(r.minimizer)},
           {"min_value", r.min_value},
           {"gap", r.gap},
           {"oracle_calls", F.calls()},
           {"status", int(r.status)},
           {"minimal_minimizer", subset_json(r.minimal_minimizer)},
           {"maximal_minimizer", subset_json(r.maximal_minimizer)}};
  std::cout << out.dump(1) << "\n";
  return 0;
}

int cmd_prox(const std::string& fpath, const std::string& zpath,
             const std::string& solver, const std::string& out_w,
             const std::string& out_s) {
  SetFunctionOracle F = load_oracle(fpath);
  std::vector<double> z =
      zpath.empty() ? std::vector<double>(F.p(), 0.0) : load_vector(zpath);
  if (int(z.size()) != F.p()) throw std::runtime_error("prox: |z| != p");
  ProxResult r;
  if (solver == "mnp") {
    r = prox_quadratic_mnp(F, z);
  } else if (solver == "dc") {
    r = divide_and_conquer(F, SeparableProblem::quadratic(z));
  } else {
    throw std::runtime_error("unknown prox solver: " + solver);
  }
  if (!out_w.empty()) {
    std::ofstream out(out_w);
    write_vector_csv(out, r.w);
  }
  if (!out_s.empty()) {
    std::ofstream out(out_s);
    write_vector_csv(out, r.s);
  }
  json out{{"solver", solver},
           {"gap", r.gap},
           {"recursion_depth", r.recursion_depth},
           {"oracle_calls", F.calls()}};
  std::cout << out.dump(1) << "\n";
  return 0;
}

int cmd_maximize(const std::string& fpath, int k, const std::string& algo,
                 bool trust_monotone) {
  SetFunctionOracle F = load_oracle(fpath);
  MaxResult r;
  if (algo == "greedy") {
    r = greedy_max_cardinality(F, k, true, trust_monotone);
  } else if (algo == "local") {
    r = local_search_max(F, Subset(F.p()));
  } else {
    throw std::runtime_error("unknown maximize algorithm: " + algo);
  }
  json trace = json::array();
  for (auto [e, gain] : r.trace) trace.push_back({{"add", e + 1}, {"gain", gain}});
  json out{{"algorithm", algo},
           {"chosen", subset_json(r.chosen)},
           {"value", r.value},
           {"trace", trace},
           {"oracle_calls", F.calls()}};
  std::cout << out.dump(1) << "\n";
  return 0;
}

int cmd_dsmin(const std::string& fpath, const std::string& gpath,
              int max_rounds) {
  SetFunctionOracle F = load_oracle(fpath);
  SetFunctionOracle G = load_oracle(gpath);
  DsResult r = ds_minimize(F, G, Subset(F.p()), {}, max_rounds);
  json trace = json::array();
  for (const DsRound& t : r.trace)
    trace.push_back({{"set", subset_json(t.a)}, {"objective", t.objective}});
  json out{{"minimizer", subset_json(r.minimizer)},
           {"value", r.value},
           {"rounds", trace.size()},
           {"trace", trace}};
  std::cout << out.dump(1) << "\n";
  return 0;
}

int cmd_norm(const std::string& fpath, const std::string& zpath,
             const std::string& which, bool trust_monotone) {
  SetFunctionOracle F = load_oracle(fpath);
  std::vector<double> z = load_vector(zpath);
  if (int(z.size()) != F.p()) throw std::runtime_error("norm: |z| != p");
  json out;
  if (which == "lovasz") {
    out = {{"value", lovasz(F, z)}};
  } else if (which == "omega-inf") {
    std::vector<double> abs_z(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) abs_z[i] = std::abs(z[i]);
    out = {{"value", lovasz(F, abs_z)}};
  } else if (which == "omega-inf-dual") {
    out = {{"value", omega_inf_dual(F, z)}};
  } else if (which == "omega2") {
    Omega2Result r = omega_q_norm_and_prox(F, z, 2, {}, trust_monotone);
    out = {{"value", r.norm}, {"prox", r.prox}};
  } else {
    throw std::runtime_error("unknown norm: " + which);
  }
  std::cout << out.dump(1) << "\n";
  return 0;
}

int cmd_isotonic(const std::string& zpath, const std::string& cpath,
                 const std::string& out_w) {
  std::vector<double> z = load_vector(zpath);
  std::vector<std::pair<int, int>> cons;
  if (!cpath.empty()) {
    std::ifstream in(cpath);
    if (!in) throw std::runtime_error("cannot open " + cpath);
    int i, j;
    while (in >> i >> j) cons.emplace_back(i - 1, j - 1);
  } else {
    for (int i = 0; i + 1 < int(z.size()); ++i) cons.emplace_back(i, i + 1);
  }
  std::vector<double> w = isotonic_general(z, cons);
  if (!out_w.empty()) {
    std::ofstream out(out_w);
    write_vector_csv(out, w);
  } else {
    write_vector_csv(std::cout, w);
  }
  return 0;
}

int cmd_generate(const std::string& kind, int a, int b, double c1, double c2,
                 std::uint64_t seed, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  if (kind == "chain") {
    write_edge_list(out, chain_graph(a));
  } else if (kind == "grid") {
    write_edge_list(out, grid2d(a, b));
  } else if (kind == "genrmf") {
    CutInstance ci = genrmf_like(a, b, c1, c2, seed);
    write_edge_list(out, ci.graph);
    std::ofstream zout(out_path + ".z");
    write_vector_csv(zout, ci.z);
  } else {
    throw std::runtime_error("unknown generator: " + kind);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"submodular analysis and optimization benchmark CLI"};
  app.require_subcommand(1);

  // eval
  std::string f_spec, set_text;
  auto* eval = app.add_subcommand("eval", "evaluate F on a subset");
  eval->add_option("--f", f_spec, "function spec JSON")->required();
  eval->add_option("--set", set_text, "comma separated 1-based indices");

  // minimize
  std::string min_algo = "auto", trace_path;
  int steps = 2000;
  double tol = 1e-10;
  std::uint64_t max_calls = 0;
  auto* mini = app.add_subcommand("minimize", "submodular function minimization");
  mini->add_option("--f", f_spec, "function spec JSON")->required();
  mini->add_option("--algo", min_algo,
                   "auto|brute|mnp|sg|sg-polyak|cg-ls|cg-2t|ellipsoid");
  mini->add_option("--steps", steps, "iteration budget");
  mini->add_option("--tol", tol, "MNP duality-gap tolerance");
  mini->add_option("--max-oracle", max_calls, "oracle call budget");
  mini->add_option("--trace", trace_path, "write trace CSV here");

  // prox
  std::string z_path, out_w, out_s, prox_solver = "mnp";
  auto* prox = app.add_subcommand("prox", "min 1/2|w-z|^2 + f(w)");
  prox->add_option("--f", f_spec, "function spec JSON")->required();
  prox->add_option("--z", z_path, "target vector CSV (default 0)");
  prox->add_option("--solver", prox_solver, "mnp|dc");
  prox->add_option("--out-w", out_w, "write w CSV");
  prox->add_option("--out-s", out_s, "write s CSV");

  // maximize
  int max_k = 1;
  std::string max_algo = "greedy";
  bool trust_monotone = false;
  auto* maxi = app.add_subcommand("maximize", "submodular maximization");
  maxi->add_option("--f", f_spec, "function spec JSON")->required();
  maxi->add_option("--k", max_k, "cardinality budget");
  maxi->add_option("--algo", max_algo, "greedy|local");
  maxi->add_flag("--trust-monotone", trust_monotone,
                 "skip the monotonicity check");

  // ds-min
  std::string g_spec;
  int ds_rounds = 100;
  auto* dsmin = app.add_subcommand("ds-min", "minimize F - G");
  dsmin->add_option("--f", f_spec, "F spec JSON")->required();
  dsmin->add_option("--g", g_spec, "G spec JSON")->required();
  dsmin->add_option("--max-rounds", ds_rounds, "round budget");

  // norm
  std::string norm_kind = "lovasz";
  auto* norm = app.add_subcommand("norm", "Lovasz extension and norms");
  norm->add_option("--f", f_spec, "function spec JSON")->required();
  norm->add_option("--z", z_path, "input vector CSV")->required();
  norm->add_option("--which", norm_kind,
                   "lovasz|omega-inf|omega-inf-dual|omega2");
  norm->add_flag("--trust-monotone", trust_monotone);

  // isotonic
  std::string cons_path;
  auto* iso = app.add_subcommand("isotonic", "isotonic regression");
  iso->add_option("--z", z_path, "input vector CSV")->required();
  iso->add_option("--constraints", cons_path,
                  "'i j' lines meaning w_i >= w_j (default: chain)");
  iso->add_option("--out-w", out_w, "write w CSV");

  // generate
  std::string gen_kind = "chain", gen_out = "out.edges";
  int gen_a = 10, gen_b = 10;
  double gen_c1 = 1.0, gen_c2 = 100.0;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("generate", "instance generators");
  gen->add_option("--kind", gen_kind, "chain|grid|genrmf");
  gen->add_option("--a", gen_a, "size parameter");
  gen->add_option("--b", gen_b, "second size parameter");
  gen->add_option("--c1", gen_c1, "min inter-frame capacity");
  gen->add_option("--c2", gen_c2, "max inter-frame capacity");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output edge-list file");

  // bench
  BenchConfig cfg;
  std::string solvers_csv = "mnp,sg,sg-polyak,cg-ls,cg-2t";
  std::string out_dir = "bench-out";
  bool prox_bench = false;
  auto* bench = app.add_subcommand("bench", "solver comparison suites");
  bench->add_option("--suite", cfg.suite,
                    "chain|grid|genrmf-wide-like|genrmf-long-like|two-moons|cover")
      ->required();
  bench->add_option("--seed", cfg.seed, "instance seed");
  bench->add_option("--solvers", solvers_csv, "comma separated solver list");
  bench->add_option("--max-oracle", cfg.max_oracle_calls,
                    "oracle budget per solver (0: suite default)");
  bench->add_option("--out", out_dir, "output directory");
  bench->add_flag("--prox", prox_bench, "separable (prox) comparison instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return cmd_eval(f_spec, set_text);
    if (*mini)
      return cmd_minimize(f_spec, min_algo, steps, tol, max_calls, trace_path);
    if (*prox) return cmd_prox(f_spec, z_path, prox_solver, out_w, out_s);
    if (*maxi) return cmd_maximize(f_spec, max_k, max_algo, trust_monotone);
    if (*dsmin) return cmd_dsmin(f_spec, g_spec, ds_rounds);
    if (*norm) return cmd_norm(f_spec, z_path, norm_kind, trust_monotone);
    if (*iso) return cmd_isotonic(z_path, cons_path, out_w);
    if (*gen)
      return cmd_generate(gen_kind, gen_a, gen_b, gen_c1, gen_c2, gen_seed,
                          gen_out);
    if (*bench) {
      cfg.out_dir = out_dir;
      std::stringstream ss(solvers_csv);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) cfg.solvers.push_back(tok);
      json summary = prox_bench ? run_prox_bench(cfg) : run_sfm_bench(cfg);
      std::cout << summary.dump(1) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
