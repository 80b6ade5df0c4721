// grank: spectral analysis of directed networks from the command line.
//
// Subcommands: decompose, spectrum, pagerank, gap, scan, stats, synth.
// Every run writes its CSVs plus a manifest.json into one output
// directory; CSVs carry no timestamps, so identical runs produce
// byte-identical files in deterministic mode.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "grank/csv.hpp"
#include "grank/decomposition.hpp"
#include "grank/graph.hpp"
#include "grank/pagerank.hpp"
#include "grank/spectral.hpp"
#include "grank/stats.hpp"
#include "grank/stochastic.hpp"
#include "grank/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;     // parse, IO, validation
constexpr int kExitSolver = 3;    // non-convergence, partial results flagged

struct CommonOptions {
  std::string out_dir = "grank_out";
  unsigned threads = 1;
  bool deterministic = false;
  bool gnuplot = false;

  unsigned effective_threads() const { return deterministic ? 1 : threads; }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("-o,--out-dir", opts.out_dir, "Output directory for CSVs and the manifest");
  cmd->add_option("--threads", opts.threads, "Worker threads for matrix products");
  cmd->add_flag("--deterministic", opts.deterministic,
                "Force sequential products with a fixed reduction order");
  cmd->add_flag("--gnuplot", opts.gnuplot, "Additionally emit plot-ready two-column .dat files");
}

grank::DirectedGraph load_graph(const std::string& path, bool reverse = false) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  auto g = grank::parse_edge_list(in);
  return reverse ? g.transpose() : g;
}

class RunWriter {
 public:
  RunWriter(const CommonOptions& opts, std::string command, json parameters,
            std::vector<std::string> inputs)
      : opts_(opts), start_(std::chrono::steady_clock::now()) {
    manifest_["command"] = std::move(command);
    manifest_["inputs"] = std::move(inputs);
    manifest_["parameters"] = std::move(parameters);
    manifest_["tool_version"] = kVersion;
  }

  template <typename Fn>
  void file(const std::string& name, Fn&& write_fn) {
    fs::create_directories(opts_.out_dir);
    std::ofstream out(fs::path(opts_.out_dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + opts_.out_dir);
    write_fn(out);
  }

  void note(const std::string& key, const json& value) { manifest_[key] = value; }

  void finish() {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    manifest_["wall_clock_seconds"] = elapsed.count();
    file("manifest.json", [&](std::ostream& out) { out << manifest_.dump(2) << '\n'; });
  }

 private:
  const CommonOptions& opts_;
  std::chrono::steady_clock::time_point start_;
  json manifest_;
};

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

grank::Decomposition obtain_decomposition(const grank::DirectedGraph& g, double budget,
                                          const std::string& cached_csv) {
  if (cached_csv.empty()) return grank::decompose(g, budget);
  std::ifstream in(cached_csv);
  if (!in) throw std::runtime_error("cannot open decomposition file: " + cached_csv);
  auto d = grank::read_decomposition_csv(in, g);
  auto report = grank::verify_decomposition(g, d);
  if (!report.pass)
    throw std::runtime_error("cached decomposition fails verification against the graph");
  return d;
}

// ---------------------------------------------------------------- commands

int cmd_decompose(const std::string& graph_path, double budget, bool reverse,
                  const CommonOptions& opts) {
  auto g = load_graph(graph_path, reverse);
  auto d = grank::decompose(g, budget);
  auto report = grank::verify_decomposition(g, d);

  RunWriter run(opts, "decompose", json{{"budget_b", budget}, {"reverse", reverse}},
                {graph_path});
  const std::string name = stem_of(graph_path);
  run.file("decomposition.csv", [&](std::ostream& o) { grank::write_decomposition_csv(o, d); });
  run.file("summary.csv",
           [&](std::ostream& o) { grank::write_decomposition_summary_csv(o, name, g, d); });
  run.file("graph_summary.csv",
           [&](std::ostream& o) { grank::write_graph_summary_csv(o, name, g); });
  run.file("id_map.csv", [&](std::ostream& o) { grank::write_id_map_csv(o, g); });
  run.note("verification_pass", report.pass);
  run.note("subspace_count", d.subspaces.size());
  run.note("core_size", d.core.size());
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
  run.note("warnings", d.warnings);
  run.finish();
  return report.pass ? kExitOk : kExitInput;
}

int cmd_spectrum(const std::string& graph_path, double budget, std::size_t n_a,
                 std::size_t dense_limit, bool reverse, const std::string& cached,
                 const CommonOptions& opts) {
  auto g = load_graph(graph_path, reverse);
  auto d = obtain_decomposition(g, budget, cached);
  grank::StochasticOperator op(g);
  op.set_threads(opts.effective_threads());
  auto report = grank::assemble_spectrum(op, d, n_a, dense_limit);

  RunWriter run(opts, "spectrum",
                json{{"budget_b", budget},
                     {"n_a", n_a},
                     {"dense_limit", dense_limit},
                     {"reverse", reverse}},
                {graph_path});
  run.file("spectrum.csv", [&](std::ostream& o) { grank::write_spectrum_csv(o, report); });
  run.file("fraction_curve.csv",
           [&](std::ostream& o) { grank::write_fraction_curve_csv(o, report); });
  run.file("graph_summary.csv",
           [&](std::ostream& o) { grank::write_graph_summary_csv(o, stem_of(graph_path), g); });
  if (opts.gnuplot)
    run.file("fraction_curve.dat",
             [&](std::ostream& o) { grank::write_xy_gnuplot(o, report.fraction_curve); });
  run.note("unit_count", report.unit_count);
  run.note("core_ritz_count", report.core_ritz.size());
  run.finish();
  return kExitOk;
}

int cmd_pagerank(const std::string& graph_path, double one_minus_alpha,
                 const grank::SolverConfig& cfg, bool reverse, double budget,
                 const std::string& cached, const CommonOptions& opts) {
  if (!(one_minus_alpha > 0.0 && one_minus_alpha <= 1.0)) {
    std::cerr << "error: --one-minus-alpha must be in (0, 1]; the alpha = 1 limit lives on the "
                 "invariant subspaces (see the gap command)\n";
    return kExitInput;
  }
  auto g = load_graph(graph_path, reverse);
  grank::StochasticOperator op(g);
  op.set_threads(opts.effective_threads());
  const double alpha = 1.0 - one_minus_alpha;
  auto result = grank::solve_pagerank_hybrid(op, alpha, cfg);

  RunWriter run(opts, "pagerank",
                json{{"one_minus_alpha", one_minus_alpha},
                     {"n_i", cfg.power_steps_per_cycle},
                     {"n_a", cfg.arnoldi_dim},
                     {"tol", cfg.tol},
                     {"adaptive", cfg.adaptive},
                     {"refined", cfg.refined},
                     {"max_cycles", cfg.max_cycles},
                     {"reverse", reverse}},
                {graph_path});
  run.file("pagerank.csv", [&](std::ostream& o) { grank::write_pagerank_csv(o, g, result); });
  run.file("convergence.csv",
           [&](std::ostream& o) { grank::write_convergence_log_csv(o, result); });
  run.file("graph_summary.csv",
           [&](std::ostream& o) { grank::write_graph_summary_csv(o, stem_of(graph_path), g); });
  run.note("converged", result.converged);
  run.note("residual", result.residual);
  run.note("power_iterations", result.iterations);
  run.note("arnoldi_steps", result.arnoldi_steps);
  if (!cached.empty()) {
    auto d = obtain_decomposition(g, budget, cached);
    run.note("core_residual_weight", grank::core_residual_weight(result.vector, d));
  }
  run.finish();
  if (!result.converged) {
    std::cerr << "error: solver did not reach tol = " << cfg.tol << " (residual "
              << result.residual << "); partial results written\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_gap(const std::string& graph_path, double budget, const grank::ProjectedPowerConfig& cfg,
            const std::string& method, std::size_t n_a, bool reverse, const std::string& cached,
            const CommonOptions& opts) {
  auto g = load_graph(graph_path, reverse);
  auto d = obtain_decomposition(g, budget, cached);
  if (d.core.empty()) {
    std::cerr << "error: decomposition has an empty core (the invariant subspaces cover the "
                 "whole graph); the core gap is undefined\n";
    return kExitInput;
  }
  grank::StochasticOperator op(g);
  op.set_threads(opts.effective_threads());
  grank::GapResult result = method == "arnoldi" ? grank::gap_via_arnoldi(op, d, n_a)
                                                : grank::gap_via_projected_power(op, d, cfg);

  RunWriter run(opts, "gap",
                json{{"budget_b", budget},
                     {"eps1", cfg.eps1},
                     {"eps2", cfg.eps2},
                     {"max_iter", cfg.max_iter},
                     {"method", method},
                     {"n_a", n_a},
                     {"reverse", reverse}},
                {graph_path});
  run.file("gap.csv", [&](std::ostream& o) { grank::write_gap_csv(o, result); });
  run.file("core_vector.csv",
           [&](std::ostream& o) { grank::write_vector_csv(o, result.leading_vector); });
  run.note("gap", result.gap);
  run.note("converged", result.converged);
  run.note("iterations", result.iterations);
  run.finish();
  return result.converged || method == "arnoldi" ? kExitOk : kExitSolver;
}

int cmd_scan(const std::string& graph_path, std::vector<double> one_minus_alphas,
             const grank::SolverConfig& cfg, double budget, bool reverse,
             const std::string& cached, const CommonOptions& opts) {
  for (double x : one_minus_alphas)
    if (!(x > 0.0 && x <= 1.0)) {
      std::cerr << "error: every --one-minus-alpha must be in (0, 1]\n";
      return kExitInput;
    }
  auto g = load_graph(graph_path, reverse);
  auto d = obtain_decomposition(g, budget, cached);
  grank::StochasticOperator op(g);
  op.set_threads(opts.effective_threads());

  std::vector<double> alphas;
  alphas.reserve(one_minus_alphas.size());
  for (double x : one_minus_alphas) alphas.push_back(1.0 - x);
  auto rows = grank::alpha_scan(op, d, alphas, cfg);

  RunWriter run(opts, "scan",
                json{{"one_minus_alpha_grid", one_minus_alphas},
                     {"budget_b", budget},
                     {"n_i", cfg.power_steps_per_cycle},
                     {"n_a", cfg.arnoldi_dim},
                     {"tol", cfg.tol},
                     {"reverse", reverse}},
                {graph_path});
  run.file("alpha_scan.csv", [&](std::ostream& o) { grank::write_alpha_scan_csv(o, rows); });
  if (opts.gnuplot) {
    std::vector<std::pair<double, double>> w_points, f_points;
    for (const auto& r : rows) {
      w_points.emplace_back(r.one_minus_alpha, r.residual_weight);
      f_points.emplace_back(r.one_minus_alpha, r.fidelity);
    }
    run.file("residual_weight.dat",
             [&](std::ostream& o) { grank::write_xy_gnuplot(o, w_points); });
    run.file("fidelity.dat", [&](std::ostream& o) { grank::write_xy_gnuplot(o, f_points); });
  }
  if (rows.size() >= 2) run.note("fidelity_limit_estimate", grank::extrapolate_fidelity_limit(rows));
  bool all_converged = true;
  for (const auto& r : rows) all_converged = all_converged && r.converged;
  run.note("all_converged", all_converged);
  run.finish();
  return all_converged ? kExitOk : kExitSolver;
}

int cmd_stats(const std::string& graph_path, double one_minus_alpha,
              const grank::SolverConfig& cfg, double budget, std::pair<double, double> window,
              bool reverse, const std::string& cached, const CommonOptions& opts) {
  if (!(one_minus_alpha > 0.0 && one_minus_alpha <= 1.0)) {
    std::cerr << "error: --one-minus-alpha must be in (0, 1]\n";
    return kExitInput;
  }
  auto g = load_graph(graph_path, reverse);
  auto d = obtain_decomposition(g, budget, cached);
  if (d.subspaces.empty()) {
    std::cerr << "error: no invariant subspaces; the subspace statistics are undefined\n";
    return kExitInput;
  }
  grank::StochasticOperator op(g);
  op.set_threads(opts.effective_threads());

  auto curve = grank::subspace_ccdf(d);
  auto result = grank::solve_pagerank_hybrid(op, 1.0 - one_minus_alpha, cfg);
  auto rank_points = grank::rescaled_rank_curve(result.vector, d);

  RunWriter run(opts, "stats",
                json{{"one_minus_alpha", one_minus_alpha},
                     {"budget_b", budget},
                     {"window", {window.first, window.second}},
                     {"reverse", reverse}},
                {graph_path});
  run.file("subspace_ccdf.csv", [&](std::ostream& o) { grank::write_ccdf_csv(o, curve); });
  run.file("rescaled_rank_curve.csv",
           [&](std::ostream& o) { grank::write_rank_curve_csv(o, rank_points); });
  run.note("d_mean", curve.d_mean);
  run.note("subspace_count", curve.subspace_count);
  run.note("pagerank_converged", result.converged);

  try {
    auto fit = grank::fit_subspace_ccdf(curve);
    run.file("fit_subspace_ccdf.csv", [&](std::ostream& o) { grank::write_ccdf_fit_csv(o, fit); });
    run.note("ccdf_b", fit.b);
  } catch (const std::invalid_argument& e) {
    std::cerr << "note: skipping CCDF fit: " << e.what() << '\n';
    run.note("ccdf_fit_skipped", e.what());
  }
  try {
    auto fit = grank::fit_rank_exponent(rank_points, window);
    run.file("fit_rank_exponent.csv", [&](std::ostream& o) { grank::write_rank_fit_csv(o, fit); });
    run.note("rank_exponent", fit.exponent);
  } catch (const std::invalid_argument& e) {
    std::cerr << "note: skipping rank-exponent fit: " << e.what() << '\n';
    run.note("rank_fit_skipped", e.what());
  }

  if (opts.gnuplot) {
    std::vector<std::pair<double, double>> ccdf_xy, rank_xy;
    for (const auto& p : curve.points) ccdf_xy.emplace_back(p.x, p.f);
    for (const auto& p : rank_points) rank_xy.emplace_back(p.rank_over_ns, p.p_times_ns);
    run.file("subspace_ccdf.dat", [&](std::ostream& o) { grank::write_xy_gnuplot(o, ccdf_xy); });
    run.file("rescaled_rank_curve.dat",
             [&](std::ostream& o) { grank::write_xy_gnuplot(o, rank_xy); });
  }
  run.finish();
  return result.converged ? kExitOk : kExitSolver;
}

int cmd_synth(const std::string& mode, std::size_t nodes, double edge_prob,
              std::vector<std::size_t> cycle_sizes, std::size_t core_size,
              std::size_t dangling_count, std::size_t out_degree, std::uint64_t seed,
              const CommonOptions& opts) {
  grank::SyntheticSpec spec;
  if (mode == "uniform")
    spec = grank::UniformDigraphParams{nodes, edge_prob};
  else if (mode == "planted")
    spec = grank::PlantedSubspaceParams{cycle_sizes, core_size, dangling_count};
  else if (mode == "pa")
    spec = grank::PreferentialAttachmentParams{nodes, out_degree};
  else {
    std::cerr << "error: --mode must be uniform, planted or pa\n";
    return kExitInput;
  }
  auto g = grank::generate_synthetic(spec, seed);

  RunWriter run(opts, "synth",
                json{{"mode", mode},
                     {"nodes", nodes},
                     {"edge_prob", edge_prob},
                     {"cycle_sizes", cycle_sizes},
                     {"core_size", core_size},
                     {"dangling_count", dangling_count},
                     {"out_degree", out_degree},
                     {"seed", seed}},
                {});
  run.file("graph.txt", [&](std::ostream& o) { grank::write_edge_list(o, g); });
  run.file("graph_summary.csv",
           [&](std::ostream& o) { grank::write_graph_summary_csv(o, "synthetic", g); });
  run.finish();
  std::cout << (fs::path(opts.out_dir) / "graph.txt").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grank: invariant-subspace decomposition, Google-matrix spectra, PageRank at "
               "extreme damping, core-space gaps, and distribution fits for directed networks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOptions opts;
  std::string graph_path, cached_decomposition, gap_method = "projected_power";
  double budget = 0.1;
  double one_minus_alpha = 1e-8;
  std::vector<double> one_minus_alpha_grid;
  grank::SolverConfig solver;
  grank::ProjectedPowerConfig pp;
  std::size_t n_a_spectrum = 100, dense_limit = 10000;
  bool reverse = false;
  std::pair<double, double> window{0.01, 0.5};

  std::string synth_mode = "uniform";
  std::size_t synth_nodes = 100, synth_core = 1, synth_dangling = 0, synth_outdeg = 2;
  double synth_prob = 0.05;
  std::vector<std::size_t> synth_cycles;
  std::uint64_t synth_seed = 0;

  auto add_graph_arg = [&](CLI::App* cmd) {
    cmd->add_option("graph", graph_path, "Edge-list file (\"src dst\" per line, '#' comments)")
        ->required();
  };
  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n-i", solver.power_steps_per_cycle, "Power steps per cycle");
    cmd->add_option("--n-a", solver.arnoldi_dim, "Arnoldi dimension");
    cmd->add_option("--tol", solver.tol, "Residual target for ||P - G(alpha)P||_1");
    cmd->add_option("--max-cycles", solver.max_cycles, "Cycle limit");
    cmd->add_flag("--adaptive", solver.adaptive, "Trigger Arnoldi once the residual stalls");
    cmd->add_flag("--refined", solver.refined, "Use refined (smallest-singular-vector) steps");
  };
  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget-b", budget, "Closure budget as a fraction of N");
  };
  auto add_cached = [&](CLI::App* cmd) {
    cmd->add_option("--decomposition", cached_decomposition,
                    "Reuse a decomposition.csv instead of recomputing");
  };
  auto add_reverse = [&](CLI::App* cmd) {
    cmd->add_flag("--reverse", reverse,
                  "Work on the link-reversed network (CheiRank analyses)");
  };

  auto* dec = app.add_subcommand("decompose", "Split a network into core and invariant subspaces");
  add_graph_arg(dec);
  add_budget(dec);
  add_reverse(dec);
  add_common(dec, opts);

  auto* spec = app.add_subcommand("spectrum", "Subspace eigenvalues plus core Ritz values");
  add_graph_arg(spec);
  add_budget(spec);
  add_cached(spec);
  add_reverse(spec);
  spec->add_option("--n-a", n_a_spectrum, "Arnoldi dimension for the core block");
  spec->add_option("--dense-limit", dense_limit, "Largest subspace block solved densely");
  add_common(spec, opts);

  auto* pr = app.add_subcommand("pagerank", "PageRank at damping alpha = 1 - x");
  add_graph_arg(pr);
  pr->add_option("--one-minus-alpha", one_minus_alpha, "1 - alpha (e.g. 1e-8)")->required();
  add_reverse(pr);
  add_solver_flags(pr);
  add_budget(pr);
  add_cached(pr);
  add_common(pr, opts);

  auto* gap = app.add_subcommand("gap", "Core-space gap 1 - lambda_1(S_cc)");
  add_graph_arg(gap);
  add_budget(gap);
  add_cached(gap);
  add_reverse(gap);
  gap->add_option("--eps1", pp.eps1, "1-norm stopping threshold");
  gap->add_option("--eps2", pp.eps2, "Componentwise relative stopping threshold");
  gap->add_option("--max-iter", pp.max_iter, "Iteration cap");
  gap->add_option("--method", gap_method, "projected_power (default) or arnoldi");
  gap->add_option("--n-a", n_a_spectrum, "Arnoldi dimension for --method arnoldi");
  add_common(gap, opts);

  auto* scan = app.add_subcommand("scan", "Residual weight and fidelity across a damping grid");
  add_graph_arg(scan);
  scan->add_option("--one-minus-alpha", one_minus_alpha_grid, "Grid of 1 - alpha values")
      ->required()
      ->delimiter(',');
  add_solver_flags(scan);
  add_budget(scan);
  add_cached(scan);
  add_reverse(scan);
  add_common(scan, opts);

  auto* stats = app.add_subcommand("stats", "Subspace-dimension CCDF and rescaled rank fits");
  add_graph_arg(stats);
  stats->add_option("--one-minus-alpha", one_minus_alpha, "1 - alpha for the rank curve");
  stats->add_option("--window-lo", window.first, "Fit window lower bound (fraction of N_s)");
  stats->add_option("--window-hi", window.second, "Fit window upper bound (fraction of N_s)");
  add_solver_flags(stats);
  add_budget(stats);
  add_cached(stats);
  add_reverse(stats);
  add_common(stats, opts);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic network");
  synth->add_option("--mode", synth_mode, "uniform, planted or pa")->required();
  synth->add_option("--nodes", synth_nodes, "Node count (uniform, pa)");
  synth->add_option("--edge-prob", synth_prob, "Edge probability (uniform)");
  synth->add_option("--cycle-sizes", synth_cycles, "Planted cycle sizes (planted)")
      ->delimiter(',');
  synth->add_option("--core-size", synth_core, "Core nodes (planted)");
  synth->add_option("--dangling-count", synth_dangling, "Dangling sinks (planted)");
  synth->add_option("--out-degree", synth_outdeg, "Links per new node (pa)");
  synth->add_option("--seed", synth_seed, "RNG seed");
  add_common(synth, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (dec->parsed()) return cmd_decompose(graph_path, budget, reverse, opts);
    if (spec->parsed())
      return cmd_spectrum(graph_path, budget, n_a_spectrum, dense_limit, reverse,
                          cached_decomposition, opts);
    if (pr->parsed())
      return cmd_pagerank(graph_path, one_minus_alpha, solver, reverse, budget,
                          cached_decomposition, opts);
    if (gap->parsed())
      return cmd_gap(graph_path, budget, pp, gap_method, n_a_spectrum, reverse,
                     cached_decomposition, opts);
    if (scan->parsed())
      return cmd_scan(graph_path, one_minus_alpha_grid, solver, budget, reverse,
                      cached_decomposition, opts);
    if (stats->parsed())
      return cmd_stats(graph_path, one_minus_alpha, solver, budget, window, reverse,
                       cached_decomposition, opts);
    if (synth->parsed())
      return cmd_synth(synth_mode, synth_nodes, synth_prob, synth_cycles, synth_core,
                       synth_dangling, synth_outdeg, synth_seed, opts);
  } catch (const grank::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
