// Acceptance suite: one self-contained check per release criterion, one
// PASS/FAIL line each, nonzero exit when any mandatory criterion fails.
// The last criterion needs the original crawl datasets and reports SKIP
// unless GRANK_CRAWL_DIR points at them.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "grank/csv.hpp"
#include "grank/decomposition.hpp"
#include "grank/graph.hpp"
#include "grank/pagerank.hpp"
#include "grank/spectral.hpp"
#include "grank/stats.hpp"
#include "grank/stochastic.hpp"
#include "grank/synth.hpp"
#include "test_support.hpp"

using namespace grank;
using namespace grank::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double l1_diff(const RankVector& a, const RankVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// Deterministic ensembles used below. The unit-eigenvalue and gap
// criteria presuppose networks that actually possess invariant
// subspaces (as web crawls do), so those scans keep only such seeds.
DirectedGraph ensemble_graph(std::uint64_t seed, std::size_t max_n, double density_scale) {
  const std::size_t n = 4 + seed % (max_n - 3);
  const double p = std::min(0.9, density_scale / static_cast<double>(n));
  return random_digraph(n, p, seed * 7919 + 13);
}

// ---------------------------------------------------------------------

Outcome criterion1_decomposition_oracle() {
  Outcome out;
  for (const auto& g : {g4(), g5(), g6(), g7()}) {
    auto d = decompose(g);
    out.require(matches_brute_force(d, brute_force_decompose(g)), "fixture mismatch");
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 11;
    const double p = 0.08 + 0.02 * static_cast<double>(seed % 7);
    auto g = random_digraph(n, p, seed * 31 + 1);
    auto d = decompose(g);
    if (!matches_brute_force(d, brute_force_decompose(g))) {
      out.require(false, "random graph mismatch at seed " + std::to_string(seed));
      break;
    }
  }
  return out;
}

Outcome criterion2_block_structure() {
  Outcome out;
  auto check_graph = [&](const DirectedGraph& g) {
    auto d = decompose(g);
    auto report = verify_decomposition(g, d);
    out.require(report.pass && report.violating_edges.empty(), "verification found violations");

    if (g.node_count() <= 50) {
      // Reorder S as (subspace nodes..., core nodes...): the lower-left
      // core-rows x subspace-columns block must vanish identically.
      auto s = dense_s(g);
      std::vector<NodeId> order;
      for (const auto& sub : d.subspaces)
        order.insert(order.end(), sub.members.begin(), sub.members.end());
      const std::size_t ns = order.size();
      order.insert(order.end(), d.core.begin(), d.core.end());
      for (std::size_t r = ns; r < order.size(); ++r)
        for (std::size_t c = 0; c < ns; ++c)
          if (s(order[r], order[c]) != 0.0) {
            out.require(false, "nonzero lower-left entry");
            return;
          }
    }
  };
  for (const auto& g : {g4(), g5(), g6(), g7()}) check_graph(g);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 11;
    check_graph(random_digraph(n, 0.08 + 0.02 * static_cast<double>(seed % 7), seed * 31 + 1));
  }
  for (std::uint64_t seed = 0; seed < 40 && out.pass; ++seed)
    check_graph(ensemble_graph(seed, 50, 1.6));
  return out;
}

Outcome criterion3_unit_eigenvalues() {
  Outcome out;
  auto unit_count_of = [](const DirectedGraph& g) {
    StochasticOperator op(g);
    auto d = decompose(g);
    std::size_t count = 0;
    for (const auto& block : subspace_spectrum(op, d))
      for (const auto& lambda : block)
        if (std::abs(lambda - 1.0) < 1e-10) ++count;
    return count;
  };

  out.require(unit_count_of(g5()) == 1, "G5 unit count");
  out.require(unit_count_of(g6()) == 2, "G6 unit count");

  std::size_t accepted = 0;
  for (std::uint64_t seed = 0; accepted < 50 && seed < 4000; ++seed) {
    auto g = ensemble_graph(seed, 50, 1.4);
    auto d = decompose(g);
    if (d.subspaces.empty()) continue;  // the claim concerns subspace-bearing networks
    ++accepted;
    auto dense = dense_eigenvalues(dense_s(g));
    std::size_t dense_units = 0;
    for (const auto& lambda : dense)
      if (std::abs(lambda - 1.0) < 1e-10) ++dense_units;
    if (unit_count_of(g) != dense_units) {
      out.require(false, "count mismatch at seed " + std::to_string(seed));
      break;
    }
  }
  out.require(accepted == 50, "ensemble scan exhausted");
  return out;
}

Outcome criterion4_solver_oracle() {
  Outcome out;
  SolverConfig cfg;
  cfg.power_steps_per_cycle = 300;
  cfg.arnoldi_dim = 40;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 20 + (seed * 17) % 181;  // 20..200
    auto g = random_digraph(n, 3.0 / static_cast<double>(n), seed * 101 + 7);
    StochasticOperator op(g);
    for (double alpha : {0.5, 0.85, 1.0 - 1e-6}) {
      auto hybrid = solve_pagerank_hybrid(op, alpha, cfg);
      if (!hybrid.converged || !(hybrid.residual < 1e-13)) {
        out.require(false, "non-convergence at seed " + std::to_string(seed) + " alpha " +
                               std::to_string(alpha));
        return out;
      }
      auto oracle = solve_pagerank_dense(op, alpha);
      if (l1_diff(hybrid.vector, oracle) > 1e-10) {
        out.require(false, "solver/oracle distance above 1e-10 at seed " + std::to_string(seed));
        return out;
      }
    }
  }
  return out;
}

Outcome criterion5_gap_correctness() {
  Outcome out;

  {
    auto g = g4();
    StochasticOperator op(g);
    auto d = decompose(g);
    auto result = gap_via_projected_power(op, d);
    out.require(std::abs(result.gap - (1.0 - 0.70710678118654752)) <= 1e-9, "G4 gap off");
  }

  std::size_t accepted = 0;
  for (std::uint64_t seed = 0; accepted < 50 && seed < 8000; ++seed) {
    auto g = ensemble_graph(seed, 100, 1.5);
    auto d = decompose(g);
    if (d.subspaces.empty() || d.core.empty()) continue;
    if (g.dangling_nodes().empty()) continue;  // keeps the core block aperiodic
    const double dense_gap = 1.0 - dense_spectral_radius(dense_core_block(g, d));
    if (dense_gap <= 1e-6) continue;  // degenerate for a relative comparison
    ++accepted;

    StochasticOperator op(g);
    ProjectedPowerConfig cfg;
    cfg.eps2 = 1e-9;
    auto result = gap_via_projected_power(op, d, cfg);
    if (std::abs(result.gap - dense_gap) > 1e-8 * dense_gap) {
      out.require(false, "gap mismatch at seed " + std::to_string(seed) + " (pp " +
                             std::to_string(result.gap) + " dense " + std::to_string(dense_gap) +
                             ")");
      break;
    }

    // Escape-probability identity at the reported iterate.
    auto product = op.apply_core_projected(d, result.leading_vector);
    if (std::abs(product.escaped_mass + norm1(product.vector) - 1.0) > 1e-12 ||
        std::abs(result.gap - product.escaped_mass) > 1e-12) {
      out.require(false, "escaped-mass identity violated at seed " + std::to_string(seed));
      break;
    }
  }
  out.require(accepted == 50, "ensemble scan exhausted");
  return out;
}

// A quasi-subspace: a 30-stage cascade whose per-stage forward probability
// is 1e-3, ending on a dangling node. The composite escape probability is
// the product of the stage leaks, far below the eigenvalue resolution of
// double precision, yet the escaped-mass accounting resolves it.
struct CascadeFixture {
  DirectedGraph graph;
  double analytic_gap = 0.0;
};

CascadeFixture build_cascade() {
  constexpr std::size_t kBallast = 999;
  constexpr std::size_t kChain = 30;
  std::vector<Edge> edges;
  // Subspace cycle the escaped mass lands on.
  edges.push_back({0, 1});
  edges.push_back({1, 0});
  const NodeId ballast0 = 2;
  const NodeId chain0 = ballast0 + kBallast;
  const NodeId dangling = chain0 + kChain;
  for (NodeId q = ballast0; q < chain0; ++q) {
    edges.push_back({q, q});       // self-loop keeps the recirculation aperiodic
    edges.push_back({q, chain0});  // hand the mass back to the chain head
  }
  for (std::size_t i = 0; i < kChain; ++i) {
    const NodeId h = chain0 + static_cast<NodeId>(i);
    for (NodeId q = ballast0; q < chain0; ++q) edges.push_back({h, q});
    edges.push_back({h, i + 1 < kChain ? h + 1 : dangling});
  }
  const std::size_t n = static_cast<std::size_t>(dangling) + 1;

  CascadeFixture fixture;
  fixture.graph = DirectedGraph::from_edges(n, std::move(edges));

  // Leading-order steady state: u = 2xC per ballast node, c_0 = 999 x C,
  // c_{i+1} = x c_i, d = x c_29 / (1 - 1/N); normalization
  // C (1 + 1998 x) + d = 1. The gap is the flux 2 d / N into the cycle.
  const double x = 1e-3;
  const double nn = static_cast<double>(n);
  const double c_total = 1.0 / (1.0 + 2.0 * static_cast<double>(kBallast) * x);
  const double c0 = static_cast<double>(kBallast) * x * c_total;
  const double d = c0 * std::pow(x, static_cast<double>(kChain)) / (1.0 - 1.0 / nn);
  fixture.analytic_gap = 2.0 * d / nn;
  return fixture;
}

Outcome criterion6_tiny_gap() {
  Outcome out;
  auto fixture = build_cascade();
  StochasticOperator op(fixture.graph);
  auto d = decompose(fixture.graph);
  out.require(d.subspaces.size() == 1 && d.subspace_node_count() == 2, "cascade decomposition");

  auto arnoldi_result = gap_via_arnoldi(op, d, 60);
  out.require(std::abs(arnoldi_result.gap) <= 1e-12,
              "plain Arnoldi was expected to report lambda numerically equal to 1");

  auto pp = gap_via_projected_power(op, d);
  out.require(pp.gap > 0.0, "projected power gap not strictly positive");
  out.require(pp.converged, "projected power did not converge");
  const double ratio = pp.gap / fixture.analytic_gap;
  out.require(ratio > 0.5 && ratio < 2.0,
              "gap " + std::to_string(pp.gap) + " not within a factor 2 of the leak product " +
                  std::to_string(fixture.analytic_gap));
  if (out.pass) {
    std::ostringstream detail;
    detail.setf(std::ios::scientific);
    detail.precision(3);
    detail << "gap " << pp.gap << " vs leak product " << fixture.analytic_gap;
    out.detail = detail.str();
  }
  return out;
}

Outcome criterion7_limit_law() {
  Outcome out;
  {
    auto g = g6();
    StochasticOperator op(g);
    SolverConfig cfg;
    cfg.power_steps_per_cycle = 50;
    cfg.arnoldi_dim = 5;
    auto result = solve_pagerank_hybrid(op, 1.0 - 1e-8, cfg);
    out.require(result.converged, "G6 solve did not converge");
    out.require(l1_diff(result.vector, {0.25, 0.25, 0.25, 0.25, 0.0}) < 1e-6,
                "G6 limit vector off");
  }
  for (const auto& g : {g4(), g5(), g6(), g7()}) {
    StochasticOperator op(g);
    auto d = decompose(g);
    SolverConfig cfg;
    cfg.power_steps_per_cycle = 60;
    cfg.arnoldi_dim = g.node_count();
    std::vector<double> ratios;
    for (double one_minus : {1e-5, 1e-6, 1e-7}) {
      auto result = solve_pagerank_hybrid(op, 1.0 - one_minus, cfg);
      if (!result.converged) {
        out.require(false, "fixture solve did not converge");
        return out;
      }
      ratios.push_back(core_residual_weight(result.vector, d) / one_minus);
    }
    for (double r : ratios)
      out.require(std::abs(r - ratios.front()) / ratios.front() < 0.01,
                  "w(alpha)/(1-alpha) drifts by more than 1%");
  }
  return out;
}

Outcome criterion8_fit_round_trip() {
  Outcome out;

  // CCDF samples drawn exactly from F(x) = (1+2x)^{-1.5}.
  const std::size_t n = 2000;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    xs[i] = 0.5 * (std::pow(u, -1.0 / 1.5) - 1.0);
  }
  std::sort(xs.begin(), xs.end());
  CcdfCurve curve;
  curve.subspace_count = n;
  double mean = 0.0;
  for (double x : xs) mean += x;
  curve.d_mean = mean / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    curve.points.push_back({xs[i] / curve.d_mean,
                            (static_cast<double>(n - i) - 0.5) / static_cast<double>(n)});
  auto fit = fit_subspace_ccdf(curve);
  out.require(std::abs(fit.b - 1.5) <= 0.02,
              "b recovered as " + std::to_string(fit.b) + " instead of 1.5 +- 0.02");

  // Planted rank law K^{-2/3}.
  std::vector<RankCurvePoint> pts;
  const double ns = 3000.0;
  for (std::size_t k = 1; k <= 3000; ++k)
    pts.push_back({static_cast<double>(k) / ns,
                   std::pow(static_cast<double>(k), -2.0 / 3.0) * ns});
  auto rank_fit = fit_rank_exponent(pts);
  out.require(std::abs(rank_fit.exponent - 2.0 / 3.0) <= 0.01,
              "c recovered as " + std::to_string(rank_fit.exponent) + " instead of 0.667 +- 0.01");
  return out;
}

Outcome criterion9_arnoldi_accuracy() {
  Outcome out;
  std::size_t accepted = 0;
  for (std::uint64_t seed = 100; accepted < 3 && seed < 200; ++seed) {
    auto g = arnoldi_benchmark_graph(seed);
    if (!decompose(g).subspaces.empty()) continue;  // keep the unit eigenvalue simple
    ++accepted;
    StochasticOperator op(g);
    FunctionMap map(g.node_count(), [&](std::span<const double> v) { return op.apply_s(v); });
    auto f = arnoldi(map, uniform_vector(g.node_count()), 100);

    double max_dev = 0.0;
    for (std::size_t a = 0; a < f.basis.size(); ++a)
      for (std::size_t b = 0; b <= a; ++b)
        max_dev = std::max(max_dev,
                           std::abs(dot(f.basis[a], f.basis[b]) - (a == b ? 1.0 : 0.0)));
    out.require(max_dev <= 1e-12, "orthonormality " + std::to_string(max_dev));

    auto pairs = ritz_pairs(f);
    auto dense = dense_eigenvalues(dense_s(g));
    for (std::size_t k = 0; k < 5; ++k) {
      double best = 1e9;
      for (const auto& p : pairs) best = std::min(best, std::abs(p.value - dense[k]));
      if (best > 1e-8) {
        out.require(false, "Ritz value " + std::to_string(k) + " off by " + std::to_string(best));
        return out;
      }
    }
  }
  out.require(accepted == 3, "ensemble scan exhausted");
  return out;
}

Outcome criterion10_crawl_datasets(bool& skipped) {
  Outcome out;
  const char* dir = std::getenv("GRANK_CRAWL_DIR");
  if (dir == nullptr) {
    skipped = true;
    out.detail = "set GRANK_CRAWL_DIR to a directory with cambridge-2006.txt / leeds-2006.txt";
    return out;
  }
  auto load = [&](const std::string& name) {
    std::ifstream in(std::string(dir) + "/" + name);
    if (!in) throw std::runtime_error("missing " + name + " under " + dir);
    return parse_edge_list(in);
  };

  auto cambridge = load("cambridge-2006.txt");
  auto d = decompose(cambridge);
  out.require(d.subspace_node_count() == 48239, "Cambridge N_s");
  out.require(d.subspaces.size() == 1543, "Cambridge subspace count");
  std::size_t max_dim = 0;
  for (const auto& sub : d.subspaces) max_dim = std::max(max_dim, sub.members.size());
  out.require(max_dim == 4656, "Cambridge max dimension");

  StochasticOperator op(cambridge);
  std::size_t units = 0;
  for (const auto& block : subspace_spectrum(op, d))
    for (const auto& lambda : block)
      if (std::abs(lambda - 1.0) < 1e-10) ++units;
  out.require(units == 1832, "Cambridge unit count");

  auto gap = gap_via_projected_power(op, d);
  out.require(std::abs((1.0 - gap.gap) - 0.999874353718) <= 1e-9, "Cambridge lambda_1(core)");

  auto leeds = load("leeds-2006.txt");
  auto ld = decompose(leeds);
  StochasticOperator lop(leeds);
  auto lgap = gap_via_projected_power(lop, ld);
  const double expected = 3.126e-19;
  out.require(lgap.gap > 0.5 * expected && lgap.gap < 2.0 * expected, "Leeds gap");
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 = unconstrained
    std::function<Outcome()> run;
  };
  bool skipped10 = false;
  const std::vector<Entry> entries = {
      {1, "decomposition matches the brute-force classifier", 5.0,
       criterion1_decomposition_oracle},
      {2, "block-triangular structure is exact", 0.0, criterion2_block_structure},
      {3, "unit-eigenvalue accounting matches dense spectra", 0.0, criterion3_unit_eigenvalues},
      {4, "hybrid solver agrees with the dense oracle", 30.0, criterion4_solver_oracle},
      {5, "projected-power gap matches dense core blocks", 0.0, criterion5_gap_correctness},
      {6, "tiny-gap cascade is resolved below eigenvalue precision", 0.0, criterion6_tiny_gap},
      {7, "PageRank limit law and linear residual weight", 0.0, criterion7_limit_law},
      {8, "distribution fits recover planted exponents", 5.0, criterion8_fit_round_trip},
      {9, "Arnoldi matches dense eigenvalues on 500-node operators", 0.0,
       criterion9_arnoldi_accuracy},
      {10, "crawl-dataset reproduction (optional)", 0.0,
       [&skipped10] { return criterion10_crawl_datasets(skipped10); }},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = entry.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.time_limit > 0.0 && seconds > entry.time_limit) {
      out.pass = false;
      out.detail = "over the " + std::to_string(entry.time_limit) + "s budget";
    }

    std::string status = out.pass ? "PASS" : "FAIL";
    if (entry.id == 10 && skipped10) status = "SKIP";
    if (status == "FAIL") ++failures;

    std::printf("%s  criterion %2d: %s%s%s  [%.2fs]\n", status.c_str(), entry.id, entry.name,
                out.detail.empty() ? "" : " -- ", out.detail.c_str(), seconds);
  }
  return failures == 0 ? 0 : 1;
}
