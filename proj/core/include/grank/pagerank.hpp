#pragma once

#include <vector>

#include "grank/decomposition.hpp"
#include "grank/stochastic.hpp"

namespace grank {

/// Knobs of the combined power/Arnoldi solver.
struct SolverConfig {
  std::size_t power_steps_per_cycle = 10000;  // n_i
  std::size_t arnoldi_dim = 100;              // n_A; 500 for hard spectra
  double tol = 1e-13;                         // target for ||P - G(alpha) P||_1
  bool adaptive = false;   // fire Arnoldi early once the residual stops moving
  bool refined = false;    // smallest-singular-vector step instead of Ritz step
  std::size_t max_cycles = 100;
};

struct ConvergenceLogEntry {
  std::size_t step = 0;    // cumulative power-step count
  double residual = 0.0;
  bool arnoldi = false;    // true: entry marks an Arnoldi step
};

struct PageRankResult {
  RankVector vector;
  double alpha = 0.0;
  double residual = 0.0;           // ||P - G(alpha) P||_1 of `vector`
  std::size_t iterations = 0;      // power steps spent
  std::size_t arnoldi_steps = 0;
  bool converged = false;
  std::vector<NodeId> rank_perm;   // nodes in descending value order
  std::vector<ConvergenceLogEntry> log;
};

/// steps applications of G(alpha) to p0, plus one more product to report
/// the residual of the result.
std::pair<RankVector, double> power_iterate(const StochasticOperator& op, double alpha,
                                            const RankVector& p0, std::size_t steps);

/// Alternates power_steps_per_cycle damped products with one Arnoldi step
/// (leading Ritz vector, real part, negatives clamped, renormalized;
/// discarded when clamping empties it) until the residual drops under
/// cfg.tol or max_cycles runs out. alpha = 1 is rejected: that limit is a
/// subspace property, not a fixed point this iteration can find.
PageRankResult solve_pagerank_hybrid(const StochasticOperator& op, double alpha,
                                     const SolverConfig& cfg = {}, RankVector p0 = {});

/// One refined Arnoldi step: the right singular vector of the shifted
/// rectangular Hessenberg matrix for its smallest singular value, lifted
/// and 1-norm renormalized. Falls back to returning p when clamping
/// removes everything.
RankVector refined_arnoldi_step(const StochasticOperator& op, double alpha, const RankVector& p,
                                std::size_t n_a);

/// Dense oracle P = (1-alpha) (I - alpha S)^{-1} e/N via a pivoted direct
/// solve carried out in extended precision (the system turns ill-
/// conditioned as alpha -> 1). Throws above dense_limit nodes.
RankVector solve_pagerank_dense(const StochasticOperator& op, double alpha,
                                std::size_t dense_limit = 2000);

/// Nodes sorted by value descending, ties by ascending id.
std::vector<NodeId> rank_order(const RankVector& p);

/// 1-based rank of every node under rank_order.
std::vector<std::size_t> rank_of(const std::vector<NodeId>& order);

/// Cosine similarity under the 2-norm; 1 iff proportional.
double fidelity(const RankVector& p, const RankVector& q);

/// Total PageRank mass sitting on core nodes.
double core_residual_weight(const RankVector& p, const Decomposition& d);

}  // namespace grank
