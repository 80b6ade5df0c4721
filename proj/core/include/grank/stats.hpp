#pragma once

#include <span>
#include <vector>

#include "grank/decomposition.hpp"
#include "grank/pagerank.hpp"
#include "grank/stochastic.hpp"

namespace grank {

struct CcdfPoint {
  double x = 0.0;  // dimension rescaled by the mean dimension
  double f = 0.0;  // fraction of subspaces with dimension strictly larger
};

struct CcdfCurve {
  std::vector<CcdfPoint> points;  // one point per distinct dimension, x ascending
  double d_mean = 0.0;
  std::size_t subspace_count = 0;
};

/// Empirical complementary CDF of the subspace dimensions, x-axis rescaled
/// by the mean dimension. Throws when there is no subspace.
CcdfCurve subspace_ccdf(const Decomposition& d);

/// Step-function evaluation of a CCDF curve (1 left of the first point).
double ccdf_value(std::span<const CcdfPoint> points, double x);

struct CcdfFit {
  double b = 0.0;       // shape exponent of (1 + x/(b-1))^{-b}
  double d_mean = 0.0;
  std::vector<CcdfPoint> points;  // log-binned samples the fit ran on
  double fit_error = 0.0;         // RMS residual in log F
};

/// One-parameter least-squares fit of log F against -b log(1 + x/(b-1))
/// on log-binned samples (16 bins per decade). Requires at least 10
/// distinct dimension values.
CcdfFit fit_subspace_ccdf(const CcdfCurve& curve);

struct RankCurvePoint {
  double rank_over_ns = 0.0;  // K / N_s
  double p_times_ns = 0.0;    // P(K) * N_s
};

/// PageRank values in rank order, both axes rescaled by N_s.
std::vector<RankCurvePoint> rescaled_rank_curve(const RankVector& p, const Decomposition& d);

struct RankFit {
  double exponent = 0.0;                    // decay exponent, reported positive
  std::pair<double, double> fit_range;      // window in K/N_s
  std::vector<RankCurvePoint> points;       // log-binned samples used
  double fit_error = 0.0;                   // RMS residual in log P
  double mu() const { return 1.0 + 1.0 / exponent; }  // derived density exponent
};

/// Log-log least-squares slope over the rank window (defaults to
/// [0.01, 0.5] of N_s). Requires at least 20 points inside the window.
RankFit fit_rank_exponent(std::span<const RankCurvePoint> points,
                          std::pair<double, double> window = {0.01, 0.5});

struct AlphaScanRow {
  double one_minus_alpha = 0.0;
  double residual_weight = 0.0;  // w(alpha), PageRank mass on the core
  double fidelity = 0.0;         // against the alpha = 0.85 reference
  bool converged = true;
};

/// Solves PageRank for each damping value (ascending alpha, warm-started
/// from the previous solution) and reports w(alpha) and the fidelity
/// against a reference solve at alpha = 0.85. Rows follow the input order.
std::vector<AlphaScanRow> alpha_scan(const StochasticOperator& op, const Decomposition& d,
                                     std::span<const double> alphas, const SolverConfig& cfg);

/// f(1) estimate: linear extrapolation in (1 - alpha) from the two rows
/// with the smallest 1 - alpha.
double extrapolate_fidelity_limit(std::span<const AlphaScanRow> rows);

}  // namespace grank
