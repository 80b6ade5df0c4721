#pragma once

#include <iosfwd>
#include <string>

#include "grank/decomposition.hpp"
#include "grank/graph.hpp"
#include "grank/pagerank.hpp"
#include "grank/spectral.hpp"
#include "grank/stats.hpp"

namespace grank {

// All writers emit a header row and print reals with 17 significant
// digits, so identical runs produce byte-identical files.

/// name,N,L,dangling_count
void write_graph_summary_csv(std::ostream& out, const std::string& name, const DirectedGraph& g);

/// name,N,L,N_s,mean_subspace_dimension
void write_decomposition_summary_csv(std::ostream& out, const std::string& name,
                                     const DirectedGraph& g, const Decomposition& d);

/// node,class,subspace_id,zero_order  (core rows carry -1,-1)
void write_decomposition_csv(std::ostream& out, const Decomposition& d);

/// Inverse of write_decomposition_csv; roots are set to the smallest
/// member since the CSV does not carry them.
Decomposition read_decomposition_csv(std::istream& in, const DirectedGraph& g);

/// dense_id,external_id
void write_id_map_csv(std::ostream& out, const DirectedGraph& g);

/// re,im,source,residual with source "core" or the subspace id.
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);

/// abs_lambda,fraction
void write_fraction_curve_csv(std::ostream& out, const SpectrumReport& report);

/// node,external_id,value,rank
void write_pagerank_csv(std::ostream& out, const DirectedGraph& g, const PageRankResult& result);

/// step,residual,event
void write_convergence_log_csv(std::ostream& out, const PageRankResult& result);

/// gap,iterations,converged,method,seed_touches_dangling
void write_gap_csv(std::ostream& out, const GapResult& result);

/// x,F
void write_ccdf_csv(std::ostream& out, const CcdfCurve& curve);

/// b,d_mean,fit_error
void write_ccdf_fit_csv(std::ostream& out, const CcdfFit& fit);

/// rank_over_ns,p_times_ns
void write_rank_curve_csv(std::ostream& out, std::span<const RankCurvePoint> points);

/// exponent,mu,window_lo,window_hi,fit_error
void write_rank_fit_csv(std::ostream& out, const RankFit& fit);

/// one_minus_alpha,residual_weight,fidelity,converged
void write_alpha_scan_csv(std::ostream& out, std::span<const AlphaScanRow> rows);

/// Plot-ready two-column whitespace file (no header).
void write_xy_gnuplot(std::ostream& out, std::span<const std::pair<double, double>> points);

std::string format_double(double value);  // %.17g

}  // namespace grank
