#include "grank/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace grank {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_graph_summary_csv(std::ostream& out, const std::string& name, const DirectedGraph& g) {
  out << "name,N,L,dangling_count\n";
  out << name << ',' << g.node_count() << ',' << g.link_count() << ','
      << g.dangling_nodes().size() << '\n';
}

void write_decomposition_summary_csv(std::ostream& out, const std::string& name,
                                     const DirectedGraph& g, const Decomposition& d) {
  out << "name,N,L,N_s,mean_subspace_dimension\n";
  out << name << ',' << g.node_count() << ',' << g.link_count() << ','
      << d.subspace_node_count() << ',' << format_double(d.mean_subspace_dimension()) << '\n';
}

void write_decomposition_csv(std::ostream& out, const Decomposition& d) {
  out << "node,class,subspace_id,zero_order\n";
  std::vector<int> zero_order(d.node_count, -1);
  for (const auto& sub : d.subspaces)
    for (std::size_t k = 0; k < sub.members.size(); ++k)
      zero_order[sub.members[k]] = sub.zero_orders[k];
  for (NodeId v = 0; v < d.node_count; ++v) {
    if (d.subspace_of[v] < 0)
      out << v << ",core,-1,-1\n";
    else
      out << v << ",subspace," << d.subspace_of[v] << ',' << zero_order[v] << '\n';
  }
}

Decomposition read_decomposition_csv(std::istream& in, const DirectedGraph& g) {
  Decomposition d;
  d.node_count = g.node_count();
  d.subspace_of.assign(d.node_count, -1);

  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<NodeId>> members;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string node_s, cls, sid_s, zo_s;
    if (!std::getline(row, node_s, ',') || !std::getline(row, cls, ',') ||
        !std::getline(row, sid_s, ',') || !std::getline(row, zo_s, ','))
      throw ParseError("decomposition csv: malformed row at line " + std::to_string(line_no),
                       line_no);
    const auto node = static_cast<NodeId>(std::stoul(node_s));
    if (node >= d.node_count)
      throw ParseError("decomposition csv: node out of range at line " + std::to_string(line_no),
                       line_no);
    if (cls == "core") {
      d.core.push_back(node);
    } else {
      const auto sid = static_cast<std::size_t>(std::stoul(sid_s));
      if (members.size() <= sid) members.resize(sid + 1);
      members[sid].push_back(node);
      d.subspace_of[node] = static_cast<std::int32_t>(sid);
    }
  }
  std::sort(d.core.begin(), d.core.end());
  for (auto& m : members) {
    Subspace sub;
    std::sort(m.begin(), m.end());
    sub.members = std::move(m);
    if (sub.members.empty()) throw ParseError("decomposition csv: empty subspace", 0);
    sub.root = sub.members.front();
    sub.zero_orders = zero_node_orders(g, sub.members);
    d.subspaces.push_back(std::move(sub));
  }
  return d;
}

void write_id_map_csv(std::ostream& out, const DirectedGraph& g) {
  out << "dense_id,external_id\n";
  for (NodeId v = 0; v < g.node_count(); ++v) out << v << ',' << g.external_id(v) << '\n';
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report) {
  out << "re,im,source,residual\n";
  for (const auto& [value, sid] : report.subspace_eigs)
    out << format_double(value.real()) << ',' << format_double(value.imag()) << ',' << sid
        << ",0\n";
  for (const auto& [value, residual] : report.core_ritz)
    out << format_double(value.real()) << ',' << format_double(value.imag()) << ",core,"
        << format_double(residual) << '\n';
}

void write_fraction_curve_csv(std::ostream& out, const SpectrumReport& report) {
  out << "abs_lambda,fraction\n";
  for (const auto& [mod, frac] : report.fraction_curve)
    out << format_double(mod) << ',' << format_double(frac) << '\n';
}

void write_pagerank_csv(std::ostream& out, const DirectedGraph& g, const PageRankResult& result) {
  out << "node,external_id,value,rank\n";
  auto ranks = rank_of(result.rank_perm);
  for (NodeId v = 0; v < g.node_count(); ++v)
    out << v << ',' << g.external_id(v) << ',' << format_double(result.vector[v]) << ','
        << ranks[v] << '\n';
}

void write_convergence_log_csv(std::ostream& out, const PageRankResult& result) {
  out << "step,residual,event\n";
  for (const auto& entry : result.log)
    out << entry.step << ',' << format_double(entry.residual) << ','
        << (entry.arnoldi ? "arnoldi" : "power") << '\n';
}

void write_gap_csv(std::ostream& out, const GapResult& result) {
  out << "gap,iterations,converged,method,seed_touches_dangling\n";
  out << format_double(result.gap) << ',' << result.iterations << ','
      << (result.converged ? 1 : 0) << ','
      << (result.method == GapMethod::projected_power ? "projected_power" : "arnoldi") << ','
      << (result.seed_touches_dangling ? 1 : 0) << '\n';
}

void write_ccdf_csv(std::ostream& out, const CcdfCurve& curve) {
  out << "x,F\n";
  for (const auto& p : curve.points)
    out << format_double(p.x) << ',' << format_double(p.f) << '\n';
}

void write_ccdf_fit_csv(std::ostream& out, const CcdfFit& fit) {
  out << "b,d_mean,fit_error\n";
  out << format_double(fit.b) << ',' << format_double(fit.d_mean) << ','
      << format_double(fit.fit_error) << '\n';
}

void write_rank_curve_csv(std::ostream& out, std::span<const RankCurvePoint> points) {
  out << "rank_over_ns,p_times_ns\n";
  for (const auto& p : points)
    out << format_double(p.rank_over_ns) << ',' << format_double(p.p_times_ns) << '\n';
}

void write_rank_fit_csv(std::ostream& out, const RankFit& fit) {
  out << "exponent,mu,window_lo,window_hi,fit_error\n";
  out << format_double(fit.exponent) << ',' << format_double(fit.mu()) << ','
      << format_double(fit.fit_range.first) << ',' << format_double(fit.fit_range.second) << ','
      << format_double(fit.fit_error) << '\n';
}

void write_alpha_scan_csv(std::ostream& out, std::span<const AlphaScanRow> rows) {
  out << "one_minus_alpha,residual_weight,fidelity,converged\n";
  for (const auto& r : rows)
    out << format_double(r.one_minus_alpha) << ',' << format_double(r.residual_weight) << ','
        << format_double(r.fidelity) << ',' << (r.converged ? 1 : 0) << '\n';
}

void write_xy_gnuplot(std::ostream& out, std::span<const std::pair<double, double>> points) {
  for (const auto& [x, y] : points) out << format_double(x) << ' ' << format_double(y) << '\n';
}

}  // namespace grank
