#include "grank/stochastic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace grank {

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize_1(std::vector<double>& v) {
  double s = norm1(v);
  if (s == 0.0) throw std::invalid_argument("cannot 1-normalize a zero vector");
  for (double& x : v) x /= s;
}

RankVector uniform_vector(std::size_t n) {
  return RankVector(n, 1.0 / static_cast<double>(n));
}

StochasticOperator::StochasticOperator(const DirectedGraph& graph)
    : graph_(&graph), n_(graph.node_count()), column_weight_(n_, 0.0) {
  for (NodeId j = 0; j < n_; ++j) {
    std::size_t deg = graph.out_degree(j);
    if (deg == 0)
      dangling_.push_back(j);
    else
      column_weight_[j] = 1.0 / static_cast<double>(deg);
  }
}

void StochasticOperator::scatter(std::span<const double> v, std::span<double> y) const {
  const DirectedGraph& g = *graph_;
  auto run_chunk = [&](NodeId lo, NodeId hi, double* acc) {
    for (NodeId j = lo; j < hi; ++j) {
      double w = column_weight_[j] * v[j];
      if (w == 0.0) continue;
      for (NodeId i : g.out_neighbors(j)) acc[i] += w;
    }
  };

  if (threads_ <= 1 || n_ < 4096) {
    run_chunk(0, static_cast<NodeId>(n_), y.data());
    return;
  }

  // Contiguous column chunks with per-thread buffers, combined in chunk
  // order so the result is deterministic for a fixed thread count.
  // TODO: reuse the per-thread scratch buffers across products.
  const unsigned t = threads_;
  std::vector<std::vector<double>> buffers(t, std::vector<double>(n_, 0.0));
  std::vector<std::thread> workers;
  workers.reserve(t);
  const std::size_t chunk = (n_ + t - 1) / t;
  for (unsigned k = 0; k < t; ++k) {
    NodeId lo = static_cast<NodeId>(std::min<std::size_t>(k * chunk, n_));
    NodeId hi = static_cast<NodeId>(std::min<std::size_t>((k + 1) * chunk, n_));
    workers.emplace_back(run_chunk, lo, hi, buffers[k].data());
  }
  for (auto& w : workers) w.join();
  for (unsigned k = 0; k < t; ++k)
    for (std::size_t i = 0; i < n_; ++i) y[i] += buffers[k][i];
}

RankVector StochasticOperator::apply_s(std::span<const double> v) const {
  if (v.size() != n_) throw std::invalid_argument("apply_s: length mismatch");
  double dangling_sum = 0.0;
  for (NodeId j : dangling_) dangling_sum += v[j];
  RankVector y(n_, dangling_sum / static_cast<double>(n_));
  scatter(v, y);
  return y;
}

RankVector StochasticOperator::apply_g(double alpha, std::span<const double> v) const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("apply_g: alpha outside [0,1]");
  if (v.size() != n_) throw std::invalid_argument("apply_g: length mismatch");
  double total = 0.0;
  for (double x : v) total += x;
  RankVector y = apply_s(v);
  const double teleport = (1.0 - alpha) * total / static_cast<double>(n_);
  for (double& x : y) x = alpha * x + teleport;
  return y;
}

StochasticOperator::CoreProduct StochasticOperator::apply_core_projected(
    const Decomposition& d, std::span<const double> v_core) const {
  if (d.node_count != n_) throw std::invalid_argument("apply_core_projected: wrong decomposition");
  if (v_core.size() != d.core.size())
    throw std::invalid_argument("apply_core_projected: core vector length mismatch");

  // Embed on the full space, apply S, split rows into core and escaped.
  RankVector full(n_, 0.0);
  for (std::size_t k = 0; k < d.core.size(); ++k) full[d.core[k]] = v_core[k];
  RankVector y = apply_s(full);

  CoreProduct out;
  out.vector.resize(d.core.size());
  for (std::size_t k = 0; k < d.core.size(); ++k) out.vector[k] = y[d.core[k]];
  double escaped = 0.0;
  for (NodeId v = 0; v < n_; ++v)
    if (d.subspace_of[v] >= 0) escaped += y[v];
  out.escaped_mass = escaped;
  return out;
}

void write_vector_csv(std::ostream& out, std::span<const double> v) {
  out << "index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    out << i << ',' << buf << '\n';
  }
}

}  // namespace grank
