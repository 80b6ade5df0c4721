#pragma once

#include <span>
#include <vector>

#include "grank/decomposition.hpp"
#include "grank/graph.hpp"

namespace grank {

/// Length-N vector of nonnegative reals; 1-norm 1 when it represents a
/// probability distribution.
using RankVector = std::vector<double>;

double norm1(std::span<const double> v);
double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
void normalize_1(std::vector<double>& v);
RankVector uniform_vector(std::size_t n);

/// Column-stochastic operator of a directed graph, kept matrix-free:
/// column j carries weight 1/outdeg(j) on its targets; columns of dangling
/// nodes act as uniform 1/N. The damped operator applies as
/// alpha * (S v) + (1 - alpha) * sum(v) / N without ever forming it.
///
/// Sequential products run all reductions in a fixed order (rank-one
/// dangling term first, then columns ascending) and are bit-reproducible.
/// The parallel path combines per-thread chunk buffers in chunk order, so
/// it is deterministic for a fixed thread count but may differ from the
/// sequential result in the last bits; acceptance paths use threads = 1.
class StochasticOperator {
 public:
  // Holds a reference; the graph must outlive the operator.
  explicit StochasticOperator(const DirectedGraph& graph);
  explicit StochasticOperator(DirectedGraph&&) = delete;

  std::size_t size() const { return n_; }
  const DirectedGraph& graph() const { return *graph_; }
  const std::vector<NodeId>& dangling() const { return dangling_; }
  bool is_dangling(NodeId v) const { return column_weight_[v] == 0.0; }
  /// 1/outdeg(j) for regular columns, 0 for dangling ones.
  double column_weight(NodeId j) const { return column_weight_[j]; }

  /// Number of worker threads used by products (1 = sequential).
  void set_threads(unsigned threads) { threads_ = threads == 0 ? 1 : threads; }
  unsigned threads() const { return threads_; }

  /// y = S v. Preserves the 1-norm of nonnegative input.
  RankVector apply_s(std::span<const double> v) const;

  /// y = alpha * S v + (1 - alpha) * sum(v) / N.
  RankVector apply_g(double alpha, std::span<const double> v) const;

  struct CoreProduct {
    RankVector vector;    // S_cc v, indexed like d.core
    double escaped_mass;  // 1-norm landing on subspace rows (nonnegative input)
  };

  /// Product with the core-projected block S_cc: rows and columns restricted
  /// to d.core, dangling core columns contributing 1/N to every core row.
  /// escaped_mass accounts for the share lost to subspace rows, so
  /// vector 1-norm + escaped_mass equals the input 1-norm for nonneg input.
  CoreProduct apply_core_projected(const Decomposition& d, std::span<const double> v_core) const;

 private:
  void scatter(std::span<const double> v, std::span<double> y) const;

  const DirectedGraph* graph_;
  std::size_t n_;
  std::vector<double> column_weight_;
  std::vector<NodeId> dangling_;
  unsigned threads_ = 1;
};

/// Serialize (index,value) rows with 17 significant digits.
void write_vector_csv(std::ostream& out, std::span<const double> v);

}  // namespace grank
