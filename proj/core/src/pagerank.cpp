#include "grank/pagerank.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "grank/spectral.hpp"

namespace grank {

namespace {

class DampedMap final : public LinearMap {
 public:
  DampedMap(const StochasticOperator& op, double alpha) : op_(&op), alpha_(alpha) {}
  std::size_t dim() const override { return op_->size(); }
  void apply(std::span<const double> in, std::span<double> out) const override {
    auto y = op_->apply_g(alpha_, in);
    std::copy(y.begin(), y.end(), out.begin());
  }

 private:
  const StochasticOperator* op_;
  double alpha_;
};

// Sign-fix, clamp negatives, 1-norm renormalize; empty() when nothing is left.
RankVector into_probability_cone(RankVector v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum < 0.0)
    for (double& x : v) x = -x;
  for (double& x : v) x = std::max(0.0, x);
  const double mass = norm1(v);
  if (mass == 0.0) return {};
  for (double& x : v) x /= mass;
  return v;
}

RankVector plain_arnoldi_step(const StochasticOperator& op, double alpha, const RankVector& p,
                              std::size_t n_a) {
  DampedMap map(op, alpha);
  auto f = arnoldi(map, p, n_a);
  auto pairs = ritz_pairs(f);
  return into_probability_cone(lift_real(f, pairs.front().krylov_vector));
}

void check_probability(const RankVector& p, std::size_t n) {
  if (p.size() != n) throw std::invalid_argument("start vector length mismatch");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw std::invalid_argument("start vector must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::invalid_argument("start vector must have 1-norm 1");
}

}  // namespace

std::pair<RankVector, double> power_iterate(const StochasticOperator& op, double alpha,
                                            const RankVector& p0, std::size_t steps) {
  check_probability(p0, op.size());
  RankVector p = p0;
  for (std::size_t s = 0; s < steps; ++s) p = op.apply_g(alpha, p);
  RankVector next = op.apply_g(alpha, p);
  double residual = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) residual += std::abs(next[i] - p[i]);
  return {std::move(p), residual};
}

PageRankResult solve_pagerank_hybrid(const StochasticOperator& op, double alpha,
                                     const SolverConfig& cfg, RankVector p0) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument(
        "solve_pagerank_hybrid: alpha must be in [0,1); the alpha = 1 limit is carried by the "
        "invariant subspaces");
  const std::size_t n = op.size();
  if (p0.empty()) p0 = uniform_vector(n);
  check_probability(p0, n);

  PageRankResult result;
  result.alpha = alpha;
  RankVector p = std::move(p0);
  double last_residual = std::numeric_limits<double>::infinity();

  for (std::size_t cycle = 0; cycle < cfg.max_cycles; ++cycle) {
    // Residual lookback for the adaptive trigger, reset every cycle.
    std::vector<double> recent;
    recent.reserve(cfg.power_steps_per_cycle ? std::min<std::size_t>(cfg.power_steps_per_cycle, 4096) : 0);

    for (std::size_t s = 0; s < cfg.power_steps_per_cycle; ++s) {
      RankVector next = op.apply_g(alpha, p);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) r += std::abs(next[i] - p[i]);
      ++result.iterations;
      result.log.push_back({result.iterations, r, false});
      last_residual = r;
      if (r < cfg.tol) {
        result.vector = std::move(p);  // r certifies the pre-product iterate
        result.residual = r;
        result.converged = true;
        result.rank_perm = rank_order(result.vector);
        return result;
      }
      p = std::move(next);

      if (cfg.adaptive) {
        recent.push_back(r);
        if (recent.size() > 100) {
          const double old = recent[recent.size() - 101];
          if (std::abs(r - old) / r < 1e-4) break;
        }
      }
    }

    RankVector stepped = cfg.refined ? refined_arnoldi_step(op, alpha, p, cfg.arnoldi_dim)
                                     : plain_arnoldi_step(op, alpha, p, cfg.arnoldi_dim);
    if (!stepped.empty()) p = std::move(stepped);
    ++result.arnoldi_steps;
    result.log.push_back({result.iterations, last_residual, true});
  }

  // Out of cycles: certify whatever we hold with one more product.
  RankVector next = op.apply_g(alpha, p);
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r += std::abs(next[i] - p[i]);
  result.vector = std::move(p);
  result.residual = r;
  result.converged = r < cfg.tol;
  result.rank_perm = rank_order(result.vector);
  return result;
}

RankVector refined_arnoldi_step(const StochasticOperator& op, double alpha, const RankVector& p,
                                std::size_t n_a) {
  DampedMap map(op, alpha);
  auto f = arnoldi(map, p, n_a);
  const auto k = static_cast<Eigen::Index>(f.steps);

  // Shift the rectangular Hessenberg by the target eigenvalue 1.
  Eigen::MatrixXd shifted = f.hessenberg;
  for (Eigen::Index j = 0; j < k; ++j) shifted(j, j) -= 1.0;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
  Eigen::VectorXcd y = svd.matrixV().col(k - 1).cast<std::complex<double>>();
  RankVector candidate = into_probability_cone(lift_real(f, y));
  return candidate.empty() ? p : candidate;
}

RankVector solve_pagerank_dense(const StochasticOperator& op, double alpha,
                                std::size_t dense_limit) {
  const std::size_t n = op.size();
  if (n > dense_limit)
    throw std::invalid_argument("solve_pagerank_dense: graph above the dense limit");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("solve_pagerank_dense: alpha must be in [0,1)");

  using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorXl = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const auto ni = static_cast<Eigen::Index>(n);
  const long double a = static_cast<long double>(alpha);

  MatrixXl system = MatrixXl::Identity(ni, ni);
  const DirectedGraph& g = op.graph();
  for (NodeId j = 0; j < n; ++j) {
    if (op.is_dangling(j)) {
      const long double w = a / static_cast<long double>(n);
      for (Eigen::Index i = 0; i < ni; ++i) system(i, static_cast<Eigen::Index>(j)) -= w;
    } else {
      const long double w = a * static_cast<long double>(op.column_weight(j));
      for (NodeId i : g.out_neighbors(j)) system(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= w;
    }
  }

  VectorXl rhs = VectorXl::Constant(ni, (1.0L - a) / static_cast<long double>(n));
  Eigen::PartialPivLU<MatrixXl> lu(system);
  VectorXl x = lu.solve(rhs);
  x += lu.solve(rhs - system * x);  // one refinement pass

  RankVector p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<double>(x(static_cast<Eigen::Index>(i)));
  return p;
}

std::vector<NodeId> rank_order(const RankVector& p) {
  std::vector<NodeId> order(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) order[i] = static_cast<NodeId>(i);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (p[a] != p[b]) return p[a] > p[b];
    return a < b;
  });
  return order;
}

std::vector<std::size_t> rank_of(const std::vector<NodeId>& order) {
  std::vector<std::size_t> rank(order.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k + 1;
  return rank;
}

double fidelity(const RankVector& p, const RankVector& q) {
  if (p.size() != q.size()) throw std::invalid_argument("fidelity: length mismatch");
  const double np = norm2(p), nq = norm2(q);
  if (np == 0.0 || nq == 0.0) throw std::invalid_argument("fidelity: zero vector");
  return dot(p, q) / (np * nq);
}

double core_residual_weight(const RankVector& p, const Decomposition& d) {
  if (p.size() != d.node_count) throw std::invalid_argument("core_residual_weight: length mismatch");
  double w = 0.0;
  for (NodeId v : d.core) w += p[v];
  return w;
}

}  // namespace grank
