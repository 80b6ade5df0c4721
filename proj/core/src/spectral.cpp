#include "grank/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grank {

namespace {

// Modulus-descending with ties broken by descending real part, then
// ascending imaginary part. Moduli are quantized so that values equal up
// to eigensolver noise (e.g. +r and -r) actually reach the tie-breakers,
// while the ordering stays a strict weak one.
bool canonical_less_desc(const std::complex<double>& a, const std::complex<double>& b) {
  const double qa = std::nearbyint(std::abs(a) * 1e10);
  const double qb = std::nearbyint(std::abs(b) * 1e10);
  if (qa != qb) return qa > qb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() < b.imag();
}

}  // namespace

KrylovFactorization arnoldi(const LinearMap& op, std::span<const double> start, std::size_t n_a) {
  if (n_a < 1) throw std::invalid_argument("arnoldi: dimension must be >= 1");
  const std::size_t n = op.dim();
  if (start.size() != n) throw std::invalid_argument("arnoldi: start vector length mismatch");
  const double start_norm = norm2(start);
  if (start_norm == 0.0) throw std::invalid_argument("arnoldi: zero start vector");

  const std::size_t k_max = std::min(n_a, n);
  const double breakdown_tol = 1e-14 * start_norm;

  KrylovFactorization f;
  f.hessenberg = Eigen::MatrixXd::Zero(k_max + 1, k_max);
  f.basis.reserve(k_max + 1);
  {
    std::vector<double> v0(start.begin(), start.end());
    for (double& x : v0) x /= start_norm;
    f.basis.push_back(std::move(v0));
  }

  std::vector<double> w(n);
  for (std::size_t k = 0; k < k_max; ++k) {
    op.apply(f.basis[k], w);

    // Gram-Schmidt, run twice to hold orthonormality near machine level.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j <= k; ++j) {
        const double c = dot(f.basis[j], w);
        f.hessenberg(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += c;
        const auto& vj = f.basis[j];
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * vj[i];
      }

    const double h_next = norm2(w);
    f.hessenberg(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = h_next;
    f.steps = k + 1;
    if (h_next < breakdown_tol) {
      f.breakdown_step = k + 1;
      break;
    }
    std::vector<double> v_next(w);
    for (double& x : v_next) x /= h_next;
    f.basis.push_back(std::move(v_next));
  }

  f.hessenberg.conservativeResize(static_cast<Eigen::Index>(f.steps + 1),
                                  static_cast<Eigen::Index>(f.steps));
  return f;
}

std::vector<RitzPair> ritz_pairs(const KrylovFactorization& f) {
  const auto k = static_cast<Eigen::Index>(f.steps);
  if (k == 0) return {};
  Eigen::MatrixXd h_square = f.hessenberg.topLeftCorner(k, k);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(h_square);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("ritz_pairs: Hessenberg eigensolver failed");

  const double subdiag = std::abs(f.hessenberg(k, k - 1));
  std::vector<RitzPair> pairs(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    RitzPair& p = pairs[static_cast<std::size_t>(i)];
    p.value = solver.eigenvalues()(i);
    p.krylov_vector = solver.eigenvectors().col(i);
    p.residual = subdiag * std::abs(p.krylov_vector(k - 1));
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const RitzPair& a, const RitzPair& b) { return canonical_less_desc(a.value, b.value); });
  return pairs;
}

std::vector<std::complex<double>> lift_complex(const KrylovFactorization& f,
                                               const Eigen::VectorXcd& y) {
  const std::size_t n = f.basis.front().size();
  std::vector<std::complex<double>> out(n, {0.0, 0.0});
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const auto& vj = f.basis[static_cast<std::size_t>(j)];
    const std::complex<double> c = y(j);
    for (std::size_t i = 0; i < n; ++i) out[i] += c * vj[i];
  }
  return out;
}

std::vector<double> lift_real(const KrylovFactorization& f, const Eigen::VectorXcd& y) {
  const std::size_t n = f.basis.front().size();
  std::vector<double> out(n, 0.0);
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const auto& vj = f.basis[static_cast<std::size_t>(j)];
    const double c = y(j).real();
    for (std::size_t i = 0; i < n; ++i) out[i] += c * vj[i];
  }
  return out;
}

std::vector<std::vector<std::complex<double>>> subspace_spectrum(const StochasticOperator& op,
                                                                 const Decomposition& d,
                                                                 std::size_t dense_limit) {
  std::vector<std::vector<std::complex<double>>> spectra;
  spectra.reserve(d.subspaces.size());
  const DirectedGraph& g = op.graph();

  std::vector<std::int32_t> local(g.node_count(), -1);
  for (std::size_t s = 0; s < d.subspaces.size(); ++s) {
    const auto& members = d.subspaces[s].members;
    const std::size_t m = members.size();
    if (m > dense_limit)
      throw std::runtime_error("subspace " + std::to_string(s) + " has dimension " +
                               std::to_string(m) + ", above the dense solver limit " +
                               std::to_string(dense_limit));
    for (std::size_t k = 0; k < m; ++k) local[members[k]] = static_cast<std::int32_t>(k);

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      const double w = op.column_weight(members[k]);
      for (NodeId t : g.out_neighbors(members[k]))
        if (local[t] >= 0) block(local[t], static_cast<Eigen::Index>(k)) = w;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(block);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("subspace_spectrum: dense eigensolver failed");
    std::vector<std::complex<double>> eigs(m);
    for (std::size_t k = 0; k < m; ++k) eigs[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    std::sort(eigs.begin(), eigs.end(), canonical_less_desc);
    spectra.push_back(std::move(eigs));

    for (NodeId v : members) local[v] = -1;
  }
  return spectra;
}

std::vector<RitzPair> core_spectrum(const StochasticOperator& op, const Decomposition& d,
                                    std::size_t n_a) {
  if (d.core.empty())
    throw std::runtime_error(
        "core_spectrum: empty core (degenerate decomposition; the subspaces cover the whole "
        "graph, analyze the full operator instead)");
  CoreMap map(op, d);
  RankVector start = uniform_vector(d.core.size());
  return ritz_pairs(arnoldi(map, start, n_a));
}

std::vector<std::pair<double, double>> spectrum_fraction_curve(
    std::span<const std::complex<double>> eigs, std::size_t node_count) {
  std::vector<std::complex<double>> sorted(eigs.begin(), eigs.end());
  std::sort(sorted.begin(), sorted.end(), canonical_less_desc);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(sorted.size());
  for (std::size_t j = 0; j < sorted.size(); ++j)
    curve.emplace_back(std::abs(sorted[j]),
                       static_cast<double>(j + 1) / static_cast<double>(node_count));
  return curve;
}

SpectrumReport assemble_spectrum(const StochasticOperator& op, const Decomposition& d,
                                 std::size_t n_a, std::size_t dense_limit) {
  SpectrumReport report;
  auto blocks = subspace_spectrum(op, d, dense_limit);
  std::vector<std::complex<double>> all;
  for (std::size_t s = 0; s < blocks.size(); ++s)
    for (const auto& lambda : blocks[s]) {
      report.subspace_eigs.emplace_back(lambda, s);
      all.push_back(lambda);
      if (std::abs(lambda - 1.0) < 1e-10) ++report.unit_count;
    }
  if (!d.core.empty()) {
    auto ritz = core_spectrum(op, d, n_a);
    for (const auto& p : ritz) {
      report.core_ritz.emplace_back(p.value, p.residual);
      all.push_back(p.value);
    }
  }
  report.fraction_curve = spectrum_fraction_curve(all, op.size());
  return report;
}

namespace {

// Seed node for the projected power method: arg-max component of the
// Arnoldi estimate of the leading core eigenvector, smallest node id on
// ties (core ids ascend, so the first maximum wins).
std::size_t locate_seed(const StochasticOperator& op, const Decomposition& d,
                        std::size_t arnoldi_dim) {
  CoreMap map(op, d);
  const std::size_t nc = d.core.size();
  if (nc == 1) return 0;
  RankVector start = uniform_vector(nc);
  auto f = arnoldi(map, start, std::min(arnoldi_dim, nc));
  auto pairs = ritz_pairs(f);
  RankVector estimate = lift_real(f, pairs.front().krylov_vector);
  double max_abs = 0.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < nc; ++k)
    if (std::abs(estimate[k]) > max_abs) {
      max_abs = std::abs(estimate[k]);
      arg = k;
    }
  return arg;
}

bool dangling_within(const DirectedGraph& g, NodeId start, int steps) {
  std::vector<NodeId> frontier{start};
  std::vector<bool> seen(g.node_count(), false);
  seen[start] = true;
  if (g.out_degree(start) == 0) return true;
  for (int depth = 0; depth < steps; ++depth) {
    std::vector<NodeId> next;
    for (NodeId v : frontier)
      for (NodeId w : g.out_neighbors(v)) {
        if (seen[w]) continue;
        seen[w] = true;
        if (g.out_degree(w) == 0) return true;
        next.push_back(w);
      }
    frontier = std::move(next);
  }
  return false;
}

}  // namespace

GapResult gap_via_projected_power(const StochasticOperator& op, const Decomposition& d,
                                  const ProjectedPowerConfig& cfg) {
  if (d.core.empty())
    throw std::runtime_error(
        "gap_via_projected_power: empty core (degenerate decomposition; fall back to full-S "
        "power iteration)");
  const std::size_t n = op.size();
  const std::size_t nc = d.core.size();

  const std::size_t seed_core_index = locate_seed(op, d, cfg.seed_arnoldi_dim);
  const NodeId seed_node = d.core[seed_core_index];

  GapResult result;
  result.method = GapMethod::projected_power;
  result.seed_touches_dangling = dangling_within(op.graph(), seed_node, 3);

  // Full-length iterate, zero on subspace nodes throughout.
  RankVector psi(n, 0.0);
  psi[seed_node] = 1.0;

  auto core_restrict = [&](const RankVector& full) {
    RankVector core(nc);
    for (std::size_t k = 0; k < nc; ++k) core[k] = full[d.core[k]];
    return core;
  };

  // Pure iteration stalls on (near-)periodic core blocks where the
  // subdominant eigenvalue matches the leading one in modulus; a damped
  // (S + I)/2 sweep has the same fixed point and always contracts, so it
  // is switched on when a 256-iteration window shows no progress.
  bool damped = false;
  constexpr std::size_t kWindow = 256;
  double window_best = std::numeric_limits<double>::infinity();
  double prev_window_best = std::numeric_limits<double>::infinity();

  double escaped = 0.0;
  for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
    RankVector next = op.apply_s(psi);
    escaped = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (d.subspace_of[v] >= 0) {
        escaped += next[v];
        next[v] = 0.0;  // project on the core space
      }
    }
    result.iterations = iter;

    if (damped)
      for (NodeId v = 0; v < n; ++v) next[v] = 0.5 * (next[v] + psi[v]);

    double mass = 0.0;
    for (double x : next) mass += x;
    if (mass == 0.0) {
      // The whole iterate escaped in one product (all core columns point
      // into subspaces); the escape probability is exactly the gap.
      result.gap = escaped;
      result.leading_vector = core_restrict(psi);
      result.converged = !result.seed_touches_dangling;
      return result;
    }
    for (double& x : next) x /= mass;

    double delta1 = 0.0;
    double rel = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      const double diff = std::abs(next[v] - psi[v]);
      delta1 += diff;
      if (next[v] != 0.0) rel = std::max(rel, diff / std::abs(next[v]));
    }
    psi = std::move(next);

    if (delta1 < cfg.eps1 && rel < cfg.eps2) {
      result.gap = escaped;
      result.leading_vector = core_restrict(psi);
      result.converged = !result.seed_touches_dangling;
      return result;
    }

    window_best = std::min(window_best, delta1);
    if (iter % kWindow == 0) {
      if (!damped && window_best > 0.9 * prev_window_best) damped = true;
      prev_window_best = window_best;
      window_best = std::numeric_limits<double>::infinity();
    }
  }

  result.gap = escaped;
  result.leading_vector = core_restrict(psi);
  result.converged = false;
  return result;
}

GapResult gap_via_arnoldi(const StochasticOperator& op, const Decomposition& d, std::size_t n_a) {
  if (d.core.empty())
    throw std::runtime_error("gap_via_arnoldi: empty core (degenerate decomposition)");
  CoreMap map(op, d);
  RankVector start = uniform_vector(d.core.size());
  auto f = arnoldi(map, start, n_a);
  auto pairs = ritz_pairs(f);

  GapResult result;
  result.method = GapMethod::arnoldi;
  result.iterations = f.steps;
  const RitzPair& lead = pairs.front();
  result.gap = std::max(0.0, 1.0 - lead.value.real());
  RankVector v = lift_real(f, lead.krylov_vector);
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum < 0.0)
    for (double& x : v) x = -x;
  for (double& x : v) x = std::max(0.0, x);
  const double mass = norm1(v);
  if (mass > 0.0)
    for (double& x : v) x /= mass;
  result.leading_vector = std::move(v);
  result.converged = lead.residual <= 1e-10;
  return result;
}

}  // namespace grank
