#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "grank/decomposition.hpp"
#include "grank/stochastic.hpp"

namespace grank {

/// Real linear map on R^n, the only interface the Krylov machinery needs.
class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual std::size_t dim() const = 0;
  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;

  std::vector<double> operator()(std::span<const double> in) const {
    std::vector<double> out(dim(), 0.0);
    apply(in, out);
    return out;
  }
};

/// Adapter for a callable (used heavily in tests and for G(alpha)).
class FunctionMap final : public LinearMap {
 public:
  using Fn = std::function<std::vector<double>(std::span<const double>)>;
  FunctionMap(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {}
  std::size_t dim() const override { return n_; }
  void apply(std::span<const double> in, std::span<double> out) const override {
    auto y = fn_(in);
    std::copy(y.begin(), y.end(), out.begin());
  }

 private:
  std::size_t n_;
  Fn fn_;
};

/// S restricted to the core block (rows and columns projected onto d.core).
class CoreMap final : public LinearMap {
 public:
  CoreMap(const StochasticOperator& op, const Decomposition& d) : op_(&op), d_(&d) {}
  std::size_t dim() const override { return d_->core.size(); }
  void apply(std::span<const double> in, std::span<double> out) const override {
    auto product = op_->apply_core_projected(*d_, in);
    std::copy(product.vector.begin(), product.vector.end(), out.begin());
  }

 private:
  const StochasticOperator* op_;
  const Decomposition* d_;
};

/// Arnoldi factorization A V_k = V_{k+1} H with orthonormal basis columns
/// and (k+1) x k upper-Hessenberg H. Gram-Schmidt runs twice per step;
/// breakdown_step is set when the residual vanished early (the Krylov
/// space became invariant).
struct KrylovFactorization {
  std::vector<std::vector<double>> basis;  // steps+1 vectors unless breakdown
  Eigen::MatrixXd hessenberg;              // (steps+1) x steps, last row may be zero
  std::size_t steps = 0;
  std::optional<std::size_t> breakdown_step;
};

KrylovFactorization arnoldi(const LinearMap& op, std::span<const double> start, std::size_t n_a);

/// Ritz pair of a factorization: eigenvalue of the square Hessenberg part
/// with its eigenvector in Krylov coordinates and the usual subdiagonal
/// residual estimate |h_{k+1,k}| * |y_k|.
struct RitzPair {
  std::complex<double> value;
  Eigen::VectorXcd krylov_vector;
  double residual = 0.0;
};

/// Sorted by |value| descending, ties by descending real part then
/// ascending imaginary part.
std::vector<RitzPair> ritz_pairs(const KrylovFactorization& f);

/// Lift a Krylov-coordinate vector through the basis.
std::vector<std::complex<double>> lift_complex(const KrylovFactorization& f,
                                               const Eigen::VectorXcd& y);
/// Real part of the lifted vector (large vectors stay real downstream).
std::vector<double> lift_real(const KrylovFactorization& f, const Eigen::VectorXcd& y);

/// Exact dense eigenvalues of one diagonal block of S_ss, multiplicities
/// retained. Throws when a block exceeds dense_limit.
std::vector<std::vector<std::complex<double>>> subspace_spectrum(const StochasticOperator& op,
                                                                 const Decomposition& d,
                                                                 std::size_t dense_limit = 10000);

/// Ritz values of S_cc from an Arnoldi run started on the uniform core
/// vector. Throws when the core is empty (degenerate decomposition; fall
/// back to full-S analysis in that case).
std::vector<RitzPair> core_spectrum(const StochasticOperator& op, const Decomposition& d,
                                    std::size_t n_a);

struct SpectrumReport {
  std::vector<std::pair<std::complex<double>, std::size_t>> subspace_eigs;  // value, subspace id
  std::vector<std::pair<std::complex<double>, double>> core_ritz;           // value, residual
  std::size_t unit_count = 0;  // |lambda - 1| < 1e-10 across subspace blocks
  std::vector<std::pair<double, double>> fraction_curve;                    // (|lambda_j|, j/N)
};

SpectrumReport assemble_spectrum(const StochasticOperator& op, const Decomposition& d,
                                 std::size_t n_a, std::size_t dense_limit = 10000);

/// Points (|lambda_j|, j/N) for ranks j = 1.. over |lambda| descending.
std::vector<std::pair<double, double>> spectrum_fraction_curve(
    std::span<const std::complex<double>> eigs, std::size_t node_count);

enum class GapMethod { arnoldi, projected_power };

/// Core-space gap 1 - lambda_1(S_cc) with the quasi-stationary vector.
struct GapResult {
  double gap = 0.0;
  RankVector leading_vector;  // core-indexed, 1-norm 1, nonnegative
  std::size_t iterations = 0;
  bool converged = false;
  GapMethod method = GapMethod::projected_power;
  /// True when the seed's surroundings reach a dangling node within three
  /// steps; tail values (and hence tiny gaps) are then not trustworthy and
  /// converged is forced off.
  bool seed_touches_dangling = false;
};

struct ProjectedPowerConfig {
  double eps1 = 1e-13;       // 1-norm change threshold
  double eps2 = 1e-6;        // max relative componentwise change threshold
  std::size_t max_iter = 2000000;
  std::size_t seed_arnoldi_dim = 200;  // capped at core size
};

/// Measures the gap as the escape probability of the iterated, core-
/// projected, renormalized vector seeded at the arg-max node of an Arnoldi
/// estimate of the leading core eigenvector. Accurate far below the
/// eigenvalue resolution of double precision because the escaped mass is
/// summed directly instead of being inferred from 1 - lambda.
GapResult gap_via_projected_power(const StochasticOperator& op, const Decomposition& d,
                                  const ProjectedPowerConfig& cfg = {});

/// Gap straight from the leading core Ritz value; loses all resolution
/// once the true gap drops below ~1e-14.
GapResult gap_via_arnoldi(const StochasticOperator& op, const Decomposition& d, std::size_t n_a);

}  // namespace grank
