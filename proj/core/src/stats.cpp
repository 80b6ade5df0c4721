#include "grank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace grank {

namespace {

// Geometric-mean log binning, 16 bins per decade on the x axis. Points
// with nonpositive coordinates are dropped (they cannot be fitted in log
// space anyway).
std::vector<std::pair<double, double>> log_bin(std::span<const std::pair<double, double>> pts) {
  constexpr double kBinsPerDecade = 16.0;
  std::map<long, std::pair<std::pair<double, double>, std::size_t>> bins;  // sums of logs, count
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0)) continue;
    const long bin = static_cast<long>(std::floor(std::log10(x) * kBinsPerDecade));
    auto& [sums, count] = bins[bin];
    sums.first += std::log(x);
    sums.second += std::log(y);
    ++count;
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(bins.size());
  for (const auto& [bin, entry] : bins) {
    const auto& [sums, count] = entry;
    out.emplace_back(std::exp(sums.first / static_cast<double>(count)),
                     std::exp(sums.second / static_cast<double>(count)));
  }
  return out;
}

double ols_slope(std::span<const std::pair<double, double>> log_pts, double* rms_out) {
  const double n = static_cast<double>(log_pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : log_pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  if (rms_out) {
    double sse = 0.0;
    for (const auto& [x, y] : log_pts) {
      const double r = y - (slope * x + intercept);
      sse += r * r;
    }
    *rms_out = std::sqrt(sse / n);
  }
  return slope;
}

}  // namespace

CcdfCurve subspace_ccdf(const Decomposition& d) {
  if (d.subspaces.empty()) throw std::invalid_argument("subspace_ccdf: no subspaces");
  std::vector<double> dims;
  dims.reserve(d.subspaces.size());
  for (const auto& sub : d.subspaces) dims.push_back(static_cast<double>(sub.members.size()));
  std::sort(dims.begin(), dims.end());

  CcdfCurve curve;
  curve.subspace_count = dims.size();
  curve.d_mean = 0.0;
  for (double dim : dims) curve.d_mean += dim;
  curve.d_mean /= static_cast<double>(dims.size());

  const double total = static_cast<double>(dims.size());
  std::size_t i = 0;
  while (i < dims.size()) {
    std::size_t j = i;
    while (j < dims.size() && dims[j] == dims[i]) ++j;
    curve.points.push_back({dims[i] / curve.d_mean, static_cast<double>(dims.size() - j) / total});
    i = j;
  }
  return curve;
}

double ccdf_value(std::span<const CcdfPoint> points, double x) {
  double f = 1.0;
  for (const auto& p : points) {
    if (p.x > x) break;
    f = p.f;
  }
  return f;
}

CcdfFit fit_subspace_ccdf(const CcdfCurve& curve) {
  if (curve.points.size() < 10)
    throw std::invalid_argument("fit_subspace_ccdf: degenerate support (need >= 10 distinct dimensions)");

  // The deepest tail of an empirical CCDF (fewer than ~2 supporting
  // samples) carries large relative noise in log space; keep it out of
  // the fit.
  const double f_floor =
      curve.subspace_count > 0 ? 1.5 / static_cast<double>(curve.subspace_count) : 0.0;
  std::vector<std::pair<double, double>> raw;
  for (const auto& p : curve.points)
    if (p.f > f_floor) raw.emplace_back(p.x, p.f);
  auto binned = log_bin(raw);
  if (binned.size() < 4)
    throw std::invalid_argument("fit_subspace_ccdf: degenerate support after binning");

  auto sse_at = [&](double b) {
    double sse = 0.0;
    for (const auto& [x, f] : binned) {
      const double model = -b * std::log1p(x / (b - 1.0));
      const double r = std::log(f) - model;
      sse += r * r;
    }
    return sse;
  };

  // Coarse log-spaced scan, then golden-section refinement.
  double best_b = 1.5, best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 400; ++k) {
    const double b = 1.0 + std::pow(10.0, -2.0 + 3.0 * k / 400.0);  // 1.01 .. 1001
    const double sse = sse_at(b);
    if (sse < best_sse) {
      best_sse = sse;
      best_b = b;
    }
  }
  double lo = std::max(1.0 + 1e-6, best_b * 0.8), hi = best_b * 1.25;
  constexpr double kGolden = 0.61803398874989484;
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = sse_at(x1), f2 = sse_at(x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = sse_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = sse_at(x2);
    }
  }
  const double b = 0.5 * (lo + hi);

  CcdfFit fit;
  fit.b = b;
  fit.d_mean = curve.d_mean;
  fit.fit_error = std::sqrt(sse_at(b) / static_cast<double>(binned.size()));
  fit.points.reserve(binned.size());
  for (const auto& [x, f] : binned) fit.points.push_back({x, f});
  return fit;
}

std::vector<RankCurvePoint> rescaled_rank_curve(const RankVector& p, const Decomposition& d) {
  const std::size_t ns = d.subspace_node_count();
  if (ns == 0) throw std::invalid_argument("rescaled_rank_curve: no subspace nodes");
  auto order = rank_order(p);
  std::vector<RankCurvePoint> points;
  points.reserve(order.size());
  const double scale = static_cast<double>(ns);
  for (std::size_t k = 0; k < order.size(); ++k)
    points.push_back({static_cast<double>(k + 1) / scale, p[order[k]] * scale});
  return points;
}

RankFit fit_rank_exponent(std::span<const RankCurvePoint> points,
                          std::pair<double, double> window) {
  std::vector<std::pair<double, double>> inside;
  for (const auto& pt : points)
    if (pt.rank_over_ns >= window.first && pt.rank_over_ns <= window.second && pt.p_times_ns > 0.0)
      inside.emplace_back(pt.rank_over_ns, pt.p_times_ns);
  if (inside.size() < 20)
    throw std::invalid_argument("fit_rank_exponent: fewer than 20 points in the fit window");

  auto binned = log_bin(inside);
  std::vector<std::pair<double, double>> logs;
  logs.reserve(binned.size());
  for (const auto& [x, y] : binned) logs.emplace_back(std::log(x), std::log(y));

  RankFit fit;
  fit.fit_range = window;
  fit.exponent = -ols_slope(logs, &fit.fit_error);
  fit.points.reserve(binned.size());
  for (const auto& [x, y] : binned) fit.points.push_back({x, y});
  return fit;
}

std::vector<AlphaScanRow> alpha_scan(const StochasticOperator& op, const Decomposition& d,
                                     std::span<const double> alphas, const SolverConfig& cfg) {
  for (double a : alphas)
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("alpha_scan: alpha outside [0,1)");

  PageRankResult reference = solve_pagerank_hybrid(op, 0.85, cfg);

  std::vector<std::size_t> order(alphas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return alphas[a] < alphas[b]; });

  std::vector<AlphaScanRow> rows(alphas.size());
  RankVector warm;  // previous solution seeds the next solve
  for (std::size_t idx : order) {
    PageRankResult res = solve_pagerank_hybrid(op, alphas[idx], cfg, warm);
    warm = res.vector;
    rows[idx] = {1.0 - alphas[idx], core_residual_weight(res.vector, d),
                 fidelity(res.vector, reference.vector), res.converged};
  }
  return rows;
}

double extrapolate_fidelity_limit(std::span<const AlphaScanRow> rows) {
  if (rows.size() < 2)
    throw std::invalid_argument("extrapolate_fidelity_limit: need at least two rows");
  std::vector<const AlphaScanRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const AlphaScanRow* a, const AlphaScanRow* b) {
    return a->one_minus_alpha < b->one_minus_alpha;
  });
  const double x1 = sorted[0]->one_minus_alpha, f1 = sorted[0]->fidelity;
  const double x2 = sorted[1]->one_minus_alpha, f2 = sorted[1]->fidelity;
  return f1 + (f2 - f1) * (0.0 - x1) / (x2 - x1);
}

}  // namespace grank
