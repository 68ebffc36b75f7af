#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace airvote::server {

struct WeiszfeldResult {
  std::vector<double> point;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Smoothed Weiszfeld iteration for the geometric median: weights are
/// 1/sqrt(|y - p_i|^2 + eps^2), so coincidence with a data point never
/// divides by zero. Starts from the centroid; stops when the iterate moves
/// less than tol, or after max_iter sweeps (non-convergence is reported, the
/// last iterate is still returned).
inline WeiszfeldResult weiszfeld(const std::vector<std::vector<double>>& points,
                                 double eps = 1e-8, double tol = 1e-10,
                                 std::size_t max_iter = 200) {
  if (points.empty()) throw ConsistencyError("geometric median of nothing");
  const std::size_t d = points.front().size();
  for (const auto& p : points)
    if (p.size() != d) throw ConsistencyError("point dimension mismatch");
  if (!(eps > 0.0) || !(tol > 0.0) || max_iter < 1)
    throw ConsistencyError("smoothing, tolerance and iteration cap must be positive");

  WeiszfeldResult res;
  res.point.assign(d, 0.0);
  for (const auto& p : points)
    for (std::size_t j = 0; j < d; ++j) res.point[j] += p[j];
  for (std::size_t j = 0; j < d; ++j) res.point[j] /= double(points.size());

  std::vector<double> next(d);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    double weight_sum = 0.0;
    for (const auto& p : points) {
      double dist2 = eps * eps;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = res.point[j] - p[j];
        dist2 += diff * diff;
      }
      const double w = 1.0 / std::sqrt(dist2);
      weight_sum += w;
      for (std::size_t j = 0; j < d; ++j) next[j] += w * p[j];
    }
    double move2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      next[j] /= weight_sum;
      const double diff = next[j] - res.point[j];
      move2 += diff * diff;
    }
    res.point = next;
    res.iterations = it;
    if (std::sqrt(move2) <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace airvote::server
