/*
 * Copyright 2026 The CEI Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cei/distribution.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cei/error.h"
#include "json.hpp"

namespace cei {
namespace {

constexpr std::string_view kModule = "distribution";
constexpr double kMassTolerance = 1e-9;

void CheckSameGrid(const Distribution& a, const Distribution& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorCode::kGridMismatch, kModule,
                "distributions are defined on different bin grids");
  }
}

Distribution Normalized(const BinGrid& grid, std::vector<double> raw, double total,
                        std::size_t count) {
  for (double& m : raw) m /= total;
  return Distribution(grid, std::move(raw), count);
}

}  // namespace

BinGrid::BinGrid(double lo, double hi, std::size_t num_bins)
    : lo_(lo), hi_(hi), num_bins_(num_bins) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "bin grid requires finite lo < hi");
  }
  if (num_bins == 0) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "bin grid requires n_bins >= 1");
  }
}

BinGrid BinGrid::Spanning(std::span<const double> scores, std::size_t num_bins) {
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyInput, kModule, "cannot span an empty score list");
  }
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  if (*lo == *hi) return BinGrid(*lo - 0.5, *hi + 0.5, num_bins);
  return BinGrid(*lo, *hi, num_bins);
}

double BinGrid::Edge(std::size_t j) const {
  if (j >= num_bins_) return hi_;
  return lo_ + (hi_ - lo_) * static_cast<double>(j) / static_cast<double>(num_bins_);
}

std::vector<double> BinGrid::Edges() const {
  std::vector<double> edges(num_bins_ + 1);
  for (std::size_t j = 0; j <= num_bins_; ++j) edges[j] = Edge(j);
  return edges;
}

std::size_t BinGrid::BinOf(double x) const {
  const double pos = (x - lo_) / (hi_ - lo_) * static_cast<double>(num_bins_);
  if (!(pos > 0.0)) return 0;
  std::size_t j = std::min(static_cast<std::size_t>(pos), num_bins_ - 1);
  // Agree with Edge() exactly at bin boundaries.
  if (j + 1 < num_bins_ && x >= Edge(j + 1)) ++j;
  if (j > 0 && x < Edge(j)) --j;
  return j;
}

Distribution::Distribution(BinGrid grid, std::vector<double> mass, std::size_t count)
    : grid_(grid), mass_(std::move(mass)), count_(count) {
  if (mass_.size() != grid_.num_bins()) {
    throw Error(ErrorCode::kGridMismatch, kModule,
                "mass vector length does not match the number of bins");
  }
  double total = 0.0;
  for (const double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "distribution mass must be finite and non-negative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "distribution mass sums to " + std::to_string(total) + ", not 1");
  }
}

Distribution BuildDistribution(std::span<const double> scores, const BinGrid& grid,
                               OutOfRangePolicy policy) {
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyInput, kModule, "cannot build a distribution from no scores");
  }
  std::vector<double> counts(grid.num_bins(), 0.0);
  for (double x : scores) {
    if (!grid.Contains(x)) {
      if (policy == OutOfRangePolicy::kError) {
        throw Error(ErrorCode::kOutOfRange, kModule,
                    "score " + std::to_string(x) + " outside grid [" +
                        std::to_string(grid.lo()) + ", " + std::to_string(grid.hi()) + "]");
      }
      x = std::clamp(x, grid.lo(), grid.hi());
    }
    counts[grid.BinOf(x)] += 1.0;
  }
  return Normalized(grid, std::move(counts), static_cast<double>(scores.size()),
                    scores.size());
}

Distribution MeanDistribution(std::span<const Distribution> dists) {
  if (dists.empty()) {
    throw Error(ErrorCode::kEmptyInput, kModule, "mean of zero distributions");
  }
  const BinGrid& grid = dists.front().grid();
  std::vector<double> sum(grid.num_bins(), 0.0);
  std::size_t count = 0;
  for (const Distribution& d : dists) {
    CheckSameGrid(dists.front(), d);
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += d.mass(j);
    count += d.count();
  }
  const double k = static_cast<double>(dists.size());
  for (double& m : sum) m /= k;
  return Distribution(grid, std::move(sum), count);
}

double KlDivergence(const Distribution& p, const Distribution& q, double smoothing) {
  CheckSameGrid(p, q);
  if (!(smoothing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "smoothing must be > 0");
  }
  const std::size_t n = p.size();
  const double extra = smoothing * static_cast<double>(n);
  const double p_total =
      std::accumulate(p.mass().begin(), p.mass().end(), 0.0) + extra;
  const double q_total =
      std::accumulate(q.mass().begin(), q.mass().end(), 0.0) + extra;
  double kl = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double ps = (p.mass(j) + smoothing) / p_total;
    const double qs = (q.mass(j) + smoothing) / q_total;
    kl += ps * std::log2(ps / qs);
  }
  return std::max(kl, 0.0);
}

double PercentileThreshold(const Distribution& d, double percentile, ErrorSide side) {
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "percentile must lie in (0, 100)");
  }
  const BinGrid& grid = d.grid();
  const std::size_t n = d.size();
  const double tail = 1.0 - percentile / 100.0;
  const double w = grid.width();
  double cum = 0.0;
  if (side == ErrorSide::kLow) {
    for (std::size_t j = 0; j < n; ++j) {
      const double m = d.mass(j);
      if (m > 0.0 && cum + m >= tail) {
        const double frac = std::clamp((tail - cum) / m, 0.0, 1.0);
        return std::min(grid.Edge(j) + frac * w, grid.hi());
      }
      cum += m;
    }
    return grid.hi();
  }
  for (std::size_t j = n; j-- > 0;) {
    const double m = d.mass(j);
    if (m > 0.0 && cum + m >= tail) {
      const double frac = std::clamp((tail - cum) / m, 0.0, 1.0);
      return std::max(grid.Edge(j + 1) - frac * w, grid.lo());
    }
    cum += m;
  }
  return grid.lo();
}

SplitDistribution Split(const Distribution& d, double threshold, ErrorSide side,
                        double min_mass) {
  const BinGrid& grid = d.grid();
  if (!std::isfinite(threshold) || !grid.Contains(threshold)) {
    throw Error(ErrorCode::kOutOfRange, kModule,
                "split threshold " + std::to_string(threshold) + " outside the grid");
  }
  const std::size_t n = d.size();
  std::vector<double> tail(n, 0.0);
  std::vector<double> center(n, 0.0);
  double tail_mass = 0.0;
  double center_mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = grid.Edge(j);
    const double hi = grid.Edge(j + 1);
    const double below_frac = std::clamp((threshold - lo) / (hi - lo), 0.0, 1.0);
    const double below = d.mass(j) * below_frac;
    const double above = d.mass(j) - below;
    tail[j] = side == ErrorSide::kLow ? below : above;
    center[j] = side == ErrorSide::kLow ? above : below;
    tail_mass += tail[j];
    center_mass += center[j];
  }
  if (tail_mass < min_mass) {
    throw Error(ErrorCode::kDegenerateTail, kModule,
                "tail beyond " + std::to_string(threshold) + " holds mass " +
                    std::to_string(tail_mass));
  }
  if (center_mass < min_mass) {
    throw Error(ErrorCode::kDegenerateTail, kModule,
                "center piece at " + std::to_string(threshold) + " holds mass " +
                    std::to_string(center_mass));
  }
  return SplitDistribution{
      threshold,
      Normalized(grid, std::move(tail), tail_mass, d.count()),
      Normalized(grid, std::move(center), center_mass, d.count()),
      tail_mass,
      center_mass,
  };
}

std::string DistributionToJson(const Distribution& d) {
  nlohmann::json j;
  j["edges"] = d.grid().Edges();
  j["mass"] = d.mass();
  j["count"] = d.count();
  return j.dump();
}

}  // namespace cei
