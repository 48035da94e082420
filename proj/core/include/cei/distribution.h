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

// Histogram distributions over a shared equal-width grid, and the numerical
// primitives built on them: mean distribution, KL divergence in bits,
// percentile thresholds and tail/center splitting.

#ifndef CEI_DISTRIBUTION_H_
#define CEI_DISTRIBUTION_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cei/score_data.h"

namespace cei {

inline constexpr std::size_t kDefaultBins = 100;
inline constexpr double kDefaultSmoothing = 1e-10;

// Equal-width bins over [lo, hi]. Bins are half-open [e_j, e_{j+1}) except
// the last, which is closed.
class BinGrid {
 public:
  BinGrid(double lo, double hi, std::size_t num_bins);

  // Grid spanning [min, max] of the given scores. A zero-width range is
  // widened by 0.5 on each side so a single repeated value still bins.
  static BinGrid Spanning(std::span<const double> scores,
                          std::size_t num_bins = kDefaultBins);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t num_bins() const { return num_bins_; }
  double width() const { return (hi_ - lo_) / static_cast<double>(num_bins_); }
  double Edge(std::size_t j) const;
  std::vector<double> Edges() const;
  bool Contains(double x) const { return x >= lo_ && x <= hi_; }

  // Bin index of an in-range value.
  std::size_t BinOf(double x) const;

  friend bool operator==(const BinGrid&, const BinGrid&) = default;

 private:
  double lo_;
  double hi_;
  std::size_t num_bins_;
};

// A probability mass function over a BinGrid. Mass is non-negative and sums
// to one within 1e-9.
class Distribution {
 public:
  // Validates (does not renormalize) the given mass vector.
  Distribution(BinGrid grid, std::vector<double> mass, std::size_t count);

  const BinGrid& grid() const { return grid_; }
  const std::vector<double>& mass() const { return mass_; }
  double mass(std::size_t j) const { return mass_[j]; }
  std::size_t size() const { return mass_.size(); }
  // Number of samples the histogram was estimated from.
  std::size_t count() const { return count_; }

 private:
  BinGrid grid_;
  std::vector<double> mass_;
  std::size_t count_;
};

enum class OutOfRangePolicy { kError, kClamp };

Distribution BuildDistribution(std::span<const double> scores, const BinGrid& grid,
                               OutOfRangePolicy policy = OutOfRangePolicy::kError);

// Bin-wise arithmetic mean of distributions sharing one grid.
Distribution MeanDistribution(std::span<const Distribution> dists);

// D_KL(p || q) in bits. Both arguments get `smoothing` added to every bin and
// are renormalized first, so empty bins never produce infinities.
double KlDivergence(const Distribution& p, const Distribution& q,
                    double smoothing = kDefaultSmoothing);

// Score t such that the error-side tail beyond t holds 1 - percentile/100 of
// the mass, interpolating linearly inside the bin that contains it.
double PercentileThreshold(const Distribution& d, double percentile, ErrorSide side);

struct SplitDistribution {
  double threshold = 0.0;
  Distribution tail;
  Distribution center;
  // Pre-renormalization masses of the two pieces; they sum to the parent's
  // total mass.
  double tail_mass = 0.0;
  double center_mass = 0.0;
};

// Splits d at threshold into the error-side tail and the remaining center.
// The bin containing the threshold contributes fractionally. Both pieces are
// renormalized. Throws DegenerateTail when either piece holds less than
// min_mass.
SplitDistribution Split(const Distribution& d, double threshold, ErrorSide side,
                        double min_mass = kDefaultSmoothing);

// {"edges": [...], "mass": [...], "count": n}
std::string DistributionToJson(const Distribution& d);

}  // namespace cei

#endif  // CEI_DISTRIBUTION_H_
