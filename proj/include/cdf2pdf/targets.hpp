#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdf2pdf/distributions.hpp"

namespace cdf2pdf {

/// Regression targets: M query points with their empirical-CDF values.
struct TargetSet {
  Dataset points;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::size_t dim() const { return points.cols; }
};

/// Componentwise dominance indicator: 1 iff every coordinate >= 0.
int theta(std::span<const double> v);

/// Fraction of data points dominated by q (inclusive comparison).
double empirical_cdf(const Dataset& data, std::span<const double> q);
double empirical_cdf(const Dataset& data, double q);

/// Targets at m uniform draws from the data bounding box expanded by
/// `margin` x range per side. A zero-range coordinate is expanded by a
/// fixed 1.0 instead. With include_data_points the data rows are
/// appended as additional queries.
TargetSet targets_uniform(const Dataset& data, std::size_t m, double margin,
                          std::uint64_t seed, bool include_data_points = false);

/// Leave-one-out targets at the data points themselves; needs N >= 2.
TargetSet targets_loo(const Dataset& data);

} // namespace cdf2pdf
