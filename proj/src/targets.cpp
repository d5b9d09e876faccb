#include "cdf2pdf/targets.hpp"

#include <algorithm>
#include <limits>

#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/rng.hpp"

namespace cdf2pdf {

int theta(std::span<const double> v) {
  for (double x : v)
    if (x < 0.0) return 0;
  return 1;
}

double empirical_cdf(const Dataset& data, std::span<const double> q) {
  std::size_t count = 0;
  std::vector<double> diff(data.cols);
  for (std::size_t n = 0; n < data.rows; ++n) {
    const double* x = data.row(n);
    for (std::size_t j = 0; j < data.cols; ++j) diff[j] = q[j] - x[j];
    count += theta(diff);
  }
  return static_cast<double>(count) / static_cast<double>(data.rows);
}

double empirical_cdf(const Dataset& data, double q) {
  return empirical_cdf(data, std::span<const double>(&q, 1));
}

TargetSet targets_uniform(const Dataset& data, std::size_t m, double margin,
                          std::uint64_t seed, bool include_data_points) {
  data.validate();
  if (m < 1) throw DataError("targets_uniform needs m >= 1");
  if (margin < 0.0) throw DataError("targets_uniform needs margin >= 0");

  const std::size_t d = data.cols;
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t n = 0; n < data.rows; ++n)
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], data.at(n, j));
      hi[j] = std::max(hi[j], data.at(n, j));
    }
  for (std::size_t j = 0; j < d; ++j) {
    const double range = hi[j] - lo[j];
    const double pad = range > 0.0 ? margin * range : 1.0;
    lo[j] -= pad;
    hi[j] += pad;
  }

  TargetSet ts;
  const std::size_t total = m + (include_data_points ? data.rows : 0);
  ts.points.rows = total;
  ts.points.cols = d;
  ts.points.points.resize(total * d);

  Rng rng(seed);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j)
      ts.points.points[i * d + j] = rng.uniform(lo[j], hi[j]);
  if (include_data_points)
    std::copy(data.points.begin(), data.points.end(),
              ts.points.points.begin() + m * d);

  ts.values.resize(total);
  for (std::size_t i = 0; i < total; ++i)
    ts.values[i] = empirical_cdf(
        data, std::span<const double>(ts.points.row(i), d));
  return ts;
}

TargetSet targets_loo(const Dataset& data) {
  data.validate();
  if (data.rows < 2) throw DataError("targets_loo needs at least two points");

  const std::size_t d = data.cols;
  TargetSet ts;
  ts.points = data;
  ts.values.resize(data.rows);

  std::vector<double> diff(d);
  for (std::size_t m = 0; m < data.rows; ++m) {
    std::size_t count = 0;
    for (std::size_t n = 0; n < data.rows; ++n) {
      if (n == m) continue;
      for (std::size_t j = 0; j < d; ++j)
        diff[j] = data.at(m, j) - data.at(n, j);
      count += theta(diff);
    }
    ts.values[m] =
        static_cast<double>(count) / static_cast<double>(data.rows - 1);
  }
  return ts;
}

} // namespace cdf2pdf
