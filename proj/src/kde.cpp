#include "cdf2pdf/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cdf2pdf/errors.hpp"

namespace cdf2pdf {

namespace {

double gauss(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

} // namespace

void KdeModel::validate() const {
  data.validate();
  if (data.cols != 1) throw DataError("kde supports 1-D data only");
  if (!(bandwidth > 0.0)) throw DataError("kde bandwidth must be positive");
}

double kde_pdf(const KdeModel& model, double x) {
  const auto& pts = model.data.points;
  const double h = model.bandwidth;
  double acc = 0.0;
  for (double xn : pts) acc += gauss((x - xn) / h);
  return acc / (static_cast<double>(pts.size()) * h);
}

double loo_log_likelihood(const Dataset& data, double h) {
  const auto& pts = data.points;
  const std::size_t n = pts.size();
  double score = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m) continue;
      acc += gauss((pts[m] - pts[k]) / h);
    }
    const double dens = acc / (static_cast<double>(n - 1) * h);
    if (dens <= 0.0) return -std::numeric_limits<double>::infinity();
    score += std::log(dens);
  }
  return score;
}

double cv_bandwidth(const Dataset& data, std::span<const double> candidates) {
  data.validate();
  if (data.cols != 1) throw DataError("cv_bandwidth supports 1-D data only");
  if (data.rows < 2) throw DataError("cv_bandwidth needs at least two points");
  if (candidates.empty()) throw DataError("cv_bandwidth needs candidates");
  for (double h : candidates)
    if (!(h > 0.0)) throw DataError("bandwidth candidates must be positive");

  double best_h = 0.0;
  double best_score = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
  for (double h : candidates) {
    const double score = loo_log_likelihood(data, h);
    if (!std::isfinite(score)) continue;
    if (!any_finite || score > best_score ||
        (score == best_score && h < best_h)) {
      best_score = score;
      best_h = h;
      any_finite = true;
    }
  }
  if (!any_finite)
    throw NumericError(
        "every bandwidth candidate gives zero leave-one-out density");
  return best_h;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw DataError("log_spaced needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                static_cast<double>(n - 1));
  return out;
}

std::vector<double> default_bandwidth_candidates(const Dataset& data) {
  data.validate();
  if (data.cols != 1) throw DataError("kde supports 1-D data only");
  const auto [lo, hi] =
      std::minmax_element(data.points.begin(), data.points.end());
  double range = *hi - *lo;
  if (range <= 0.0) range = 1.0;
  return log_spaced(0.01 * range, 0.5 * range, 32);
}

} // namespace cdf2pdf
