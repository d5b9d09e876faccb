#include "cdf2pdf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/targets.hpp"

namespace cdf2pdf {

void Grid1D::validate() const {
  if (!(lo < hi)) throw DataError("grid needs lo < hi");
  if (n < 2) throw DataError("grid needs n >= 2");
}

double trapezoid(std::span<const double> values, const Grid1D& grid) {
  grid.validate();
  if (values.size() != grid.n)
    throw DataError("value count does not match grid");
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * grid.step();
}

double ise(std::span<const double> estimate, std::span<const double> truth,
           const Grid1D& grid) {
  if (estimate.size() != truth.size())
    throw DataError("curve lengths differ");
  std::vector<double> sq(estimate.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double e = estimate[i] - truth[i];
    sq[i] = e * e;
  }
  return trapezoid(sq, grid);
}

double sup_cdf_error(const MinnModel& model, const Dataset& data,
                     const Grid1D& grid) {
  grid.validate();
  if (model.d != 1) throw DataError("sup_cdf_error is defined for d = 1");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.point(i);
    worst = std::max(worst, std::abs(forward(model, x) -
                                     empirical_cdf(data, x)));
  }
  return worst;
}

double negative_mass_fraction(std::span<const double> values,
                              const Grid1D& grid) {
  std::vector<double> neg(values.size()), mag(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    neg[i] = values[i] < 0.0 ? -values[i] : 0.0;
    mag[i] = std::abs(values[i]);
  }
  const double total = trapezoid(mag, grid);
  if (total <= 0.0) return 0.0;
  return trapezoid(neg, grid) / total;
}

} // namespace cdf2pdf
