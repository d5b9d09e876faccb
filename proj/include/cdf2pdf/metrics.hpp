#pragma once

#include <span>
#include <vector>

#include "cdf2pdf/distributions.hpp"
#include "cdf2pdf/minn.hpp"

namespace cdf2pdf {

/// Uniform 1-D evaluation grid with n points from lo to hi inclusive.
struct Grid1D {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double point(std::size_t i) const {
    return lo + step() * static_cast<double>(i);
  }

  /// Throws DataError unless lo < hi and n >= 2.
  void validate() const;
};

/// Composite trapezoid rule over grid-aligned samples.
double trapezoid(std::span<const double> values, const Grid1D& grid);

/// Integrated squared error between two curves sampled on the grid.
double ise(std::span<const double> estimate, std::span<const double> truth,
           const Grid1D& grid);

/// Max over grid points of |forward(x) - empirical CDF(x)|.
double sup_cdf_error(const MinnModel& model, const Dataset& data,
                     const Grid1D& grid);

/// Mass below zero as a fraction of total absolute mass; diagnostic for
/// d >= 2 densities, identically 0 for valid 1-D estimates.
double negative_mass_fraction(std::span<const double> values,
                              const Grid1D& grid);

/// Convenience: f evaluated at every grid point.
template <typename F>
std::vector<double> sample_on_grid(const Grid1D& grid, F&& f) {
  std::vector<double> out(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) out[i] = f(grid.point(i));
  return out;
}

} // namespace cdf2pdf
