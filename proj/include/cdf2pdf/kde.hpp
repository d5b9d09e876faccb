#pragma once

#include <span>
#include <vector>

#include "cdf2pdf/distributions.hpp"

namespace cdf2pdf {

/// Gaussian kernel density estimate over 1-D data.
struct KdeModel {
  Dataset data;
  double bandwidth = 1.0;

  /// Throws DataError unless the data is 1-D and bandwidth > 0.
  void validate() const;
};

double kde_pdf(const KdeModel& model, double x);

/// Leave-one-out log-likelihood of the data under bandwidth h; -inf when
/// some point sees zero leave-one-out density.
double loo_log_likelihood(const Dataset& data, double h);

/// Candidate maximizing the LOO log-likelihood, ties broken toward the
/// smaller bandwidth. Throws NumericError when every candidate scores
/// -inf.
double cv_bandwidth(const Dataset& data, std::span<const double> candidates);

/// 32 log-spaced candidates spanning [0.01, 0.5] x data range.
std::vector<double> default_bandwidth_candidates(const Dataset& data);

std::vector<double> log_spaced(double lo, double hi, std::size_t n);

} // namespace cdf2pdf
