#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdf2pdf/distributions.hpp"

namespace cdf2pdf {

enum class Activation { Tanh, Blend };

/// Single-hidden-layer network whose input and output weights are
/// exponentials of the stored raw parameters, so the map x -> forward(x)
/// is strictly increasing in every coordinate for any raw values.
struct MinnModel {
  int d = 1;
  int h = 1;
  std::vector<double> raw_w1; // h x d row-major; effective weight exp(raw)
  std::vector<double> b1;     // h
  std::vector<double> raw_w2; // h; effective weight exp(raw)
  double b2 = 0.0;
  Activation activation = Activation::Tanh;
  std::vector<double> alpha;  // h, Blend mode only

  std::size_t parameter_count() const {
    return raw_w1.size() + b1.size() + raw_w2.size() + 1 + alpha.size();
  }

  /// Throws DataError on shape inconsistencies or non-finite values.
  void validate() const;
};

/// Clipped-linear ramp: x on [-1, 1], saturating at +-1 outside.
double ramp(double x);

double logistic(double a);

/// Blended activation rho*tanh(x) + (1 - rho)*ramp(x).
double eta(double x, double rho);

/// Hidden pre-activations z_i = sum_j exp(raw_w1_ij) x_j + b1_i.
std::vector<double> pre_activations(const MinnModel& model,
                                    std::span<const double> x);

/// CDF estimate H(x).
double forward(const MinnModel& model, std::span<const double> x);
double forward(const MinnModel& model, double x);

/// Density estimate: the exact d-th mixed partial of forward, via the
/// closed-form tanh derivative polynomials. May be negative for d >= 2;
/// reported as-is.
double pdf_at(const MinnModel& model, std::span<const double> x);
double pdf_at(const MinnModel& model, double x);

inline constexpr double kDefaultInitScale = 0.5;

/// Fresh Tanh-mode model. Raw weights start near log(1/h); hidden biases
/// place the unit transitions at evenly spaced quantiles of `data` when
/// given (coordinatewise), else tile [-1, 1]; b2 starts at 0.5.
MinnModel init_model(int d, int h, std::uint64_t seed,
                     double scale = kDefaultInitScale,
                     const Dataset* data = nullptr);

inline constexpr double kDefaultAlpha0 = 3.0;

/// Switch a Tanh-mode model to Blend mode with all alpha_i = alpha0,
/// keeping every weight bit-identical.
MinnModel to_blend(const MinnModel& model, double alpha0 = kDefaultAlpha0);

/// JSON round trip, bit-exact for finite doubles.
std::string model_to_json(const MinnModel& model);
MinnModel model_from_json(const std::string& text);

} // namespace cdf2pdf
