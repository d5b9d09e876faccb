#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdf2pdf {

/// One mixture component: a Normal (mu, sigma) or a Uniform on [a, b].
struct Component {
  enum class Kind { Normal, Uniform };

  Kind kind = Kind::Normal;
  double mu = 0.0;
  double sigma = 1.0;
  double a = 0.0;
  double b = 1.0;

  static Component normal(double mu, double sigma) {
    Component c;
    c.kind = Kind::Normal;
    c.mu = mu;
    c.sigma = sigma;
    return c;
  }

  static Component uniform(double a, double b) {
    Component c;
    c.kind = Kind::Uniform;
    c.a = a;
    c.b = b;
    return c;
  }
};

/// Weighted mixture of Normal/Uniform components; the synthetic ground
/// truth used for sampling and exact PDF/CDF evaluation.
struct MixtureSpec {
  std::vector<std::pair<double, Component>> components;

  /// Throws DataError unless all weights are positive and sum to 1
  /// (within 1e-12), every sigma > 0 and every a < b.
  void validate() const;
};

/// N rows of d-dimensional points, row-major.
struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> points;

  double at(std::size_t i, std::size_t j) const { return points[i * cols + j]; }
  const double* row(std::size_t i) const { return points.data() + i * cols; }

  static Dataset from_column(std::vector<double> values);

  /// Throws DataError unless rows >= 1, cols >= 1 and all entries finite.
  void validate() const;
};

double pdf_true(const MixtureSpec& spec, double x);
double cdf_true(const MixtureSpec& spec, double x);

/// Deterministic 1-D sampling: categorical component draw, then
/// inverse-transform (Uniform) or Box-Muller (Normal).
Dataset sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);

/// The claw-shaped six-component Normal mixture used in experiment 1.
MixtureSpec bart_simpson();

/// Two Normals plus two Uniforms, equally weighted; experiment 2's
/// non-smooth target.
MixtureSpec mixed_dist();

std::string mixture_to_json(const MixtureSpec& spec);
MixtureSpec mixture_from_json(const std::string& text);

} // namespace cdf2pdf
