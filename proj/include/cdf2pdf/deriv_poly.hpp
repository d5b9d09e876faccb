#pragma once

#include <vector>

namespace cdf2pdf {

/// Polynomial P_n with tanh^(n)(x) = P_n(tanh x). Degree is exactly
/// n + 1; all coefficients are integers.
struct TanhDerivPoly {
  int order = 0;
  std::vector<double> coeffs; // ascending powers u^0 .. u^(n+1)

  /// Horner evaluation at u = tanh(x).
  double eval(double u) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * u + coeffs[k];
    return acc;
  }
};

inline constexpr int kMaxDerivOrder = 64;

/// P_n for 1 <= n <= 64, built once via P_1 = 1 - u^2,
/// P_{k+1} = (1 - u^2) P_k' and cached for reuse.
const TanhDerivPoly& derivative_polynomial(int n);

/// d^n/dx^n tanh(x); n = 0 returns tanh(x) itself.
double tanh_nth_derivative(int n, double x);

} // namespace cdf2pdf
