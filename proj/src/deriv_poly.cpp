#include "cdf2pdf/deriv_poly.hpp"

#include <array>
#include <cmath>

#include "cdf2pdf/errors.hpp"

namespace cdf2pdf {

namespace {

TanhDerivPoly differentiate(const TanhDerivPoly& p) {
  // P' in u, then times (1 - u^2).
  std::vector<double> dp(p.coeffs.size() - 1);
  for (std::size_t k = 1; k < p.coeffs.size(); ++k)
    dp[k - 1] = p.coeffs[k] * static_cast<double>(k);

  TanhDerivPoly next;
  next.order = p.order + 1;
  next.coeffs.assign(dp.size() + 2, 0.0);
  for (std::size_t k = 0; k < dp.size(); ++k) {
    next.coeffs[k] += dp[k];
    next.coeffs[k + 2] -= dp[k];
  }
  return next;
}

std::array<TanhDerivPoly, kMaxDerivOrder + 1> build_table() {
  std::array<TanhDerivPoly, kMaxDerivOrder + 1> table;
  table[1].order = 1;
  table[1].coeffs = {1.0, 0.0, -1.0};
  for (int n = 2; n <= kMaxDerivOrder; ++n)
    table[n] = differentiate(table[n - 1]);

  // The recurrence produces integers; doubles represent them exactly up
  // to well past order 20. Guard the range the contract promises.
  for (int n = 1; n <= 20; ++n)
    for (double c : table[n].coeffs)
      if (c != std::round(c))
        throw NumericError("tanh derivative coefficients lost integrality");
  return table;
}

} // namespace

const TanhDerivPoly& derivative_polynomial(int n) {
  if (n < 1 || n > kMaxDerivOrder)
    throw DataError("derivative order must be in [1, 64]");
  static const auto table = build_table();
  return table[n];
}

double tanh_nth_derivative(int n, double x) {
  if (n == 0) return std::tanh(x);
  return derivative_polynomial(n).eval(std::tanh(x));
}

} // namespace cdf2pdf
