#include "eqtest/avt/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eqtest/core/errors.hpp"

namespace eqt {

double binomial_tail(std::uint64_t m, std::uint64_t n, double p) {
  if (n > m) throw InputError("binomial tail needs n <= m");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("binomial tail needs p in [0, 1]");
  if (n == 0) return 1.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_m_fact = std::lgamma(static_cast<double>(m) + 1.0);
  std::vector<double> terms;
  terms.reserve(m - n + 1);
  double peak = -INFINITY;
  for (std::uint64_t k = n; k <= m; ++k) {
    const double kd = static_cast<double>(k);
    const double rest = static_cast<double>(m - k);
    const double term = log_m_fact - std::lgamma(kd + 1.0) - std::lgamma(rest + 1.0) + kd * log_p + rest * log_q;
    terms.push_back(term);
    peak = std::max(peak, term);
  }
  // Neumaier summation of exp(term - peak).
  double sum = 0.0;
  double carry = 0.0;
  for (double term : terms) {
    const double v = std::exp(term - peak);
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  const double tail = std::exp(peak + std::log(sum + carry));
  return std::clamp(tail, 0.0, 1.0);
}

}  // namespace eqt
