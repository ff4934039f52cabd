#pragma once

#include <cstdint>

namespace eqt {

/// Upper tail P(Binom(m, p) >= n), summed in log space with compensated
/// accumulation. Exact at n = 0 (1), p = 0 (0 for n >= 1) and p = 1 (1).
/// Throws InputError unless n <= m and p in [0, 1].
double binomial_tail(std::uint64_t m, std::uint64_t n, double p);

}  // namespace eqt
