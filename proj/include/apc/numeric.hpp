#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace apc {

/// Exact ceil(log2 m) for m >= 1, via bit operations.
inline int ceil_log2_u64(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("ceil_log2_u64: m must be positive");
    int bits = 0;
    std::uint64_t v = m - 1;
    while (v != 0) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

inline double ln_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double ln_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
}

/// log2(n!). Exact when n! fits in 64 bits (n <= 20), lgamma otherwise.
inline double log2_factorial(std::uint64_t n) {
    if (n <= 20) {
        std::uint64_t f = 1;
        for (std::uint64_t i = 2; i <= n; ++i) f *= i;
        return std::log2(static_cast<double>(f));
    }
    return ln_factorial(n) / std::numbers::ln2_v<double>;
}

/// C(n, k) as uint64, saturating at `cap` (so oversized counts compare safely).
inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k,
                                         std::uint64_t cap = std::numeric_limits<std::uint64_t>::max()) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;  // numerator stays divisible at each step
        if (acc > cap) return cap;
    }
    return static_cast<std::uint64_t>(acc);
}

/// a * b, saturating at `cap`.
inline std::uint64_t mul_saturating(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap;
    return a * b;
}

/// q * (q-1) * ... * (q-m+1), saturating at `cap`.
inline std::uint64_t falling_factorial_saturating(std::uint64_t q, std::uint64_t m, std::uint64_t cap) {
    std::uint64_t acc = 1;
    for (std::uint64_t i = 0; i < m; ++i) acc = mul_saturating(acc, q - i, cap);
    return acc;
}

/// Pr[Binomial(n, p) >= kmin], summed directly in log space per term.
inline double binomial_tail_at_least(int n, int kmin, double p) {
    if (kmin <= 0) return 1.0;
    if (kmin > n) return 0.0;
    if (p <= 0.0) return 0.0;  // kmin >= 1 here
    if (p >= 1.0) return 1.0;
    double total = 0.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (int j = kmin; j <= n; ++j) {
        total += std::exp(ln_binomial(n, j) + j * lp + (n - j) * lq);
    }
    return total < 1.0 ? total : 1.0;
}

}  // namespace apc
