#pragma once

// Test-only reference computations. Nothing here calls into the kernel's
// series machinery: series are plain coefficient vectors over Q and every
// expansion is built from textbook Taylor coefficients.

#include <gmpxx.h>

#include <cassert>
#include <vector>

namespace oracle {

/// Laurent series over Q: coefficient k multiplies u^(lo + k).
struct Laurent {
    long lo = 0;
    std::vector<mpq_class> c;

    mpq_class at(long e) const {
        long k = e - lo;
        if (k < 0 || k >= static_cast<long>(c.size())) return 0;
        return c[static_cast<std::size_t>(k)];
    }
};

inline mpq_class fact(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return mpq_class(f);
}

/// 2 sin(d u / 2) with `n` coefficients starting at u^1.
inline Laurent two_sin(long d, std::size_t n) {
    Laurent s{1, std::vector<mpq_class>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        unsigned e = static_cast<unsigned>(k + 1);
        if (e % 2 == 0) continue;
        unsigned m = (e - 1) / 2;
        mpq_class half_d(d, 2);
        half_d.canonicalize();
        mpq_class p = 1;
        for (unsigned j = 0; j < e; ++j) p *= half_d;
        s.c[k] = (m % 2 ? -2 : 2) * p / fact(e);
    }
    return s;
}

/// Product keeping `n` coefficients.
inline Laurent mul(const Laurent& a, const Laurent& b, std::size_t n) {
    Laurent r{a.lo + b.lo, std::vector<mpq_class>(n)};
    for (std::size_t i = 0; i < a.c.size() && i < n; ++i)
        for (std::size_t j = 0; i + j < n && j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

/// 1/a keeping `n` coefficients; a.c[0] must be nonzero.
inline Laurent inverse(const Laurent& a, std::size_t n) {
    assert(!a.c.empty() && a.c[0] != 0);
    Laurent r{-a.lo, std::vector<mpq_class>(n)};
    r.c[0] = 1 / a.c[0];
    for (std::size_t k = 1; k < n; ++k) {
        mpq_class acc = 0;
        for (std::size_t j = 1; j <= k && j < a.c.size(); ++j) acc += a.c[j] * r.c[k - j];
        r.c[k] = -acc / a.c[0];
    }
    return r;
}

/// (2 sin(d u/2))^p for any integer p, with coefficients for u^e, e < order.
inline Laurent two_sin_power(long d, long p, long order) {
    const std::size_t n = static_cast<std::size_t>(std::max(1L, order - p + 2));
    Laurent base = two_sin(d, n);
    Laurent acc{0, {mpq_class(1)}};
    acc.c.resize(n);
    Laurent factor = p >= 0 ? base : inverse(base, n);
    for (long k = 0; k < (p >= 0 ? p : -p); ++k) acc = mul(acc, factor, n);
    return acc;
}

/// Bell numbers by the triangle recurrence.
inline std::vector<unsigned long> bell_numbers(std::size_t n) {
    std::vector<unsigned long> bell{1};
    std::vector<unsigned long> row{1};
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<unsigned long> next{row.back()};
        for (auto x : row) next.push_back(next.back() + x);
        bell.push_back(next.front());
        row = next;
    }
    return bell;
}

/// Taylor coefficients of e^x (as rationals) at x^0..x^(n-1).
inline std::vector<mpq_class> exp_coeffs(std::size_t n) {
    std::vector<mpq_class> c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = 1 / fact(static_cast<unsigned>(k));
    return c;
}

}  // namespace oracle
