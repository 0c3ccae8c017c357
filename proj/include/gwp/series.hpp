#pragma once

/**
 * Truncated Laurent series over Q[i].
 *
 * The internal pairs variable is s with q = -s^2, so (-q)^{-d/2} is the
 * monomial s^{-d} and the change of variables -q = e^{iu} is the single
 * substitution s = e^{iu/2}. Series in q itself are also representable so
 * that rational functions in q can be expanded without going through s.
 *
 * Truncation is explicit: a series with trunc() == T knows every
 * coefficient at exponents < T (absent ones are zero) and nothing at
 * exponents >= T. A series without a truncation order is exact, i.e. a
 * Laurent polynomial.
 */

#include "gwp/numeric.hpp"

#include <map>
#include <optional>
#include <string>

namespace gwp {

enum class Var { s, q, u };

std::string to_string(Var v);
Var parse_var(const std::string& name);

class HalfSeries {
public:
    using Coeffs = std::map<long, GaussianRational>;

    explicit HalfSeries(Var var = Var::u, std::optional<long> trunc = std::nullopt);
    HalfSeries(Var var, Coeffs coeffs, std::optional<long> trunc);

    static HalfSeries monomial(Var var, long exp, GaussianRational c = 1,
                               std::optional<long> trunc = std::nullopt);
    static HalfSeries constant(Var var, GaussianRational c, std::optional<long> trunc = std::nullopt) {
        return monomial(var, 0, std::move(c), trunc);
    }

    Var var() const noexcept { return var_; }
    const Coeffs& coeffs() const noexcept { return coeffs_; }
    std::optional<long> trunc() const noexcept { return trunc_; }
    bool is_exact() const noexcept { return !trunc_.has_value(); }

    /// Coefficient at `exp`; throws PrecisionError when exp >= trunc.
    GaussianRational coeff(long exp) const;
    /// Lowest stored exponent, or trunc() when nothing is stored. Empty for exact zero.
    std::optional<long> valuation() const;
    /// Lowest stored exponent (the min_exp of the stored data), if any.
    std::optional<long> min_exp() const;
    /// True when no nonzero coefficient is known (exact zero or O(x^T)).
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool only_even_exponents() const;

    /// Drops knowledge at exponents >= t (no-op when already coarser).
    HalfSeries truncated(long t) const;
    HalfSeries shifted(long k) const;  // multiply by var^k
    HalfSeries scaled(const GaussianRational& c) const;

    HalfSeries operator-() const { return scaled(GaussianRational(-1)); }

    std::string to_string() const;

    /// Structural equality: same variable, same precision, same coefficients.
    friend bool operator==(const HalfSeries& a, const HalfSeries& b) {
        return a.var_ == b.var_ && a.trunc_ == b.trunc_ && a.coeffs_ == b.coeffs_;
    }

private:
    void prune();

    Var var_;
    Coeffs coeffs_;
    std::optional<long> trunc_;
};

HalfSeries series_add(const HalfSeries& a, const HalfSeries& b);
HalfSeries series_sub(const HalfSeries& a, const HalfSeries& b);
HalfSeries series_mul(const HalfSeries& a, const HalfSeries& b);
/// Inverse. Exact inputs with more than one term need `order` (truncation of the
/// result); otherwise the result carries the precision the input supports,
/// optionally capped at `order`.
HalfSeries series_inv(const HalfSeries& a, std::optional<long> order = std::nullopt);
/// a^n for any integer n; negative powers go through series_inv with `order`.
HalfSeries series_pow(const HalfSeries& a, long n, std::optional<long> order = std::nullopt);

inline HalfSeries operator+(const HalfSeries& a, const HalfSeries& b) { return series_add(a, b); }
inline HalfSeries operator-(const HalfSeries& a, const HalfSeries& b) { return series_sub(a, b); }
inline HalfSeries operator*(const HalfSeries& a, const HalfSeries& b) { return series_mul(a, b); }

/// True when a and b agree at every exponent known to both.
bool agree(const HalfSeries& a, const HalfSeries& b);
/// min of two optional truncation orders (nullopt = exact).
std::optional<long> min_trunc(std::optional<long> a, std::optional<long> b);

/// e^{c u} expanded in u up to (excluding) `order`.
HalfSeries exp_series(const GaussianRational& c, long order);

/// Substitutes s = e^{iu/2} into an exact Laurent polynomial in s and returns
/// the u-series known below `order`. Truncated inputs carry no information
/// about any u-coefficient and are rejected with PrecisionError.
HalfSeries to_u(const HalfSeries& x, long order);

/// Rewrites a q-series in s via q = -s^2.
HalfSeries q_to_s(const HalfSeries& x);

/// A series in s viewed as a Laurent series in q = -s^2.
struct QView {
    HalfSeries series;
    bool parity_ok;
};
QView q_view(const HalfSeries& x);
/// Converts an s-series with only even exponents into a q-series. Throws
/// PreconditionError when odd exponents (half-integral q powers) are present.
HalfSeries s_to_q(const HalfSeries& x);

/// Maximum series order allowed, from GWP_MAX_ORDER (default 4096).
long max_order_cap();
/// Throws PrecisionError when `order` exceeds max_order_cap().
void check_order_cap(long order);

}  // namespace gwp
