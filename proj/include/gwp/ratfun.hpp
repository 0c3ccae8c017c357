#pragma once

/**
 * Univariate polynomials and rational functions over Q[i].
 *
 * A RationalFunction is always reduced: gcd(num, den) = 1 and the
 * denominator is monic, so equal functions have equal representations.
 */

#include "gwp/numeric.hpp"
#include "gwp/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gwp {

/// Dense polynomial, coefficient k multiplies x^k. Never has trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<GaussianRational> coeffs);
    static Poly constant(GaussianRational c) { return Poly({std::move(c)}); }
    static Poly monomial(std::size_t degree, GaussianRational c = 1);

    const std::vector<GaussianRational>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    GaussianRational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : GaussianRational(); }
    const GaussianRational& lead() const { return c_.back(); }
    /// Multiplicity of 0 as a root (number of low zero coefficients).
    std::size_t low_order() const;

    GaussianRational eval(const GaussianRational& x) const;
    Poly monic() const;
    /// x^deg * p(1/x)
    Poly reversed() const;
    /// p(c * x^k)
    Poly substitute_monomial(const GaussianRational& c, std::size_t k) const;
    /// Multiplicity of `root` and the cofactor p / (x - root)^mult.
    std::pair<std::size_t, Poly> split_root(const GaussianRational& root) const;

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const GaussianRational& c);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    std::string to_string(const std::string& var) const;

private:
    void trim();
    std::vector<GaussianRational> c_;
};

/// Quotient and remainder; throws on division by the zero polynomial.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic gcd (zero when both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);

class RationalFunction {
public:
    explicit RationalFunction(Var var = Var::q);
    RationalFunction(Var var, Poly num, Poly den);
    static RationalFunction constant(Var var, GaussianRational c);
    /// x^k for any integer k.
    static RationalFunction monomial(Var var, long k, GaussianRational c = 1);
    /// Converts an exact Laurent polynomial.
    static RationalFunction from_laurent(const HalfSeries& x);

    Var var() const noexcept { return var_; }
    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }

    RationalFunction operator-() const { return {var_, -num_, den_}; }
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const GaussianRational& c);
    RationalFunction pow(long n) const;

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.var_ == b.var_ && a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string to_string() const;

private:
    Var var_;
    Poly num_;
    Poly den_;
};

/// R(q) in q rewritten as a function of s through q = -s^2.
RationalFunction q_to_s(const RationalFunction& r);

/// True iff R(x) = R(1/x) identically (the q <-> 1/q involution for R in q).
bool check_q_symmetry(const RationalFunction& r);

/// Laurent expansion at 0, known below `order`.
HalfSeries expand(const RationalFunction& r, long order);

/// Laurent expansion in u of R(e^{iu/2}) (R in s) or R(-e^{iu}) (R in q),
/// known below `order`. Poles at u = 0 come from the root s = 1 of the
/// denominator; other roots play no role.
HalfSeries ratfun_to_u(const RationalFunction& r, long order);

/**
 * Finds the unique reduced R with deg num <= max_num_deg and
 * deg den <= max_den_deg whose expansion matches every known coefficient
 * of x, by an exact null-space computation. Returns nullopt when no such R
 * exists. Throws PrecisionError when x has fewer than
 * max_num_deg + max_den_deg + 1 known coefficients at exponents >= 0.
 */
std::optional<RationalFunction> reconstruct(const HalfSeries& x, long max_num_deg, long max_den_deg);

/// Bounds tried by reconstruct_auto, in order: (1,1), (2,2), (4,4), ... while
/// the series still determines them.
struct AutoReconstruction {
    std::optional<RationalFunction> result;
    long num_bound = 0;
    long den_bound = 0;
};
AutoReconstruction reconstruct_auto(const HalfSeries& x);

}  // namespace gwp
