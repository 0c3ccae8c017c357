#pragma once

/**
 * Gopakumar-Vafa transforms between BPS counts n_{g,beta} and connected
 * Gromov-Witten free energies F_beta(u), plus the graded exponential that
 * passes between connected and disconnected series.
 *
 *   F_beta(u) = sum_g sum_{d | beta} (n_{g,beta/d} / d) (2 sin(d u / 2))^{2g-2}
 *
 * In q = -e^{iu} each summand is (n/d) (-1)^{g-1} (s^d - s^{-d})^{2g-2} with
 * s^2 = -q, so F_beta is a rational function in q.
 */

#include "gwp/numeric.hpp"
#include "gwp/ratfun.hpp"
#include "gwp/series.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gwp {

struct CurveClass {
    std::vector<long> coords;

    bool is_zero() const;
    /// All coordinates >= 0.
    bool is_effective() const;
    long total() const;
    /// Componentwise <=.
    bool leq(const CurveClass& other) const;
    /// gcd of the coordinates (0 for the zero class).
    long content() const;
    CurveClass operator+(const CurveClass& o) const;
    CurveClass operator-(const CurveClass& o) const;
    CurveClass divided(long d) const;
    std::string to_string() const;

    friend auto operator<=>(const CurveClass&, const CurveClass&) = default;
};

/// (d, beta/d) for every d >= 1 dividing beta, ascending in d.
std::vector<std::pair<long, CurveClass>> divisor_classes(const CurveClass& beta);
/// Every effective class gamma with 0 <= gamma <= beta componentwise, zero included.
std::vector<CurveClass> sub_classes(const CurveClass& beta);

struct BpsTable {
    int rank = 0;
    std::vector<long> degree_fn;  // d_beta = <degree_fn, beta>
    std::vector<long> class_box;  // componentwise bound of the truncation monoid
    int max_genus = 0;
    std::map<std::pair<int, CurveClass>, Rational> entries;

    /// n_{g,beta}; absent entries inside the box are zero.
    Rational n(int g, const CurveClass& beta) const;
    void set(int g, const CurveClass& beta, Rational value);
    long degree(const CurveClass& beta) const;
    bool in_box(const CurveClass& beta) const;
};

/// (2 sin(d u / 2))^p known below `order`.
HalfSeries two_sin_power(long d, long p, long order);

HalfSeries gv_forward(const BpsTable& n, const CurveClass& beta, long u_order);
RationalFunction gv_forward_q(const BpsTable& n, const CurveClass& beta);

/**
 * Recovers n_{g,beta} for g <= max_genus from connected series F_beta. Classes
 * are processed in order of increasing total degree so multiple-cover
 * contributions of proper divisors are known before each class is solved.
 * Every class in `classes` and each of its divisors must have a series
 * known beyond u^{2 max_genus - 2}. Leftover coefficients at exponents
 * <= 2 max_genus - 2 mean the input is not of GV form and are reported as
 * PreconditionError("inconsistent-input").
 */
BpsTable gv_invert(const std::map<CurveClass, HalfSeries>& f, const std::vector<CurveClass>& classes, int max_genus);

struct IntegralityViolation {
    int genus;
    CurveClass beta;
    Rational value;
};

struct IntegralityReport {
    std::vector<IntegralityViolation> violations;
    /// Largest genus with a nonzero entry, per class that has any entry.
    std::map<CurveClass, int> top_genus;
};

IntegralityReport integrality_report(const BpsTable& n);

/// Coefficient of v^beta in exp(sum_{0 != gamma} F_gamma v^gamma).
HalfSeries connected_to_disconnected(const std::map<CurveClass, HalfSeries>& f, const CurveClass& beta);
/// Inverse of connected_to_disconnected: the coefficient of v^beta in log(1 + sum Z_gamma v^gamma).
HalfSeries disconnected_to_connected(const std::map<CurveClass, HalfSeries>& z, const CurveClass& beta);

}  // namespace gwp
