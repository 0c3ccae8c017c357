#include "doctest.h"

#include "gwp/error.hpp"
#include "gwp/ratfun.hpp"
#include "gwp/series.hpp"
#include "oracle.hpp"

#include <random>

using gwp::GR;
using gwp::HalfSeries;
using gwp::Rational;
using gwp::Var;

namespace {

HalfSeries poly(Var v, std::map<long, GR> c, std::optional<long> trunc = std::nullopt) {
    return {v, std::move(c), trunc};
}

bool matches_oracle(const HalfSeries& x, const oracle::Laurent& o, long order) {
    for (long e = o.lo; e < order; ++e) {
        GR expected{o.at(e)};
        if (x.coeff(e) != expected) return false;
    }
    return x.min_exp().value_or(order) >= o.lo;
}

}  // namespace

TEST_CASE("series arithmetic") {
    HalfSeries a = poly(Var::s, {{0, 1}, {1, 1}}, 10);
    HalfSeries b = poly(Var::s, {{0, 1}, {1, -1}}, 10);
    HalfSeries p = a * b;
    CHECK(p == poly(Var::s, {{0, 1}, {2, -1}}, 10));
    CHECK((a + b) == poly(Var::s, {{0, 2}}, 10));

    // precision propagation: (s^2 + O(s^5)) * (1 + O(s^3)) known below min(5+0, 3+2) = 5
    HalfSeries c = poly(Var::s, {{2, 1}}, 5);
    HalfSeries d = poly(Var::s, {{0, 1}}, 3);
    CHECK((c * d).trunc() == 5);
    CHECK((c + d).trunc() == 3);
    CHECK_THROWS_AS((c * d).coeff(5), gwp::PrecisionError);
}

TEST_CASE("series inverse") {
    HalfSeries geo = gwp::series_inv(poly(Var::s, {{0, 1}, {1, -1}}), 6);
    CHECK(geo == poly(Var::s, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}, 6));

    // inv(s^2 (1 + s)) = s^{-2}(1 - s + s^2 - ...)
    HalfSeries x = poly(Var::s, {{2, 1}, {3, 1}});
    HalfSeries y = gwp::series_inv(x, 4);
    CHECK(y == poly(Var::s, {{-2, 1}, {-1, -1}, {0, 1}, {1, -1}, {2, 1}, {3, -1}}, 4));
    HalfSeries one = x * y;
    CHECK(one.trunc() == 6);
    CHECK(one == poly(Var::s, {{0, 1}}, 6));

    // truncated input: relative precision carries over
    HalfSeries t = poly(Var::s, {{1, 2}, {2, 1}}, 5);
    HalfSeries ti = gwp::series_inv(t);
    CHECK(ti.trunc() == 3);
    CHECK(gwp::agree(t * ti, HalfSeries::constant(Var::s, 1)));

    CHECK_THROWS_AS(gwp::series_inv(HalfSeries(Var::s, 4)), gwp::PreconditionError);
    CHECK_THROWS_AS(gwp::series_inv(poly(Var::s, {{0, 1}, {1, 1}})), gwp::PreconditionError);
    CHECK_THROWS_AS(poly(Var::s, {{0, 1}}) + poly(Var::u, {{0, 1}}), gwp::PreconditionError);
}

TEST_CASE("to_u substitution") {
    // s -> 1 + iu/2 - u^2/8 - iu^3/48 + ...
    HalfSeries s = gwp::to_u(HalfSeries::monomial(Var::s, 1), 4);
    CHECK(s == poly(Var::u, {{0, 1}, {1, GR::parse("1/2*i")}, {2, GR::parse("-1/8")}, {3, GR::parse("-1/48*i")}}, 4));

    HalfSeries prod = HalfSeries::monomial(Var::s, 1) * HalfSeries::monomial(Var::s, -1);
    CHECK(gwp::to_u(prod, 8) == HalfSeries::constant(Var::u, 1, 8));

    // -(s - 1/s)^{-2} -> (2 sin(u/2))^{-2}
    HalfSeries diff = poly(Var::s, {{1, 1}, {-1, -1}});
    const long order = 21;
    HalfSeries du = gwp::to_u(diff, order + 4);
    HalfSeries f = -gwp::series_pow(du, -2, order);
    CHECK(f.trunc() == order);
    CHECK(matches_oracle(f, oracle::two_sin_power(1, -2, order), order));
    CHECK(f.coeff(-2) == GR(1));
    CHECK(f.coeff(0) == GR::parse("1/12"));
    CHECK(f.coeff(2) == GR::parse("1/240"));

    CHECK_THROWS_AS(gwp::to_u(poly(Var::s, {{0, 1}}, 5), 3), gwp::PrecisionError);
}

TEST_CASE("to_u is a ring morphism on Laurent polynomials") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-5, 5), exps(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<long, GR> ca, cb;
        for (int k = 0; k < 3; ++k) {
            ca[exps(rng)] += GR(coef(rng));
            cb[exps(rng)] += GR(coef(rng));
        }
        HalfSeries a = poly(Var::s, ca), b = poly(Var::s, cb);
        const long order = 9;
        CHECK(gwp::agree(gwp::to_u(a * b, order), gwp::to_u(a, order) * gwp::to_u(b, order)));
        CHECK(gwp::agree(gwp::to_u(a + b, order), gwp::to_u(a, order) + gwp::to_u(b, order)));
        // direct substitution: coefficient of u^n is sum_e c_e (ie/2)^n / n!
        HalfSeries ua = gwp::to_u(a, order);
        for (long n = 0; n < order; ++n) {
            GR expected;
            for (const auto& [e, c] : a.coeffs())
                expected += c * gwp::pow(GR(Rational(0), Rational(e, 2)), static_cast<unsigned long>(n)) /
                            GR(gwp::factorial(static_cast<unsigned long>(n)));
            CHECK(ua.coeff(n) == expected);
        }
    }
}

TEST_CASE("ratfun_to_u") {
    using gwp::RationalFunction;
    CHECK(gwp::ratfun_to_u(RationalFunction::constant(Var::s, 1), 6) == HalfSeries::constant(Var::u, 1, 6));

    // q/(1+q)^2 = (2 sin(u/2))^{-2}
    RationalFunction r(Var::q, gwp::Poly({0, 1}), gwp::Poly({1, 2, 1}));
    HalfSeries f = gwp::ratfun_to_u(r, 21);
    CHECK(f.trunc() == 21);
    CHECK(matches_oracle(f, oracle::two_sin_power(1, -2, 21), 21));

    // s^2 = -q -> e^{iu}
    HalfSeries e = gwp::ratfun_to_u(RationalFunction::monomial(Var::s, 2), 8);
    CHECK(e == gwp::exp_series(GR::i(), 8));

    // a pole of order 3 at s = 1 shows up as u^{-3}
    RationalFunction cube(Var::s, gwp::Poly({1}), gwp::Poly({-1, 3, -3, 1}));
    HalfSeries c = gwp::ratfun_to_u(cube, 2);
    CHECK(c.min_exp() == -3);
}

TEST_CASE("symmetric functions expand to even u-series") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-6, 6);
    using gwp::RationalFunction;
    for (int trial = 0; trial < 10; ++trial) {
        // palindromic numerator and denominator in s give R(s) = R(1/s)
        const int a = coef(rng), b = coef(rng);
        gwp::Poly num({a, b, a});
        gwp::Poly den({1, coef(rng) * 2 + 1, 1});
        RationalFunction r(Var::s, num, den);
        CHECK(gwp::check_q_symmetry(r));
        HalfSeries f = gwp::ratfun_to_u(r, 12);
        for (const auto& [exp, c] : f.coeffs()) CHECK(exp % 2 == 0);
    }
}

TEST_CASE("q and s views") {
    HalfSeries q = poly(Var::q, {{-1, 1}, {1, 3}}, 4);
    HalfSeries s = gwp::q_to_s(q);
    CHECK(s == poly(Var::s, {{-2, -1}, {2, -3}}, 8));
    CHECK(gwp::q_view(s).parity_ok);
    CHECK(gwp::s_to_q(s) == q);
    CHECK_FALSE(gwp::q_view(HalfSeries::monomial(Var::s, 1)).parity_ok);
    CHECK_THROWS_AS(gwp::s_to_q(HalfSeries::monomial(Var::s, 1)), gwp::PreconditionError);
}
