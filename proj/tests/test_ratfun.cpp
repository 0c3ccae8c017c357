#include "doctest.h"

#include "gwp/error.hpp"
#include "gwp/ratfun.hpp"
#include "oracle.hpp"

#include <random>

using gwp::GR;
using gwp::HalfSeries;
using gwp::Poly;
using gwp::Rational;
using gwp::RationalFunction;
using gwp::Var;

namespace {

RationalFunction q_over_1pq2() { return {Var::q, Poly({0, 1}), Poly({1, 2, 1})}; }

// sum_{n>=1} (-1)^{n+1} n q^n, the long-division expansion of q/(1+q)^2
HalfSeries alternating_series(long terms) {
    HalfSeries::Coeffs c;
    for (long n = 1; n <= terms; ++n) c.emplace(n, GR(n % 2 ? n : -n));
    return {Var::q, std::move(c), terms + 1};
}

RationalFunction random_ratfun(std::mt19937& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg), coef(-9, 9), den_coef(1, 5);
    auto rand_poly = [&](bool nonzero_const) {
        std::vector<GR> c(static_cast<std::size_t>(deg(rng) + 1));
        for (auto& x : c) x = GR(Rational(coef(rng), den_coef(rng)), Rational(coef(rng) % 2));
        if (nonzero_const && c[0].is_zero()) c[0] = 1;
        return Poly(c);
    };
    Poly den = rand_poly(true);
    if (den.is_zero()) den = Poly::constant(1);
    return {Var::q, rand_poly(false), den};
}

}  // namespace

TEST_CASE("reduced form") {
    // (q^2 - 1) / (2q - 2) = (q + 1) / 2
    RationalFunction r(Var::q, Poly({-1, 0, 1}), Poly({-2, 2}));
    CHECK(r.num() == Poly({GR::parse("1/2"), GR::parse("1/2")}));
    CHECK(r.den() == Poly({1}));
    CHECK_THROWS_AS(RationalFunction(Var::q, Poly({1}), Poly()), gwp::PreconditionError);
}

TEST_CASE("check_q_symmetry") {
    CHECK(gwp::check_q_symmetry(q_over_1pq2()));
    CHECK_FALSE(gwp::check_q_symmetry(RationalFunction::monomial(Var::q, 1)));
    CHECK(gwp::check_q_symmetry(RationalFunction::constant(Var::q, 7)));
    CHECK(gwp::check_q_symmetry(RationalFunction::monomial(Var::q, 1) + RationalFunction::monomial(Var::q, -1)));
    CHECK_FALSE(gwp::check_q_symmetry(RationalFunction::monomial(Var::q, 1) + RationalFunction::constant(Var::q, 1)));
}

TEST_CASE("expand") {
    HalfSeries e = gwp::expand(q_over_1pq2(), 13);
    CHECK(e == alternating_series(12));

    HalfSeries geo = gwp::expand(RationalFunction(Var::q, Poly({1}), Poly({1, -1})), 5);
    CHECK(geo == HalfSeries(Var::q, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}, 5));

    HalfSeries inv = gwp::expand(RationalFunction::monomial(Var::q, -1), 6);
    CHECK(inv == HalfSeries(Var::q, {{-1, 1}}, 6));
}

TEST_CASE("reconstruct") {
    auto r = gwp::reconstruct(alternating_series(12), 1, 2);
    REQUIRE(r.has_value());
    CHECK(*r == q_over_1pq2());

    auto c = gwp::reconstruct(HalfSeries::constant(Var::q, 5, 4), 1, 1);
    REQUIRE(c.has_value());
    CHECK(*c == RationalFunction::constant(Var::q, 5));

    // exponential series has no (4,4) rational form matching 12 terms
    auto ex = oracle::exp_coeffs(12);
    HalfSeries::Coeffs ec;
    for (long k = 0; k < 12; ++k) ec.emplace(k, GR(ex[static_cast<std::size_t>(k)]));
    CHECK_FALSE(gwp::reconstruct(HalfSeries(Var::q, ec, 12), 4, 4).has_value());
    // ...but its (4,4) Pade approximant does match the first 9
    CHECK(gwp::reconstruct(HalfSeries(Var::q, ec, 12).truncated(9), 4, 4).has_value());

    CHECK_THROWS_AS(gwp::reconstruct(alternating_series(3), 2, 2), gwp::PrecisionError);
}

TEST_CASE("reconstruct with a pole at the origin") {
    // 1/(q^2 (1 - q))
    RationalFunction r(Var::q, Poly({1}), Poly({0, 0, 1, -1}));
    HalfSeries x = gwp::expand(r, 10);
    CHECK(x.min_exp() == -2);
    auto back = gwp::reconstruct(x, 0, 3);
    REQUIRE(back.has_value());
    CHECK(*back == r);
    CHECK_FALSE(gwp::reconstruct(x, 0, 1).has_value());
}

TEST_CASE("reconstruct and expand are inverse") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        RationalFunction r = random_ratfun(rng, 4);
        const long a = 4, b = 4;
        HalfSeries x = gwp::expand(r, a + b + 3);
        auto back = gwp::reconstruct(x, a, b);
        REQUIRE(back.has_value());
        CHECK(*back == r);
        CHECK(gwp::agree(gwp::expand(*back, *x.trunc()), x));
    }
}

TEST_CASE("reconstruct_auto escalates bounds") {
    HalfSeries x = gwp::expand(RationalFunction(Var::q, Poly({1, 0, 0, 1}), Poly({1, -1, 1, -1})), 20);
    auto res = gwp::reconstruct_auto(x);
    REQUIRE(res.result.has_value());
    CHECK(res.num_bound == 4);
    CHECK(*res.result == RationalFunction(Var::q, Poly({1, 0, 0, 1}), Poly({1, -1, 1, -1})));
}

TEST_CASE("symmetry agrees with u-parity for poles at q = -1") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> coef(-4, 4), pw(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
        // numerator over q^k (1+q)^{2k}
        const int k = pw(rng);
        std::vector<GR> c(static_cast<std::size_t>(2 * k + 1));
        for (auto& x : c) x = GR(coef(rng));
        if (trial % 2 == 0)
            for (std::size_t j = 0; j < c.size(); ++j) c[c.size() - 1 - j] = c[j];
        Poly den = Poly::monomial(static_cast<std::size_t>(k));
        for (int j = 0; j < 2 * k; ++j) den = den * Poly({1, 1});
        RationalFunction r(Var::q, Poly(c), den);
        HalfSeries u = gwp::ratfun_to_u(r, 10);
        CHECK(gwp::check_q_symmetry(r) == u.only_even_exponents());
    }
}
