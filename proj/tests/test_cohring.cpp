#include "doctest.h"

#include "gwp/cohring.hpp"
#include "gwp/error.hpp"
#include "oracle.hpp"
#include "rings.hpp"

#include <random>

using gwp::GR;
using gwp::GradedRing;
using gwp::Rational;
using gwp::Tensor;
using gwp::WeightedPartition;

namespace {

WeightedPartition wp(const std::string& s, const GradedRing& r) { return WeightedPartition::parse(s, r); }

/// Number of multisets of (size, weight) parts of total d with f even weights:
/// coefficient of x^d in prod_s (1 - x^s)^{-f}.
unsigned long partition_count(long d, int f) {
    std::vector<unsigned long> c(static_cast<std::size_t>(d + 1), 0);
    c[0] = 1;
    for (long s = 1; s <= d; ++s)
        for (int w = 0; w < f; ++w)
            for (long n = s; n <= d; ++n) c[static_cast<std::size_t>(n)] += c[static_cast<std::size_t>(n - s)];
    return c[static_cast<std::size_t>(d)];
}

}  // namespace

TEST_CASE("ring validation") {
    auto m = rings::empty_mult(2);
    m[0][1][1] = 1;  // 1*p = p but p*1 = 0
    CHECK_THROWS_AS(GradedRing({"1", "p"}, {Rational(0), Rational(1)}, {false, false}, gwp::Matrix{{0, 1}, {1, 0}}, m),
                    gwp::PreconditionError);
    auto bad_deg = rings::empty_mult(2);
    bad_deg[1][1][1] = 1;  // p*p = p breaks the grading
    CHECK_THROWS_AS(
        GradedRing({"1", "p"}, {Rational(0), Rational(1)}, {false, false}, gwp::Matrix{{0, 1}, {1, 0}}, bad_deg),
        gwp::PreconditionError);
    GradedRing singular({"1", "p"}, {Rational(0), Rational(1)}, {false, false}, gwp::Matrix{{1, 0}, {0, 0}},
                        rings::empty_mult(2));
    CHECK_FALSE(singular.nondegenerate());
    CHECK_THROWS_AS(gwp::dual_partition(wp("1:1", singular), singular), gwp::PreconditionError);
    CHECK(rings::elliptic().nondegenerate());
    CHECK(rings::skewed_p1xp1().nondegenerate());
}

TEST_CASE("element parsing") {
    GradedRing r = rings::p1xp1();
    auto x = r.parse_element("2*a - 1/2*pt + 1");
    CHECK(x == gwp::RingElement{GR(1), GR(2), GR(0), GR(Rational(-1, 2))});
    CHECK(r.element_to_string(x) == "1 + 2*a - 1/2*pt");
    CHECK_THROWS_AS(r.parse_element("q"), gwp::ParseError);
}

TEST_CASE("gluing factor") {
    GradedRing r = rings::p1();
    CHECK(gwp::gluing_factor(wp("1:1", r)) == 1);
    CHECK(gwp::gluing_factor(wp("2:1,1:1", r)) == 2);
    CHECK(gwp::gluing_factor(wp("1:1,1:1", r)) == 2);
    CHECK(gwp::gluing_factor(wp("2:p,2:p,2:1", r)) == 16);
    CHECK(gwp::gluing_factor(wp("", r)) == 1);
}

TEST_CASE("codim") {
    auto m = rings::empty_mult(2);
    m[0][0][0] = 1;
    m[0][1][1] = m[1][0][1] = 1;
    GradedRing r({"1", "p"}, {Rational(0), Rational(2)}, {false, false}, gwp::Matrix{{0, 1}, {1, 0}}, m);
    CHECK(gwp::codim(wp("1:1", r), r) == 0);
    CHECK(gwp::codim(wp("2:p", r), r) == 3);
    GradedRing w({"1", "w"}, {Rational(0), Rational(1)}, {false, false}, gwp::Matrix{{0, 1}, {1, 0}},
                 rings::p1().mult());
    CHECK(gwp::codim(wp("1:w,1:w", w), w) == 2);
    // additive under disjoint union
    GradedRing p2 = rings::p2();
    for (const auto& a : gwp::enumerate_weighted_partitions(2, p2))
        for (const auto& b : gwp::enumerate_weighted_partitions(3, p2))
            CHECK(gwp::codim(a.joined(b), p2) == gwp::codim(a, p2) + gwp::codim(b, p2));
}

TEST_CASE("partition parsing and canonical order") {
    GradedRing r = rings::p1();
    WeightedPartition mu = wp("1:p, 2:1, 1:1", r);
    CHECK(mu.to_string(r) == "2:1,1:1,1:p");
    CHECK(mu.size() == 4);
    CHECK(mu.length() == 3);
    CHECK(mu == wp("2:1,1:1,1:p", r));
    CHECK_THROWS_AS(wp("2:z", r), gwp::ParseError);
    CHECK_THROWS_AS(wp("0:1", r), gwp::ParseError);
    CHECK_THROWS_AS(wp("x:1", r), gwp::ParseError);

    GradedRing e = rings::elliptic();
    auto [s1, n1] = WeightedPartition::normalize({{1, 2}, {1, 1}}, e);
    CHECK(s1 == -1);
    CHECK(n1.to_string(e) == "1:e1,1:e2");
    auto [s2, n2] = WeightedPartition::normalize({{1, 1}, {1, 1}}, e);
    CHECK(s2 == 0);
    auto [s3, n3] = WeightedPartition::normalize({{1, 1}, {2, 0}, {2, 2}}, e);
    CHECK(s3 == -1);  // e1 moves past e2
}

TEST_CASE("dual partition examples") {
    GradedRing r = rings::p1();
    auto d1 = gwp::dual_partition(wp("3:1", r), r);
    CHECK(d1.size() == 1);
    CHECK(d1.at(wp("3:p", r)) == GR(1));
    GradedRing pt = GradedRing::point();
    CHECK(gwp::dual_partition(wp("2:1,1:1", pt), pt).at(wp("2:1,1:1", pt)) == GR(1));
    auto d2 = gwp::dual_partition(wp("2:1,1:p", r), r);
    CHECK(d2.size() == 1);
    CHECK(d2.at(wp("2:p,1:1", r)) == GR(1));
    auto d3 = gwp::dual_partition(wp("1:1,1:1", r), r);
    CHECK(d3.at(wp("1:p,1:p", r)) == GR(1));
}

TEST_CASE("dual partition is an involution for a self-inverse pairing") {
    for (const GradedRing& r : {rings::p1(), rings::p2(), rings::p1xp1()}) {
        for (long d = 1; d <= 4; ++d) {
            for (const auto& mu : gwp::enumerate_weighted_partitions(d, r)) {
                gwp::PartitionCombination twice;
                for (const auto& [lambda, c] : gwp::dual_partition(mu, r))
                    for (const auto& [nu, c2] : gwp::dual_partition(lambda, r)) twice[nu] += c * c2;
                std::erase_if(twice, [](const auto& kv) { return kv.second.is_zero(); });
                REQUIRE(twice.size() == 1);
                CHECK(twice.begin()->first == mu);
                CHECK(twice.begin()->second == GR(1));
            }
        }
    }
}

TEST_CASE("z-weighted dual coefficients are symmetric") {
    for (const GradedRing& r : {rings::skewed_p1xp1(), rings::rank3()}) {
        for (long d = 1; d <= 3; ++d) {
            auto all = gwp::enumerate_weighted_partitions(d, r);
            for (const auto& mu : all) {
                auto dm = gwp::dual_partition(mu, r);
                for (const auto& lambda : all) {
                    auto dl = gwp::dual_partition(lambda, r);
                    GR a = dm.count(lambda) ? dm.at(lambda) : GR(0);
                    GR b = dl.count(mu) ? dl.at(mu) : GR(0);
                    CHECK(GR(Rational(gwp::gluing_factor(mu))) * a == GR(Rational(gwp::gluing_factor(lambda))) * b);
                }
            }
        }
    }
}

TEST_CASE("small diagonal examples") {
    GradedRing pt = GradedRing::point();
    Tensor t = gwp::small_diagonal(gwp::RingElement{GR(3)}, 4, pt);
    CHECK(t.size() == 1);
    CHECK(t.at({0, 0, 0, 0}) == GR(3));

    GradedRing r = rings::p1();
    Tensor d2 = gwp::small_diagonal(r.basis(0), 2, r);
    CHECK(d2 == Tensor{{{0, 1}, GR(1)}, {{1, 0}, GR(1)}});
    Tensor dp = gwp::small_diagonal(r.basis(1), 2, r);
    CHECK(dp == Tensor{{{1, 1}, GR(1)}});
    Tensor d3 = gwp::small_diagonal(r.basis(0), 3, r);
    CHECK(d3 == Tensor{{{0, 1, 1}, GR(1)}, {{1, 0, 1}, GR(1)}, {{1, 1, 0}, GR(1)}});
    CHECK(gwp::small_diagonal(r.basis(1), 1, r) == Tensor{{{1}, GR(1)}});
    CHECK_THROWS_AS(gwp::small_diagonal(r.basis(0), 0, r), gwp::PreconditionError);
}

TEST_CASE("comultiplication is coassociative") {
    for (const GradedRing& r :
         {rings::p1(), rings::p2(), rings::p1xp1(), rings::skewed_p1xp1(), rings::elliptic()}) {
        Tensor d2 = gwp::small_diagonal(r.basis(0), 2, r);
        CHECK(gwp::comultiply(d2, 0, r) == gwp::comultiply(d2, 1, r));
        for (int g = 0; g < r.size(); ++g) {
            Tensor t = gwp::small_diagonal(r.basis(g), 3, r);
            CHECK(t == gwp::comultiply(gwp::small_diagonal(r.basis(g), 2, r), 1, r));
        }
    }
}

TEST_CASE("diagonal integrates to the pairing") {
    // int_{S x S} Delta (a (x) b) = int_S a b with (x (x) y)(a (x) b) = (-1)^{|y||a|} xa (x) yb
    for (const GradedRing& r : {rings::p1(), rings::p2(), rings::skewed_p1xp1(), rings::elliptic()}) {
        Tensor d2 = gwp::small_diagonal(r.basis(0), 2, r);
        gwp::RingElement unit = r.basis(0);
        for (int a = 0; a < r.size(); ++a)
            for (int b = 0; b < r.size(); ++b) {
                GR lhs;
                for (const auto& [idx, c] : d2) {
                    GR sign = r.odd(idx[1]) && r.odd(a) ? GR(-1) : GR(1);
                    gwp::RingElement x = r.multiply(r.basis(idx[0]), r.basis(a));
                    gwp::RingElement y = r.multiply(r.basis(idx[1]), r.basis(b));
                    lhs += c * sign * r.pair(unit, x) * r.pair(unit, y);
                }
                CHECK(lhs == r.pair(unit, r.multiply(r.basis(a), r.basis(b))));
            }
    }
}

TEST_CASE("set partitions") {
    auto bell = oracle::bell_numbers(7);
    for (int l = 1; l <= 7; ++l)
        CHECK(gwp::enumerate_set_partitions(l, std::vector<bool>(static_cast<std::size_t>(l), false)).size() ==
              bell[static_cast<std::size_t>(l)]);

    auto even2 = gwp::enumerate_set_partitions(2, {false, false});
    REQUIRE(even2.size() == 2);
    CHECK(even2[0].blocks == std::vector<std::vector<int>>{{0, 1}});
    CHECK(even2[1].blocks == std::vector<std::vector<int>>{{0}, {1}});
    for (const auto& p : even2) CHECK(p.sign == 1);
    for (const auto& p : gwp::enumerate_set_partitions(2, {true, true})) CHECK(p.sign == 1);

    // {0,2},{1}: reading order 0,2,1 puts odd 2 before odd 1
    for (const auto& p : gwp::enumerate_set_partitions(3, {true, true, true})) {
        int expected = p.blocks == std::vector<std::vector<int>>{{0, 2}, {1}} ? -1 : 1;
        CHECK(p.sign == expected);
    }
    for (const auto& p : gwp::enumerate_set_partitions(3, {true, false, true})) CHECK(p.sign == 1);

    // sum over set partitions of prod (|S|-1)! counts permutations
    for (int l = 1; l <= 6; ++l) {
        unsigned long total = 0, fact = 1;
        for (int k = 2; k <= l; ++k) fact *= static_cast<unsigned long>(k);
        for (const auto& p : gwp::enumerate_set_partitions(l, std::vector<bool>(static_cast<std::size_t>(l), false))) {
            unsigned long w = 1;
            for (const auto& b : p.blocks)
                for (std::size_t k = 2; k < b.size(); ++k) w *= k;
            total += w;
        }
        CHECK(total == fact);
    }
}

TEST_CASE("weighted partition enumeration") {
    GradedRing r = rings::p1();
    auto d0 = gwp::enumerate_weighted_partitions(0, r);
    REQUIRE(d0.size() == 1);
    CHECK(d0[0].length() == 0);
    CHECK(gwp::enumerate_weighted_partitions(1, r).size() == 2);
    auto d2 = gwp::enumerate_weighted_partitions(2, r);
    REQUIRE(d2.size() == 5);
    CHECK(d2[0] == wp("2:1", r));
    CHECK(d2[4] == wp("1:p,1:p", r));
    for (long d = 0; d <= 6; ++d) {
        CHECK(gwp::enumerate_weighted_partitions(d, r).size() == partition_count(d, 2));
        CHECK(gwp::enumerate_weighted_partitions(d, rings::p2()).size() == partition_count(d, 3));
    }
    for (const auto& mu : gwp::enumerate_weighted_partitions(3, r, Rational(2))) CHECK(gwp::codim(mu, r) == 2);
    // 3:1, 2:p+1:1, 2:1+1:p, 1:p+1:p+1:1
    CHECK(gwp::enumerate_weighted_partitions(3, r, Rational(2)).size() == 4);

    // odd parts never repeat
    GradedRing e = rings::elliptic();
    for (const auto& mu : gwp::enumerate_weighted_partitions(3, e))
        for (std::size_t k = 1; k < mu.parts().size(); ++k)
            if (e.odd(mu.parts()[k].weight)) CHECK_FALSE(mu.parts()[k] == mu.parts()[k - 1]);
}
