#include "doctest.h"

#include "gwp/error.hpp"
#include "gwp/io.hpp"
#include "fixtures.hpp"
#include "glue_fixtures.hpp"
#include "rings.hpp"

#include <random>

using gwp::io::Json;

namespace {

Json parse(const char* text) { return Json::parse(text); }

}  // namespace

TEST_CASE("series documents") {
    const auto x = gwp::HalfSeries(gwp::Var::u, {{-2, gwp::GR(1)}, {0, gwp::GR(gwp::Rational(1, 12))}}, 4);
    const Json j = gwp::io::series_to_json(x);
    CHECK(j.dump() == R"({"var":"u","trunc":4,"coeffs":{"-2":"1","0":"1/12"}})");
    CHECK(gwp::io::series_from_json(j) == x);
    const auto exact = gwp::io::series_from_json(parse(R"({"var":"s","coeffs":{"1":"1/2-i","3":2}})"));
    CHECK(exact.is_exact());
    CHECK(exact.coeff(1) == gwp::GR(gwp::Rational(1, 2), gwp::Rational(-1)));
    CHECK_THROWS_AS(gwp::io::series_from_json(parse(R"({"var":"x","coeffs":{}})")), gwp::ParseError);
    CHECK_THROWS_AS(gwp::io::series_from_json(parse(R"({"var":"u","coeffs":{"1.5":"1"}})")), gwp::ParseError);
    CHECK_THROWS_AS(gwp::io::series_from_json(parse(R"({"var":"u","coeffs":{"1":0.5}})")), gwp::ParseError);
    CHECK_THROWS_AS(gwp::io::series_from_json(parse(R"({"var":"u"})")), gwp::ParseError);
}

TEST_CASE("rational function documents") {
    const auto r = gwp::io::ratfun_from_json(parse(R"({"var":"q","num":["0","2"],"den":["2","4","2"]})"));
    CHECK(gwp::io::ratfun_to_json(r).dump() == R"({"var":"q","num":["0","1"],"den":["1","2","1"]})");
    CHECK_THROWS_AS(gwp::io::ratfun_from_json(parse(R"({"var":"u","num":["1"],"den":["1"]})")), gwp::ParseError);
}

TEST_CASE("format header") {
    CHECK_NOTHROW(gwp::io::check_format(parse(R"({"format":"gwp/1"})")));
    CHECK_THROWS_AS(gwp::io::check_format(parse(R"({"format":"gwp/2"})")), gwp::ParseError);
    CHECK_THROWS_AS(gwp::io::check_format(parse(R"({})")), gwp::ParseError);
    CHECK_THROWS_AS(gwp::io::check_format(parse(R"([1])")), gwp::ParseError);
}

TEST_CASE("bps documents roundtrip") {
    std::mt19937 rng(9);
    for (int k = 0; k < 10; ++k) {
        const auto t = fixtures::random_bps_table(rng);
        const auto back = gwp::io::bps_from_json(gwp::io::bps_to_json(t));
        CHECK(back.entries == t.entries);
        CHECK(back.class_box == t.class_box);
        CHECK(back.degree_fn == t.degree_fn);
        CHECK(back.max_genus == t.max_genus);
    }
    const auto inferred = gwp::io::bps_from_json(
        parse(R"({"rank":2,"max_genus":1,"bps":[{"g":1,"class":[2,1],"n":"-2"},{"g":0,"class":[0,3],"n":5}]})"));
    CHECK(inferred.class_box == std::vector<long>{2, 3});
    CHECK(inferred.n(1, gwp::CurveClass{{2, 1}}) == -2);
    CHECK_THROWS_AS(gwp::io::bps_from_json(parse(R"({"rank":1,"max_genus":0,"bps":[{"g":1,"class":[1],"n":"1"}]})")),
                    gwp::ParseError);
    CHECK_THROWS_AS(gwp::io::bps_from_json(parse(R"({"rank":1,"max_genus":0,"bps":[{"g":0,"class":[1,0],"n":"1"}]})")),
                    gwp::ParseError);
}

TEST_CASE("ring documents roundtrip") {
    for (const auto& r : {rings::p1(), rings::p2(), rings::elliptic(), rings::rank3()}) {
        const auto back = gwp::io::ring_from_json(gwp::io::ring_to_json(r));
        CHECK(gwp::same_ring(r, back));
    }
    Json bad = gwp::io::ring_to_json(rings::p1());
    bad["mult"][0][1] = Json::array({"1", "0"});
    CHECK_THROWS_AS(gwp::io::ring_from_json(bad), gwp::PreconditionError);
}

TEST_CASE("correspondence matrix documents") {
    const auto k = gwp::io::corr_matrix_from_json(parse(R"({"format":"gwp/1","rows":["3"],
        "entries":{"2,1|2":{"trunc":null,"terms":{"-1":"c1 + i","0":"1/2*c2"}},"1|1":{"terms":{"0":"1"}}}})"));
    CHECK(k.has_row({3}));
    CHECK(k.has_row({2, 1}));
    CHECK(k.row({2, 1}).at({2}).terms.at(-1) == gwp::ChernPoly::parse("i + c1"));
    const auto back = gwp::io::corr_matrix_from_json(gwp::io::corr_matrix_to_json(k));
    CHECK(back.rows() == k.rows());
    CHECK(gwp::io::corr_matrix_to_json(back) == gwp::io::corr_matrix_to_json(k));

    try {
        (void)gwp::io::corr_matrix_from_json(parse(R"({"entries":{"1|2":{"terms":{"0":"1"}}}})"));
        FAIL("expected not-triangular");
    } catch (const gwp::PreconditionError& e) {
        CHECK(e.code() == "not-triangular");
    }
    CHECK_THROWS_AS(gwp::io::corr_matrix_from_json(parse(R"({"entries":{"2":{"terms":{}}}})")), gwp::ParseError);
    CHECK_THROWS_AS(gwp::io::corr_matrix_from_json(parse(R"({"entries":{"1|1":{"trunc":2,"terms":{"3":"1"}}}})")),
                    gwp::ParseError);
}

TEST_CASE("theory table documents roundtrip") {
    std::mt19937 rng(4);
    for (auto side : {gwp::Side::gw, gwp::Side::pairs}) {
        auto c = fixtures::random_invert_case(side, gwp::UnknownSide::left, rings::p1(), rng);
        for (const auto* t : {&c.known, &c.hidden, &c.absolute}) {
            const Json j = gwp::io::table_to_json(*t);
            CHECK(gwp::io::table_from_json(j) == *t);
            CHECK(gwp::io::table_to_json(gwp::io::table_from_json(j)).dump() == j.dump());
        }
    }
}

TEST_CASE("table documents are validated") {
    Json t = parse(R"({"format":"gwp/1","side":"gw","divisor_degree":[1],"entries":[]})");
    t["ring"] = gwp::io::ring_to_json(rings::p1());
    auto entry = [](const char* boundary) {
        Json e = Json::object();
        e["class"] = Json::array({2});
        e["labels"] = Json::array({"a"});
        e["boundary"] = boundary;
        e["series"] = parse(R"({"var":"u","coeffs":{"0":"1"}})");
        return e;
    };
    Json ok = t;
    ok["entries"].push_back(entry("1:1,1:p"));
    CHECK(gwp::io::table_from_json(ok).entries().size() == 1);
    Json unordered = t;
    unordered["entries"].push_back(entry("1:p,1:1"));
    CHECK_THROWS_AS(gwp::io::table_from_json(unordered), gwp::ParseError);
    Json dup = ok;
    dup["entries"].push_back(entry("1:1,1:p"));
    CHECK_THROWS_AS(gwp::io::table_from_json(dup), gwp::ParseError);
    Json wrong_size = t;
    wrong_size["entries"].push_back(entry("1:1"));
    CHECK_THROWS_AS(gwp::io::table_from_json(wrong_size), gwp::PreconditionError);
}

TEST_CASE("pipeline documents") {
    const auto nodes = gwp::quintic_scheme(gwp::Side::pairs);
    const auto back = gwp::io::pipeline_from_json(gwp::io::pipeline_to_json(nodes));
    REQUIRE(back.size() == nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        CHECK(back[k].op == nodes[k].op);
        CHECK(back[k].inputs == nodes[k].inputs);
        CHECK(back[k].output == nodes[k].output);
        CHECK(back[k].side == nodes[k].side);
    }
    CHECK_THROWS_AS(gwp::io::pipeline_from_json(parse(R"({"nodes":[{"op":"merge","side":"gw","inputs":[],"output":"x"}]})")),
                    gwp::ParseError);
}

TEST_CASE("descendent sums render monomials") {
    const auto r = rings::p1();
    gwp::DescendentSum s;
    s.add({{0, 1}, {2, 0}}, gwp::HalfSeries::monomial(gwp::Var::u, 1, gwp::GR(3)), r);
    const Json j = gwp::io::descendent_sum_to_json(s, r);
    CHECK(j["terms"][0]["monomial"] == "tau_0(p)*tau_2(1)");
    CHECK(j["terms"][0]["series"]["coeffs"]["1"] == "3");
}
