#pragma once

// Shared random inputs and comparison helpers for the test binaries.

#include "gwp/bps.hpp"
#include "gwp/series.hpp"
#include "oracle.hpp"

#include <random>

namespace fixtures {

/// Integer table on a rank-2 lattice, box up to 3x3, genus up to 4, |n| <= 100.
inline gwp::BpsTable random_bps_table(std::mt19937& rng) {
    std::uniform_int_distribution<long> side(0, 3), genus(0, 4), value(-100, 100), zero(0, 3);
    gwp::BpsTable t;
    t.rank = 2;
    t.degree_fn = {1, 1};
    do {
        t.class_box = {side(rng), side(rng)};
    } while (t.class_box[0] == 0 && t.class_box[1] == 0);
    t.max_genus = static_cast<int>(genus(rng));
    for (const auto& beta : gwp::sub_classes(gwp::CurveClass{t.class_box})) {
        if (beta.is_zero()) continue;
        for (int g = 0; g <= t.max_genus; ++g)
            if (zero(rng) != 0) t.set(g, beta, gwp::Rational(value(rng)));
    }
    return t;
}

/// Every coefficient of `x` below `order` matches the oracle series and x is known there.
inline bool matches(const gwp::HalfSeries& x, const oracle::Laurent& ref, long order, long from) {
    if (x.trunc() && *x.trunc() < order) return false;
    for (long e = from; e < order; ++e) {
        if (!(x.coeff(e) == gwp::GaussianRational(ref.at(e)))) return false;
    }
    for (const auto& [e, c] : x.coeffs())
        if (e < from && !c.is_zero()) return false;
    return true;
}

}  // namespace fixtures
