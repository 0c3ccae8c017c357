#include "gwp/bps.hpp"

#include "gwp/error.hpp"

#include <algorithm>
#include <numeric>

namespace gwp {

bool CurveClass::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](long c) { return c == 0; });
}

bool CurveClass::is_effective() const {
    return std::all_of(coords.begin(), coords.end(), [](long c) { return c >= 0; });
}

long CurveClass::total() const { return std::accumulate(coords.begin(), coords.end(), 0L); }

bool CurveClass::leq(const CurveClass& other) const {
    if (coords.size() != other.coords.size()) return false;
    for (std::size_t k = 0; k < coords.size(); ++k)
        if (coords[k] > other.coords[k]) return false;
    return true;
}

long CurveClass::content() const {
    long g = 0;
    for (long c : coords) g = std::gcd(g, c);
    return g;
}

CurveClass CurveClass::operator+(const CurveClass& o) const {
    CurveClass r = *this;
    for (std::size_t k = 0; k < coords.size(); ++k) r.coords[k] += o.coords[k];
    return r;
}

CurveClass CurveClass::operator-(const CurveClass& o) const {
    CurveClass r = *this;
    for (std::size_t k = 0; k < coords.size(); ++k) r.coords[k] -= o.coords[k];
    return r;
}

CurveClass CurveClass::divided(long d) const {
    CurveClass r = *this;
    for (auto& c : r.coords) c /= d;
    return r;
}

std::string CurveClass::to_string() const {
    std::string s = "[";
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(coords[k]);
    }
    return s + "]";
}

std::vector<std::pair<long, CurveClass>> divisor_classes(const CurveClass& beta) {
    std::vector<std::pair<long, CurveClass>> out;
    const long c = beta.content();
    for (long d = 1; d <= c; ++d)
        if (c % d == 0) out.emplace_back(d, beta.divided(d));
    return out;
}

std::vector<CurveClass> sub_classes(const CurveClass& beta) {
    if (!beta.is_effective()) return {};
    std::vector<CurveClass> out;
    CurveClass cur{std::vector<long>(beta.coords.size(), 0)};
    while (true) {
        out.push_back(cur);
        std::size_t k = 0;
        while (k < cur.coords.size() && cur.coords[k] == beta.coords[k]) cur.coords[k++] = 0;
        if (k == cur.coords.size()) break;
        ++cur.coords[k];
    }
    return out;
}

Rational BpsTable::n(int g, const CurveClass& beta) const {
    auto it = entries.find({g, beta});
    return it == entries.end() ? Rational(0) : it->second;
}

void BpsTable::set(int g, const CurveClass& beta, Rational value) {
    if (sgn(value) == 0)
        entries.erase({g, beta});
    else
        entries[{g, beta}] = std::move(value);
}

long BpsTable::degree(const CurveClass& beta) const {
    long d = 0;
    for (std::size_t k = 0; k < beta.coords.size() && k < degree_fn.size(); ++k) d += degree_fn[k] * beta.coords[k];
    return d;
}

bool BpsTable::in_box(const CurveClass& beta) const {
    if (static_cast<int>(beta.coords.size()) != rank) return false;
    if (!beta.is_effective()) return false;
    for (std::size_t k = 0; k < beta.coords.size(); ++k)
        if (k < class_box.size() && beta.coords[k] > class_box[k]) return false;
    return true;
}

HalfSeries two_sin_power(long d, long p, long order) {
    if (p == 0) return HalfSeries::constant(Var::u, 1, order);
    // 2 sin(x) with x = d u / 2: sum_k 2 (-1)^k x^{2k+1} / (2k+1)!
    const long base_order = order + (p < 0 ? -p : p) + 2;
    HalfSeries::Coeffs c;
    const Rational half_d(d, 2);
    Rational pw = half_d;
    for (long e = 1; e < base_order; e += 2) {
        const long k = (e - 1) / 2;
        Rational v = 2 * pw / factorial(static_cast<unsigned long>(e));
        c.emplace(e, GaussianRational(k % 2 ? Rational(-v) : v));
        pw *= half_d * half_d;
    }
    HalfSeries base(Var::u, std::move(c), base_order);
    return series_pow(base, p, order).truncated(order);
}

namespace {

void require_class(const BpsTable& n, const CurveClass& beta) {
    if (beta.is_zero()) throw PreconditionError("zero-class", "the zero class carries no GV invariants");
    if (!n.in_box(beta)) {
        throw PreconditionError("missing-class-data",
                                "class " + beta.to_string() + " lies outside the table's class box or lattice");
    }
}

// genus -> (cover degree d, n_{g,beta/d} / d)
std::map<int, std::vector<std::pair<long, Rational>>> by_genus(const BpsTable& n, const CurveClass& beta) {
    std::map<int, std::vector<std::pair<long, Rational>>> out;
    for (const auto& [d, root] : divisor_classes(beta)) {
        for (const auto& [key, value] : n.entries) {
            if (key.second == root) out[key.first].emplace_back(d, value / d);
        }
    }
    return out;
}

}  // namespace

HalfSeries gv_forward(const BpsTable& n, const CurveClass& beta, long u_order) {
    require_class(n, beta);
    check_order_cap(u_order);
    HalfSeries f(Var::u, u_order);
    for (const auto& [g, terms] : by_genus(n, beta)) {
        for (const auto& [d, weight] : terms) {
            f = f + two_sin_power(d, 2L * g - 2, u_order).scaled(GaussianRational(weight));
        }
    }
    return f;
}

RationalFunction gv_forward_q(const BpsTable& n, const CurveClass& beta) {
    require_class(n, beta);
    RationalFunction f(Var::q);
    for (const auto& [g, terms] : by_genus(n, beta)) {
        for (const auto& [d, weight] : terms) {
            // (s^d - s^{-d})^2 = (-q)^d - 2 + (-q)^{-d} = ((-q)^d - 1)^2 / (-q)^d
            const GaussianRational sign_d = d % 2 ? GaussianRational(-1) : GaussianRational(1);
            const RationalFunction mq_d = RationalFunction::monomial(Var::q, d, sign_d);
            const RationalFunction x = (mq_d - RationalFunction::constant(Var::q, 1)).pow(2) / mq_d;
            const GaussianRational sign_g = (g - 1) % 2 ? GaussianRational(-1) : GaussianRational(1);
            f = f + x.pow(g - 1) * (sign_g * GaussianRational(weight));
        }
    }
    return f;
}

BpsTable gv_invert(const std::map<CurveClass, HalfSeries>& f, const std::vector<CurveClass>& classes, int max_genus) {
    if (max_genus < 0) throw PreconditionError("bad-genus", "max_genus must be >= 0");
    if (classes.empty()) throw PreconditionError("no-classes", "gv_invert needs at least one class");

    std::vector<CurveClass> work;
    for (const auto& beta : classes) {
        if (beta.is_zero() || !beta.is_effective())
            throw PreconditionError("bad-class", "class " + beta.to_string() + " is zero or not effective");
        for (const auto& [d, root] : divisor_classes(beta)) work.push_back(root);
    }
    std::sort(work.begin(), work.end(), [](const CurveClass& a, const CurveClass& b) {
        return a.total() != b.total() ? a.total() < b.total() : a < b;
    });
    work.erase(std::unique(work.begin(), work.end()), work.end());

    BpsTable table;
    table.rank = static_cast<int>(classes.front().coords.size());
    table.class_box.assign(static_cast<std::size_t>(table.rank), 0);
    table.max_genus = max_genus;
    for (const auto& beta : work) {
        if (static_cast<int>(beta.coords.size()) != table.rank)
            throw PreconditionError("rank-mismatch", "classes of different lattice rank");
        for (std::size_t k = 0; k < beta.coords.size(); ++k)
            table.class_box[k] = std::max(table.class_box[k], beta.coords[k]);
    }

    const long horizon = 2L * max_genus - 2;  // highest exponent that must be known
    for (const auto& beta : work) {
        auto it = f.find(beta);
        if (it == f.end()) throw PreconditionError("missing-class-data", "no series for class " + beta.to_string());
        const HalfSeries& fb = it->second;
        if (fb.var() != Var::u) throw PreconditionError("variable-mismatch", "gv_invert expects u-series");
        const long order = fb.trunc().value_or(horizon + 1);
        if (order <= horizon) {
            throw PrecisionError("insufficient-precision",
                                 "class " + beta.to_string() + " known below u^" + std::to_string(order) +
                                     " but genus " + std::to_string(max_genus) + " needs u^" + std::to_string(horizon));
        }
        HalfSeries rest = fb.truncated(order);
        // remove multiple covers of proper divisors (already solved)
        for (const auto& [d, root] : divisor_classes(beta)) {
            if (d == 1) continue;
            for (int g = 0; g <= max_genus; ++g) {
                const Rational v = table.n(g, root);
                if (sgn(v) == 0) continue;
                rest = rest - two_sin_power(d, 2L * g - 2, order).scaled(GaussianRational(v / d));
            }
        }
        for (int g = 0; g <= max_genus; ++g) {
            const GaussianRational c = rest.coeff(2L * g - 2);
            if (!c.is_real()) {
                throw PreconditionError("inconsistent-input", "non-real GV coefficient at genus " + std::to_string(g) +
                                                                  " for class " + beta.to_string());
            }
            if (c.is_zero()) continue;
            table.set(g, beta, c.re());
            rest = rest - two_sin_power(1, 2L * g - 2, order).scaled(c);
        }
        for (const auto& [e, c] : rest.coeffs()) {
            if (e > horizon) break;
            throw PreconditionError("inconsistent-input", "class " + beta.to_string() + " has leftover coefficient " +
                                                              c.to_string() + " at u^" + std::to_string(e) +
                                                              " not representable in GV form");
        }
    }
    return table;
}

IntegralityReport integrality_report(const BpsTable& n) {
    IntegralityReport report;
    for (const auto& [key, value] : n.entries) {
        if (sgn(value) == 0) continue;
        if (value.get_den() != 1) report.violations.push_back({key.first, key.second, value});
        auto& top = report.top_genus[key.second];
        top = std::max(top, key.first);
    }
    return report;
}

namespace {

HalfSeries lookup(const std::map<CurveClass, HalfSeries>& m, const CurveClass& c, const char* what) {
    auto it = m.find(c);
    if (it == m.end()) {
        throw PreconditionError("missing-class-data", std::string("no ") + what + " series for class " + c.to_string());
    }
    return it->second;
}

Var common_var(const std::map<CurveClass, HalfSeries>& m) { return m.empty() ? Var::u : m.begin()->second.var(); }

}  // namespace

// Both directions use w(gamma) Z_gamma = sum_{0 < a <= gamma} w(a) F_a Z_{gamma - a}
// with w the total degree, the graded form of Z' = exp(F).
HalfSeries connected_to_disconnected(const std::map<CurveClass, HalfSeries>& f, const CurveClass& beta) {
    if (!beta.is_effective()) throw PreconditionError("bad-class", "class must be effective");
    const Var var = common_var(f);
    std::map<CurveClass, HalfSeries> z;
    for (const auto& gamma : sub_classes(beta)) {
        if (gamma.is_zero()) {
            z.emplace(gamma, HalfSeries::constant(var, 1));
            continue;
        }
        HalfSeries acc(var);
        for (const auto& a : sub_classes(gamma)) {
            if (a.is_zero()) continue;
            acc = acc + (lookup(f, a, "connected") * z.at(gamma - a)).scaled(GaussianRational(a.total()));
        }
        z.emplace(gamma, acc.scaled(GaussianRational(Rational(1, gamma.total()))));
    }
    return z.at(beta);
}

HalfSeries disconnected_to_connected(const std::map<CurveClass, HalfSeries>& z, const CurveClass& beta) {
    if (!beta.is_effective() || beta.is_zero()) throw PreconditionError("bad-class", "class must be effective and nonzero");
    const Var var = common_var(z);
    std::map<CurveClass, HalfSeries> f;
    auto z_at = [&](const CurveClass& c) {
        return c.is_zero() ? HalfSeries::constant(var, 1) : lookup(z, c, "disconnected");
    };
    for (const auto& gamma : sub_classes(beta)) {
        if (gamma.is_zero()) continue;
        HalfSeries acc = z_at(gamma).scaled(GaussianRational(gamma.total()));
        for (const auto& a : sub_classes(gamma)) {
            if (a.is_zero() || a == gamma) continue;
            acc = acc - (f.at(a) * z_at(gamma - a)).scaled(GaussianRational(a.total()));
        }
        f.emplace(gamma, acc.scaled(GaussianRational(Rational(1, gamma.total()))));
    }
    return f.at(beta);
}

}  // namespace gwp
