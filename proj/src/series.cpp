#include "gwp/series.hpp"

#include "gwp/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace gwp {

std::string to_string(Var v) {
    switch (v) {
        case Var::s: return "s";
        case Var::q: return "q";
        case Var::u: return "u";
    }
    return "?";
}

Var parse_var(const std::string& name) {
    if (name == "s") return Var::s;
    if (name == "q") return Var::q;
    if (name == "u") return Var::u;
    throw ParseError("unknown series variable '" + name + "'");
}

std::optional<long> min_trunc(std::optional<long> a, std::optional<long> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

HalfSeries::HalfSeries(Var var, std::optional<long> trunc) : var_(var), trunc_(trunc) {}

HalfSeries::HalfSeries(Var var, Coeffs coeffs, std::optional<long> trunc)
    : var_(var), coeffs_(std::move(coeffs)), trunc_(trunc) {
    prune();
}

HalfSeries HalfSeries::monomial(Var var, long exp, GaussianRational c, std::optional<long> trunc) {
    Coeffs m;
    m.emplace(exp, std::move(c));
    return {var, std::move(m), trunc};
}

void HalfSeries::prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second.is_zero() || (trunc_ && it->first >= *trunc_))
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

GaussianRational HalfSeries::coeff(long exp) const {
    if (trunc_ && exp >= *trunc_) {
        throw PrecisionError("insufficient-precision", "coefficient of " + gwp::to_string(var_) + "^" +
                                                           std::to_string(exp) + " unknown (series known below " +
                                                           std::to_string(*trunc_) + ")");
    }
    auto it = coeffs_.find(exp);
    return it == coeffs_.end() ? GaussianRational() : it->second;
}

std::optional<long> HalfSeries::min_exp() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.begin()->first;
}

std::optional<long> HalfSeries::valuation() const {
    if (!coeffs_.empty()) return coeffs_.begin()->first;
    return trunc_;
}

bool HalfSeries::only_even_exponents() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.first % 2 == 0; });
}

HalfSeries HalfSeries::truncated(long t) const {
    if (trunc_ && *trunc_ <= t) return *this;
    return {var_, coeffs_, t};
}

HalfSeries HalfSeries::shifted(long k) const {
    Coeffs out;
    for (const auto& [e, c] : coeffs_) out.emplace(e + k, c);
    return {var_, std::move(out), trunc_ ? std::optional<long>(*trunc_ + k) : std::nullopt};
}

HalfSeries HalfSeries::scaled(const GaussianRational& c) const {
    if (c.is_zero()) return HalfSeries(var_, trunc_);
    Coeffs out;
    for (const auto& [e, v] : coeffs_) out.emplace(e, v * c);
    return {var_, std::move(out), trunc_};
}

std::string HalfSeries::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        if (e != 0) os << "*" << gwp::to_string(var_) << "^" << e;
    }
    if (first) os << "0";
    if (trunc_) os << " + O(" << gwp::to_string(var_) << "^" << *trunc_ << ")";
    return os.str();
}

namespace {

void require_same_var(const HalfSeries& a, const HalfSeries& b) {
    if (a.var() != b.var()) {
        throw PreconditionError("variable-mismatch",
                                "series in " + to_string(a.var()) + " combined with series in " + to_string(b.var()));
    }
}

}  // namespace

HalfSeries series_add(const HalfSeries& a, const HalfSeries& b) {
    require_same_var(a, b);
    HalfSeries::Coeffs out = a.coeffs();
    for (const auto& [e, c] : b.coeffs()) out[e] += c;
    return {a.var(), std::move(out), min_trunc(a.trunc(), b.trunc())};
}

HalfSeries series_sub(const HalfSeries& a, const HalfSeries& b) { return series_add(a, -b); }

HalfSeries series_mul(const HalfSeries& a, const HalfSeries& b) {
    require_same_var(a, b);
    // Exact zero annihilates regardless of the other operand's precision.
    if (a.is_exact() && a.is_zero()) return HalfSeries(a.var());
    if (b.is_exact() && b.is_zero()) return HalfSeries(a.var());

    std::optional<long> trunc;
    if (a.trunc()) trunc = min_trunc(trunc, *a.trunc() + *b.valuation());
    if (b.trunc()) trunc = min_trunc(trunc, *b.trunc() + *a.valuation());

    HalfSeries::Coeffs out;
    for (const auto& [ea, ca] : a.coeffs()) {
        for (const auto& [eb, cb] : b.coeffs()) {
            const long e = ea + eb;
            if (trunc && e >= *trunc) break;
            out[e] += ca * cb;
        }
    }
    return {a.var(), std::move(out), trunc};
}

HalfSeries series_inv(const HalfSeries& a, std::optional<long> order) {
    if (a.is_zero()) {
        throw PreconditionError("non-invertible", "series is zero to known order " +
                                                      (a.trunc() ? std::to_string(*a.trunc()) : std::string("(exact)")));
    }
    const long v = *a.min_exp();
    const GaussianRational lead_inv = a.coeffs().begin()->second.inv();
    if (a.is_exact() && a.coeffs().size() == 1) {
        HalfSeries r = HalfSeries::monomial(a.var(), -v, lead_inv);
        return order ? r.truncated(*order) : r;
    }

    std::optional<long> trunc;
    if (a.trunc()) trunc = *a.trunc() - 2 * v;
    trunc = min_trunc(trunc, order);
    if (!trunc) {
        throw PreconditionError("order-required", "inverse of a multi-term Laurent polynomial needs an explicit order");
    }
    // a = c s^v (1 + y); solve b = sum_k b_k s^{k-v} from a*b = 1 term by term.
    const long n = *trunc + v;  // number of coefficients b_0..b_{n-1}
    HalfSeries::Coeffs out;
    if (n <= 0) return {a.var(), std::move(out), trunc};
    std::vector<GaussianRational> norm(static_cast<std::size_t>(n));
    for (const auto& [e, c] : a.coeffs()) {
        long k = e - v;
        if (k < n) norm[static_cast<std::size_t>(k)] = c * lead_inv;
    }
    std::vector<GaussianRational> b(static_cast<std::size_t>(n));
    b[0] = 1;
    for (long k = 1; k < n; ++k) {
        GaussianRational acc;
        for (long j = 1; j <= k; ++j) {
            const auto& nj = norm[static_cast<std::size_t>(j)];
            if (!nj.is_zero()) acc -= nj * b[static_cast<std::size_t>(k - j)];
        }
        b[static_cast<std::size_t>(k)] = std::move(acc);
    }
    for (long k = 0; k < n; ++k) {
        if (!b[static_cast<std::size_t>(k)].is_zero()) out.emplace(k - v, b[static_cast<std::size_t>(k)] * lead_inv);
    }
    return {a.var(), std::move(out), trunc};
}

HalfSeries series_pow(const HalfSeries& a, long n, std::optional<long> order) {
    if (n < 0) return series_inv(series_pow(a, -n), order);
    HalfSeries result = HalfSeries::constant(a.var(), 1);
    HalfSeries base = a;
    while (n) {
        if (n & 1L) {
            result = result * base;
            if (order) result = result.truncated(*order);
        }
        n >>= 1;
        if (n) {
            base = base * base;
            if (order) base = base.truncated(*order);
        }
    }
    return order ? result.truncated(*order) : result;
}

bool agree(const HalfSeries& a, const HalfSeries& b) {
    if (a.var() != b.var()) return false;
    return series_sub(a, b).is_zero();
}

HalfSeries exp_series(const GaussianRational& c, long order) {
    HalfSeries::Coeffs out;
    GaussianRational term(1);
    for (long n = 0; n < order; ++n) {
        if (n > 0) term = term * c / GaussianRational(Rational(n));
        out.emplace(n, term);
    }
    return {Var::u, std::move(out), order};
}

HalfSeries to_u(const HalfSeries& x, long order) {
    if (x.var() != Var::s) throw PreconditionError("variable-mismatch", "to_u expects a series in s");
    check_order_cap(order);
    if (!x.is_exact()) {
        throw PrecisionError("insufficient-precision",
                             "to_u: s-series known only below s^" + std::to_string(*x.trunc()) +
                                 "; the unknown tail contributes to every u-order, so no u-order is achievable");
    }
    HalfSeries result(Var::u, order);
    for (const auto& [e, c] : x.coeffs()) {
        // s^e = e^{i e u / 2}
        HalfSeries term = exp_series(GaussianRational(Rational(0), Rational(e, 2)), order).scaled(c);
        result = result + term;
    }
    return result;
}

HalfSeries q_to_s(const HalfSeries& x) {
    if (x.var() != Var::q) throw PreconditionError("variable-mismatch", "q_to_s expects a series in q");
    HalfSeries::Coeffs out;
    for (const auto& [e, c] : x.coeffs()) out.emplace(2 * e, e % 2 == 0 ? c : -c);
    return {Var::s, std::move(out), x.trunc() ? std::optional<long>(2 * *x.trunc()) : std::nullopt};
}

QView q_view(const HalfSeries& x) {
    if (x.var() != Var::s) throw PreconditionError("variable-mismatch", "q_view expects a series in s");
    return {x, x.only_even_exponents()};
}

HalfSeries s_to_q(const HalfSeries& x) {
    QView view = q_view(x);
    if (!view.parity_ok) {
        throw PreconditionError("half-integral-powers", "s-series has odd exponents; not a Laurent series in q");
    }
    HalfSeries::Coeffs out;
    for (const auto& [e, c] : x.coeffs()) out.emplace(e / 2, (e / 2) % 2 == 0 ? c : -c);
    std::optional<long> trunc;
    if (x.trunc()) {
        // q-exponent k is known iff s-exponent 2k < trunc.
        const long t = *x.trunc();
        trunc = t >= 0 ? (t + 1) / 2 : -((-t) / 2);
    }
    return {Var::q, std::move(out), trunc};
}

long max_order_cap() {
    if (const char* env = std::getenv("GWP_MAX_ORDER")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 4096;
}

void check_order_cap(long order) {
    if (order > max_order_cap()) {
        throw PrecisionError("order-cap", "requested order " + std::to_string(order) + " exceeds GWP_MAX_ORDER cap " +
                                              std::to_string(max_order_cap()));
    }
}

}  // namespace gwp
