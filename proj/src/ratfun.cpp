#include "gwp/ratfun.hpp"

#include "gwp/error.hpp"
#include "gwp/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace gwp {

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<GaussianRational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(std::size_t degree, GaussianRational c) {
    std::vector<GaussianRational> v(degree + 1);
    v[degree] = std::move(c);
    return Poly(std::move(v));
}

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

std::size_t Poly::low_order() const {
    std::size_t k = 0;
    while (k < c_.size() && c_[k].is_zero()) ++k;
    return k;
}

GaussianRational Poly::eval(const GaussianRational& x) const {
    GaussianRational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return *this * lead().inv();
}

Poly Poly::reversed() const {
    std::vector<GaussianRational> r(c_.rbegin(), c_.rend());
    return Poly(std::move(r));
}

Poly Poly::substitute_monomial(const GaussianRational& c, std::size_t k) const {
    if (is_zero()) return {};
    std::vector<GaussianRational> out(k * (c_.size() - 1) + 1);
    GaussianRational cp(1);
    for (std::size_t j = 0; j < c_.size(); ++j) {
        out[j * k] += c_[j] * cp;
        cp *= c;
    }
    return Poly(std::move(out));
}

std::pair<std::size_t, Poly> Poly::split_root(const GaussianRational& root) const {
    if (is_zero()) throw PreconditionError("zero-polynomial", "root multiplicity of the zero polynomial");
    const Poly lin({-root, GaussianRational(1)});
    std::size_t mult = 0;
    Poly p = *this;
    while (p.eval(root).is_zero()) {
        p = divmod(p, lin).first;
        ++mult;
    }
    return {mult, p};
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<GaussianRational> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] += b.c_[k];
    return Poly(std::move(out));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<GaussianRational> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out));
}

Poly operator*(const Poly& a, const GaussianRational& c) {
    std::vector<GaussianRational> out = a.c_;
    for (auto& x : out) x *= c;
    return Poly(std::move(out));
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[k] << ")";
        if (k == 1) os << "*" << var;
        if (k > 1) os << "*" << var << "^" << k;
    }
    return os.str();
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw PreconditionError("division-by-zero", "polynomial division by zero");
    std::vector<GaussianRational> rem = a.coeffs();
    const auto& bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    if (rem.size() < bc.size()) return {Poly(), a};
    std::vector<GaussianRational> quot(rem.size() - db);
    const GaussianRational lead_inv = b.lead().inv();
    for (std::size_t k = rem.size(); k-- > db;) {
        if (rem[k].is_zero()) continue;
        const GaussianRational f = rem[k] * lead_inv;
        quot[k - db] = f;
        for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= f * bc[j];
    }
    return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

// ---------------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Var var) : var_(var), den_(Poly::constant(1)) {}

RationalFunction::RationalFunction(Var var, Poly num, Poly den) : var_(var), num_(std::move(num)), den_(std::move(den)) {
    if (var_ == Var::u) throw PreconditionError("variable-mismatch", "rational functions live in s or q");
    if (den_.is_zero()) throw PreconditionError("division-by-zero", "rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::constant(1);
        return;
    }
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
    }
    const GaussianRational scale = den_.lead().inv();
    num_ = num_ * scale;
    den_ = den_ * scale;
}

RationalFunction RationalFunction::constant(Var var, GaussianRational c) {
    return {var, Poly::constant(std::move(c)), Poly::constant(1)};
}

RationalFunction RationalFunction::monomial(Var var, long k, GaussianRational c) {
    if (k >= 0) return {var, Poly::monomial(static_cast<std::size_t>(k), std::move(c)), Poly::constant(1)};
    return {var, Poly::constant(std::move(c)), Poly::monomial(static_cast<std::size_t>(-k))};
}

RationalFunction RationalFunction::from_laurent(const HalfSeries& x) {
    if (!x.is_exact()) throw PreconditionError("not-exact", "from_laurent needs an exact Laurent polynomial");
    if (x.var() == Var::u) throw PreconditionError("variable-mismatch", "rational functions live in s or q");
    if (x.is_zero()) return RationalFunction(x.var());
    const long lo = std::min(0L, *x.min_exp());
    const long hi = x.coeffs().rbegin()->first;
    std::vector<GaussianRational> c(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [e, v] : x.coeffs()) c[static_cast<std::size_t>(e - lo)] = v;
    return {x.var(), Poly(std::move(c)), Poly::monomial(static_cast<std::size_t>(-lo))};
}

namespace {

void require_same_var(const RationalFunction& a, const RationalFunction& b) {
    if (a.var() != b.var()) {
        throw PreconditionError("variable-mismatch", "rational functions in " + to_string(a.var()) + " and " +
                                                         to_string(b.var()));
    }
}

}  // namespace

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    require_same_var(a, b);
    if (a.den_ == b.den_) return {a.var_, a.num_ + b.num_, a.den_};
    return {a.var_, a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    require_same_var(a, b);
    return {a.var_, a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    require_same_var(a, b);
    if (b.is_zero()) throw PreconditionError("division-by-zero", "division by the zero rational function");
    return {a.var_, a.num_ * b.den_, a.den_ * b.num_};
}

RationalFunction operator*(const RationalFunction& a, const GaussianRational& c) {
    return {a.var_, a.num_ * c, a.den_};
}

RationalFunction RationalFunction::pow(long n) const {
    if (n < 0) return (constant(var_, 1) / *this).pow(-n);
    RationalFunction result = constant(var_, 1), base = *this;
    while (n) {
        if (n & 1L) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

std::string RationalFunction::to_string() const {
    const std::string v = gwp::to_string(var_);
    if (den_.degree() == 0) return num_.to_string(v);
    return "[" + num_.to_string(v) + "] / [" + den_.to_string(v) + "]";
}

RationalFunction q_to_s(const RationalFunction& r) {
    if (r.var() == Var::s) return r;
    return {Var::s, r.num().substitute_monomial(-1, 2), r.den().substitute_monomial(-1, 2)};
}

bool check_q_symmetry(const RationalFunction& r) {
    // N(x)/D(x) = N(1/x)/D(1/x)  <=>  N * rev(D) * x^{deg N} = x^{deg D} * rev(N) * D
    if (r.is_zero()) return true;
    const Poly& n = r.num();
    const Poly& d = r.den();
    const Poly lhs = n * d.reversed() * Poly::monomial(static_cast<std::size_t>(n.degree()));
    const Poly rhs = Poly::monomial(static_cast<std::size_t>(d.degree())) * n.reversed() * d;
    return lhs == rhs;
}

HalfSeries expand(const RationalFunction& r, long order) {
    check_order_cap(order);
    const Var var = r.var();
    if (r.is_zero()) return HalfSeries(var, order);
    // R = N / (x^k D'), D'(0) != 0
    const long k = static_cast<long>(r.den().low_order());
    const auto& dc = r.den().coeffs();
    std::vector<GaussianRational> dprime(dc.begin() + k, dc.end());
    const long need = order + k;  // power-series coefficients of N/D' needed: exponents < need
    HalfSeries::Coeffs out;
    if (need > 0) {
        std::vector<GaussianRational> q(static_cast<std::size_t>(need));
        const GaussianRational d0_inv = dprime[0].inv();
        for (long e = 0; e < need; ++e) {
            GaussianRational acc = r.num().coeff(static_cast<std::size_t>(e));
            for (long j = 1; j <= e && j < static_cast<long>(dprime.size()); ++j)
                acc -= dprime[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(e - j)];
            q[static_cast<std::size_t>(e)] = acc * d0_inv;
        }
        for (long e = 0; e < need; ++e)
            if (!q[static_cast<std::size_t>(e)].is_zero()) out.emplace(e - k, q[static_cast<std::size_t>(e)]);
    }
    return {var, std::move(out), order};
}

HalfSeries ratfun_to_u(const RationalFunction& r_in, long order) {
    check_order_cap(order);
    const RationalFunction r = q_to_s(r_in);
    if (r.is_zero()) return HalfSeries(Var::u, order);

    const GaussianRational one(1);
    auto [m, n_rest] = r.num().split_root(one);
    auto [k, d_rest] = r.den().split_root(one);
    const long pole = static_cast<long>(m) - static_cast<long>(k);  // u-valuation of the result
    const long rel = order - pole;                                  // relative precision needed
    if (rel <= 0) return HalfSeries(Var::u, order);

    auto poly_to_u = [rel](const Poly& p) {
        HalfSeries::Coeffs c;
        for (std::size_t j = 0; j < p.coeffs().size(); ++j)
            if (!p.coeffs()[j].is_zero()) c.emplace(static_cast<long>(j), p.coeffs()[j]);
        return to_u(HalfSeries(Var::s, std::move(c), std::nullopt), rel);
    };

    // s - 1 = e^{iu/2} - 1 = u * w(u) with w(0) = i/2.
    HalfSeries w = (exp_series(GaussianRational(Rational(0), Rational(1, 2)), rel + 1) -
                    HalfSeries::constant(Var::u, 1))
                       .shifted(-1);
    HalfSeries d_u = poly_to_u(d_rest);
    if (d_u.is_zero() || *d_u.min_exp() != 0) {
        throw PrecisionError("pole-structure", "denominator cofactor vanishes at s = 1 after removing the root");
    }
    HalfSeries result = poly_to_u(n_rest) * series_inv(d_u, rel) * series_pow(w, pole, rel);
    return result.truncated(rel).shifted(pole);
}

std::optional<RationalFunction> reconstruct(const HalfSeries& x, long max_num_deg, long max_den_deg) {
    if (x.var() == Var::u) throw PreconditionError("variable-mismatch", "reconstruct expects a series in s or q");
    if (max_num_deg < 0 || max_den_deg < 0) throw PreconditionError("bad-bounds", "degree bounds must be >= 0");
    if (x.is_exact()) {
        RationalFunction r = RationalFunction::from_laurent(x);
        if (r.num().degree() <= max_num_deg && r.den().degree() <= max_den_deg) return r;
        return std::nullopt;
    }
    const long t = *x.trunc();
    if (t < max_num_deg + max_den_deg + 1) {
        throw PrecisionError("insufficient-precision",
                             "reconstruct with bounds (" + std::to_string(max_num_deg) + "," + std::to_string(max_den_deg) +
                                 ") needs " + std::to_string(max_num_deg + max_den_deg + 1) +
                                 " coefficients at exponents >= 0, series has " + std::to_string(std::max(0L, t)));
    }
    const long lo = std::min(0L, x.min_exp().value_or(0));
    const std::size_t n_num = static_cast<std::size_t>(max_num_deg + 1);
    const std::size_t n_den = static_cast<std::size_t>(max_den_deg + 1);
    const std::size_t cols = n_num + n_den;

    // Unknowns (N_0..N_a, D_0..D_b); equation at exponent e: [x*D]_e - N_e = 0 for lo <= e < t.
    Matrix system;
    for (long e = lo; e < t; ++e) {
        Vector row(cols);
        if (e >= 0 && e <= max_num_deg) row[static_cast<std::size_t>(e)] = -1;
        for (long j = 0; j <= max_den_deg; ++j) row[n_num + static_cast<std::size_t>(j)] = x.coeff(e - j);
        system.push_back(std::move(row));
    }
    auto basis = nullspace(system, cols);
    if (basis.empty()) return std::nullopt;
    const Vector& v = basis.front();
    Poly num(Vector(v.begin(), v.begin() + static_cast<long>(n_num)));
    Poly den(Vector(v.begin() + static_cast<long>(n_num), v.end()));
    if (den.is_zero()) return std::nullopt;
    RationalFunction r(x.var(), std::move(num), std::move(den));
    // Cancellation in N/D can break agreement at low order; confirm.
    if (!agree(expand(r, t), x)) return std::nullopt;
    return r;
}

AutoReconstruction reconstruct_auto(const HalfSeries& x) {
    if (x.is_exact()) {
        RationalFunction r = RationalFunction::from_laurent(x);
        return {r, r.num().degree(), r.den().degree()};
    }
    const long t = *x.trunc();
    AutoReconstruction out;
    for (long b = 1; 2 * b + 1 <= t; b *= 2) {
        out.num_bound = b;
        out.den_bound = b;
        out.result = reconstruct(x, b, b);
        if (out.result) return out;
    }
    if (out.num_bound == 0) {
        throw PrecisionError("insufficient-precision", "series too short for any reconstruction bound");
    }
    return out;
}

}  // namespace gwp
