#include "gwp/glue.hpp"

#include "gwp/error.hpp"
#include "gwp/ratfun.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <random>

namespace gwp {

std::string to_string(Side side) { return side == Side::pairs ? "pairs" : "gw"; }

Side parse_side(const std::string& text) {
    if (text == "pairs") return Side::pairs;
    if (text == "gw") return Side::gw;
    throw ParseError("unknown side '" + text + "' (expected pairs or gw)");
}

Var side_var(Side side) { return side == Side::pairs ? Var::s : Var::u; }

std::string to_string(SplitRule rule) { return rule == SplitRule::additive ? "additive" : "diagonal"; }

SplitRule parse_split_rule(const std::string& text) {
    if (text == "additive") return SplitRule::additive;
    if (text == "diagonal") return SplitRule::diagonal;
    throw ParseError("unknown splitting rule '" + text + "' (expected additive or diagonal)");
}

std::string to_string(UnknownSide side) { return side == UnknownSide::left ? "left" : "right"; }

UnknownSide parse_unknown_side(const std::string& text) {
    if (text == "left") return UnknownSide::left;
    if (text == "right") return UnknownSide::right;
    throw ParseError("unknown side '" + text + "' (expected left or right)");
}

std::string slot_to_string(const Slot& slot) {
    std::string s = "class " + slot.beta.to_string() + ", labels (";
    for (std::size_t k = 0; k < slot.labels.size(); ++k) s += (k ? "," : "") + slot.labels[k];
    return s + ")";
}

bool same_ring(const GradedRing& a, const GradedRing& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i)
        if (a.name(i) != b.name(i) || a.deg(i) != b.deg(i) || a.odd(i) != b.odd(i)) return false;
    return a.pairing() == b.pairing() && a.mult() == b.mult();
}

TheoryTable::TheoryTable(Side side, GradedRing ring, std::vector<long> divisor_degree)
    : side_(side), ring_(std::move(ring)), divisor_degree_(std::move(divisor_degree)) {
    if (divisor_degree_.empty()) throw PreconditionError("bad-table", "class lattice rank must be at least 1");
}

TheoryTable TheoryTable::absolute(Side side, int rank) {
    return TheoryTable(side, GradedRing::point(), std::vector<long>(static_cast<std::size_t>(rank), 0));
}

long TheoryTable::boundary_size(const CurveClass& beta) const {
    long n = 0;
    for (std::size_t k = 0; k < divisor_degree_.size() && k < beta.coords.size(); ++k)
        n += divisor_degree_[k] * beta.coords[k];
    return n;
}

void TheoryTable::insert(const Slot& slot, const WeightedPartition& mu, HalfSeries value) {
    if (static_cast<int>(slot.beta.coords.size()) != rank())
        throw PreconditionError("rank-mismatch", "class " + slot.beta.to_string() + " has the wrong rank");
    if (mu.size() != boundary_size(slot.beta)) {
        throw PreconditionError("boundary-size", "boundary " + mu.to_string(ring_) + " at " + slot_to_string(slot) +
                                                     " must have size " + std::to_string(boundary_size(slot.beta)));
    }
    for (const auto& p : mu.parts())
        if (p.weight < 0 || p.weight >= ring_.size())
            throw PreconditionError("unknown-class", "boundary weight outside the divisor ring");
    if (value.var() != side_var(side_)) {
        throw PreconditionError("variable-mismatch", to_string(side_) + " tables hold " + to_string(side_var(side_)) +
                                                         "-series");
    }
    if (side_ == Side::pairs && !value.only_even_exponents())
        throw PreconditionError("odd-exponent", "pairs entries must be Laurent series in q = -s^2");
    entries_[slot][mu] = std::move(value);
}

const HalfSeries& TheoryTable::at(const Slot& slot, const WeightedPartition& mu) const {
    auto it = entries_.find(slot);
    if (it != entries_.end()) {
        auto jt = it->second.find(mu);
        if (jt != it->second.end()) return jt->second;
    }
    throw PreconditionError("missing-entry",
                            "missing table entry: " + slot_to_string(slot) + ", boundary '" + mu.to_string(ring_) + "'");
}

bool TheoryTable::contains(const Slot& slot, const WeightedPartition& mu) const {
    auto it = entries_.find(slot);
    return it != entries_.end() && it->second.count(mu) != 0;
}

std::set<Slot> TheoryTable::slots() const {
    std::set<Slot> out;
    for (const auto& [slot, row] : entries_) out.insert(slot);
    return out;
}

bool operator==(const TheoryTable& a, const TheoryTable& b) {
    return a.side_ == b.side_ && same_ring(a.ring_, b.ring_) && a.divisor_degree_ == b.divisor_degree_ &&
           a.entries_ == b.entries_;
}

bool agree(const TheoryTable& a, const TheoryTable& b) {
    if (a.side() != b.side() || a.divisor_degree() != b.divisor_degree() || !same_ring(a.ring(), b.ring())) return false;
    if (a.entries().size() != b.entries().size()) return false;
    for (const auto& [slot, row] : a.entries()) {
        auto it = b.entries().find(slot);
        if (it == b.entries().end() || it->second.size() != row.size()) return false;
        for (const auto& [mu, v] : row) {
            auto jt = it->second.find(mu);
            if (jt == it->second.end() || !agree(v, jt->second)) return false;
        }
    }
    return true;
}

HalfSeries gluing_weight(Side side, const WeightedPartition& mu) {
    const GaussianRational z(Rational(gluing_factor(mu)));
    const long l = mu.length();
    if (side == Side::gw) return HalfSeries::monomial(Var::u, 2 * l, z);
    // (-1)^{|mu| - l} z q^{-|mu|} with q^{-n} = (-1)^n s^{-2n}
    return HalfSeries::monomial(Var::s, -2 * mu.size(), l % 2 ? -z : z);
}

namespace {

class PartitionCache {
public:
    explicit PartitionCache(const GradedRing& ring) : ring_(ring) {}

    const std::vector<WeightedPartition>& of_size(long n) {
        auto it = parts_.find(n);
        if (it == parts_.end()) it = parts_.emplace(n, enumerate_weighted_partitions(n, ring_)).first;
        return it->second;
    }

    const PartitionCombination& dual(const WeightedPartition& mu) {
        auto it = duals_.find(mu);
        if (it == duals_.end()) it = duals_.emplace(mu, dual_partition(mu, ring_)).first;
        return it->second;
    }

private:
    const GradedRing& ring_;
    std::map<long, std::vector<WeightedPartition>> parts_;
    std::map<WeightedPartition, PartitionCombination> duals_;
};

void check_compatible(const TheoryTable& a, const TheoryTable& b) {
    if (a.side() != b.side()) throw PreconditionError("side-mismatch", "cannot combine pairs and gw tables");
    if (!same_ring(a.ring(), b.ring()))
        throw PreconditionError("ring-mismatch", "tables are relative to divisors with different rings");
    if (a.rank() != b.rank()) throw PreconditionError("rank-mismatch", "tables use class lattices of different rank");
}

/// The class of the glued curve, or nullopt when the slots do not combine.
std::optional<CurveClass> combine(const TheoryTable& left, const Slot& a, const TheoryTable& right, const Slot& b,
                                  SplitRule rule) {
    if (left.boundary_size(a.beta) != right.boundary_size(b.beta)) return std::nullopt;
    if (rule == SplitRule::diagonal) {
        if (a.beta != b.beta) return std::nullopt;
        return a.beta;
    }
    return a.beta + b.beta;
}

Labels concat(const Labels& a, const Labels& b) {
    Labels out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

/// sum_lambda d(mu -> lambda) R[slot][lambda] for every mu of the slot's size.
std::map<WeightedPartition, HalfSeries> dual_row(const TheoryTable& right, const Slot& slot, PartitionCache& cache) {
    std::map<WeightedPartition, HalfSeries> out;
    const Var var = side_var(right.side());
    for (const auto& mu : cache.of_size(right.boundary_size(slot.beta))) {
        HalfSeries acc(var);
        for (const auto& [lambda, c] : cache.dual(mu)) acc = acc + right.at(slot, lambda).scaled(c);
        out.emplace(mu, std::move(acc));
    }
    return out;
}

HalfSeries contract(const TheoryTable& left, const Slot& a, const std::map<WeightedPartition, HalfSeries>& right_dual,
                    PartitionCache& cache) {
    HalfSeries acc(side_var(left.side()));
    for (const auto& mu : cache.of_size(left.boundary_size(a.beta))) {
        const HalfSeries& r = right_dual.at(mu);
        const HalfSeries& l = left.at(a, mu);
        if (r.is_zero() && r.is_exact()) continue;
        acc = acc + l * gluing_weight(left.side(), mu) * r;
    }
    return acc;
}

std::map<Slot, HalfSeries> glue_slots(const TheoryTable& left, const TheoryTable& right, SplitRule rule,
                                      const std::optional<Slot>& only) {
    check_compatible(left, right);
    PartitionCache cache(left.ring());
    std::map<Slot, std::map<WeightedPartition, HalfSeries>> right_duals;
    std::map<Slot, HalfSeries> out;
    for (const auto& [sa, row_a] : left.entries()) {
        for (const auto& [sb, row_b] : right.entries()) {
            auto beta = combine(left, sa, right, sb, rule);
            if (!beta) continue;
            Slot target{*beta, concat(sa.labels, sb.labels)};
            if (only && target != *only) continue;
            auto it = right_duals.find(sb);
            if (it == right_duals.end()) it = right_duals.emplace(sb, dual_row(right, sb, cache)).first;
            HalfSeries v = contract(left, sa, it->second, cache);
            auto [ot, fresh] = out.emplace(target, v);
            if (!fresh) ot->second = ot->second + v;
        }
    }
    return out;
}

}  // namespace

TheoryTable glue(const TheoryTable& left, const TheoryTable& right, SplitRule rule) {
    TheoryTable out = TheoryTable::absolute(left.side(), left.rank());
    for (auto& [slot, v] : glue_slots(left, right, rule, std::nullopt)) out.insert(slot, WeightedPartition(), v);
    return out;
}

HalfSeries glue_at(const TheoryTable& left, const TheoryTable& right, SplitRule rule, const Slot& slot) {
    auto m = glue_slots(left, right, rule, slot);
    if (m.empty()) return HalfSeries(side_var(left.side()));
    return m.begin()->second;
}

HalfSeries glue_gw(const TheoryTable& left, const TheoryTable& right, SplitRule rule, const Slot& slot) {
    if (left.side() != Side::gw) throw PreconditionError("side-mismatch", "glue_gw needs gw tables");
    return glue_at(left, right, rule, slot);
}

HalfSeries glue_pairs(const TheoryTable& left, const TheoryTable& right, SplitRule rule, const Slot& slot) {
    if (left.side() != Side::pairs) throw PreconditionError("side-mismatch", "glue_pairs needs pairs tables");
    return glue_at(left, right, rule, slot);
}

namespace {

/// Diagonal closed form of the edge at nu.
HalfSeries edge_value(Side side, long d, const WeightedPartition& nu) {
    const GaussianRational inv_z(Rational(1) / Rational(gluing_factor(nu)));
    const long l = nu.length();
    if (side == Side::gw) return HalfSeries::monomial(Var::u, -2 * l, inv_z);
    // (-1)^{|nu| - l} q^d with |nu| = d and q^d = (-1)^d s^{2d}
    return HalfSeries::monomial(Var::s, 2 * d, l % 2 ? -inv_z : inv_z);
}

}  // namespace

HalfSeries capped_edge(Side side, long d, const WeightedPartition& nu, const WeightedPartition& mu) {
    if (nu.size() != d || mu.size() != d)
        throw PreconditionError("size-mismatch", "capped edge of degree " + std::to_string(d) + " needs |nu| = |mu| = d");
    if (nu != mu) return HalfSeries(side_var(side));
    return edge_value(side, d, nu);
}

TheoryTable capped_edge_table(Side side, long max_degree, const GradedRing& ring) {
    if (max_degree < 0) throw PreconditionError("bad-degree", "edge degree must be >= 0");
    TheoryTable table(side, ring, {1});
    PartitionCache cache(ring);
    for (long d = 0; d <= max_degree; ++d) {
        const auto& parts = cache.of_size(d);
        const std::size_t n = parts.size();
        Matrix dm(n, Vector(n));
        for (std::size_t a = 0; a < n; ++a) {
            const auto& row = cache.dual(parts[a]);
            for (std::size_t b = 0; b < n; ++b) {
                auto it = row.find(parts[b]);
                if (it != row.end()) dm[a][b] = it->second;
            }
        }
        const auto dinv = inverse(dm);
        if (!dinv) throw PreconditionError("singular-pairing", "dual partition matrix is singular");
        for (std::size_t a = 0; a < n; ++a) {
            const Slot slot{CurveClass{{d}}, {parts[a].to_string(ring)}};
            const HalfSeries e = edge_value(side, d, parts[a]);
            for (std::size_t b = 0; b < n; ++b) table.insert(slot, parts[b], e.scaled((*dinv)[b][a]));
        }
    }
    return table;
}

namespace {

// ---- exact linear solve over rational functions or truncated series ----

/// x * var^shift as a polynomial in var^stride; every exponent of x + shift must be a nonnegative multiple of stride.
Poly to_poly(const HalfSeries& x, long shift, long stride) {
    if (x.is_zero()) return Poly();
    std::vector<GaussianRational> c(static_cast<std::size_t>((x.coeffs().rbegin()->first + shift) / stride + 1));
    for (const auto& [e, v] : x.coeffs()) c[static_cast<std::size_t>((e + shift) / stride)] = v;
    return Poly(std::move(c));
}

HalfSeries from_rf(const RationalFunction& r, Var var, long order) {
    const Poly& den = r.den();
    const bool monomial_den = den.low_order() == static_cast<std::size_t>(den.degree());
    if (monomial_den) {
        HalfSeries::Coeffs c;
        const long shift = den.degree();
        for (std::size_t k = 0; k < r.num().coeffs().size(); ++k)
            if (!r.num().coeffs()[k].is_zero()) c.emplace(static_cast<long>(k) - shift, r.num().coeffs()[k]);
        return HalfSeries(var, std::move(c), std::nullopt);
    }
    HalfSeries e = expand(r, order);
    return HalfSeries(var, e.coeffs(), e.trunc());
}

struct SeriesField {
    long order;
    static bool is_zero(const HalfSeries& x) { return x.is_zero(); }
    static long score(const HalfSeries& x) { return *x.valuation(); }
    HalfSeries div(const HalfSeries& a, const HalfSeries& b) const {
        if (b.is_exact() && b.coeffs().size() > 1) return a * series_inv(b, order);
        return a * series_inv(b);
    }
};

[[noreturn]] void undetermined(const std::string& name) {
    throw PreconditionError("singular-system",
                            "the gluing system does not determine " + name + " (inconsistent or insufficient input data)");
}

/**
 * Fraction-free Gauss-Jordan over Q[i][x]: every entry stays a minor of the
 * input and each step divides exactly by the previous pivot. Returns the
 * solution as (numerator, common denominator) pairs.
 */
std::vector<std::pair<Poly, Poly>> solve_polynomial(std::vector<std::vector<Poly>> m, std::vector<Poly> rhs,
                                                    std::size_t cols, const std::vector<std::string>& names) {
    const std::size_t rows = m.size();
    std::vector<bool> used(rows, false);
    std::vector<std::size_t> pivot_row(cols);
    Poly prev = Poly::constant(1);
    for (std::size_t c = 0; c < cols; ++c) {
        std::optional<std::size_t> best;
        for (std::size_t r = 0; r < rows; ++r) {
            if (used[r] || m[r][c].is_zero()) continue;
            if (!best || m[r][c].degree() < m[*best][c].degree()) best = r;
        }
        if (!best) undetermined(names[c]);
        const std::size_t p = *best;
        used[p] = true;
        pivot_row[c] = p;
        const Poly piv = m[p][c];
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == p) continue;
            const Poly f = m[r][c];
            for (std::size_t k = 0; k < cols; ++k) {
                if (k == c) continue;
                m[r][k] = divmod(piv * m[r][k] - f * m[p][k], prev).first;
            }
            rhs[r] = divmod(piv * rhs[r] - f * rhs[p], prev).first;
            m[r][c] = Poly();
        }
        prev = piv;
    }
    std::vector<std::pair<Poly, Poly>> out;
    for (std::size_t c = 0; c < cols; ++c) out.emplace_back(rhs[pivot_row[c]], m[pivot_row[c]][c]);
    return out;
}

/// num / den with x = var^stride, as an exact Laurent polynomial when possible.
HalfSeries poly_quotient(const Poly& num, const Poly& den, Var var, long stride, long order) {
    auto [q, r] = divmod(num, den);
    HalfSeries x(var);
    if (r.is_zero()) {
        HalfSeries::Coeffs c;
        for (std::size_t k = 0; k < q.coeffs().size(); ++k)
            if (!q.coeffs()[k].is_zero()) c.emplace(static_cast<long>(k), q.coeffs()[k]);
        x = HalfSeries(var, std::move(c), std::nullopt);
    } else {
        x = from_rf(RationalFunction(Var::s, num, den), var, (order + stride - 1) / stride);
    }
    HalfSeries::Coeffs c;
    for (const auto& [e, v] : x.coeffs()) c.emplace(e * stride, v);
    std::optional<long> t;
    if (x.trunc()) t = std::min(*x.trunc() * stride, order);
    return HalfSeries(var, std::move(c), t);
}

template <class F, class Field>
std::vector<F> gauss_jordan(std::vector<std::vector<F>> m, std::vector<F> rhs, std::size_t cols, const Field& field,
                            const std::vector<std::string>& names) {
    const std::size_t rows = m.size();
    std::vector<bool> used(rows, false);
    std::vector<std::size_t> pivot_row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        std::optional<std::size_t> best;
        for (std::size_t r = 0; r < rows; ++r) {
            if (used[r] || Field::is_zero(m[r][c])) continue;
            if (!best || Field::score(m[r][c]) < Field::score(m[*best][c])) best = r;
        }
        if (!best) undetermined(names[c]);
        const std::size_t p = *best;
        used[p] = true;
        pivot_row[c] = p;
        const F piv = m[p][c];
        for (std::size_t k = c; k < cols; ++k) m[p][k] = field.div(m[p][k], piv);
        rhs[p] = field.div(rhs[p], piv);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == p || Field::is_zero(m[r][c])) continue;
            const F f = m[r][c];
            for (std::size_t k = c; k < cols; ++k)
                if (!Field::is_zero(m[p][k])) m[r][k] = m[r][k] - f * m[p][k];
            rhs[r] = rhs[r] - f * rhs[p];
        }
    }
    std::vector<F> x;
    x.reserve(cols);
    for (std::size_t c = 0; c < cols; ++c) x.push_back(rhs[pivot_row[c]]);
    return x;
}

struct Unknown {
    CurveClass beta;
    WeightedPartition mu;
};

struct Slice {
    Labels labels;
    std::vector<Unknown> vars;
    std::vector<std::vector<HalfSeries>> m;
    std::vector<HalfSeries> rhs;
};

std::vector<HalfSeries> solve_block(const std::vector<std::vector<HalfSeries>>& mat, const std::vector<HalfSeries>& rhs_in,
                                    const std::vector<std::string>& names, Var var, long order) {
    const std::size_t cols = names.size();
    bool exact = true;
    for (const auto& row : mat)
        for (const auto& x : row) exact = exact && x.is_exact();
    for (const auto& x : rhs_in) exact = exact && x.is_exact();
    if (!exact) return gauss_jordan(mat, rhs_in, cols, SeriesField{order}, names);
    // clear each equation of negative powers and work in var^stride
    long stride = 0;
    auto note = [&](const HalfSeries& x) {
        for (const auto& [e, v] : x.coeffs()) stride = std::gcd(stride, e);
    };
    for (const auto& row : mat)
        for (const auto& x : row) note(x);
    for (const auto& x : rhs_in) note(x);
    if (stride == 0) stride = 1;
    std::vector<std::vector<Poly>> m;
    std::vector<Poly> rhs;
    for (std::size_t r = 0; r < mat.size(); ++r) {
        long lo = rhs_in[r].min_exp().value_or(0);
        for (const auto& x : mat[r]) lo = std::min(lo, x.min_exp().value_or(lo));
        std::vector<Poly> row;
        for (const auto& x : mat[r]) row.push_back(to_poly(x, -lo, stride));
        m.push_back(std::move(row));
        rhs.push_back(to_poly(rhs_in[r], -lo, stride));
    }
    std::vector<HalfSeries> out;
    for (const auto& [num, den] : solve_polynomial(std::move(m), std::move(rhs), cols, names))
        out.push_back(poly_quotient(num, den, var, stride, order));
    return out;
}

/// Solves each group of unknowns coupled through shared equations on its own.
std::vector<HalfSeries> solve_slice(const Slice& slice, Var var, long order, const GradedRing& ring) {
    const std::size_t cols = slice.vars.size();
    std::vector<std::string> names;
    for (const auto& v : slice.vars) {
        std::string l;
        for (const auto& s : slice.labels) l += (l.empty() ? "" : ",") + s;
        names.push_back("class " + v.beta.to_string() + ", labels (" + l + "), boundary '" + v.mu.to_string(ring) + "'");
    }
    std::vector<std::size_t> parent(cols);
    for (std::size_t c = 0; c < cols; ++c) parent[c] = c;
    auto find = [&](std::size_t c) {
        while (parent[c] != c) c = parent[c] = parent[parent[c]];
        return c;
    };
    for (const auto& row : slice.m) {
        std::optional<std::size_t> first;
        for (std::size_t c = 0; c < cols; ++c) {
            if (row[c].is_zero()) continue;
            if (first) parent[find(c)] = find(*first);
            else first = c;
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t c = 0; c < cols; ++c) blocks[find(c)].push_back(c);

    std::vector<HalfSeries> out(cols, HalfSeries(var));
    for (const auto& [root, members] : blocks) {
        std::vector<std::vector<HalfSeries>> m;
        std::vector<HalfSeries> rhs;
        std::vector<std::string> block_names;
        for (std::size_t c : members) block_names.push_back(names[c]);
        for (std::size_t r = 0; r < slice.m.size(); ++r) {
            bool touches = false;
            for (std::size_t c : members) touches = touches || !slice.m[r][c].is_zero();
            if (!touches) continue;
            std::vector<HalfSeries> row;
            for (std::size_t c : members) row.push_back(slice.m[r][c]);
            m.push_back(std::move(row));
            rhs.push_back(slice.rhs[r]);
        }
        const auto x = solve_block(m, rhs, block_names, var, order);
        for (std::size_t k = 0; k < members.size(); ++k) out[members[k]] = x[k];
    }
    return out;
}

}  // namespace

InvertResult invert_step(const TheoryTable& absolute, const TheoryTable& known, UnknownSide unknown,
                         const InvertOptions& options) {
    if (absolute.side() != known.side()) throw PreconditionError("side-mismatch", "cannot combine pairs and gw tables");
    if (absolute.rank() != known.rank()) throw PreconditionError("rank-mismatch", "class lattice ranks differ");
    check_order_cap(options.order);
    const Side side = known.side();
    const Var var = side_var(side);
    const std::vector<long> du = options.divisor_degree.value_or(known.divisor_degree());
    if (static_cast<int>(du.size()) != known.rank())
        throw PreconditionError("rank-mismatch", "unknown divisor degree has the wrong rank");
    TheoryTable solved(side, known.ring(), du);

    std::optional<std::size_t> known_len;
    for (const auto& s : known.slots()) {
        if (known_len && *known_len != s.labels.size())
            throw PreconditionError("label-arity", "known table mixes label tuples of different lengths");
        known_len = s.labels.size();
    }
    if (!known_len) throw PreconditionError("empty-table", "known table has no entries");
    for (const auto& [slot, row] : absolute.entries()) {
        if (absolute.boundary_size(slot.beta) != 0)
            throw PreconditionError("not-absolute", "the absolute table must not carry boundary conditions");
        if (slot.labels.size() < *known_len)
            throw PreconditionError("label-arity", "absolute labels are shorter than the known table's");
    }

    // split an absolute label tuple into (unknown part, known part)
    auto split = [&](const Labels& l) {
        const std::size_t cut = unknown == UnknownSide::left ? l.size() - *known_len : *known_len;
        Labels a(l.begin(), l.begin() + static_cast<long>(cut)), b(l.begin() + static_cast<long>(cut), l.end());
        return unknown == UnknownSide::left ? std::pair{a, b} : std::pair{b, a};
    };

    PartitionCache cache(known.ring());
    std::map<Slot, std::map<WeightedPartition, HalfSeries>> known_duals;
    auto known_dual = [&](const Slot& s) -> const std::map<WeightedPartition, HalfSeries>& {
        auto it = known_duals.find(s);
        if (it == known_duals.end()) it = known_duals.emplace(s, dual_row(known, s, cache)).first;
        return it->second;
    };

    auto unknown_class = [&](const CurveClass& beta, const Slot& ks) -> std::optional<CurveClass> {
        if (options.rule == SplitRule::diagonal) {
            if (ks.beta != beta) return std::nullopt;
            long n = 0;
            for (std::size_t k = 0; k < du.size(); ++k) n += du[k] * beta.coords[k];
            if (n != known.boundary_size(ks.beta)) return std::nullopt;
            return beta;
        }
        CurveClass b = beta - ks.beta;
        if (!b.is_effective()) return std::nullopt;
        long n = 0;
        for (std::size_t k = 0; k < du.size(); ++k) n += du[k] * b.coords[k];
        if (n != known.boundary_size(ks.beta)) return std::nullopt;
        return b;
    };

    // unknown slots, grouped by label tuple
    std::map<Labels, std::set<CurveClass>> unknown_slots;
    for (const auto& [slot, row] : absolute.entries()) {
        auto [lu, lk] = split(slot.labels);
        for (const auto& ks : known.slots()) {
            if (ks.labels != lk) continue;
            if (auto b = unknown_class(slot.beta, ks)) unknown_slots[lu].insert(*b);
        }
    }

    std::vector<Slice> slices;
    for (const auto& [lu, classes] : unknown_slots) {
        Slice slice;
        slice.labels = lu;
        std::vector<CurveClass> ordered(classes.begin(), classes.end());
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const CurveClass& a, const CurveClass& b) { return a.total() < b.total(); });
        for (const auto& b : ordered) {
            long n = 0;
            for (std::size_t k = 0; k < du.size(); ++k) n += du[k] * b.coords[k];
            if (n < 0) throw PreconditionError("boundary-size", "negative boundary size at class " + b.to_string());
            auto parts = cache.of_size(n);
            std::stable_sort(parts.begin(), parts.end(), [&](const WeightedPartition& x, const WeightedPartition& y) {
                return codim(x, known.ring()) < codim(y, known.ring());
            });
            for (const auto& mu : parts) slice.vars.push_back({b, mu});
        }
        std::map<std::pair<CurveClass, WeightedPartition>, std::size_t> index;
        for (std::size_t k = 0; k < slice.vars.size(); ++k) index[{slice.vars[k].beta, slice.vars[k].mu}] = k;

        for (const auto& [slot, row] : absolute.entries()) {
            auto [slot_lu, lk] = split(slot.labels);
            if (slot_lu != lu) continue;
            std::vector<HalfSeries> eq(slice.vars.size(), HalfSeries(var));
            for (const auto& ks : known.slots()) {
                if (ks.labels != lk) continue;
                auto b = unknown_class(slot.beta, ks);
                if (!b) continue;
                if (unknown == UnknownSide::left) {
                    // sum_mu x_mu w(mu) sum_lambda d(mu -> lambda) K_lambda
                    const auto& kd = known_dual(ks);
                    for (const auto& [mu, v] : kd)
                        eq[index.at({*b, mu})] = eq[index.at({*b, mu})] + gluing_weight(side, mu) * v;
                } else {
                    // sum_mu K_mu w(mu) sum_lambda d(mu -> lambda) x_lambda
                    for (const auto& mu : cache.of_size(known.boundary_size(ks.beta))) {
                        const HalfSeries kw = known.at(ks, mu) * gluing_weight(side, mu);
                        for (const auto& [lambda, c] : cache.dual(mu))
                            eq[index.at({*b, lambda})] = eq[index.at({*b, lambda})] + kw.scaled(c);
                    }
                }
            }
            slice.m.push_back(std::move(eq));
            slice.rhs.push_back(row.at(WeightedPartition()));
        }
        slices.push_back(std::move(slice));
    }

    std::vector<std::vector<HalfSeries>> solutions(slices.size());
    if (options.jobs > 1 && slices.size() > 1) {
        std::vector<std::future<std::vector<HalfSeries>>> futures;
        for (const auto& s : slices)
            futures.push_back(std::async(std::launch::async, [&s, var, &options, &known] {
                return solve_slice(s, var, options.order, known.ring());
            }));
        for (std::size_t k = 0; k < slices.size(); ++k) solutions[k] = futures[k].get();
    } else {
        for (std::size_t k = 0; k < slices.size(); ++k)
            solutions[k] = solve_slice(slices[k], var, options.order, known.ring());
    }
    for (std::size_t k = 0; k < slices.size(); ++k)
        for (std::size_t j = 0; j < slices[k].vars.size(); ++j)
            solved.insert(Slot{slices[k].vars[j].beta, slices[k].labels}, slices[k].vars[j].mu, solutions[k][j]);

    InvertResult result{std::move(solved), {}};
    const TheoryTable back = unknown == UnknownSide::left ? glue(result.table, known, options.rule)
                                                          : glue(known, result.table, options.rule);
    for (const auto& [slot, row] : absolute.entries()) {
        const HalfSeries& target = row.at(WeightedPartition());
        HalfSeries diff = target;
        if (back.contains(slot, WeightedPartition())) diff = target - back.at(slot, WeightedPartition());
        if (!diff.is_zero()) result.residual.push_back({slot, diff});
    }
    return result;
}

PipelineResult reduction_pipeline(const std::vector<PipelineNode>& nodes,
                                  const std::map<std::string, TheoryTable>& leaves, unsigned jobs) {
    std::map<std::string, std::size_t> producer;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& n = nodes[k];
        if (n.inputs.size() != 2)
            throw PreconditionError("bad-node", "node '" + n.output + "' needs exactly two inputs");
        if (leaves.count(n.output))
            throw PreconditionError("bad-node", "node output '" + n.output + "' collides with a leaf");
        if (!producer.emplace(n.output, k).second)
            throw PreconditionError("bad-node", "two nodes produce '" + n.output + "'");
    }
    std::vector<std::vector<std::size_t>> dependents(nodes.size());
    std::vector<std::size_t> pending(nodes.size(), 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        for (const auto& in : nodes[k].inputs) {
            if (leaves.count(in)) continue;
            auto it = producer.find(in);
            if (it == producer.end())
                throw PreconditionError("missing-leaf", "input '" + in + "' of node '" + nodes[k].output +
                                                            "' is neither a leaf nor produced by a node");
            dependents[it->second].push_back(k);
            ++pending[k];
        }
    }
    std::set<std::size_t> ready;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (pending[k] == 0) ready.insert(k);

    PipelineResult result;
    result.tables = leaves;
    while (!ready.empty()) {
        const std::size_t k = *ready.begin();
        ready.erase(ready.begin());
        const PipelineNode& n = nodes[k];
        const TheoryTable& a = result.tables.at(n.inputs[0]);
        const TheoryTable& b = result.tables.at(n.inputs[1]);
        if (a.side() != n.side || b.side() != n.side)
            throw PreconditionError("side-mismatch", "node '" + n.output + "' expects " + to_string(n.side) + " tables");
        PipelineStep step{k, n.output, n.op, 0};
        if (n.op == PipelineOp::glue) {
            result.tables.insert_or_assign(n.output, glue(a, b, n.rule));
        } else {
            InvertOptions opts;
            opts.rule = n.rule;
            opts.divisor_degree = n.divisor_degree;
            opts.order = n.order;
            opts.jobs = jobs;
            InvertResult r = invert_step(a, b, n.unknown, opts);
            step.residual_entries = r.residual.size();
            result.tables.insert_or_assign(n.output, std::move(r.table));
        }
        result.steps.push_back(step);
        for (std::size_t d : dependents[k])
            if (--pending[d] == 0) ready.insert(d);
    }
    if (result.steps.size() != nodes.size()) {
        std::string stuck;
        for (std::size_t k = 0; k < nodes.size(); ++k)
            if (pending[k] > 0) stuck += (stuck.empty() ? "" : ", ") + nodes[k].output;
        throw PreconditionError("cycle", "pipeline has a dependency cycle through: " + stuck);
    }
    return result;
}

std::vector<PipelineNode> quintic_scheme(Side side) {
    std::vector<PipelineNode> nodes;
    for (int k = 4; k >= 1; --k) {
        const std::string t = "T" + std::to_string(k), s = "S" + std::to_string(k);
        PipelineNode g;
        g.op = PipelineOp::glue;
        g.side = side;
        g.inputs = {t + "/" + s, "P3[" + std::to_string(k) + "," + std::to_string(k + 1) + "]/" + s};
        g.output = "T" + std::to_string(k + 1);
        nodes.push_back(g);
        PipelineNode inv;
        inv.op = PipelineOp::invert;
        inv.side = side;
        inv.inputs = {t, "P_" + s + "/" + s};
        inv.output = t + "/" + s;
        inv.unknown = UnknownSide::left;
        nodes.push_back(inv);
    }
    return nodes;
}

namespace {

GradedRing curve_ring() {
    std::vector<std::vector<RingElement>> m(2, std::vector<RingElement>(2, RingElement(2)));
    m[0][0][0] = 1;
    m[0][1][1] = 1;
    m[1][0][1] = 1;
    return GradedRing({"1", "p"}, {Rational(0), Rational(1)}, {false, false},
                      Matrix{{GaussianRational(0), GaussianRational(1)}, {GaussianRational(1), GaussianRational(0)}},
                      m);
}

HalfSeries random_entry(Side side, std::mt19937& rng) {
    std::uniform_int_distribution<long> coef(-5, 5);
    HalfSeries::Coeffs c;
    for (long e : {-2L, 0L, 2L}) {
        long v = coef(rng);
        if (e == 0 && v == 0) v = 1;
        if (v != 0) c.emplace(e, GaussianRational(v));
    }
    return HalfSeries(side_var(side), std::move(c), std::nullopt);
}

}  // namespace

std::map<std::string, TheoryTable> synthetic_quintic_leaves(Side side, unsigned seed) {
    std::mt19937 rng(seed);
    const GradedRing ring = curve_ring();
    const std::vector<long> d{0, 1};
    const long max_b = 2;
    PartitionCache cache(ring);

    // fibre-direction tables: slots ((0, b), ("b.j")) with one label per boundary partition of size b
    auto fibre_table = [&]() {
        TheoryTable t(side, ring, d);
        for (long b = 0; b <= max_b; ++b) {
            const auto& parts = cache.of_size(b);
            for (std::size_t j = 0; j < parts.size(); ++j) {
                const Slot slot{CurveClass{{0, b}}, {std::to_string(b) + "." + std::to_string(j)}};
                for (const auto& mu : parts) t.insert(slot, mu, random_entry(side, rng));
            }
        }
        return t;
    };

    std::map<std::string, TheoryTable> leaves;
    for (int k = 1; k <= 4; ++k) {
        const std::string s = "S" + std::to_string(k);
        leaves.emplace("P_" + s + "/" + s, fibre_table());
        leaves.emplace("P3[" + std::to_string(k) + "," + std::to_string(k + 1) + "]/" + s, fibre_table());
    }
    TheoryTable t1_rel(side, ring, d);
    for (long a = 0; a <= 1; ++a)
        for (long b = 0; b <= max_b; ++b)
            for (const auto& mu : cache.of_size(b)) t1_rel.insert(Slot{CurveClass{{a, b}}, {"x"}}, mu, random_entry(side, rng));
    leaves.emplace("T1", glue(t1_rel, leaves.at("P_S1/S1")));
    return leaves;
}

}  // namespace gwp
