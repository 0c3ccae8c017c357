#include "gwp/corr.hpp"

#include "gwp/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace gwp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

std::optional<long> min_opt(std::optional<long> a, std::optional<long> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

/// Splits at + and - that start a new term (not after '^', '*' or '/').
std::vector<std::string> split_terms(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k] != '+' && s[k] != '-') continue;
        std::size_t p = k;
        while (p > 0 && std::isspace(static_cast<unsigned char>(s[p - 1]))) --p;
        if (p == 0) continue;
        const char prev = s[p - 1];
        if (prev == '^' || prev == '*' || prev == '/' || prev == '(') continue;
        out.push_back(s.substr(start, k - start));
        start = k;
    }
    out.push_back(s.substr(start));
    return out;
}

long parse_long(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        long v = std::stol(text, &used);
        if (used != text.size()) throw ParseError("bad integer '" + text + "' in '" + context + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad integer '" + text + "' in '" + context + "'");
    }
}

}  // namespace

Partition make_partition(std::vector<long> parts) {
    for (long p : parts)
        if (p <= 0) throw PreconditionError("bad-partition", "partition parts must be positive");
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return parts;
}

Partition parse_partition(const std::string& text) {
    std::vector<long> parts;
    const std::string s = trim(text);
    if (s.empty()) return parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        const long v = parse_long(trim(s.substr(start, comma - start)), text);
        if (v <= 0) throw ParseError("partition parts must be positive in '" + text + "'");
        parts.push_back(v);
        start = comma + 1;
    }
    return make_partition(std::move(parts));
}

std::string partition_to_string(const Partition& p) {
    std::string out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(p[k]);
    }
    return out;
}

long partition_size(const Partition& p) {
    long s = 0;
    for (long x : p) s += x;
    return s;
}

ChernPoly ChernPoly::constant(GaussianRational c) {
    ChernPoly p;
    p.add({0, 0, 0}, c);
    return p;
}

void ChernPoly::add(const Exponents& e, const GaussianRational& c) {
    auto& slot = terms_[e];
    slot += c;
    if (slot.is_zero()) terms_.erase(e);
}

ChernPoly ChernPoly::parse(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw ParseError("empty polynomial");
    ChernPoly out;
    for (std::string term : split_terms(s)) {
        term = trim(term);
        GaussianRational coef(1);
        if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
            if (term[0] == '-') coef = -1;
            term = trim(term.substr(1));
        }
        if (term.empty()) throw ParseError("dangling sign in '" + text + "'");
        Exponents e{0, 0, 0};
        std::size_t start = 0;
        while (start <= term.size()) {
            auto star = term.find('*', start);
            if (star == std::string::npos) star = term.size();
            std::string factor = trim(term.substr(start, star - start));
            start = star + 1;
            unsigned power = 1;
            const auto caret = factor.find('^');
            if (caret != std::string::npos) {
                const long p = parse_long(trim(factor.substr(caret + 1)), text);
                if (p < 0) throw ParseError("negative power in '" + text + "'");
                power = static_cast<unsigned>(p);
                factor = trim(factor.substr(0, caret));
            }
            if (factor == "c1" || factor == "c2" || factor == "c3") {
                e[static_cast<std::size_t>(factor[1] - '1')] += power;
            } else if (factor == "i") {
                coef *= i_power(static_cast<long>(power));
            } else if (!factor.empty() && (std::isdigit(static_cast<unsigned char>(factor[0])) != 0)) {
                GaussianRational v;
                try {
                    v = GaussianRational::parse(factor);
                } catch (const Error&) {
                    throw ParseError("bad coefficient '" + factor + "' in '" + text + "'");
                }
                coef *= pow(v, power);
            } else {
                throw ParseError("unknown symbol '" + factor + "' in '" + text + "' (expected c1, c2, c3, i or a number)");
            }
        }
        out.add(e, coef);
    }
    return out;
}

std::string ChernPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        std::string mono;
        for (std::size_t k = 0; k < 3; ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "c" + std::to_string(k + 1);
            if (e[k] > 1) mono += "^" + std::to_string(e[k]);
        }
        std::string cs = c.to_string();
        std::string term;
        if (mono.empty())
            term = cs;
        else if (cs == "1")
            term = mono;
        else if (cs == "-1")
            term = "-" + mono;
        else
            term = (!c.is_real() && sgn(c.re()) != 0 ? "(" + cs + ")" : cs) + "*" + mono;
        if (out.empty())
            out = term;
        else if (term[0] == '-')
            out += " - " + term.substr(1);
        else
            out += " + " + term;
    }
    return out;
}

void ChernParams::validate(const GradedRing& ring) const {
    const RingElement* cs[3] = {&c1, &c2, &c3};
    for (int k = 0; k < 3; ++k) {
        const RingElement& x = *cs[k];
        if (static_cast<int>(x.size()) != ring.size())
            throw PreconditionError("bad-chern", "c" + std::to_string(k + 1) + " has the wrong length");
        for (int j = 0; j < ring.size(); ++j) {
            if (x[static_cast<std::size_t>(j)].is_zero()) continue;
            if (ring.deg(j) != k + 1 || ring.odd(j)) {
                throw PreconditionError("bad-chern", "c" + std::to_string(k + 1) + " has a component along " +
                                                         ring.name(j) + " which is not of degree " +
                                                         std::to_string(k + 1));
            }
        }
    }
}

void CorrMatrix::declare_row(const Partition& alpha) {
    if (alpha.empty()) throw PreconditionError("bad-partition", "rows are indexed by nonempty partitions");
    rows_.insert(make_partition(alpha));
}

void CorrMatrix::set(const Partition& alpha, const Partition& alpha_hat, CorrEntry entry) {
    const Partition a = make_partition(alpha);
    const Partition ah = make_partition(alpha_hat);
    if (a.empty() || ah.empty()) throw PreconditionError("bad-partition", "matrix indices must be nonempty partitions");
    if (partition_size(ah) > partition_size(a)) {
        throw PreconditionError("not-triangular", "entry (" + partition_to_string(a) + " | " + partition_to_string(ah) +
                                                      ") has |alpha_hat| > |alpha|");
    }
    rows_.insert(a);
    std::erase_if(entry.terms, [](const auto& kv) { return kv.second.is_zero(); });
    if (entry.terms.empty() && !entry.trunc) {
        entries_[a].erase(ah);
        return;
    }
    entries_[a][ah] = std::move(entry);
}

const std::map<Partition, CorrEntry>& CorrMatrix::row(const Partition& alpha) const {
    static const std::map<Partition, CorrEntry> empty;
    if (!has_row(alpha)) {
        throw PreconditionError("matrix-incomplete",
                                "matrix data incomplete: row (" + partition_to_string(alpha) + ") is not declared");
    }
    auto it = entries_.find(alpha);
    return it == entries_.end() ? empty : it->second;
}

CorrMatrix CorrMatrix::stationary_preset(long max_size) {
    CorrMatrix k;
    std::vector<long> cur;
    std::function<void(long, long)> rec = [&](long left, long max_part) {
        if (left == 0) {
            if (!cur.empty()) k.declare_row(cur);
            return;
        }
        for (long p = std::min(left, max_part); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p);
            cur.pop_back();
        }
    };
    for (long n = 1; n <= max_size; ++n) rec(n, n);
    for (long j = 1; j <= max_size; ++j) {
        CorrEntry e;
        e.terms[-(j - 1)] = ChernPoly::constant(i_power(-(j - 1)));
        k.set({j}, {j}, std::move(e));
    }
    return k;
}

void DescendentSum::add(std::vector<Descendent> factors, const HalfSeries& c, const GradedRing& ring) {
    if (c.is_zero()) {
        trunc = min_opt(trunc, c.trunc());
        return;
    }
    int sign = 1;
    for (std::size_t a = 0; a < factors.size(); ++a) {
        if (!ring.odd(factors[a].basis)) continue;
        for (std::size_t b = a + 1; b < factors.size(); ++b) {
            if (!ring.odd(factors[b].basis)) continue;
            if (factors[a] == factors[b]) return;
            if (factors[b] < factors[a]) sign = -sign;
        }
    }
    std::sort(factors.begin(), factors.end());
    auto it = terms.find(factors);
    HalfSeries value = sign > 0 ? c : -c;
    if (it == terms.end()) {
        terms.emplace(std::move(factors), std::move(value));
        return;
    }
    it->second = it->second + value;
    if (it->second.is_zero()) {
        trunc = min_opt(trunc, it->second.trunc());
        terms.erase(it);
    }
}

bool DescendentSum::is_zero() const { return terms.empty(); }

std::string DescendentSum::to_string(const GradedRing& ring) const {
    std::string out;
    for (const auto& [key, c] : terms) {
        std::string mono;
        for (const auto& f : key) {
            if (!mono.empty()) mono += "*";
            mono += "tau_" + std::to_string(f.level) + "(" + ring.name(f.basis) + ")";
        }
        if (mono.empty()) mono = "1";
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string() + ")*" + mono;
    }
    if (out.empty()) out = "0";
    if (trunc) out += " + O(u^" + std::to_string(*trunc) + ")";
    return out;
}

bool agree(const DescendentSum& a, const DescendentSum& b) {
    const std::optional<long> t = min_opt(a.trunc, b.trunc);
    auto get = [&](const DescendentSum& s, const std::vector<Descendent>& key) {
        auto it = s.terms.find(key);
        return it == s.terms.end() ? HalfSeries(Var::u, s.trunc) : it->second;
    };
    for (const auto* s : {&a, &b}) {
        for (const auto& [key, c] : s->terms) {
            HalfSeries d = get(a, key) - get(b, key);
            if (t) d = d.truncated(*t);
            if (!d.is_zero()) return false;
        }
    }
    return true;
}

DescendentSum operator+(const DescendentSum& a, const DescendentSum& b) {
    DescendentSum r = a;
    r.trunc = min_opt(a.trunc, b.trunc);
    for (const auto& [key, c] : b.terms) {
        auto it = r.terms.find(key);
        if (it == r.terms.end()) {
            r.terms.emplace(key, c);
            continue;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) {
            r.trunc = min_opt(r.trunc, it->second.trunc());
            r.terms.erase(it);
        }
    }
    return r;
}

DescendentSum scaled(const DescendentSum& a, const GaussianRational& c) {
    if (c.is_zero()) return DescendentSum{{}, a.trunc};
    DescendentSum r = a;
    for (auto& [key, v] : r.terms) v = v.scaled(c);
    return r;
}

namespace {

/// Lowest exponent that may carry a nonzero coefficient anywhere in s.
std::optional<long> lowest(const DescendentSum& s) {
    std::optional<long> v = s.trunc;
    for (const auto& [key, c] : s.terms) v = min_opt(v, c.valuation());
    return v;
}

DescendentSum product(const DescendentSum& a, const DescendentSum& b, const GradedRing& ring) {
    DescendentSum r;
    const auto va = lowest(a), vb = lowest(b);
    if (a.trunc && vb) r.trunc = min_opt(r.trunc, *a.trunc + *vb);
    if (b.trunc && va) r.trunc = min_opt(r.trunc, *b.trunc + *va);
    for (const auto& [ka, ca] : a.terms) {
        for (const auto& [kb, cb] : b.terms) {
            std::vector<Descendent> f = ka;
            f.insert(f.end(), kb.begin(), kb.end());
            r.add(std::move(f), ca * cb, ring);
        }
    }
    return r;
}

RingElement power(const RingElement& x, unsigned n, const RingElement& unit, const GradedRing& ring) {
    RingElement r = unit;
    for (unsigned k = 0; k < n; ++k) r = ring.multiply(r, x);
    return r;
}

RingElement evaluate(const ChernPoly& p, const ChernParams& c, const GradedRing& ring) {
    if (!ring.unit()) throw PreconditionError("no-unit", "evaluating matrix entries needs a ring with a unit");
    const RingElement& one = *ring.unit();
    RingElement r = ring.zero();
    for (const auto& [e, coef] : p.terms()) {
        RingElement m = ring.multiply(ring.multiply(power(c.c1, e[0], one, ring), power(c.c2, e[1], one, ring)),
                                      power(c.c3, e[2], one, ring));
        for (std::size_t k = 0; k < r.size(); ++k) r[k] += coef * m[k];
    }
    return r;
}

}  // namespace

DescendentSum tau_hat_expand(const Partition& alpha_hat, const RingElement& gamma, const GradedRing& ring,
                             const DiagonalHook& diagonal) {
    if (alpha_hat.empty()) throw PreconditionError("bad-partition", "tau_hat needs a nonempty partition");
    const Partition ah = make_partition(alpha_hat);
    const int l = static_cast<int>(ah.size());
    const Tensor t = diagonal ? diagonal(gamma, l, ring) : small_diagonal(gamma, l, ring);
    DescendentSum out;
    for (const auto& [idx, c] : t) {
        if (static_cast<int>(idx.size()) != l) throw PreconditionError("bad-diagonal", "diagonal tensor has wrong arity");
        std::vector<Descendent> f;
        for (int m = 0; m < l; ++m)
            f.push_back({static_cast<int>(ah[static_cast<std::size_t>(m)] - 1), idx[static_cast<std::size_t>(m)]});
        out.add(std::move(f), HalfSeries::constant(Var::u, c), ring);
    }
    return out;
}

OverlineResult overline(const DescendentMonomial& m, const CorrMatrix& k, const ChernParams& c,
                        const GradedRing& ring, const OverlineOptions& options) {
    c.validate(ring);
    const std::size_t l = m.factors.size();
    OverlineResult result;
    for (const auto& [level, gamma] : m.factors) {
        if (level < 0) throw PreconditionError("bad-level", "descendent levels must be >= 0");
        if (static_cast<int>(gamma.size()) != ring.size())
            throw PreconditionError("bad-element", "descendent class has the wrong length");
    }
    if (l == 0) {
        result.sum.add({}, HalfSeries::constant(Var::u, 1), ring);
        result.set_partition_terms = 1;
        return result;
    }
    const auto partitions = enumerate_set_partitions(static_cast<int>(l), std::vector<bool>(l, false));
    result.set_partition_terms = partitions.size();

    // multilinear expansion of the input into basis classes
    std::vector<int> basis(l);
    std::function<void(std::size_t, GaussianRational)> expand = [&](std::size_t pos, GaussianRational coef) {
        if (pos < l) {
            const RingElement& g = m.factors[pos].second;
            for (int j = 0; j < ring.size(); ++j) {
                if (g[static_cast<std::size_t>(j)].is_zero()) continue;
                basis[pos] = j;
                expand(pos + 1, coef * g[static_cast<std::size_t>(j)]);
            }
            return;
        }
        std::vector<bool> odd(l);
        for (std::size_t a = 0; a < l; ++a) odd[a] = ring.odd(basis[a]);
        for (const auto& p : partitions) {
            const int sign = set_partition_sign(p.blocks, odd);
            DescendentSum acc;
            acc.add({}, HalfSeries::constant(Var::u, 1), ring);
            for (const auto& block : p.blocks) {
                std::vector<long> alpha;
                RingElement gamma_s = ring.basis(basis[static_cast<std::size_t>(block.front())]);
                for (std::size_t n = 0; n < block.size(); ++n) {
                    const auto idx = static_cast<std::size_t>(block[n]);
                    alpha.push_back(m.factors[idx].first + 1);
                    if (n > 0) gamma_s = ring.multiply(gamma_s, ring.basis(basis[idx]));
                }
                DescendentSum block_sum;
                for (const auto& [alpha_hat, entry] : k.row(make_partition(alpha))) {
                    block_sum.trunc = min_opt(block_sum.trunc, entry.trunc);
                    for (const auto& [e, poly] : entry.terms) {
                        if (entry.trunc && e >= *entry.trunc) continue;
                        const RingElement x = ring.multiply(evaluate(poly, c, ring), gamma_s);
                        const DescendentSum tau = tau_hat_expand(alpha_hat, x, ring, options.diagonal);
                        for (const auto& [key, v] : tau.terms) {
                            HalfSeries term = v.shifted(e);
                            if (entry.trunc) term = HalfSeries(Var::u, term.coeffs(), entry.trunc);
                            block_sum.add(key, term, ring);
                        }
                    }
                }
                acc = product(acc, block_sum, ring);
                if (acc.is_zero() && !acc.trunc) break;
            }
            result.sum = result.sum + scaled(acc, coef * GaussianRational(sign));
        }
    };
    expand(0, GaussianRational(1));
    return result;
}

DescendentMonomial parse_monomial(const std::string& text, const GradedRing& ring) {
    DescendentMonomial m;
    const std::string s = trim(text);
    if (s.empty() || s == "1") return m;
    std::size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == '*')) ++pos;
        if (pos >= s.size()) break;
        if (s.compare(pos, 4, "tau_") != 0) throw ParseError("expected tau_k(...) at '" + s.substr(pos) + "'");
        pos += 4;
        const auto open = s.find('(', pos);
        if (open == std::string::npos) throw ParseError("missing '(' in '" + text + "'");
        const long level = parse_long(trim(s.substr(pos, open - pos)), text);
        if (level < 0) throw ParseError("negative descendent level in '" + text + "'");
        const auto close = s.find(')', open);
        if (close == std::string::npos) throw ParseError("missing ')' in '" + text + "'");
        m.factors.emplace_back(static_cast<int>(level), ring.parse_element(s.substr(open + 1, close - open - 1)));
        pos = close + 1;
    }
    return m;
}

bool correspondence_predicate(const RationalFunction& zp, const HalfSeries& zgw, long d_beta, long l_minus_abs,
                              long u_order) {
    check_order_cap(u_order);
    if (zgw.var() != Var::u) throw PreconditionError("variable-mismatch", "Z_GW must be a u-series");
    const RationalFunction in_s = zp.var() == Var::s ? zp : q_to_s(zp);
    const HalfSeries lhs = ratfun_to_u(in_s * RationalFunction::monomial(Var::s, -d_beta), u_order);
    const long n = d_beta + l_minus_abs;
    const HalfSeries rhs = HalfSeries::monomial(Var::u, n, i_power(3 * n)) * zgw;
    if (rhs.trunc() && *rhs.trunc() < u_order) {
        throw PrecisionError("insufficient-precision", "Z_GW known below u^" + std::to_string(*zgw.trunc()) +
                                                           " but the comparison needs u^" +
                                                           std::to_string(u_order - n));
    }
    return agree(lhs.truncated(u_order), rhs.truncated(u_order));
}

HalfSeries stationary_prefactor(const std::vector<long>& k_list, long d_beta) {
    long k = 0;
    for (long x : k_list) k += x;
    return HalfSeries::monomial(Var::u, d_beta - k, i_power(3 * d_beta) * i_power(-k));
}

}  // namespace gwp
