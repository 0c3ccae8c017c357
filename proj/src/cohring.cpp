#include "gwp/cohring.hpp"

#include "gwp/error.hpp"

#include <algorithm>
#include <functional>

namespace gwp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

GradedRing::GradedRing(std::vector<std::string> names, std::vector<Rational> deg, std::vector<bool> odd,
                       Matrix pairing, std::vector<std::vector<RingElement>> mult)
    : names_(std::move(names)), deg_(std::move(deg)), odd_(std::move(odd)), pairing_(std::move(pairing)),
      mult_(std::move(mult)) {
    const std::size_t f = names_.size();
    if (f == 0) throw PreconditionError("bad-ring", "ring basis is empty");
    if (deg_.size() != f || odd_.size() != f) throw PreconditionError("bad-ring", "deg/parity length differs from basis");
    for (std::size_t a = 0; a < f; ++a)
        for (std::size_t b = a + 1; b < f; ++b)
            if (names_[a] == names_[b]) throw PreconditionError("bad-ring", "duplicate basis name " + names_[a]);
    if (pairing_.size() != f) throw PreconditionError("bad-ring", "pairing must be square of basis size");
    for (const auto& row : pairing_)
        if (row.size() != f) throw PreconditionError("bad-ring", "pairing must be square of basis size");
    if (mult_.size() != f) throw PreconditionError("bad-ring", "multiplication tensor has wrong shape");
    for (const auto& row : mult_) {
        if (row.size() != f) throw PreconditionError("bad-ring", "multiplication tensor has wrong shape");
        for (const auto& v : row)
            if (v.size() != f) throw PreconditionError("bad-ring", "multiplication tensor has wrong shape");
    }
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            for (std::size_t k = 0; k < f; ++k) {
                const GaussianRational& c = mult_[i][j][k];
                if (c.is_zero()) continue;
                if (deg_[k] != deg_[i] + deg_[j] || odd_[k] != (odd_[i] != odd_[j])) {
                    throw PreconditionError("bad-ring", "product " + names_[i] + "*" + names_[j] + " has a term " +
                                                            names_[k] + " of the wrong degree or parity");
                }
            }
            const GaussianRational sign = odd_[i] && odd_[j] ? GaussianRational(-1) : GaussianRational(1);
            for (std::size_t k = 0; k < f; ++k) {
                if (mult_[j][i][k] != sign * mult_[i][j][k]) {
                    throw PreconditionError("bad-ring", "multiplication of " + names_[i] + " and " + names_[j] +
                                                            " is not graded-commutative");
                }
            }
        }
    }
    dual_ = inverse(pairing_);

    // unit: solve sum_a e_a mult[a][j][k] = delta_jk; last unknown scales the right-hand side
    Matrix sys;
    for (std::size_t j = 0; j < f; ++j)
        for (std::size_t k = 0; k < f; ++k) {
            Vector row(f + 1);
            for (std::size_t a = 0; a < f; ++a) row[a] = mult_[a][j][k];
            row[f] = j == k ? GaussianRational(-1) : GaussianRational(0);
            sys.push_back(std::move(row));
        }
    for (const auto& v : nullspace(sys, f + 1)) {
        if (v[f].is_zero()) continue;
        RingElement e(v.begin(), v.begin() + static_cast<long>(f));
        for (auto& x : e) x = x / v[f];
        unit_ = std::move(e);
        break;
    }
}

GradedRing GradedRing::point() {
    return GradedRing({"1"}, {Rational(0)}, {false}, Matrix{{GaussianRational(1)}},
                      {{RingElement{GaussianRational(1)}}});
}

int GradedRing::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    throw PreconditionError("unknown-class", "no basis element named '" + name + "'");
}

RingElement GradedRing::basis(int i) const {
    RingElement e = zero();
    e.at(static_cast<std::size_t>(i)) = 1;
    return e;
}

RingElement GradedRing::multiply(const RingElement& a, const RingElement& b) const {
    RingElement r = zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            const GaussianRational ab = a[i] * b[j];
            for (std::size_t k = 0; k < r.size(); ++k)
                if (!mult_[i][j][k].is_zero()) r[k] += ab * mult_[i][j][k];
        }
    }
    return r;
}

GaussianRational GradedRing::pair(const RingElement& a, const RingElement& b) const {
    GaussianRational r;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!a[i].is_zero() && !b[j].is_zero()) r += a[i] * b[j] * pairing_[i][j];
    return r;
}

const Matrix& GradedRing::dual_matrix() const {
    if (!dual_) throw PreconditionError("singular-pairing", "the ring pairing is singular, duals are undefined");
    return *dual_;
}

RingElement GradedRing::dual(int i) const {
    const Matrix& x = dual_matrix();
    RingElement e = zero();
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = x[k][static_cast<std::size_t>(i)];
    return e;
}

RingElement GradedRing::parse_element(const std::string& text) const {
    RingElement r = zero();
    std::string s = trim(text);
    if (s.empty()) throw ParseError("empty ring element");
    std::vector<std::string> terms;
    std::size_t start = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '*' && s[k - 1] != '/') {
            terms.push_back(s.substr(start, k - start));
            start = k;
        }
    }
    terms.push_back(s.substr(start));
    for (auto term : terms) {
        term = trim(term);
        GaussianRational sign(1);
        if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
            if (term[0] == '-') sign = -1;
            term = trim(term.substr(1));
        }
        GaussianRational c(1);
        std::string name = term;
        const auto star = term.rfind('*');
        if (star != std::string::npos) {
            c = GaussianRational::parse(trim(term.substr(0, star)));
            name = trim(term.substr(star + 1));
        }
        int idx = -1;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) idx = static_cast<int>(i);
        if (idx < 0) throw ParseError("unknown basis element '" + name + "' in '" + text + "'");
        r[static_cast<std::size_t>(idx)] += sign * c;
    }
    return r;
}

std::string GradedRing::element_to_string(const RingElement& x) const {
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        std::string c = x[i].to_string();
        std::string term;
        if (c == "1")
            term = names_[i];
        else if (c == "-1")
            term = "-" + names_[i];
        else if (x[i].is_real())
            term = c + "*" + names_[i];
        else
            term = "(" + c + ")*" + names_[i];
        if (!out.empty()) out += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
        else out = term;
    }
    return out.empty() ? "0" : out;
}

bool canonical_before(const WeightedPart& a, const WeightedPart& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.weight < b.weight;
}

WeightedPartition::WeightedPartition(std::vector<WeightedPart> parts) : parts_(std::move(parts)) {
    for (const auto& p : parts_)
        if (p.size <= 0) throw PreconditionError("bad-partition", "partition parts must be positive");
    std::sort(parts_.begin(), parts_.end(), canonical_before);
}

std::pair<int, WeightedPartition> WeightedPartition::normalize(std::vector<WeightedPart> parts,
                                                               const GradedRing& ring) {
    int sign = 1;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        if (!ring.odd(parts[a].weight)) continue;
        for (std::size_t b = a + 1; b < parts.size(); ++b) {
            if (!ring.odd(parts[b].weight)) continue;
            if (parts[a] == parts[b]) return {0, WeightedPartition(std::move(parts))};
            if (canonical_before(parts[b], parts[a])) sign = -sign;
        }
    }
    return {sign, WeightedPartition(std::move(parts))};
}

WeightedPartition WeightedPartition::parse(const std::string& text, const GradedRing& ring) {
    std::vector<WeightedPart> parts;
    const std::string s = trim(text);
    if (s.empty()) return {};
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        const std::string item = trim(s.substr(start, comma - start));
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError("partition part '" + item + "' is not size:class");
        long size = 0;
        try {
            std::size_t used = 0;
            size = std::stol(item.substr(0, colon), &used);
            if (used != colon) throw ParseError("bad part size in '" + item + "'");
        } catch (const std::logic_error&) {
            throw ParseError("bad part size in '" + item + "'");
        }
        if (size <= 0) throw ParseError("part sizes must be positive in '" + item + "'");
        const std::string name = trim(item.substr(colon + 1));
        int w = -1;
        for (int i = 0; i < ring.size(); ++i)
            if (ring.name(i) == name) w = i;
        if (w < 0) throw ParseError("unknown class '" + name + "' in partition '" + text + "'");
        parts.push_back({size, w});
        start = comma + 1;
    }
    return WeightedPartition(std::move(parts));
}

std::string WeightedPartition::to_string(const GradedRing& ring) const {
    std::string out;
    for (const auto& p : parts_) {
        if (!out.empty()) out += ",";
        out += std::to_string(p.size) + ":" + ring.name(p.weight);
    }
    return out;
}

long WeightedPartition::size() const {
    long s = 0;
    for (const auto& p : parts_) s += p.size;
    return s;
}

Integer WeightedPartition::automorphisms() const {
    Integer aut = 1;
    std::size_t run = 0;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        run = (k > 0 && parts_[k] == parts_[k - 1]) ? run + 1 : 1;
        aut *= static_cast<unsigned long>(run);
    }
    return aut;
}

WeightedPartition WeightedPartition::joined(const WeightedPartition& other) const {
    std::vector<WeightedPart> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return WeightedPartition(std::move(all));
}

Integer gluing_factor(const WeightedPartition& mu) {
    Integer z = mu.automorphisms();
    for (const auto& p : mu.parts()) z *= p.size;
    return z;
}

Rational codim(const WeightedPartition& mu, const GradedRing& ring) {
    Rational c(mu.size() - mu.length());
    for (const auto& p : mu.parts()) c += ring.deg(p.weight);
    return c;
}

PartitionCombination dual_partition(const WeightedPartition& mu, const GradedRing& ring) {
    const Matrix& x = ring.dual_matrix();
    const auto& parts = mu.parts();
    PartitionCombination out;
    std::vector<WeightedPart> cur(parts.size());
    const Rational aut_mu(mu.automorphisms());
    std::function<void(std::size_t, GaussianRational)> expand = [&](std::size_t k, GaussianRational coef) {
        if (k == parts.size()) {
            auto [sign, lambda] = WeightedPartition::normalize(cur, ring);
            if (sign == 0) return;
            const Rational scale = Rational(lambda.automorphisms()) / aut_mu;
            out[lambda] += coef * GaussianRational(sign * scale);
            return;
        }
        const auto col = static_cast<std::size_t>(parts[k].weight);
        for (int j = 0; j < ring.size(); ++j) {
            const GaussianRational& xj = x[static_cast<std::size_t>(j)][col];
            if (xj.is_zero()) continue;
            cur[k] = {parts[k].size, j};
            expand(k + 1, coef * xj);
        }
    };
    expand(0, GaussianRational(1));
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

Tensor comultiply(const Tensor& t, std::size_t slot, const GradedRing& ring) {
    const int f = ring.size();
    std::vector<RingElement> duals;
    for (int i = 0; i < f; ++i) duals.push_back(ring.dual(i));
    Tensor out;
    for (const auto& [idx, c] : t) {
        const int a = idx.at(slot);
        for (int i = 0; i < f; ++i) {
            const RingElement left = ring.multiply(ring.basis(a), ring.basis(i));
            for (int p = 0; p < f; ++p) {
                const auto& lp = left[static_cast<std::size_t>(p)];
                if (lp.is_zero()) continue;
                for (int r = 0; r < f; ++r) {
                    const auto& dr = duals[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
                    if (dr.is_zero()) continue;
                    std::vector<int> key = idx;
                    key[slot] = p;
                    key.insert(key.begin() + static_cast<long>(slot) + 1, r);
                    out[key] += ring.odd(i) ? -(c * lp * dr) : c * lp * dr;
                }
            }
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

Tensor small_diagonal(const RingElement& gamma, int l, const GradedRing& ring) {
    if (l < 1) throw PreconditionError("bad-arity", "small_diagonal needs at least one factor");
    if (static_cast<int>(gamma.size()) != ring.size()) throw PreconditionError("bad-element", "element size mismatch");
    Tensor t;
    for (int i = 0; i < ring.size(); ++i)
        if (!gamma[static_cast<std::size_t>(i)].is_zero()) t[{i}] = gamma[static_cast<std::size_t>(i)];
    // gamma * Delta_l = Delta_l with gamma in slot one; comultiplying gamma l-1 times gives the same tensor
    for (int k = 1; k < l; ++k) t = comultiply(t, 0, ring);
    return t;
}

int set_partition_sign(const std::vector<std::vector<int>>& blocks, const std::vector<bool>& odd) {
    std::vector<int> order;
    for (const auto& b : blocks) order.insert(order.end(), b.begin(), b.end());
    int sign = 1;
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = a + 1; b < order.size(); ++b)
            if (odd.at(static_cast<std::size_t>(order[a])) && odd.at(static_cast<std::size_t>(order[b])) &&
                order[a] > order[b])
                sign = -sign;
    return sign;
}

std::vector<SetPartitionSigned> enumerate_set_partitions(int l, const std::vector<bool>& odd) {
    if (l < 1) throw PreconditionError("bad-arity", "set partitions need l >= 1");
    if (static_cast<int>(odd.size()) != l) throw PreconditionError("bad-arity", "one parity per index required");
    std::vector<SetPartitionSigned> out;
    std::vector<int> rgs(static_cast<std::size_t>(l), 0);
    std::function<void(int, int)> rec = [&](int pos, int max_block) {
        if (pos == l) {
            SetPartitionSigned sp;
            sp.blocks.assign(static_cast<std::size_t>(max_block + 1), {});
            for (int k = 0; k < l; ++k) sp.blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(k)])].push_back(k);
            sp.sign = set_partition_sign(sp.blocks, odd);
            out.push_back(std::move(sp));
            return;
        }
        for (int b = 0; b <= max_block + 1; ++b) {
            rgs[static_cast<std::size_t>(pos)] = b;
            rec(pos + 1, std::max(max_block, b));
        }
    };
    rgs[0] = 0;
    rec(1, 0);
    return out;
}

std::vector<WeightedPartition> enumerate_weighted_partitions(long d, const GradedRing& ring,
                                                             std::optional<Rational> theta) {
    if (d < 0) throw PreconditionError("bad-size", "partition size must be >= 0");
    std::vector<WeightedPart> types;
    for (long s = d; s >= 1; --s)
        for (int w = 0; w < ring.size(); ++w) types.push_back({s, w});
    std::vector<WeightedPartition> out;
    std::vector<WeightedPart> cur;
    std::function<void(std::size_t, long)> rec = [&](std::size_t from, long left) {
        if (left == 0) {
            WeightedPartition mu(cur);
            if (!theta || codim(mu, ring) == *theta) out.push_back(std::move(mu));
            return;
        }
        for (std::size_t t = from; t < types.size(); ++t) {
            if (types[t].size > left) continue;
            cur.push_back(types[t]);
            rec(ring.odd(types[t].weight) ? t + 1 : t, left - types[t].size);
            cur.pop_back();
        }
    };
    rec(0, d);
    return out;
}

}  // namespace gwp
