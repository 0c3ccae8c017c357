#pragma once

/**
 * The descendent correspondence on the algebraic level: the overline map
 *
 *   overline(tau_{k_1}(g_1) ... tau_{k_l}(g_l))
 *     = sum_P sigma(P) prod_{S in P} sum_{ahat} tau_ahat(K[alpha_S, ahat] * g_S)
 *
 * with alpha_S = (k_i + 1)_{i in S}, g_S the ordered product of the classes
 * in S, and tau_ahat(g) expanded through the Kunneth decomposition of g times
 * the small diagonal. K is user data; entries are u-series whose
 * coefficients are polynomials in c1, c2, c3 and i, evaluated against a
 * ChernParams triple in the ring.
 */

#include "gwp/cohring.hpp"
#include "gwp/numeric.hpp"
#include "gwp/ratfun.hpp"
#include "gwp/series.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gwp {

/// Integer partition, parts in descending order.
using Partition = std::vector<long>;

Partition make_partition(std::vector<long> parts);
/// "2,1,1"; "" is the empty partition.
Partition parse_partition(const std::string& text);
std::string partition_to_string(const Partition& p);
long partition_size(const Partition& p);

/// Polynomial in c1, c2, c3 over Q[i]; key = exponents of (c1, c2, c3).
class ChernPoly {
public:
    using Exponents = std::array<unsigned, 3>;

    ChernPoly() = default;
    static ChernPoly constant(GaussianRational c);
    /// "1/2*c1^2 - i*c2 + 3"
    static ChernPoly parse(const std::string& text);

    const std::map<Exponents, GaussianRational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    void add(const Exponents& e, const GaussianRational& c);
    std::string to_string() const;

    friend bool operator==(const ChernPoly&, const ChernPoly&) = default;

private:
    std::map<Exponents, GaussianRational> terms_;
};

struct ChernParams {
    RingElement c1, c2, c3;

    /// Each c_i must be homogeneous of degree i and even.
    void validate(const GradedRing& ring) const;
};

/// One matrix entry: sum_e terms[e] u^e, known below trunc (exact when unset).
struct CorrEntry {
    std::map<long, ChernPoly> terms;
    std::optional<long> trunc;
};

class CorrMatrix {
public:
    /// Declares a row; a declared row lists every nonzero entry, absent ones are zero.
    void declare_row(const Partition& alpha);
    /// PreconditionError("not-triangular") unless |alpha| >= |alpha_hat|.
    void set(const Partition& alpha, const Partition& alpha_hat, CorrEntry entry);

    bool has_row(const Partition& alpha) const { return rows_.count(alpha) != 0; }
    /// Nonzero entries of a declared row; PreconditionError("matrix-incomplete") otherwise.
    const std::map<Partition, CorrEntry>& row(const Partition& alpha) const;
    const std::set<Partition>& rows() const noexcept { return rows_; }
    const std::map<Partition, std::map<Partition, CorrEntry>>& entries() const noexcept { return entries_; }

    /**
     * Test fixture matching the stationary prefactor for point insertions:
     * K[(k+1),(k+1)] = (iu)^{-k}, every other entry zero, rows declared for
     * all partitions of size <= max_size. Not the true correspondence matrix.
     */
    static CorrMatrix stationary_preset(long max_size);

private:
    std::set<Partition> rows_;
    std::map<Partition, std::map<Partition, CorrEntry>> entries_;
};

/// tau_level(phi_basis)
struct Descendent {
    int level;
    int basis;

    friend auto operator<=>(const Descendent&, const Descendent&) = default;
};

/// Monomials in normal form (factors sorted, odd repeats removed) with u-series
/// coefficients. Monomials absent from `terms` have coefficients known to be
/// zero below `trunc`.
struct DescendentSum {
    std::map<std::vector<Descendent>, HalfSeries> terms;
    std::optional<long> trunc;

    /// Adds c times the ordered product `factors`, normalizing with the odd sign rule.
    void add(std::vector<Descendent> factors, const HalfSeries& c, const GradedRing& ring);
    bool is_zero() const;
    std::string to_string(const GradedRing& ring) const;
};

bool agree(const DescendentSum& a, const DescendentSum& b);
DescendentSum operator+(const DescendentSum& a, const DescendentSum& b);
DescendentSum scaled(const DescendentSum& a, const GaussianRational& c);

/// Input monomial: ordered factors tau_k(gamma) with arbitrary ring elements.
struct DescendentMonomial {
    std::vector<std::pair<int, RingElement>> factors;
    /// Carried along for relative theories; not used by the expansion.
    std::optional<WeightedPartition> boundary;
};

/// "tau_0(p)*tau_2(1 + 2*H)"
DescendentMonomial parse_monomial(const std::string& text, const GradedRing& ring);

/// Replacement for the absolute Kunneth tensor gamma * Delta on l factors.
using DiagonalHook = std::function<Tensor(const RingElement& gamma, int l, const GradedRing& ring)>;

struct OverlineOptions {
    /// Relative-diagonal hook; the absolute small diagonal when unset.
    DiagonalHook diagonal;
};

struct OverlineResult {
    DescendentSum sum;
    /// Number of set partitions expanded (the Bell number of the factor count).
    std::size_t set_partition_terms = 0;
};

OverlineResult overline(const DescendentMonomial& m, const CorrMatrix& k, const ChernParams& c,
                        const GradedRing& ring, const OverlineOptions& options = {});

DescendentSum tau_hat_expand(const Partition& alpha_hat, const RingElement& gamma, const GradedRing& ring,
                             const DiagonalHook& diagonal = {});

/**
 * Checks s^{-d} Z_P(-s^2) expanded at u = 0 against (-iu)^{d + l - |mu|} Z_GW
 * below u^{u_order}. PrecisionError when Z_GW is not known far enough.
 */
bool correspondence_predicate(const RationalFunction& zp, const HalfSeries& zgw, long d_beta, long l_minus_abs,
                              long u_order);

/// (-iu)^{d} (iu)^{-sum k}
HalfSeries stationary_prefactor(const std::vector<long>& k_list, long d_beta);

}  // namespace gwp
