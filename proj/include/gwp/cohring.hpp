#pragma once

/**
 * Finite graded rings with a pairing, cohomology-weighted partitions and
 * signed set partitions.
 *
 * A GradedRing is pure data: a named basis phi_0..phi_{f-1}, a (complex)
 * degree and parity per element, the pairing matrix G_ij = <phi_i, phi_j> and
 * structure constants phi_i phi_j = sum_k mult[i][j][k] phi_k. Elements are
 * coefficient vectors in that basis.
 *
 * The dual basis is phi_j^v = sum_k X_kj phi_k with X = G^{-1}, so that
 * <phi_i, phi_j^v> = delta_ij.
 */

#include "gwp/linalg.hpp"
#include "gwp/numeric.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gwp {

using RingElement = Vector;
/// Sum of pure tensors phi_{j1} (x) ... (x) phi_{jl} with coefficients.
using Tensor = std::map<std::vector<int>, GaussianRational>;

class GradedRing {
public:
    /**
     * Checks dimensions, that multiplication respects degree and parity and
     * that odd classes anticommute. A singular pairing is accepted here and
     * reported by the operations that need duals.
     */
    GradedRing(std::vector<std::string> names, std::vector<Rational> deg, std::vector<bool> odd, Matrix pairing,
               std::vector<std::vector<RingElement>> mult);

    /// Cohomology of a point: one even class "1" of degree 0.
    static GradedRing point();

    int size() const noexcept { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
    const Rational& deg(int i) const { return deg_.at(static_cast<std::size_t>(i)); }
    bool odd(int i) const { return odd_.at(static_cast<std::size_t>(i)); }
    const Matrix& pairing() const noexcept { return pairing_; }
    const std::vector<std::vector<RingElement>>& mult() const noexcept { return mult_; }
    /// Basis index of a name; PreconditionError("unknown-class") if absent.
    int index_of(const std::string& name) const;

    RingElement basis(int i) const;
    RingElement zero() const { return RingElement(names_.size()); }
    RingElement multiply(const RingElement& a, const RingElement& b) const;
    GaussianRational pair(const RingElement& a, const RingElement& b) const;
    bool nondegenerate() const { return dual_.has_value(); }
    /// Multiplicative identity, when the ring has one.
    const std::optional<RingElement>& unit() const noexcept { return unit_; }
    /// X = G^{-1}; PreconditionError("singular-pairing") when G is singular.
    const Matrix& dual_matrix() const;
    /// phi_i^v as an element.
    RingElement dual(int i) const;

    /// Parses "2*p - 1/2*1 + e" style linear combinations of basis names.
    RingElement parse_element(const std::string& text) const;
    std::string element_to_string(const RingElement& x) const;

private:
    std::vector<std::string> names_;
    std::vector<Rational> deg_;
    std::vector<bool> odd_;
    Matrix pairing_;
    std::vector<std::vector<RingElement>> mult_;
    std::optional<Matrix> dual_;
    std::optional<RingElement> unit_;
};

struct WeightedPart {
    long size;
    int weight;  // basis index

    friend auto operator<=>(const WeightedPart&, const WeightedPart&) = default;
};

/// Canonical order on parts: size descending, then weight index ascending.
bool canonical_before(const WeightedPart& a, const WeightedPart& b);

class WeightedPartition {
public:
    WeightedPartition() = default;
    /// Sorts the parts into canonical order (no sign bookkeeping).
    explicit WeightedPartition(std::vector<WeightedPart> parts);

    /**
     * Canonical form of an ordered product of parts, with the sign picked up
     * by moving odd-weighted parts past each other. The sign is 0 when an
     * odd part repeats, since such a product vanishes.
     */
    static std::pair<int, WeightedPartition> normalize(std::vector<WeightedPart> parts, const GradedRing& ring);

    /// "2:1,1:p" with ring basis names; "" is the empty partition.
    static WeightedPartition parse(const std::string& text, const GradedRing& ring);
    std::string to_string(const GradedRing& ring) const;

    const std::vector<WeightedPart>& parts() const noexcept { return parts_; }
    long size() const;
    long length() const { return static_cast<long>(parts_.size()); }
    /// |Aut|: product of factorials of (size, weight) multiplicities.
    Integer automorphisms() const;
    WeightedPartition joined(const WeightedPartition& other) const;

    friend auto operator<=>(const WeightedPartition&, const WeightedPartition&) = default;

private:
    std::vector<WeightedPart> parts_;
};

using PartitionCombination = std::map<WeightedPartition, GaussianRational>;

/// z(mu) = prod mu_i * |Aut(mu)|
Integer gluing_factor(const WeightedPartition& mu);

/// |mu| - l(mu) + sum of weight degrees.
Rational codim(const WeightedPartition& mu, const GradedRing& ring);

/**
 * mu^v in the normalized basis |mu> = prod_i P_{mu_i}(gamma_i) / |Aut mu|:
 * each weight is replaced by its dual element and the product re-expanded.
 * With this normalization z(lambda) d(lambda -> mu) is symmetric in the pair
 * whenever the pairing is symmetric.
 */
PartitionCombination dual_partition(const WeightedPartition& mu, const GradedRing& ring);

/**
 * gamma * Delta in R^{(x) l}: iterated comultiplication of
 * Delta_2 = sum_i (-1)^{|phi_i|} phi_i (x) phi_i^v applied to the first slot,
 * then gamma multiplied into the first slot. The parity sign is what makes
 * Delta_2 integrate to the pairing under Koszul conventions; for even
 * classes it is Delta_2 = sum phi_i (x) phi_i^v.
 */
Tensor small_diagonal(const RingElement& gamma, int l, const GradedRing& ring);

/// Comultiplication x -> sum_i (-1)^{|phi_i|} (x phi_i) (x) phi_i^v applied to slot `slot` of t.
Tensor comultiply(const Tensor& t, std::size_t slot, const GradedRing& ring);

struct SetPartitionSigned {
    std::vector<std::vector<int>> blocks;  // 0-based, ascending, blocks ordered by minimum
    int sign = 1;
};

/// Sign of the odd indices when the blocks are read off in order.
int set_partition_sign(const std::vector<std::vector<int>>& blocks, const std::vector<bool>& odd);

/// All set partitions of {0..l-1} (restricted growth order) with the sign of
/// the odd indices in the concatenated block order.
std::vector<SetPartitionSigned> enumerate_set_partitions(int l, const std::vector<bool>& odd);

/// Weighted partitions of size d over the ring basis, optionally only those of codimension theta.
/// Partitions repeating an odd part are left out since they vanish.
std::vector<WeightedPartition> enumerate_weighted_partitions(long d, const GradedRing& ring,
                                                             std::optional<Rational> theta = std::nullopt);

}  // namespace gwp
